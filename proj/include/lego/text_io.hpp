#pragma once

// Delimited text tables, key/value scalar files and exact number formatting.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lego {

class LoadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Comma separated table with a header row. Blank lines and lines starting
/// with '#' are skipped.
class CsvTable {
public:
    static CsvTable read(const std::filesystem::path& path);
    static CsvTable parse(std::string_view text, std::string source);

    const std::string& source() const { return source_; }
    std::size_t size() const { return rows_.size(); }
    bool has_column(std::string_view name) const;

    class Row {
    public:
        const std::string& str(std::string_view column) const;
        double num(std::string_view column) const;
        /// Falls back to `fallback` when the column is absent or the cell empty.
        double num_or(std::string_view column, double fallback) const;
        long integer(std::string_view column) const;
        bool flag(std::string_view column) const;
        std::size_t line() const { return line_; }

    private:
        friend class CsvTable;
        const std::string& cell(std::string_view column) const;
        const std::string* lookup(std::string_view column) const;

        std::shared_ptr<const std::vector<std::string>> header_;
        std::shared_ptr<const std::string> source_;
        std::vector<std::string> cells_;
        std::size_t line_ = 0;
    };

    const Row& row(std::size_t i) const { return rows_.at(i); }
    auto begin() const { return rows_.begin(); }
    auto end() const { return rows_.end(); }

private:
    std::string source_;
    std::shared_ptr<const std::vector<std::string>> header_;
    std::vector<Row> rows_;
};

/// `key = value` lines; '#' starts a comment. Values may be quoted strings.
class KeyValueFile {
public:
    static KeyValueFile read(const std::filesystem::path& path);
    static KeyValueFile parse(std::string_view text, std::string source);

    bool contains(const std::string& key) const { return values_.contains(key); }
    double num(const std::string& key) const;
    double num_or(const std::string& key, double fallback) const;
    std::string str_or(const std::string& key, std::string fallback) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::string source_;
    std::map<std::string, std::string> values_;
};

/// Shortest representation that parses back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view s);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace lego
