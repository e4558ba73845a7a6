#include "lego/text_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace lego {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_commas(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError("cannot open file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LoadError("cannot write file " + path.string());
    out << text;
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    std::string t = trim(s);
    if (t == "inf" || t == "+inf" || t == "infinity" || t == "+infinity") return std::numeric_limits<double>::infinity();
    if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
    std::string_view body = t;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), v);
    if (res.ec != std::errc() || res.ptr != body.data() + body.size() || body.empty()) {
        throw LoadError("not a number: '" + t + "'");
    }
    return v;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw LoadError("missing file " + path.filename().string());
    return parse(read_text_file(path), path.filename().string());
}

CsvTable CsvTable::parse(std::string_view text, std::string source) {
    CsvTable t;
    t.source_ = std::move(source);
    auto src = std::make_shared<const std::string>(t.source_);
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto cells = split_commas(s);
        if (!t.header_) {
            t.header_ = std::make_shared<const std::vector<std::string>>(std::move(cells));
            continue;
        }
        if (cells.size() != t.header_->size()) {
            throw LoadError(t.source_ + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(t.header_->size()) + " fields, found " + std::to_string(cells.size()));
        }
        Row r;
        r.header_ = t.header_;
        r.source_ = src;
        r.cells_ = std::move(cells);
        r.line_ = lineno;
        t.rows_.push_back(std::move(r));
    }
    if (!t.header_) throw LoadError(t.source_ + ": missing header row");
    return t;
}

bool CsvTable::has_column(std::string_view name) const {
    return std::find(header_->begin(), header_->end(), name) != header_->end();
}

const std::string* CsvTable::Row::lookup(std::string_view column) const {
    auto it = std::find(header_->begin(), header_->end(), column);
    if (it == header_->end()) return nullptr;
    return &cells_[static_cast<std::size_t>(it - header_->begin())];
}

const std::string& CsvTable::Row::cell(std::string_view column) const {
    const auto* c = lookup(column);
    if (!c) throw LoadError(*source_ + ": missing column " + std::string(column));
    return *c;
}

const std::string& CsvTable::Row::str(std::string_view column) const { return cell(column); }

double CsvTable::Row::num(std::string_view column) const {
    try {
        return parse_double(cell(column));
    } catch (const LoadError& e) {
        throw LoadError(*source_ + ":" + std::to_string(line_) + ": column " + std::string(column) + ": " + e.what());
    }
}

double CsvTable::Row::num_or(std::string_view column, double fallback) const {
    const auto* c = lookup(column);
    if (!c || c->empty()) return fallback;
    return num(column);
}

long CsvTable::Row::integer(std::string_view column) const {
    double v = num(column);
    if (v != std::floor(v)) {
        throw LoadError(*source_ + ":" + std::to_string(line_) + ": column " + std::string(column) +
                        ": expected an integer, found " + cell(column));
    }
    return static_cast<long>(v);
}

bool CsvTable::Row::flag(std::string_view column) const {
    const auto* c = lookup(column);
    if (!c) return false;
    const std::string& v = *c;
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no" || v.empty()) return false;
    throw LoadError(*source_ + ":" + std::to_string(line_) + ": column " + std::string(column) +
                    ": expected a flag, found " + v);
}

KeyValueFile KeyValueFile::read(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw LoadError("missing file " + path.filename().string());
    return parse(read_text_file(path), path.filename().string());
}

KeyValueFile KeyValueFile::parse(std::string_view text, std::string source) {
    KeyValueFile f;
    f.source_ = std::move(source);
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (s.empty() || s.front() == '[') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw LoadError(f.source_ + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        f.values_[key] = value;
    }
    return f;
}

double KeyValueFile::num(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw LoadError(source_ + ": missing key " + key);
    try {
        return parse_double(it->second);
    } catch (const LoadError& e) {
        throw LoadError(source_ + ": key " + key + ": " + e.what());
    }
}

double KeyValueFile::num_or(const std::string& key, double fallback) const {
    return contains(key) ? num(key) : fallback;
}

std::string KeyValueFile::str_or(const std::string& key, std::string fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

}  // namespace lego
