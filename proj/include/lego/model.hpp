#pragma once

// Solver-agnostic optimization problem: variables with bounds and
// integrality, sparse linear rows, quadratic (cone) rows and a linear
// objective that is always minimized.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lego {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class VarKind { Continuous, Binary, Integer };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct VarId {
    std::uint32_t index = 0;
    friend bool operator==(VarId, VarId) = default;
    friend auto operator<=>(VarId, VarId) = default;
};

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = kInf;

    bool is_integral() const { return kind != VarKind::Continuous; }
};

struct LinearTerm {
    VarId var;
    double coef = 0.0;
};

class LinearExpr {
public:
    LinearExpr() = default;
    explicit LinearExpr(double constant) : constant_(constant) {}

    LinearExpr& add(VarId v, double coef) {
        if (coef != 0.0) terms_.push_back({v, coef});
        return *this;
    }
    LinearExpr& add_constant(double c) {
        constant_ += c;
        return *this;
    }
    LinearExpr& add(const LinearExpr& other, double scale = 1.0);

    /// Merges duplicate variables, drops zero coefficients and sorts by id.
    void normalize();

    std::span<const LinearTerm> terms() const { return terms_; }
    double constant() const { return constant_; }
    void set_constant(double c) { constant_ = c; }
    bool empty() const { return terms_.empty(); }

    double evaluate(std::span<const double> values) const;

private:
    std::vector<LinearTerm> terms_;
    double constant_ = 0.0;
};

struct LinearRow {
    std::string name;
    LinearExpr expr;  // normalized, constant folded into rhs
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

struct QuadTerm {
    VarId a;
    VarId b;
    double coef = 0.0;
};

/// sum(quad) + linear  (sense)  rhs
struct QuadRow {
    std::string name;
    std::vector<QuadTerm> quad;
    LinearExpr linear;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

/// Family of a canonical name: the text before the first '('.
std::string_view name_family(std::string_view name);

namespace detail {
inline void append_index(std::ostringstream& os, const std::string& s) { os << s; }
inline void append_index(std::ostringstream& os, std::string_view s) { os << s; }
inline void append_index(std::ostringstream& os, const char* s) { os << s; }
inline void append_index(std::ostringstream& os, int v) { os << v; }
inline void append_index(std::ostringstream& os, long v) { os << v; }
inline void append_index(std::ostringstream& os, std::size_t v) { os << v; }
}  // namespace detail

/// Canonical name grammar: family(idx1,idx2,...). A family without indices
/// is written as family().
template <typename... Idx>
std::string make_name(std::string_view family, const Idx&... idx) {
    std::ostringstream os;
    os << family << '(';
    bool first = true;
    ((os << (first ? "" : ","), detail::append_index(os, idx), first = false), ...);
    os << ')';
    return os.str();
}

class ModelInstance {
public:
    VarId add_variable(std::string name, VarKind kind, double lower, double upper);
    void add_row(std::string name, LinearExpr expr, Sense sense, double rhs);
    void add_quad_row(QuadRow row);
    void set_objective(LinearExpr expr);

    std::optional<VarId> find(std::string_view name) const;
    VarId at(std::string_view name) const;
    bool has_row(std::string_view name) const;

    const Variable& var(VarId id) const { return vars_.at(id.index); }
    Variable& var_mut(VarId id) { return vars_.at(id.index); }
    std::span<const Variable> variables() const { return vars_; }
    std::span<const LinearRow> rows() const { return rows_; }
    std::span<const QuadRow> quad_rows() const { return quad_rows_; }
    const LinearExpr& objective() const { return objective_; }

    std::size_t num_integral() const;

    /// Rows per family over linear and quadratic rows.
    std::map<std::string, std::size_t> row_census() const;
    /// Variables per family.
    std::map<std::string, std::size_t> variable_census() const;

    /// Largest violation of bounds, integrality and rows at a full assignment.
    double max_violation(std::span<const double> values) const;
    /// Violation of each row by name, only rows above tol.
    std::vector<std::pair<std::string, double>> violated_rows(std::span<const double> values,
                                                              double tol) const;

private:
    std::vector<Variable> vars_;
    std::unordered_map<std::string, std::uint32_t> var_index_;
    std::vector<LinearRow> rows_;
    std::vector<QuadRow> quad_rows_;
    std::unordered_map<std::string, std::uint32_t> row_index_;
    LinearExpr objective_;
};

double row_violation(double activity, Sense sense, double rhs);

}  // namespace lego
