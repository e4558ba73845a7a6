#include "lego/model.hpp"

#include <algorithm>
#include <cmath>

namespace lego {

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale) {
    for (const auto& t : other.terms_) add(t.var, t.coef * scale);
    constant_ += other.constant_ * scale;
    return *this;
}

void LinearExpr::normalize() {
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
    std::vector<LinearTerm> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!merged.empty() && merged.back().var == t.var) {
            merged.back().coef += t.coef;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const LinearTerm& t) { return t.coef == 0.0; });
    terms_ = std::move(merged);
}

double LinearExpr::evaluate(std::span<const double> values) const {
    double s = constant_;
    for (const auto& t : terms_) s += t.coef * values[t.var.index];
    return s;
}

std::string_view name_family(std::string_view name) {
    auto pos = name.find('(');
    return pos == std::string_view::npos ? name : name.substr(0, pos);
}

VarId ModelInstance::add_variable(std::string name, VarKind kind, double lower, double upper) {
    if (lower > upper) {
        throw ModelError("variable " + name + " has lower bound above upper bound");
    }
    if (kind == VarKind::Binary && (lower < 0.0 || upper > 1.0)) {
        throw ModelError("binary variable " + name + " has bounds outside {0,1}");
    }
    auto id = static_cast<std::uint32_t>(vars_.size());
    auto [it, inserted] = var_index_.emplace(name, id);
    if (!inserted) throw ModelError("duplicate variable name " + name);
    vars_.push_back({std::move(name), kind, lower, upper});
    return VarId{id};
}

void ModelInstance::add_row(std::string name, LinearExpr expr, Sense sense, double rhs) {
    expr.normalize();
    for (const auto& t : expr.terms()) {
        if (t.var.index >= vars_.size()) throw ModelError("row " + name + " references unknown variable");
    }
    rhs -= expr.constant();
    expr.set_constant(0.0);
    auto id = static_cast<std::uint32_t>(rows_.size() + quad_rows_.size());
    if (!row_index_.emplace(name, id).second) throw ModelError("duplicate row name " + name);
    rows_.push_back({std::move(name), std::move(expr), sense, rhs});
}

void ModelInstance::add_quad_row(QuadRow row) {
    row.linear.normalize();
    row.rhs -= row.linear.constant();
    row.linear.set_constant(0.0);
    for (const auto& q : row.quad) {
        if (q.a.index >= vars_.size() || q.b.index >= vars_.size()) {
            throw ModelError("row " + row.name + " references unknown variable");
        }
    }
    auto id = static_cast<std::uint32_t>(rows_.size() + quad_rows_.size());
    if (!row_index_.emplace(row.name, id).second) throw ModelError("duplicate row name " + row.name);
    quad_rows_.push_back(std::move(row));
}

void ModelInstance::set_objective(LinearExpr expr) {
    expr.normalize();
    objective_ = std::move(expr);
}

std::optional<VarId> ModelInstance::find(std::string_view name) const {
    auto it = var_index_.find(std::string(name));
    if (it == var_index_.end()) return std::nullopt;
    return VarId{it->second};
}

VarId ModelInstance::at(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw ModelError("unknown variable " + std::string(name));
}

bool ModelInstance::has_row(std::string_view name) const {
    return row_index_.contains(std::string(name));
}

std::size_t ModelInstance::num_integral() const {
    return static_cast<std::size_t>(
        std::count_if(vars_.begin(), vars_.end(), [](const Variable& v) { return v.is_integral(); }));
}

std::map<std::string, std::size_t> ModelInstance::row_census() const {
    std::map<std::string, std::size_t> out;
    for (const auto& r : rows_) ++out[std::string(name_family(r.name))];
    for (const auto& r : quad_rows_) ++out[std::string(name_family(r.name))];
    return out;
}

std::map<std::string, std::size_t> ModelInstance::variable_census() const {
    std::map<std::string, std::size_t> out;
    for (const auto& v : vars_) ++out[std::string(name_family(v.name))];
    return out;
}

double row_violation(double activity, Sense sense, double rhs) {
    switch (sense) {
        case Sense::LessEqual: return std::max(0.0, activity - rhs);
        case Sense::GreaterEqual: return std::max(0.0, rhs - activity);
        case Sense::Equal: return std::abs(activity - rhs);
    }
    return 0.0;
}

namespace {

double quad_activity(const QuadRow& r, std::span<const double> values) {
    double s = r.linear.evaluate(values);
    for (const auto& q : r.quad) s += q.coef * values[q.a.index] * values[q.b.index];
    return s;
}

}  // namespace

double ModelInstance::max_violation(std::span<const double> values) const {
    if (values.size() != vars_.size()) throw ModelError("assignment size does not match model");
    double worst = 0.0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        double x = values[i];
        worst = std::max({worst, v.lower - x, x - v.upper});
        if (v.is_integral()) worst = std::max(worst, std::abs(x - std::round(x)));
    }
    for (const auto& r : rows_) worst = std::max(worst, row_violation(r.expr.evaluate(values), r.sense, r.rhs));
    for (const auto& r : quad_rows_) worst = std::max(worst, row_violation(quad_activity(r, values), r.sense, r.rhs));
    return worst;
}

std::vector<std::pair<std::string, double>> ModelInstance::violated_rows(std::span<const double> values,
                                                                         double tol) const {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& r : rows_) {
        double v = row_violation(r.expr.evaluate(values), r.sense, r.rhs);
        if (v > tol) out.emplace_back(r.name, v);
    }
    for (const auto& r : quad_rows_) {
        double v = row_violation(quad_activity(r, values), r.sense, r.rhs);
        if (v > tol) out.emplace_back(r.name, v);
    }
    return out;
}

}  // namespace lego
