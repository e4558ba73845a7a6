#include "lego/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "lego/text_io.hpp"

namespace lego {

std::string_view file_extension(ModelFormat f) { return f == ModelFormat::Lp ? ".lp" : ".mps"; }

namespace {

struct NameKey {
    std::string_view family;
    std::vector<std::string_view> idx;
};

NameKey split_name(std::string_view name) {
    NameKey key;
    auto open = name.find('(');
    key.family = name.substr(0, open);
    if (open == std::string_view::npos) return key;
    auto close = name.rfind(')');
    auto inner = name.substr(open + 1, close == std::string_view::npos ? std::string_view::npos : close - open - 1);
    std::size_t start = 0;
    while (start <= inner.size()) {
        auto comma = inner.find(',', start);
        if (comma == std::string_view::npos) comma = inner.size();
        if (!inner.empty()) key.idx.push_back(inner.substr(start, comma - start));
        start = comma + 1;
    }
    return key;
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

int compare_index(std::string_view a, std::string_view b) {
    const bool na = all_digits(a), nb = all_digits(b);
    if (na && nb) {
        auto strip = [](std::string_view s) {
            auto p = s.find_first_not_of('0');
            return p == std::string_view::npos ? std::string_view("0") : s.substr(p);
        };
        auto sa = strip(a), sb = strip(b);
        if (sa.size() != sb.size()) return sa.size() < sb.size() ? -1 : 1;
        if (int c = sa.compare(sb)) return c < 0 ? -1 : 1;
    } else if (na != nb) {
        return na ? -1 : 1;
    }
    int c = a.compare(b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

bool key_less(const NameKey& a, const NameKey& b) {
    if (int c = a.family.compare(b.family)) return c < 0;
    const std::size_t n = std::min(a.idx.size(), b.idx.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare_index(a.idx[i], b.idx[i])) return c < 0;
    }
    return a.idx.size() < b.idx.size();
}

template <typename NameOf>
std::vector<std::size_t> canonical_order(std::size_t n, NameOf name_of) {
    std::vector<NameKey> keys;
    keys.reserve(n);
    for (std::size_t i = 0; i < n; ++i) keys.push_back(split_name(name_of(i)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (key_less(keys[x], keys[y])) return true;
        if (key_less(keys[y], keys[x])) return false;
        return name_of(x) < name_of(y);
    });
    return order;
}

bool binary_box(const Variable& v) { return v.is_integral() && v.lower >= 0.0 && v.upper <= 1.0; }

/// Shared canonical view of a model used by both writers.
struct Layout {
    std::vector<std::size_t> var_order;  // rank -> var index
    std::vector<std::size_t> var_rank;   // var index -> rank
    struct RowRef {
        bool quad = false;
        std::size_t index = 0;
    };
    std::vector<RowRef> rows;  // canonical order over linear and quadratic rows

    const std::string& row_name(const ModelInstance& m, const RowRef& r) const {
        return r.quad ? m.quad_rows()[r.index].name : m.rows()[r.index].name;
    }
};

Layout make_layout(const ModelInstance& m) {
    if (m.objective().constant() != 0.0) throw FormatError("objective constants are not supported by the writers");
    const auto vars = m.variables();
    Layout lay;
    lay.var_order = canonical_order(vars.size(), [&](std::size_t i) -> const std::string& { return vars[i].name; });
    lay.var_rank.assign(vars.size(), 0);
    for (std::size_t r = 0; r < lay.var_order.size(); ++r) lay.var_rank[lay.var_order[r]] = r;
    for (const auto& v : vars) check_name(v.name);

    std::vector<Layout::RowRef> refs;
    for (std::size_t i = 0; i < m.rows().size(); ++i) refs.push_back({false, i});
    for (std::size_t i = 0; i < m.quad_rows().size(); ++i) refs.push_back({true, i});
    auto order = canonical_order(refs.size(), [&](std::size_t i) -> const std::string& { return lay.row_name(m, refs[i]); });
    for (auto i : order) {
        check_name(lay.row_name(m, refs[i]));
        lay.rows.push_back(refs[i]);
    }
    return lay;
}

std::vector<LinearTerm> sorted_terms(const LinearExpr& e, const Layout& lay) {
    std::vector<LinearTerm> t(e.terms().begin(), e.terms().end());
    std::sort(t.begin(), t.end(),
              [&](const LinearTerm& a, const LinearTerm& b) { return lay.var_rank[a.var.index] < lay.var_rank[b.var.index]; });
    return t;
}

/// Orders each product so a precedes b canonically, merges duplicates, drops zeros.
std::vector<QuadTerm> sorted_quad(const std::vector<QuadTerm>& q, const Layout& lay) {
    std::vector<QuadTerm> out;
    for (auto t : q) {
        if (lay.var_rank[t.b.index] < lay.var_rank[t.a.index]) std::swap(t.a, t.b);
        out.push_back(t);
    }
    auto rank_pair = [&](const QuadTerm& t) {
        return std::pair{lay.var_rank[t.a.index], lay.var_rank[t.b.index]};
    };
    std::sort(out.begin(), out.end(), [&](const QuadTerm& x, const QuadTerm& y) { return rank_pair(x) < rank_pair(y); });
    std::vector<QuadTerm> merged;
    for (const auto& t : out) {
        if (!merged.empty() && merged.back().a == t.a && merged.back().b == t.b) {
            merged.back().coef += t.coef;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const QuadTerm& t) { return t.coef == 0.0; });
    return merged;
}

std::string_view sense_token(Sense s) {
    switch (s) {
        case Sense::LessEqual: return "<=";
        case Sense::GreaterEqual: return ">=";
        case Sense::Equal: return "=";
    }
    return "=";
}

constexpr int kTermsPerLine = 6;

class LpWriter {
public:
    LpWriter(const ModelInstance& m, const Layout& lay) : m_(m), lay_(lay) {}

    std::string run() {
        out_ << "\\ lego model\n";
        out_ << "Minimize\n obj:";
        auto obj = sorted_terms(m_.objective(), lay_);
        if (obj.empty() && !lay_.var_order.empty()) {
            out_ << " 0 " << name(lay_.var_order.front());
        }
        terms(obj);
        out_ << "\nSubject To\n";
        for (const auto& r : lay_.rows) row(r);
        out_ << "Bounds\n";
        for (auto i : lay_.var_order) bound(m_.variables()[i]);
        std::vector<std::size_t> generals, binaries;
        for (auto i : lay_.var_order) {
            const auto& v = m_.variables()[i];
            if (!v.is_integral()) continue;
            (binary_box(v) && v.lower == 0.0 && v.upper == 1.0 ? binaries : generals).push_back(i);
        }
        if (!generals.empty()) {
            out_ << "Generals\n";
            for (auto i : generals) out_ << ' ' << name(i) << '\n';
        }
        if (!binaries.empty()) {
            out_ << "Binaries\n";
            for (auto i : binaries) out_ << ' ' << name(i) << '\n';
        }
        out_ << "End\n";
        return out_.str();
    }

private:
    const std::string& name(std::size_t i) const { return m_.variables()[i].name; }

    void coef_sign(double c) {
        if (count_ > 0 && count_ % kTermsPerLine == 0) out_ << "\n ";
        out_ << (c < 0 ? " - " : (count_ == 0 ? " " : " + ")) << format_double(std::abs(c)) << ' ';
        ++count_;
    }

    void terms(const std::vector<LinearTerm>& t) {
        count_ = 0;
        for (const auto& term : t) {
            coef_sign(term.coef);
            out_ << name(term.var.index);
        }
    }

    void row(const Layout::RowRef& r) {
        out_ << ' ' << lay_.row_name(m_, r) << ':';
        const LinearExpr& lin = r.quad ? m_.quad_rows()[r.index].linear : m_.rows()[r.index].expr;
        auto lt = sorted_terms(lin, lay_);
        terms(lt);
        std::vector<QuadTerm> q;
        if (r.quad) q = sorted_quad(m_.quad_rows()[r.index].quad, lay_);
        if (lt.empty() && q.empty() && !lay_.var_order.empty()) out_ << " 0 " << name(lay_.var_order.front());
        if (!q.empty()) {
            out_ << (lt.empty() ? " [" : " + [");
            count_ = 0;
            for (const auto& t : q) {
                coef_sign(t.coef);
                if (t.a == t.b) {
                    out_ << name(t.a.index) << " ^2";
                } else {
                    out_ << name(t.a.index) << " * " << name(t.b.index);
                }
            }
            out_ << " ]";
        }
        Sense s = r.quad ? m_.quad_rows()[r.index].sense : m_.rows()[r.index].sense;
        double rhs = r.quad ? m_.quad_rows()[r.index].rhs : m_.rows()[r.index].rhs;
        out_ << ' ' << sense_token(s) << ' ' << format_double(rhs) << '\n';
    }

    void bound(const Variable& v) {
        if (v.lower == v.upper) {
            out_ << ' ' << v.name << " = " << format_double(v.lower) << '\n';
        } else if (v.lower == -kInf && v.upper == kInf) {
            out_ << ' ' << v.name << " free\n";
        } else {
            out_ << ' ' << (v.lower == -kInf ? "-inf" : format_double(v.lower)) << " <= " << v.name << " <= "
                 << (v.upper == kInf ? "+inf" : format_double(v.upper)) << '\n';
        }
    }

    const ModelInstance& m_;
    const Layout& lay_;
    std::ostringstream out_;
    int count_ = 0;
};

std::string_view mps_sense(Sense s) {
    switch (s) {
        case Sense::LessEqual: return "L";
        case Sense::GreaterEqual: return "G";
        case Sense::Equal: return "E";
    }
    return "E";
}

// ---------------------------------------------------------------- parsing

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
        start = nl + 1;
    }
    return out;
}

bool is_number(std::string_view tok) {
    if (tok.empty()) return false;
    std::size_t i = (tok[0] == '+' || tok[0] == '-') ? 1 : 0;
    if (i >= tok.size()) return false;
    if (std::isdigit(static_cast<unsigned char>(tok[i])) || tok[i] == '.') return true;
    auto rest = lower(tok.substr(i));
    return rest == "inf" || rest == "infinity";
}

/// Builds a model while reading: variables appear lazily with default
/// bounds and get their final bounds and kinds at the end.
class ModelAssembler {
public:
    VarId var(std::string_view name) {
        if (auto v = m_.find(name)) return *v;
        check_name(name);
        return m_.add_variable(std::string(name), VarKind::Continuous, 0.0, kInf);
    }
    ModelInstance& model() { return m_; }

    void finish_kinds() {
        for (std::size_t i = 0; i < m_.variables().size(); ++i) {
            auto& v = m_.var_mut(VarId{static_cast<std::uint32_t>(i)});
            if (v.lower > v.upper) throw FormatError("variable " + v.name + " has lower bound above upper bound");
            if (v.is_integral()) v.kind = binary_box(v) ? VarKind::Binary : VarKind::Integer;
        }
    }

private:
    ModelInstance m_;
};

Sense parse_sense(std::string_view tok) {
    if (tok == "<=" || tok == "=<" || tok == "<") return Sense::LessEqual;
    if (tok == ">=" || tok == "=>" || tok == ">") return Sense::GreaterEqual;
    if (tok == "=") return Sense::Equal;
    throw FormatError("expected a comparison, got '" + std::string(tok) + "'");
}

bool is_sense(std::string_view tok) {
    return tok == "<=" || tok == "=<" || tok == "<" || tok == ">=" || tok == "=>" || tok == ">" || tok == "=";
}

struct Statement {
    std::string name;
    std::vector<std::string_view> tokens;
};

void parse_statement(ModelAssembler& a, const Statement& st, bool objective) {
    LinearExpr lin;
    std::vector<QuadTerm> quad;
    bool in_bracket = false;
    double sign = 1.0;
    std::optional<double> coef;
    std::size_t i = 0;
    const auto& tk = st.tokens;
    auto fail = [&](const std::string& what) { throw FormatError("row " + st.name + ": " + what); };
    while (i < tk.size()) {
        auto t = tk[i];
        if (t == "+") {
            ++i;
        } else if (t == "-") {
            sign = -sign;
            ++i;
        } else if (t == "[") {
            if (objective) fail("quadratic objectives are not supported");
            in_bracket = true;
            ++i;
        } else if (t == "]") {
            in_bracket = false;
            ++i;
        } else if (is_sense(t)) {
            break;
        } else if (is_number(t)) {
            coef = sign * parse_double(t) * coef.value_or(1.0);
            sign = 1.0;
            ++i;
        } else {
            double c = coef.value_or(sign);
            coef.reset();
            sign = 1.0;
            VarId v = a.var(t);
            ++i;
            if (in_bracket) {
                if (i < tk.size() && tk[i] == "^2") {
                    quad.push_back({v, v, c});
                    ++i;
                } else if (i + 1 < tk.size() && tk[i] == "*") {
                    quad.push_back({v, a.var(tk[i + 1]), c});
                    i += 2;
                } else {
                    fail("malformed quadratic term near " + std::string(t));
                }
            } else {
                lin.add(v, c);
            }
        }
    }
    if (objective) {
        if (i != tk.size()) fail("objective has a comparison");
        a.model().set_objective(std::move(lin));
        return;
    }
    if (i + 1 >= tk.size()) fail("missing comparison or right-hand side");
    Sense sense = parse_sense(tk[i]);
    double rhs_sign = 1.0;
    ++i;
    if (tk[i] == "-" || tk[i] == "+") {
        rhs_sign = tk[i] == "-" ? -1.0 : 1.0;
        ++i;
    }
    if (i >= tk.size() || !is_number(tk[i])) fail("missing right-hand side");
    double rhs = rhs_sign * parse_double(tk[i]);
    if (i + 1 != tk.size()) fail("trailing tokens");
    if (quad.empty()) {
        a.model().add_row(st.name, std::move(lin), sense, rhs);
    } else {
        a.model().add_quad_row({st.name, std::move(quad), std::move(lin), sense, rhs});
    }
}

enum class LpSection { None, Objective, Constraints, Bounds, Generals, Binaries, End };

std::optional<LpSection> lp_keyword(std::string_view line) {
    auto toks = split_ws(line);
    std::string joined;
    for (auto t : toks) joined += lower(t) + " ";
    if (!joined.empty()) joined.pop_back();
    if (joined == "minimize" || joined == "minimum" || joined == "min") return LpSection::Objective;
    if (joined == "maximize" || joined == "max") throw FormatError("maximization is not supported");
    if (joined == "subject to" || joined == "such that" || joined == "st" || joined == "s.t.") {
        return LpSection::Constraints;
    }
    if (joined == "bounds" || joined == "bound") return LpSection::Bounds;
    if (joined == "generals" || joined == "general" || joined == "integers") return LpSection::Generals;
    if (joined == "binaries" || joined == "binary") return LpSection::Binaries;
    if (joined == "end") return LpSection::End;
    return std::nullopt;
}

void parse_bound_line(ModelAssembler& a, const std::vector<std::string_view>& t) {
    auto fail = [&] {
        std::string line;
        for (auto x : t) line += std::string(x) + " ";
        throw FormatError("malformed bound: " + line);
    };
    auto num = [&](std::string_view s) {
        if (!is_number(s)) fail();
        return parse_double(s);
    };
    if (t.size() == 2 && lower(t[1]) == "free") {
        auto& v = a.model().var_mut(a.var(t[0]));
        v.lower = -kInf;
        v.upper = kInf;
    } else if (t.size() == 5 && is_number(t[0])) {
        auto& v = a.model().var_mut(a.var(t[2]));
        v.lower = num(t[0]);
        v.upper = num(t[4]);
    } else if (t.size() == 3 && !is_number(t[0])) {
        auto& v = a.model().var_mut(a.var(t[0]));
        double x = num(t[2]);
        switch (parse_sense(t[1])) {
            case Sense::Equal: v.lower = v.upper = x; break;
            case Sense::LessEqual: v.upper = x; break;
            case Sense::GreaterEqual: v.lower = x; break;
        }
    } else if (t.size() == 3) {
        auto& v = a.model().var_mut(a.var(t[2]));
        double x = num(t[0]);
        switch (parse_sense(t[1])) {
            case Sense::Equal: v.lower = v.upper = x; break;
            case Sense::LessEqual: v.lower = x; break;
            case Sense::GreaterEqual: v.upper = x; break;
        }
    } else {
        fail();
    }
}

}  // namespace

bool canonical_less(std::string_view a, std::string_view b) {
    auto ka = split_name(a), kb = split_name(b);
    if (key_less(ka, kb)) return true;
    if (key_less(kb, ka)) return false;
    return a < b;
}

void check_name(std::string_view name) {
    if (name.empty()) throw FormatError("empty name");
    if (name.size() > 255) throw FormatError("name exceeds 255 characters: " + std::string(name));
    if (std::isdigit(static_cast<unsigned char>(name[0])) || name[0] == '.') {
        throw FormatError("name must not start with a digit or '.': " + std::string(name));
    }
    for (char c : name) {
        bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '(' || c == ')' || c == ',';
        if (!ok) throw FormatError("name has an unsupported character '" + std::string(1, c) + "': " + std::string(name));
    }
}

std::string emit_lp(const ModelInstance& m) {
    auto lay = make_layout(m);
    return LpWriter(m, lay).run();
}

std::string emit_mps(const ModelInstance& m) {
    auto lay = make_layout(m);
    const auto vars = m.variables();
    std::ostringstream out;
    out << "NAME lego\nROWS\n N obj\n";
    // Column-wise entries: (row position, coefficient) per variable.
    std::vector<std::vector<std::pair<std::size_t, double>>> col(vars.size());
    for (const auto& t : m.objective().terms()) col[t.var.index].push_back({0, t.coef});
    for (std::size_t r = 0; r < lay.rows.size(); ++r) {
        const auto& ref = lay.rows[r];
        Sense s = ref.quad ? m.quad_rows()[ref.index].sense : m.rows()[ref.index].sense;
        out << ' ' << mps_sense(s) << ' ' << lay.row_name(m, ref) << '\n';
        const LinearExpr& e = ref.quad ? m.quad_rows()[ref.index].linear : m.rows()[ref.index].expr;
        for (const auto& t : e.terms()) col[t.var.index].push_back({r + 1, t.coef});
    }
    out << "COLUMNS\n";
    bool in_int = false;
    int marker = 0;
    for (auto i : lay.var_order) {
        const auto& v = vars[i];
        if (v.is_integral() != in_int) {
            out << " MARKER" << marker++ << " 'MARKER' " << (in_int ? "'INTEND'" : "'INTORG'") << '\n';
            in_int = v.is_integral();
        }
        auto& entries = col[i];
        std::sort(entries.begin(), entries.end());
        if (entries.empty()) out << ' ' << v.name << " obj 0\n";
        for (auto [r, c] : entries) {
            out << ' ' << v.name << ' ' << (r == 0 ? std::string("obj") : lay.row_name(m, lay.rows[r - 1])) << ' '
                << format_double(c) << '\n';
        }
    }
    if (in_int) out << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
    out << "RHS\n";
    for (const auto& ref : lay.rows) {
        double rhs = ref.quad ? m.quad_rows()[ref.index].rhs : m.rows()[ref.index].rhs;
        if (rhs != 0.0) out << " rhs " << lay.row_name(m, ref) << ' ' << format_double(rhs) << '\n';
    }
    out << "BOUNDS\n";
    for (auto i : lay.var_order) {
        const auto& v = vars[i];
        if (v.lower == v.upper) {
            out << " FX bnd " << v.name << ' ' << format_double(v.lower) << '\n';
            continue;
        }
        if (v.lower == -kInf && v.upper == kInf) {
            out << " FR bnd " << v.name << '\n';
            continue;
        }
        if (v.lower == -kInf) {
            out << " MI bnd " << v.name << '\n';
        } else {
            out << " LO bnd " << v.name << ' ' << format_double(v.lower) << '\n';
        }
        if (v.upper == kInf) {
            out << " PL bnd " << v.name << '\n';
        } else {
            out << " UP bnd " << v.name << ' ' << format_double(v.upper) << '\n';
        }
    }
    for (const auto& ref : lay.rows) {
        if (!ref.quad) continue;
        const auto& q = m.quad_rows()[ref.index];
        out << "QCMATRIX " << q.name << '\n';
        // Full symmetric matrix: off-diagonal products are split in halves.
        std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
        for (const auto& t : sorted_quad(q.quad, lay)) {
            auto ra = lay.var_rank[t.a.index], rb = lay.var_rank[t.b.index];
            if (ra == rb) {
                entries.emplace_back(ra, rb, t.coef);
            } else {
                entries.emplace_back(ra, rb, t.coef / 2.0);
                entries.emplace_back(rb, ra, t.coef / 2.0);
            }
        }
        std::sort(entries.begin(), entries.end());
        for (auto [ra, rb, c] : entries) {
            out << ' ' << vars[lay.var_order[ra]].name << ' ' << vars[lay.var_order[rb]].name << ' ' << format_double(c)
                << '\n';
        }
    }
    out << "ENDATA\n";
    return out.str();
}

std::string emit(const ModelInstance& m, ModelFormat f) { return f == ModelFormat::Lp ? emit_lp(m) : emit_mps(m); }

ModelInstance parse_lp(std::string_view text) {
    ModelAssembler a;
    LpSection section = LpSection::None;
    std::vector<Statement> objective, constraints;
    std::vector<std::vector<std::string_view>> bounds;
    std::vector<std::pair<std::string_view, bool>> integral;  // name, binary
    for (auto line : lines_of(text)) {
        auto comment = line.find('\\');
        if (comment != std::string_view::npos) line = line.substr(0, comment);
        if (split_ws(line).empty()) continue;
        if (auto kw = lp_keyword(line)) {
            section = *kw;
            continue;
        }
        auto toks = split_ws(line);
        switch (section) {
            case LpSection::Objective:
            case LpSection::Constraints: {
                auto& list = section == LpSection::Objective ? objective : constraints;
                for (auto t : toks) {
                    if (t.size() > 1 && t.back() == ':') {
                        list.push_back({std::string(t.substr(0, t.size() - 1)), {}});
                    } else {
                        if (list.empty()) throw FormatError("expression without a name: " + std::string(line));
                        list.back().tokens.push_back(t);
                    }
                }
                break;
            }
            case LpSection::Bounds: bounds.push_back(toks); break;
            case LpSection::Generals:
                for (auto t : toks) integral.push_back({t, false});
                break;
            case LpSection::Binaries:
                for (auto t : toks) integral.push_back({t, true});
                break;
            case LpSection::None: throw FormatError("content before the objective section: " + std::string(line));
            case LpSection::End: throw FormatError("content after End");
        }
    }
    if (objective.size() > 1) throw FormatError("more than one objective");
    // Register variables in order of appearance in bounds first: the writers
    // list every variable there.
    for (const auto& b : bounds) parse_bound_line(a, b);
    for (const auto& o : objective) parse_statement(a, o, true);
    for (const auto& c : constraints) parse_statement(a, c, false);
    for (auto [name, binary] : integral) {
        auto& v = a.model().var_mut(a.var(name));
        v.kind = VarKind::Integer;
        if (binary) {
            v.lower = std::max(v.lower, 0.0);
            v.upper = std::min(v.upper, 1.0);
        }
    }
    a.finish_kinds();
    return std::move(a.model());
}

ModelInstance parse_mps(std::string_view text) {
    ModelAssembler a;
    enum class Sec { None, Rows, Columns, Rhs, Bounds, Qc, End } sec = Sec::None;
    std::string objective_row;
    std::vector<std::string> row_order;
    std::unordered_map<std::string, Sense> row_sense;
    std::unordered_map<std::string, LinearExpr> row_expr;
    std::unordered_map<std::string, double> row_rhs;
    std::unordered_map<std::string, std::vector<QuadTerm>> row_quad;
    std::string qc_row;
    LinearExpr obj;
    bool in_int = false;
    auto fail = [](std::string_view line) { throw FormatError("malformed MPS line: " + std::string(line)); };
    for (auto line : lines_of(text)) {
        auto toks = split_ws(line);
        if (toks.empty() || toks[0].front() == '*') continue;
        const bool header = !std::isspace(static_cast<unsigned char>(line.front()));
        if (header) {
            auto kw = lower(toks[0]);
            if (kw == "name") { sec = Sec::None; }
            else if (kw == "rows") { sec = Sec::Rows; }
            else if (kw == "columns") { sec = Sec::Columns; }
            else if (kw == "rhs") { sec = Sec::Rhs; }
            else if (kw == "bounds") { sec = Sec::Bounds; }
            else if (kw == "qcmatrix" || kw == "qsection") {
                if (toks.size() != 2 || !row_sense.contains(std::string(toks[1]))) fail(line);
                sec = Sec::Qc;
                qc_row = toks[1];
            } else if (kw == "endata") { sec = Sec::End; }
            else if (kw == "ranges" || kw == "quadobj" || kw == "qmatrix") {
                throw FormatError("unsupported MPS section " + std::string(toks[0]));
            } else if (kw == "objsense") {
                throw FormatError("OBJSENSE is not supported; models are minimized");
            } else { fail(line); }
            continue;
        }
        switch (sec) {
            case Sec::Rows: {
                if (toks.size() != 2) fail(line);
                auto type = lower(toks[0]);
                std::string name(toks[1]);
                if (type == "n") {
                    if (objective_row.empty()) objective_row = name;
                    continue;
                }
                check_name(name);
                Sense s = type == "l" ? Sense::LessEqual : type == "g" ? Sense::GreaterEqual
                          : type == "e" ? Sense::Equal : (fail(line), Sense::Equal);
                if (!row_sense.emplace(name, s).second) throw FormatError("duplicate row " + name);
                row_order.push_back(name);
                break;
            }
            case Sec::Columns: {
                if (toks.size() == 3 && toks[1] == "'MARKER'") {
                    if (toks[2] == "'INTORG'") in_int = true;
                    else if (toks[2] == "'INTEND'") in_int = false;
                    else fail(line);
                    continue;
                }
                if (toks.size() != 3 && toks.size() != 5) fail(line);
                VarId v = a.var(toks[0]);
                if (in_int) a.model().var_mut(v).kind = VarKind::Integer;
                for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
                    std::string row(toks[i]);
                    double c = parse_double(toks[i + 1]);
                    if (row == objective_row) {
                        obj.add(v, c);
                    } else if (auto it = row_expr.find(row); row_sense.contains(row)) {
                        if (it == row_expr.end()) it = row_expr.emplace(row, LinearExpr()).first;
                        it->second.add(v, c);
                    } else {
                        throw FormatError("column " + std::string(toks[0]) + " references unknown row " + row);
                    }
                }
                break;
            }
            case Sec::Rhs: {
                std::size_t start = toks.size() % 2 == 1 ? 1 : 0;
                for (std::size_t i = start; i + 1 < toks.size(); i += 2) {
                    std::string row(toks[i]);
                    if (row == objective_row) throw FormatError("objective constants are not supported");
                    if (!row_sense.contains(row)) throw FormatError("RHS for unknown row " + row);
                    row_rhs[row] = parse_double(toks[i + 1]);
                }
                break;
            }
            case Sec::Bounds: {
                if (toks.size() < 3) fail(line);
                auto type = lower(toks[0]);
                auto vid = a.model().find(toks[2]);
                if (!vid) throw FormatError("bound on unknown column " + std::string(toks[2]));
                auto& v = a.model().var_mut(*vid);
                auto val = [&] {
                    if (toks.size() != 4) fail(line);
                    return parse_double(toks[3]);
                };
                if (type == "lo") v.lower = val();
                else if (type == "up") v.upper = val();
                else if (type == "fx") v.lower = v.upper = val();
                else if (type == "fr") { v.lower = -kInf; v.upper = kInf; }
                else if (type == "mi") v.lower = -kInf;
                else if (type == "pl") v.upper = kInf;
                else if (type == "bv") { v.kind = VarKind::Integer; v.lower = 0; v.upper = 1; }
                else if (type == "li") { v.kind = VarKind::Integer; v.lower = val(); }
                else if (type == "ui") { v.kind = VarKind::Integer; v.upper = val(); }
                else fail(line);
                break;
            }
            case Sec::Qc: {
                if (toks.size() != 3) fail(line);
                auto va = a.model().find(toks[0]);
                auto vb = a.model().find(toks[1]);
                if (!va || !vb) throw FormatError("QCMATRIX entry for unknown column in row " + qc_row);
                row_quad[qc_row].push_back({*va, *vb, parse_double(toks[2])});
                break;
            }
            default: fail(line);
        }
    }
    if (sec != Sec::End) throw FormatError("missing ENDATA");
    a.model().set_objective(std::move(obj));
    for (const auto& name : row_order) {
        LinearExpr e = row_expr.contains(name) ? row_expr[name] : LinearExpr();
        double rhs = row_rhs.contains(name) ? row_rhs[name] : 0.0;
        if (auto it = row_quad.find(name); it != row_quad.end()) {
            // Fold the symmetric halves back into one product per pair.
            std::map<std::pair<std::uint32_t, std::uint32_t>, double> merged;
            for (const auto& t : it->second) {
                auto key = std::minmax(t.a.index, t.b.index);
                merged[{key.first, key.second}] += t.coef;
            }
            std::vector<QuadTerm> quad;
            for (auto [key, c] : merged) quad.push_back({VarId{key.first}, VarId{key.second}, c});
            a.model().add_quad_row({name, std::move(quad), std::move(e), row_sense[name], rhs});
        } else {
            a.model().add_row(name, std::move(e), row_sense[name], rhs);
        }
    }
    a.finish_kinds();
    return std::move(a.model());
}

ModelInstance parse(std::string_view text, ModelFormat f) { return f == ModelFormat::Lp ? parse_lp(text) : parse_mps(text); }

}  // namespace lego
