#include "lego/inertia.hpp"

#include <cmath>

#include "lego/model_core.hpp"

namespace lego {

InertiaConfig InertiaConfig::from_settings(const InertiaSettings& s) {
    InertiaConfig c;
    c.f_base = s.f_base;
    c.rocof_limit = s.rocof_limit;
    c.inertia_cap = s.inertia_cap;
    c.disturbance = s.disturbance;
    return c;
}

double InertiaConfig::disturbance_at(StepRef step) const {
    auto it = disturbance_overrides.find(step);
    return it == disturbance_overrides.end() ? disturbance : it->second;
}

void InertiaConfig::validate() const {
    if (!(f_base > 0.0)) throw BuildError("inertia: f_base must be positive");
    if (!(rocof_limit > 0.0)) throw BuildError("inertia: rocof_limit must be positive");
    if (!(inertia_cap > 0.0)) throw BuildError("inertia: inertia_cap must be positive");
    if (!(disturbance >= 0.0)) throw BuildError("inertia: disturbance must be >= 0");
    for (const auto& [step, dp] : disturbance_overrides) {
        if (!(dp >= 0.0)) {
            throw BuildError("inertia: disturbance at (" + std::to_string(step.rp) + "," + std::to_string(step.k) +
                             ") must be >= 0");
        }
    }
}

std::vector<ViUnit> virtual_inertia_units(const SystemData& s) {
    std::vector<ViUnit> out;
    for (const auto& u : s.renewable) {
        if (u.inertia_const <= 0.0) continue;
        int prof = s.profile_index(u.profile_key);
        if (prof < 0) throw BuildError("VI unit " + u.id + " has no availability profile");
        out.push_back({u.id, u.unit_size, u.inertia_const, u.existing, u.build_max, prof});
    }
    for (const auto& u : s.storage) {
        if (u.inertia_const <= 0.0) continue;
        out.push_back({u.id, u.unit_size, u.inertia_const, u.existing, u.build_max, -1});
    }
    return out;
}

double participation(const SystemData& s, const ViUnit& unit, StepRef step) {
    return unit.profile < 0 ? 1.0 : s.profiles(step.rp, step.k, unit.profile);
}

namespace {

std::string derived_name(std::string_view prefix, const std::string& aux_name) {
    auto open = aux_name.find('(');
    std::string family = aux_name.substr(0, open);
    std::string inner = aux_name.substr(open + 1, aux_name.size() - open - 2);
    return std::string(prefix) + "(" + family + (inner.empty() ? "" : "," + inner) + ")";
}

}  // namespace

VarId linearize_binary_product(ModelInstance& m, VarId cont, VarId bin, const std::string& aux_name) {
    const auto& c = m.var(cont);
    if (m.var(bin).kind != VarKind::Binary) {
        throw ModelError("product " + aux_name + ": " + m.var(bin).name + " is not binary");
    }
    if (!std::isfinite(c.upper)) throw ModelError("product " + aux_name + ": " + c.name + " has no finite upper bound");
    if (c.lower < 0.0) throw ModelError("product " + aux_name + ": " + c.name + " has a negative lower bound");
    const double ub = c.upper;
    VarId aux = m.add_variable(aux_name, VarKind::Continuous, 0.0, ub);
    m.add_row(derived_name("lin_bin", aux_name), LinearExpr().add(aux, 1).add(bin, -ub), Sense::LessEqual, 0.0);
    m.add_row(derived_name("lin_cont", aux_name), LinearExpr().add(aux, 1).add(cont, -1), Sense::LessEqual, 0.0);
    m.add_row(derived_name("lin_gap", aux_name), LinearExpr().add(cont, 1).add(aux, -1).add(bin, ub),
              Sense::LessEqual, ub);
    return aux;
}

std::vector<VarId> binary_expand_integer(ModelInstance& m, VarId x, const std::string& unit_id) {
    const auto& v = m.var(x);
    if (!v.is_integral()) throw ModelError(v.name + " is not an integer variable");
    if (!(v.upper >= 1.0) || !std::isfinite(v.upper)) throw ModelError(v.name + ": binary expansion needs 1 <= upper < inf");
    const auto xmax = static_cast<long long>(std::floor(v.upper + 1e-9));
    int n_bits = 0;
    while ((1LL << n_bits) < xmax + 1) ++n_bits;
    std::vector<VarId> bits;
    LinearExpr expand, total;
    expand.add(x, 1.0);
    for (int b = 0; b < n_bits; ++b) {
        VarId bit = m.add_variable(make_name("xbit", unit_id, b), VarKind::Binary, 0, 1);
        bits.push_back(bit);
        expand.add(bit, -std::ldexp(1.0, b));
        total.add(bit, std::ldexp(1.0, b));
    }
    m.add_row(make_name("bin_expand", unit_id), expand, Sense::Equal, 0.0);
    m.add_row(make_name("bin_max", unit_id), total, Sense::LessEqual, static_cast<double>(xmax));
    return bits;
}

void build_inertia(const SystemData& s, const TemporalStructure& t, ModelInstance& m, const InertiaConfig& cfg) {
    cfg.validate();
    const auto vi = virtual_inertia_units(s);
    const double cap = cfg.inertia_cap;

    // Bits of every VI investment with room to build.
    std::vector<std::vector<VarId>> bits(vi.size());
    for (std::size_t v = 0; v < vi.size(); ++v) {
        if (vi[v].build_max >= 1) bits[v] = binary_expand_integer(m, m.at(make_name("x", vi[v].id)), vi[v].id);
    }

    for (auto st : t.steps()) {
        const int rp = st.rp, k = st.k;
        VarId msg = m.add_variable(make_name("msg", rp, k), VarKind::Continuous, 0.0, cap);
        VarId mvi = m.add_variable(make_name("mvi", rp, k), VarKind::Continuous, 0.0, cap);
        VarId big_m = m.add_variable(make_name("inertia", rp, k), VarKind::Continuous, 0.0, cap);

        std::vector<VarId> on;
        for (const auto& u : s.thermal) on.push_back(m.at(make_name("u", rp, k, u.id)));
        std::vector<double> weight(vi.size());
        for (std::size_t v = 0; v < vi.size(); ++v) weight[v] = vi[v].unit_size * participation(s, vi[v], st);

        // Thermal gains: gain_t * sum_tt Pmax_tt u_tt = Pmax_t u_t.
        LinearExpr msg_def;
        msg_def.add(msg, 1.0);
        for (std::size_t ti = 0; ti < s.thermal.size(); ++ti) {
            const auto& u = s.thermal[ti];
            VarId gain = m.add_variable(make_name("gain", rp, k, u.id), VarKind::Continuous, 0.0, 1.0);
            LinearExpr bal;
            LinearExpr zero;
            zero.add(gain, 1.0);
            for (std::size_t tt = 0; tt < s.thermal.size(); ++tt) {
                const auto& other = s.thermal[tt];
                VarId aux = linearize_binary_product(m, gain, on[tt], make_name("ku", rp, k, other.id, u.id));
                bal.add(aux, other.p_max);
                zero.add(on[tt], -1.0);
            }
            bal.add(on[ti], -u.p_max);
            m.add_row(make_name("in_th_gain", rp, k, u.id), bal, Sense::Equal, 0.0);
            m.add_row(make_name("in_th_zero", rp, k, u.id), zero, Sense::LessEqual, 0.0);
            msg_def.add(gain, -2.0 * u.inertia_const);
        }
        m.add_row(make_name("in_msg", rp, k), msg_def, Sense::Equal, 0.0);

        // VI gains: gain_v * sum_vv Pmax_vv PF_vv (x_vv + EU_vv) = numerator.
        LinearExpr mvi_def;
        mvi_def.add(mvi, 1.0);
        for (std::size_t v = 0; v < vi.size(); ++v) {
            VarId gain = m.add_variable(make_name("gain", rp, k, vi[v].id), VarKind::Continuous, 0.0, 1.0);
            LinearExpr bal;
            LinearExpr zero;
            zero.add(gain, 1.0);
            double zero_rhs = 0.0;
            for (std::size_t vv = 0; vv < vi.size(); ++vv) {
                bal.add(gain, weight[vv] * vi[vv].existing);
                for (std::size_t b = 0; b < bits[vv].size(); ++b) {
                    VarId aux = linearize_binary_product(m, gain, bits[vv][b],
                                                         make_name("kx", rp, k, vi[v].id, vi[vv].id, b));
                    bal.add(aux, weight[vv] * std::ldexp(1.0, static_cast<int>(b)));
                    if (vv == v) mvi_def.add(aux, -2.0 * vi[v].inertia_const * std::ldexp(1.0, static_cast<int>(b)));
                }
                if (weight[vv] > 0.0) {
                    zero.add(m.at(make_name("x", vi[vv].id)), -1.0);
                    zero_rhs += vi[vv].existing;
                }
            }
            if (cfg.numerator == ViNumerator::OwnOutput) {
                bal.add(m.at(make_name("p", rp, k, vi[v].id)), -1.0);
            } else {
                for (const auto& u : s.thermal) bal.add(m.at(make_name("p", rp, k, u.id)), -1.0);
            }
            m.add_row(make_name("in_vi_gain", rp, k, vi[v].id), bal, Sense::Equal, 0.0);
            m.add_row(make_name("in_vi_zero", rp, k, vi[v].id), zero, Sense::LessEqual, zero_rhs);
        }
        m.add_row(make_name("in_mvi", rp, k), mvi_def, Sense::Equal, 0.0);

        // System inertia as the capacity-weighted average of both sources.
        LinearExpr avg;
        LinearExpr zero;
        zero.add(big_m, 1.0);
        double zero_rhs = 0.0;
        for (std::size_t ti = 0; ti < s.thermal.size(); ++ti) {
            const auto& u = s.thermal[ti];
            avg.add(linearize_binary_product(m, big_m, on[ti], make_name("mu", rp, k, u.id)), u.p_max);
            avg.add(linearize_binary_product(m, msg, on[ti], make_name("msgu", rp, k, u.id)), -u.p_max);
            zero.add(on[ti], -cap);
        }
        for (std::size_t v = 0; v < vi.size(); ++v) {
            if (weight[v] == 0.0) continue;
            avg.add(big_m, weight[v] * vi[v].existing);
            avg.add(mvi, -weight[v] * vi[v].existing);
            for (std::size_t b = 0; b < bits[v].size(); ++b) {
                double pow2 = std::ldexp(1.0, static_cast<int>(b));
                avg.add(linearize_binary_product(m, big_m, bits[v][b], make_name("mx", rp, k, vi[v].id, b)),
                        weight[v] * pow2);
                avg.add(linearize_binary_product(m, mvi, bits[v][b], make_name("mvix", rp, k, vi[v].id, b)),
                        -weight[v] * pow2);
            }
            zero.add(m.at(make_name("x", vi[v].id)), -cap);
            zero_rhs += cap * vi[v].existing;
        }
        m.add_row(make_name("in_avg", rp, k), avg, Sense::Equal, 0.0);
        m.add_row(make_name("in_avg_zero", rp, k), zero, Sense::LessEqual, zero_rhs);

        m.add_row(make_name("rocof", rp, k), LinearExpr().add(big_m, cfg.rocof_limit / cfg.f_base),
                  Sense::GreaterEqual, cfg.disturbance_at(st));
    }
}

InertiaPoint evaluate_inertia_point(const SystemData& s, const InertiaConfig& cfg, StepRef st,
                                    const ValueLookup& value) {
    const auto vi = virtual_inertia_units(s);
    InertiaPoint pt;
    pt.rp = st.rp;
    pt.k = st.k;

    double sg_weight = 0.0;
    std::vector<double> on(s.thermal.size());
    for (std::size_t t = 0; t < s.thermal.size(); ++t) {
        on[t] = std::round(value(make_name("u", st.rp, st.k, s.thermal[t].id)));
        sg_weight += s.thermal[t].p_max * on[t];
    }
    double vi_weight = 0.0;
    std::vector<double> built(vi.size());
    for (std::size_t v = 0; v < vi.size(); ++v) {
        built[v] = std::round(value(make_name("x", vi[v].id)));
        vi_weight += vi[v].unit_size * participation(s, vi[v], st) * (built[v] + vi[v].existing);
    }
    double thermal_out = 0.0;
    for (const auto& u : s.thermal) thermal_out += value(make_name("p", st.rp, st.k, u.id));

    pt.thermal_gain.assign(s.thermal.size(), 0.0);
    for (std::size_t t = 0; t < s.thermal.size(); ++t) {
        if (sg_weight > 0.0) pt.thermal_gain[t] = s.thermal[t].p_max * on[t] / sg_weight;
        pt.m_sg += 2.0 * pt.thermal_gain[t] * s.thermal[t].inertia_const;
    }
    pt.vi_gain.assign(vi.size(), 0.0);
    for (std::size_t v = 0; v < vi.size(); ++v) {
        double num = cfg.numerator == ViNumerator::OwnOutput ? value(make_name("p", st.rp, st.k, vi[v].id))
                                                             : thermal_out;
        if (vi_weight > 0.0) pt.vi_gain[v] = num / vi_weight;
        pt.m_vi += 2.0 * pt.vi_gain[v] * vi[v].inertia_const * built[v];
    }
    const double total = sg_weight + vi_weight;
    pt.m = total > 0.0 ? (pt.m_sg * sg_weight + pt.m_vi * vi_weight) / total : 0.0;
    const double tol = 1e-9;
    pt.rocof_ok = cfg.rocof_limit / cfg.f_base * pt.m >= cfg.disturbance_at(st) - tol;
    pt.within_cap = pt.m_sg <= cfg.inertia_cap + tol && pt.m_vi <= cfg.inertia_cap + tol &&
                    pt.m <= cfg.inertia_cap + tol;
    for (double g : pt.vi_gain) pt.within_cap = pt.within_cap && g <= 1.0 + tol;
    return pt;
}

namespace {

ValueLookup lookup_of(const Solution& sol) {
    return [&sol](const std::string& name) { return sol.value(name); };
}

}  // namespace

std::vector<InertiaPoint> evaluate_inertia(const Solution& sol, const SystemData& s, const TemporalStructure& t,
                                           const InertiaConfig& cfg) {
    const auto steps = t.steps();
    std::vector<InertiaPoint> out(steps.size());
    const auto lookup = lookup_of(sol);
    const int n = static_cast<int>(steps.size());
    bool failed = false;
    std::string error;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = evaluate_inertia_point(s, cfg, steps[static_cast<std::size_t>(i)], lookup);
        } catch (const std::exception& e) {
#pragma omp critical
            {
                if (!failed) error = e.what();
                failed = true;
            }
        }
    }
    if (failed) throw std::runtime_error(error);
    return out;
}

std::vector<InertiaPoint> evaluate_inertia_serial(const Solution& sol, const SystemData& s,
                                                  const TemporalStructure& t, const InertiaConfig& cfg) {
    std::vector<InertiaPoint> out;
    const auto lookup = lookup_of(sol);
    for (auto st : t.steps()) out.push_back(evaluate_inertia_point(s, cfg, st, lookup));
    return out;
}

}  // namespace lego
