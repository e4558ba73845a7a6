#include "lego/model_core.hpp"

#include <algorithm>

namespace lego {

namespace {

double capacity_factor(int existing, int build_max) { return static_cast<double>(existing + build_max); }

double max_profile(const SystemData& s, int profile) {
    double m = 0.0;
    for (int rp = 1; rp <= s.n_rep_periods; ++rp) {
        for (int k = 1; k <= s.steps_per_rp; ++k) m = std::max(m, s.profiles(rp, k, profile));
    }
    return m;
}

void check_time(const SystemData& s, const TemporalStructure& t) {
    if (t.n_rep_periods() != s.n_rep_periods || t.steps_per_rp() != s.steps_per_rp) {
        throw BuildError("temporal structure does not match the dataset's rep_periods x steps_per_rp");
    }
}

}  // namespace

bool uses_inter_period_soc(const StorageUnit& unit, const TemporalStructure& time) {
    return unit.is_hydro && !time.is_chronological();
}

void build_general_bounds(const SystemData& s, const TemporalStructure& t, ModelInstance& m) {
    check_time(s, t);
    for (const auto& u : s.thermal) m.add_variable(make_name("x", u.id), VarKind::Integer, 0, u.build_max);
    for (const auto& u : s.renewable) m.add_variable(make_name("x", u.id), VarKind::Integer, 0, u.build_max);
    for (const auto& u : s.storage) m.add_variable(make_name("x", u.id), VarKind::Integer, 0, u.build_max);

    for (auto step : t.steps()) {
        const int rp = step.rp, k = step.k;
        for (std::size_t i = 0; i < s.buses.size(); ++i) {
            m.add_variable(make_name("pns", rp, k, s.buses[i].id), VarKind::Continuous, 0.0,
                           s.demand_p(rp, k, static_cast<int>(i)));
        }
        for (const auto& u : s.thermal) {
            double cap = capacity_factor(u.existing, u.build_max);
            double span = (u.p_max - u.p_min) * cap;
            m.add_variable(make_name("p", rp, k, u.id), VarKind::Continuous, 0.0, u.p_max * cap);
            m.add_variable(make_name("resup", rp, k, u.id), VarKind::Continuous, 0.0, span);
            m.add_variable(make_name("resdn", rp, k, u.id), VarKind::Continuous, 0.0, span);
        }
        for (const auto& u : s.renewable) {
            double avail = u.unit_size * max_profile(s, s.profile_index(u.profile_key)) *
                           capacity_factor(u.existing, u.build_max);
            m.add_variable(make_name("p", rp, k, u.id), VarKind::Continuous, 0.0, avail);
        }
        for (const auto& u : s.storage) {
            double cap = u.unit_size * capacity_factor(u.existing, u.build_max);
            m.add_variable(make_name("p", rp, k, u.id), VarKind::Continuous, 0.0, cap);
            m.add_variable(make_name("cs", rp, k, u.id), VarKind::Continuous, 0.0, cap);
            m.add_variable(make_name("resup", rp, k, u.id), VarKind::Continuous, 0.0, cap);
            m.add_variable(make_name("resdn", rp, k, u.id), VarKind::Continuous, 0.0, cap);
        }
    }
}

void build_thermal(const SystemData& s, const TemporalStructure& t, ModelInstance& m) {
    check_time(s, t);
    for (const auto& u : s.thermal) {
        if (!(u.ramp_up > 0.0) || !(u.ramp_down > 0.0)) {
            throw BuildError("thermal " + u.id + ": ramp limits must be positive");
        }
    }
    const auto steps = t.steps();
    for (auto st : steps) {
        for (const auto& u : s.thermal) {
            double span = (u.p_max - u.p_min) * capacity_factor(u.existing, u.build_max);
            m.add_variable(make_name("u", st.rp, st.k, u.id), VarKind::Binary, 0, 1);
            m.add_variable(make_name("y", st.rp, st.k, u.id), VarKind::Binary, 0, 1);
            m.add_variable(make_name("z", st.rp, st.k, u.id), VarKind::Binary, 0, 1);
            m.add_variable(make_name("phat", st.rp, st.k, u.id), VarKind::Continuous, 0.0, span);
        }
    }

    for (auto st : steps) {
        const int rp = st.rp, k = st.k;
        LinearExpr up, dn;
        for (const auto& u : s.thermal) {
            up.add(m.at(make_name("resup", rp, k, u.id)), 1.0);
            dn.add(m.at(make_name("resdn", rp, k, u.id)), 1.0);
        }
        for (const auto& u : s.storage) {
            up.add(m.at(make_name("resup", rp, k, u.id)), 1.0);
            dn.add(m.at(make_name("resdn", rp, k, u.id)), 1.0);
        }
        double demand = s.demand_total(rp, k);
        m.add_row(make_name("res_up_req", rp, k), up, Sense::GreaterEqual, s.reserve_up * demand);
        m.add_row(make_name("res_dn_req", rp, k), dn, Sense::GreaterEqual, s.reserve_down * demand);
    }

    for (const auto& u : s.thermal) {
        const double span = u.p_max - u.p_min;
        const double eu = u.existing;
        for (auto st : steps) {
            const int rp = st.rp, k = st.k;
            const auto prev = t.prev_cyclic(st);
            const auto next = t.next_cyclic(st);
            VarId p = m.at(make_name("p", rp, k, u.id));
            VarId ph = m.at(make_name("phat", rp, k, u.id));
            VarId ru = m.at(make_name("resup", rp, k, u.id));
            VarId rd = m.at(make_name("resdn", rp, k, u.id));
            VarId on = m.at(make_name("u", rp, k, u.id));
            VarId su = m.at(make_name("y", rp, k, u.id));
            VarId sd = m.at(make_name("z", rp, k, u.id));
            VarId on_prev = m.at(make_name("u", prev.rp, prev.k, u.id));
            VarId sd_next = m.at(make_name("z", next.rp, next.k, u.id));
            VarId ph_prev = m.at(make_name("phat", prev.rp, prev.k, u.id));
            VarId x = m.at(make_name("x", u.id));

            m.add_row(make_name("th_output", rp, k, u.id), LinearExpr().add(p, 1).add(on, -u.p_min).add(ph, -1),
                      Sense::Equal, 0.0);
            m.add_row(make_name("th_resup_su", rp, k, u.id),
                      LinearExpr().add(ph, 1).add(ru, 1).add(on, -span).add(su, span), Sense::LessEqual, 0.0);
            m.add_row(make_name("th_resup_sd", rp, k, u.id),
                      LinearExpr().add(ph, 1).add(ru, 1).add(on, -span).add(sd_next, span), Sense::LessEqual, 0.0);
            m.add_row(make_name("th_resdn", rp, k, u.id), LinearExpr().add(ph, 1).add(rd, -1), Sense::GreaterEqual,
                      0.0);
            m.add_row(make_name("th_logic", rp, k, u.id),
                      LinearExpr().add(on, 1).add(on_prev, -1).add(su, -1).add(sd, 1), Sense::Equal, 0.0);
            m.add_row(make_name("th_commit_cap", rp, k, u.id), LinearExpr().add(on, 1).add(x, -1), Sense::LessEqual,
                      eu);
            m.add_row(make_name("th_ramp_up", rp, k, u.id),
                      LinearExpr().add(ph, 1).add(ph_prev, -1).add(ru, 1).add(on, -u.ramp_up), Sense::LessEqual, 0.0);
            m.add_row(make_name("th_ramp_dn", rp, k, u.id),
                      LinearExpr().add(ph, 1).add(ph_prev, -1).add(rd, -1).add(on_prev, u.ramp_down),
                      Sense::GreaterEqual, 0.0);
            m.add_row(make_name("th_p_cap", rp, k, u.id), LinearExpr().add(p, 1).add(x, -u.p_max), Sense::LessEqual,
                      u.p_max * eu);
            m.add_row(make_name("th_phat_cap", rp, k, u.id), LinearExpr().add(ph, 1).add(x, -span),
                      Sense::LessEqual, span * eu);
            m.add_row(make_name("th_resup_cap", rp, k, u.id), LinearExpr().add(ru, 1).add(x, -span),
                      Sense::LessEqual, span * eu);
            m.add_row(make_name("th_resdn_cap", rp, k, u.id), LinearExpr().add(rd, 1).add(x, -span),
                      Sense::LessEqual, span * eu);
        }
    }
}

void build_storage(const SystemData& s, const TemporalStructure& t, ModelInstance& m) {
    check_time(s, t);
    const auto steps = t.steps();
    for (std::size_t idx = 0; idx < s.storage.size(); ++idx) {
        const auto& u = s.storage[idx];
        if (!(u.eff_charge > 0.0) || !(u.eff_discharge > 0.0)) {
            throw BuildError("storage " + u.id + ": efficiencies must be positive");
        }
        const bool inter = uses_inter_period_soc(u, t);
        const double eu = u.existing;
        const double cap = u.unit_size;               // GW per unit
        const double energy = u.unit_size * u.energy_to_power;  // GWh per unit
        const double units_max = capacity_factor(u.existing, u.build_max);
        const double big_m = cap * units_max;
        const double spill_frac = 1.0 - u.max_soc_frac;
        VarId x = m.at(make_name("x", u.id));

        for (auto st : steps) {
            m.add_variable(make_name("bchd", st.rp, st.k, u.id), VarKind::Binary, 0, 1);
            if (!inter) m.add_variable(make_name("intra", st.rp, st.k, u.id), VarKind::Continuous, 0.0, energy * units_max);
            if (u.is_hydro) {
                m.add_variable(make_name("sp", st.rp, st.k, u.id), VarKind::Continuous, 0.0,
                               spill_frac * energy * units_max);
            }
        }

        // Net energy added to the reservoir during one step, excluding the state itself.
        auto step_balance = [&](StepRef st, double mult, LinearExpr& e) {
            double w = t.step_weight(st.k);
            e.add(m.at(make_name("p", st.rp, st.k, u.id)), -mult * w / u.eff_discharge);
            e.add(m.at(make_name("cs", st.rp, st.k, u.id)), mult * w * u.eff_charge);
            if (u.is_hydro) e.add(m.at(make_name("sp", st.rp, st.k, u.id)), -mult);
            e.add_constant(mult * s.inflows(st.rp, st.k, static_cast<int>(idx)) * w);
        };

        if (inter) {
            const auto cps = t.checkpoints();
            for (int p : cps) {
                m.add_variable(make_name("inter", p, u.id), VarKind::Continuous, 0.0, energy * units_max);
            }
            for (int p : cps) {
                VarId cur = m.at(make_name("inter", p, u.id));
                LinearExpr e;
                e.add(cur, 1.0);
                if (p > t.moving_window()) e.add(m.at(make_name("inter", p - t.moving_window(), u.id)), -1.0);
                LinearExpr inflow;
                for (auto member : t.window_members(p)) step_balance(member, 1.0, inflow);
                e.add(inflow, -1.0);
                double init = p == t.moving_window() ? u.initial_reserve : 0.0;
                m.add_row(make_name("st_inter_soc", p, u.id), e, Sense::Equal, init);
                m.add_row(make_name("st_inter_max", p, u.id), LinearExpr().add(cur, 1).add(x, -energy),
                          Sense::LessEqual, energy * eu);
                m.add_row(make_name("st_inter_min", p, u.id),
                          LinearExpr().add(cur, 1).add(x, -u.min_soc_frac * energy), Sense::GreaterEqual,
                          u.min_soc_frac * energy * eu);
            }
            m.add_row(make_name("st_inter_final", u.id), LinearExpr().add(m.at(make_name("inter", t.n_periods(), u.id)), 1),
                      Sense::GreaterEqual, u.initial_reserve);
        }

        for (auto st : steps) {
            const int rp = st.rp, k = st.k;
            const auto prev = t.prev_cyclic(st);
            const double w = t.step_weight(k);
            VarId p = m.at(make_name("p", rp, k, u.id));
            VarId cs = m.at(make_name("cs", rp, k, u.id));
            VarId ru = m.at(make_name("resup", rp, k, u.id));
            VarId rd = m.at(make_name("resdn", rp, k, u.id));
            VarId b = m.at(make_name("bchd", rp, k, u.id));

            if (!inter) {
                VarId soc = m.at(make_name("intra", rp, k, u.id));
                VarId soc_prev = m.at(make_name("intra", prev.rp, prev.k, u.id));
                LinearExpr e;
                e.add(soc, 1).add(soc_prev, -1);
                step_balance(st, -1.0, e);
                m.add_row(make_name("st_intra_soc", rp, k, u.id), e, Sense::Equal, 0.0);
            }
            m.add_row(make_name("st_res_up", rp, k, u.id), LinearExpr().add(p, 1).add(cs, -1).add(ru, 1).add(x, -cap),
                      Sense::LessEqual, cap * eu);
            m.add_row(make_name("st_res_dn", rp, k, u.id), LinearExpr().add(p, 1).add(cs, -1).add(rd, -1).add(x, cap),
                      Sense::GreaterEqual, -cap * eu);
            if (!inter) {
                VarId soc = m.at(make_name("intra", rp, k, u.id));
                VarId rd_prev = m.at(make_name("resdn", prev.rp, prev.k, u.id));
                VarId ru_prev = m.at(make_name("resup", prev.rp, prev.k, u.id));
                m.add_row(make_name("st_intra_max", rp, k, u.id),
                          LinearExpr().add(soc, 1).add(rd, w).add(rd_prev, w).add(x, -energy), Sense::LessEqual,
                          energy * eu);
                m.add_row(make_name("st_intra_min", rp, k, u.id),
                          LinearExpr().add(soc, 1).add(ru, -w).add(ru_prev, -w).add(x, -u.min_soc_frac * energy),
                          Sense::GreaterEqual, u.min_soc_frac * energy * eu);
            }
            m.add_row(make_name("st_dis_bigm", rp, k, u.id), LinearExpr().add(p, 1).add(b, -big_m), Sense::LessEqual,
                      0.0);
            m.add_row(make_name("st_ch_bigm", rp, k, u.id), LinearExpr().add(cs, 1).add(b, big_m), Sense::LessEqual,
                      big_m);
            m.add_row(make_name("st_p_cap", rp, k, u.id), LinearExpr().add(p, 1).add(x, -cap), Sense::LessEqual,
                      cap * eu);
            m.add_row(make_name("st_cs_cap", rp, k, u.id), LinearExpr().add(cs, 1).add(x, -cap), Sense::LessEqual,
                      cap * eu);
            m.add_row(make_name("st_resup_cap", rp, k, u.id), LinearExpr().add(ru, 1).add(x, -cap), Sense::LessEqual,
                      cap * eu);
            m.add_row(make_name("st_resdn_cap", rp, k, u.id), LinearExpr().add(rd, 1).add(x, -cap), Sense::LessEqual,
                      cap * eu);
            if (!inter) {
                VarId soc = m.at(make_name("intra", rp, k, u.id));
                m.add_row(make_name("st_intra_hi", rp, k, u.id), LinearExpr().add(soc, 1).add(x, -energy),
                          Sense::LessEqual, energy * eu);
                m.add_row(make_name("st_intra_lo", rp, k, u.id),
                          LinearExpr().add(soc, 1).add(x, -u.min_soc_frac * energy), Sense::GreaterEqual,
                          u.min_soc_frac * energy * eu);
            }
            if (u.is_hydro) {
                VarId sp = m.at(make_name("sp", rp, k, u.id));
                m.add_row(make_name("st_spill_cap", rp, k, u.id), LinearExpr().add(sp, 1).add(x, -spill_frac * energy),
                          Sense::LessEqual, spill_frac * energy * eu);
            }
        }
    }
}

void build_renewable_policy(const SystemData& s, const TemporalStructure& t, ModelInstance& m, double kappa,
                            bool include_clean_row) {
    check_time(s, t);
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw BuildError("kappa must lie in [0, 1]");
    for (const auto& u : s.renewable) {
        int prof = s.profile_index(u.profile_key);
        if (prof < 0) throw BuildError("renewable " + u.id + ": unknown profile " + u.profile_key);
        VarId x = m.at(make_name("x", u.id));
        for (auto st : t.steps()) {
            double avail = u.unit_size * s.profiles(st.rp, st.k, prof);
            m.add_row(make_name("rn_avail", st.rp, st.k, u.id),
                      LinearExpr().add(m.at(make_name("p", st.rp, st.k, u.id)), 1).add(x, -avail), Sense::LessEqual,
                      avail * u.existing);
        }
    }
    if (!include_clean_row) return;
    LinearExpr thermal_energy;
    double demand_energy = 0.0;
    for (auto st : t.steps()) {
        double w = t.weight(st);
        for (const auto& u : s.thermal) thermal_energy.add(m.at(make_name("p", st.rp, st.k, u.id)), w);
        demand_energy += w * s.demand_total(st.rp, st.k);
    }
    m.add_row(make_name("clean_share"), thermal_energy, Sense::LessEqual, (1.0 - kappa) * demand_energy);
}

void build_dc_opf(const SystemData& s, const TemporalStructure& t, ModelInstance& m, const IsfMatrix& isf) {
    check_time(s, t);
    if (isf.n_lines != static_cast<int>(s.lines.size()) ||
        isf.n_columns() != static_cast<int>(s.buses.size()) - 1) {
        throw BuildError("injection shift factors missing or inconsistent with the network");
    }
    const int nb = static_cast<int>(s.buses.size());
    for (auto st : t.steps()) {
        const int rp = st.rp, k = st.k;
        std::vector<VarId> flows;
        for (const auto& l : s.lines) {
            flows.push_back(m.add_variable(make_name("fp", rp, k, l.from_bus, l.to_bus, l.circuit),
                                           VarKind::Continuous, -l.flow_limit, l.flow_limit));
        }
        // Net injection per bus: generation - consumption + pns - demand.
        std::vector<LinearExpr> injection(static_cast<std::size_t>(nb));
        for (int i = 0; i < nb; ++i) {
            auto& e = injection[static_cast<std::size_t>(i)];
            e.add(m.at(make_name("pns", rp, k, s.buses[static_cast<std::size_t>(i)].id)), 1.0);
            e.add_constant(-s.demand_p(rp, k, i));
        }
        auto inj = [&](const std::string& bus) -> LinearExpr& {
            return injection[static_cast<std::size_t>(s.bus_index(bus))];
        };
        for (const auto& u : s.thermal) inj(u.bus).add(m.at(make_name("p", rp, k, u.id)), 1.0);
        for (const auto& u : s.renewable) inj(u.bus).add(m.at(make_name("p", rp, k, u.id)), 1.0);
        for (const auto& u : s.storage) {
            inj(u.bus).add(m.at(make_name("p", rp, k, u.id)), 1.0);
            inj(u.bus).add(m.at(make_name("cs", rp, k, u.id)), -1.0);
        }

        for (int i = 0; i < nb; ++i) {
            LinearExpr e = injection[static_cast<std::size_t>(i)];
            const auto& bus = s.buses[static_cast<std::size_t>(i)].id;
            for (std::size_t l = 0; l < s.lines.size(); ++l) {
                if (s.lines[l].to_bus == bus) e.add(flows[l], 1.0);
                if (s.lines[l].from_bus == bus) e.add(flows[l], -1.0);
            }
            m.add_row(make_name("dc_balance", rp, k, bus), e, Sense::Equal, 0.0);
        }
        for (std::size_t l = 0; l < s.lines.size(); ++l) {
            const auto& line = s.lines[l];
            LinearExpr e;
            e.add(flows[l], 1.0);
            for (int c = 0; c < isf.n_columns(); ++c) {
                double f = isf.at(static_cast<int>(l), c);
                if (f == 0.0) continue;
                e.add(injection[static_cast<std::size_t>(isf.bus_of_column[static_cast<std::size_t>(c)])], -f);
            }
            m.add_row(make_name("dc_flow", rp, k, line.from_bus, line.to_bus, line.circuit), e, Sense::Equal, 0.0);
        }
    }
}

double unit_investment_cost(const SystemData& s, const std::string& id) {
    for (const auto& u : s.thermal) {
        if (u.id == id) return u.c_inv * u.p_max;
    }
    for (const auto& u : s.renewable) {
        if (u.id == id) return u.c_inv * u.unit_size;
    }
    for (const auto& u : s.storage) {
        if (u.id == id) return u.c_inv * u.unit_size;
    }
    for (const auto& f : s.facts) {
        if (f.id == id) return f.c_inv * f.q_max;
    }
    throw BuildError("unknown unit " + id);
}

void build_objective(const SystemData& s, const TemporalStructure& t, ModelInstance& m) {
    check_time(s, t);
    LinearExpr obj;
    auto need = [&](const std::string& name) {
        auto v = m.find(name);
        if (!v) throw BuildError("objective needs variable " + name + " which no block registered");
        return *v;
    };
    for (auto st : t.steps()) {
        const int rp = st.rp, k = st.k;
        const double w = t.weight(st);
        for (const auto& u : s.thermal) {
            obj.add(need(make_name("y", rp, k, u.id)), w * u.c_startup);
            obj.add(need(make_name("u", rp, k, u.id)), w * u.c_commit);
            obj.add(need(make_name("p", rp, k, u.id)), w * u.c_var);
            obj.add(need(make_name("resup", rp, k, u.id)), w * u.c_var * s.reserve_up_cost);
            obj.add(need(make_name("resdn", rp, k, u.id)), w * u.c_var * s.reserve_down_cost);
        }
        for (const auto& u : s.renewable) obj.add(need(make_name("p", rp, k, u.id)), w * u.c_om);
        for (const auto& u : s.storage) {
            obj.add(need(make_name("p", rp, k, u.id)), w * u.c_om);
            obj.add(need(make_name("resup", rp, k, u.id)), w * u.c_om * s.reserve_up_cost);
            obj.add(need(make_name("resdn", rp, k, u.id)), w * u.c_om * s.reserve_down_cost);
        }
        for (const auto& b : s.buses) obj.add(need(make_name("pns", rp, k, b.id)), w * s.ens_cost);
    }
    for (const auto& u : s.thermal) obj.add(need(make_name("x", u.id)), unit_investment_cost(s, u.id));
    for (const auto& u : s.renewable) obj.add(need(make_name("x", u.id)), unit_investment_cost(s, u.id));
    for (const auto& u : s.storage) obj.add(need(make_name("x", u.id)), unit_investment_cost(s, u.id));
    for (const auto& f : s.facts) {
        if (auto v = m.find(make_name("x", f.id))) obj.add(*v, unit_investment_cost(s, f.id));
    }
    m.set_objective(std::move(obj));
}

}  // namespace lego
