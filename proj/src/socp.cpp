#include "lego/socp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "lego/model_core.hpp"

namespace lego {

std::vector<std::pair<int, int>> bus_pairs(const SystemData& s) {
    std::vector<std::pair<int, int>> out;
    for (const auto& l : s.lines) {
        int a = s.bus_index(l.from_bus), b = s.bus_index(l.to_bus);
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::string pair_name(std::string_view family, const SystemData& s, int rp, int k, int lo, int hi) {
    return make_name(family, rp, k, s.buses[static_cast<std::size_t>(lo)].id, s.buses[static_cast<std::size_t>(hi)].id);
}

std::string line_label(const Line& l) { return l.from_bus + "-" + l.to_bus + "-" + l.circuit; }

}  // namespace

void build_socp(const SystemData& s, const TemporalStructure& t, ModelInstance& m, const SocpOptions& opt) {
    const double delta = s.max_angle_diff;
    if (!(delta > 0.0) || delta >= std::numbers::pi / 2) {
        throw BuildError("max_angle_diff must lie in (0, pi/2) for the angle rows");
    }
    const double tan_d = std::tan(delta);
    const double sb = s.base_power_gw();
    const auto pairs = bus_pairs(s);
    const auto& buses = s.buses;

    for (const auto& f : s.facts) m.add_variable(make_name("x", f.id), VarKind::Integer, 0, f.build_max);

    for (auto st : t.steps()) {
        const int rp = st.rp, k = st.k;
        std::vector<VarId> cii;
        for (const auto& b : buses) {
            cii.push_back(m.add_variable(make_name("cii", rp, k, b.id), VarKind::Continuous, b.v_min * b.v_min,
                                         b.v_max * b.v_max));
        }
        for (auto [lo, hi] : pairs) {
            const auto& a = buses[static_cast<std::size_t>(lo)];
            const auto& b = buses[static_cast<std::size_t>(hi)];
            // Lower bound keeps every point with |angle| <= delta inside the box.
            VarId c = m.add_variable(pair_name("cij", s, rp, k, lo, hi), VarKind::Continuous,
                                     a.v_min * b.v_min * std::cos(delta), a.v_max * b.v_max);
            VarId sn = m.add_variable(pair_name("sij", s, rp, k, lo, hi), VarKind::Continuous, -a.v_max * b.v_max,
                                      a.v_max * b.v_max);
            QuadRow cone;
            cone.name = pair_name("cone", s, rp, k, lo, hi);
            cone.quad = {{c, c, 1.0}, {sn, sn, 1.0}, {cii[static_cast<std::size_t>(lo)], cii[static_cast<std::size_t>(hi)], -1.0}};
            cone.sense = Sense::LessEqual;
            m.add_quad_row(std::move(cone));
            m.add_row(pair_name("ang_hi", s, rp, k, lo, hi), LinearExpr().add(sn, 1).add(c, -tan_d), Sense::LessEqual,
                      0.0);
            m.add_row(pair_name("ang_lo", s, rp, k, lo, hi), LinearExpr().add(sn, 1).add(c, tan_d),
                      Sense::GreaterEqual, 0.0);
        }

        std::vector<LinearExpr> bal_p(buses.size()), bal_q(buses.size());
        for (std::size_t i = 0; i < buses.size(); ++i) {
            VarId pns = m.at(make_name("pns", rp, k, buses[i].id));
            bal_p[i].add(pns, 1.0).add(cii[i], -buses[i].shunt_conductance * sb);
            bal_q[i].add(pns, buses[i].reactive_ratio).add(cii[i], buses[i].shunt_susceptance * sb);
        }
        auto bus_of = [&](const std::string& id) { return static_cast<std::size_t>(s.bus_index(id)); };

        for (const auto& l : s.lines) {
            const int ia = s.bus_index(l.from_bus), ib = s.bus_index(l.to_bus);
            const int lo = std::min(ia, ib), hi = std::max(ia, ib);
            const double sigma = ia == lo ? 1.0 : -1.0;
            VarId c = m.at(pair_name("cij", s, rp, k, lo, hi));
            VarId sn = m.at(pair_name("sij", s, rp, k, lo, hi));
            const double g = l.conductance, b = l.susceptance, half_bc = l.charging / 2.0;
            const double qmax = l.apparent_limit / 1000.0;
            VarId ca = cii[static_cast<std::size_t>(ia)], cb = cii[static_cast<std::size_t>(ib)];

            auto flow = [&](std::string_view fam, const std::string& x, const std::string& y) {
                double lim = fam == "fp" ? l.flow_limit : qmax;
                return m.add_variable(make_name(fam, rp, k, x, y, l.circuit), VarKind::Continuous, -lim, lim);
            };
            VarId fp_ab = flow("fp", l.from_bus, l.to_bus);
            VarId fp_ba = flow("fp", l.to_bus, l.from_bus);
            VarId fq_ab = flow("fq", l.from_bus, l.to_bus);
            VarId fq_ba = flow("fq", l.to_bus, l.from_bus);

            m.add_row(make_name("ac_fp", rp, k, l.from_bus, l.to_bus, l.circuit),
                      LinearExpr().add(fp_ab, 1).add(ca, -sb * g).add(c, sb * g).add(sn, -sb * b * sigma),
                      Sense::Equal, 0.0);
            m.add_row(make_name("ac_fp", rp, k, l.to_bus, l.from_bus, l.circuit),
                      LinearExpr().add(fp_ba, 1).add(cb, -sb * g).add(c, sb * g).add(sn, sb * b * sigma),
                      Sense::Equal, 0.0);
            m.add_row(make_name("ac_fq", rp, k, l.from_bus, l.to_bus, l.circuit),
                      LinearExpr().add(fq_ab, 1).add(ca, sb * (b + half_bc)).add(sn, -sb * g * sigma).add(c, -sb * b),
                      Sense::Equal, 0.0);
            m.add_row(make_name("ac_fq", rp, k, l.to_bus, l.from_bus, l.circuit),
                      LinearExpr().add(fq_ba, 1).add(cb, sb * (b + half_bc)).add(sn, sb * g * sigma).add(c, -sb * b),
                      Sense::Equal, 0.0);

            if (opt.apparent_power_circle) {
                for (auto [p, q, x, y] : {std::tuple{fp_ab, fq_ab, l.from_bus, l.to_bus},
                                          std::tuple{fp_ba, fq_ba, l.to_bus, l.from_bus}}) {
                    QuadRow circle;
                    circle.name = make_name("app_circle", rp, k, x, y, l.circuit);
                    circle.quad = {{p, p, 1.0}, {q, q, 1.0}};
                    circle.sense = Sense::LessEqual;
                    circle.rhs = qmax * qmax;
                    m.add_quad_row(std::move(circle));
                }
            }
            bal_p[static_cast<std::size_t>(ia)].add(fp_ab, -1.0);
            bal_p[static_cast<std::size_t>(ib)].add(fp_ba, -1.0);
            bal_q[static_cast<std::size_t>(ia)].add(fq_ab, -1.0);
            bal_q[static_cast<std::size_t>(ib)].add(fq_ba, -1.0);
        }

        for (const auto& u : s.thermal) {
            VarId q = m.add_variable(make_name("q", rp, k, u.id), VarKind::Continuous, std::min(0.0, u.q_min),
                                     std::max(0.0, u.q_max));
            VarId on = m.at(make_name("u", rp, k, u.id));
            m.add_row(make_name("q_th_lo", rp, k, u.id), LinearExpr().add(q, 1).add(on, -u.q_min),
                      Sense::GreaterEqual, 0.0);
            m.add_row(make_name("q_th_hi", rp, k, u.id), LinearExpr().add(q, 1).add(on, -u.q_max), Sense::LessEqual,
                      0.0);
            bal_p[bus_of(u.bus)].add(m.at(make_name("p", rp, k, u.id)), 1.0);
            bal_q[bus_of(u.bus)].add(q, 1.0);
        }
        for (const auto& u : s.renewable) {
            VarId q = m.add_variable(make_name("q", rp, k, u.id), VarKind::Continuous, u.q_min, u.q_max);
            bal_p[bus_of(u.bus)].add(m.at(make_name("p", rp, k, u.id)), 1.0);
            bal_q[bus_of(u.bus)].add(q, 1.0);
        }
        for (const auto& u : s.storage) {
            VarId q = m.add_variable(make_name("q", rp, k, u.id), VarKind::Continuous, u.q_min, u.q_max);
            bal_p[bus_of(u.bus)].add(m.at(make_name("p", rp, k, u.id)), 1.0);
            bal_p[bus_of(u.bus)].add(m.at(make_name("cs", rp, k, u.id)), -1.0);
            bal_q[bus_of(u.bus)].add(q, 1.0);
        }
        for (const auto& f : s.facts) {
            VarId q = m.add_variable(make_name("q", rp, k, f.id), VarKind::Continuous, f.q_min * f.build_max,
                                     f.q_max * f.build_max);
            VarId x = m.at(make_name("x", f.id));
            m.add_row(make_name("q_facts_lo", rp, k, f.id), LinearExpr().add(q, 1).add(x, -f.q_min),
                      Sense::GreaterEqual, 0.0);
            m.add_row(make_name("q_facts_hi", rp, k, f.id), LinearExpr().add(q, 1).add(x, -f.q_max),
                      Sense::LessEqual, 0.0);
            bal_q[bus_of(f.bus)].add(q, 1.0);
        }

        for (std::size_t i = 0; i < buses.size(); ++i) {
            m.add_row(make_name("ac_bal_p", rp, k, buses[i].id), bal_p[i], Sense::Equal,
                      s.demand_p(rp, k, static_cast<int>(i)));
            m.add_row(make_name("ac_bal_q", rp, k, buses[i].id), bal_q[i], Sense::Equal,
                      s.demand_q(rp, k, static_cast<int>(i)));
        }
    }
}

std::vector<ConeResidual> cone_residual(const Solution& sol, const SystemData& s, const TemporalStructure& t) {
    std::vector<ConeResidual> out;
    for (auto st : t.steps()) {
        for (const auto& l : s.lines) {
            int ia = s.bus_index(l.from_bus), ib = s.bus_index(l.to_bus);
            int lo = std::min(ia, ib), hi = std::max(ia, ib);
            double ca = sol.value(make_name("cii", st.rp, st.k, l.from_bus));
            double cb = sol.value(make_name("cii", st.rp, st.k, l.to_bus));
            double c = sol.value(pair_name("cij", s, st.rp, st.k, lo, hi));
            double sn = sol.value(pair_name("sij", s, st.rp, st.k, lo, hi));
            out.push_back({st.rp, st.k, line_label(l), ca * cb - c * c - sn * sn});
        }
    }
    return out;
}

VoltageRecovery recover_voltages(const Solution& sol, const SystemData& s, const TemporalStructure& t, double tol) {
    const auto pairs = bus_pairs(s);
    const int n = static_cast<int>(s.buses.size());
    const int slack = std::max(0, s.slack_index());
    std::vector<std::vector<std::size_t>> adj(static_cast<std::size_t>(n));
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        adj[static_cast<std::size_t>(pairs[p].first)].push_back(p);
        adj[static_cast<std::size_t>(pairs[p].second)].push_back(p);
    }
    VoltageRecovery rec;
    for (auto st : t.steps()) {
        std::vector<double> diff(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            auto [lo, hi] = pairs[p];
            diff[p] = std::atan2(sol.value(pair_name("sij", s, st.rp, st.k, lo, hi)),
                                 sol.value(pair_name("cij", s, st.rp, st.k, lo, hi)));
        }
        std::vector<double> angle(static_cast<std::size_t>(n), 0.0);
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<char> tree(pairs.size(), 0);
        std::queue<int> q;
        q.push(slack);
        seen[static_cast<std::size_t>(slack)] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (std::size_t p : adj[static_cast<std::size_t>(u)]) {
                auto [lo, hi] = pairs[p];
                int v = lo == u ? hi : lo;
                if (seen[static_cast<std::size_t>(v)]) continue;
                seen[static_cast<std::size_t>(v)] = 1;
                tree[p] = 1;
                angle[static_cast<std::size_t>(v)] =
                    angle[static_cast<std::size_t>(u)] + (v == hi ? diff[p] : -diff[p]);
                q.push(v);
            }
        }
        double cycle = 0.0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (tree[p]) continue;
            auto [lo, hi] = pairs[p];
            double e = angle[static_cast<std::size_t>(hi)] - angle[static_cast<std::size_t>(lo)] - diff[p];
            e = std::remainder(e, 2.0 * std::numbers::pi);
            cycle = std::max(cycle, std::abs(e));
        }
        rec.cycle_error.push_back(cycle);
        for (int i = 0; i < n; ++i) {
            const auto& id = s.buses[static_cast<std::size_t>(i)].id;
            double c = sol.value(make_name("cii", st.rp, st.k, id));
            if (c < -tol) {
                throw std::runtime_error("negative squared voltage at bus " + id + " step (" + std::to_string(st.rp) +
                                         "," + std::to_string(st.k) + ")");
            }
            rec.voltages.push_back({st.rp, st.k, id, std::sqrt(std::max(0.0, c)), angle[static_cast<std::size_t>(i)]});
        }
    }
    return rec;
}

}  // namespace lego
