#include "ac_cases.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "lego/socp.hpp"
#include "lego/workflows.hpp"

namespace lego::testing {

namespace {

const std::set<std::string> kAcFamilies = {"cone", "ang_hi", "ang_lo", "ac_fp", "ac_fq", "ac_bal_p", "ac_bal_q",
                                           "q_th_lo", "q_th_hi", "q_facts_lo", "q_facts_hi", "app_circle"};
const std::set<std::string> kAcVars = {"cii", "cij", "sij", "fp", "fq", "q"};

}  // namespace

SystemData ac_case(int n_buses, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto s = two_bus_system(1);
    if (n_buses == 3) {
        Bus b3 = s.buses[1];
        b3.id = "b3";
        s.buses.push_back(b3);
        Line l = s.lines[0];
        l.from_bus = "b3";
        l.to_bus = "b2";
        s.lines.push_back(l);
        l.from_bus = "b1";
        l.to_bus = "b3";
        s.lines.push_back(l);
        s.demand_p = StepGrid(1, 1, 3);
        s.demand_q = StepGrid(1, 1, 3);
    }
    for (auto& l : s.lines) {
        const double r = 0.002 + 0.01 * u(rng), x = 0.02 + 0.1 * u(rng);
        l.conductance = r / (r * r + x * x);
        l.susceptance = -x / (r * r + x * x);
        l.charging = 0.02 * u(rng);
        l.reactance = x;
        l.flow_limit = 2.0;
        l.apparent_limit = 2000.0;
    }
    for (std::size_t i = 0; i < s.buses.size(); ++i) {
        s.buses[i].shunt_conductance = 0.01 * u(rng);
        s.buses[i].shunt_susceptance = 0.02 * (u(rng) - 0.5);
        if (i > 0) {
            s.demand_p(1, 1, static_cast<int>(i)) = 0.05 + 0.15 * u(rng);
            s.demand_q(1, 1, static_cast<int>(i)) = 0.03 * u(rng);
        }
    }
    s.thermal[0].p_max = 1.0;
    s.thermal[0].q_min = -1.0;
    s.thermal[0].q_max = 1.0;
    FactsDevice f;
    f.id = "f2";
    f.bus = "b2";
    f.q_min = -0.05;
    f.q_max = 0.05;
    f.build_max = 2;
    s.facts = {f};
    return s;
}

AcPoint point_from_power_flow(const SystemData& s, const ModelInstance& m, const AcState& st, double q_facts) {
    const double sb = s.base_power_gw();
    AcPoint pt;
    auto& v = pt.solution.values;
    const auto n = s.buses.size();
    for (std::size_t i = 0; i < n; ++i) {
        v[make_name("cii", 1, 1, s.buses[i].id)] = st.v[i] * st.v[i];
        v[make_name("pns", 1, 1, s.buses[i].id)] = 0.0;
    }
    for (auto [lo, hi] : bus_pairs(s)) {
        const auto a = static_cast<std::size_t>(lo), b = static_cast<std::size_t>(hi);
        const double vv = st.v[a] * st.v[b], d = st.theta[b] - st.theta[a];
        v[make_name("cij", 1, 1, s.buses[a].id, s.buses[b].id)] = vv * std::cos(d);
        v[make_name("sij", 1, 1, s.buses[a].id, s.buses[b].id)] = vv * std::sin(d);
    }
    for (const auto& l : s.lines) {
        const auto a = static_cast<std::size_t>(s.bus_index(l.from_bus));
        const auto b = static_cast<std::size_t>(s.bus_index(l.to_bus));
        const auto f = line_flow(l, st.v[a], st.theta[a], st.v[b], st.theta[b]);
        v[make_name("fp", 1, 1, l.from_bus, l.to_bus, l.circuit)] = sb * f.p_from;
        v[make_name("fq", 1, 1, l.from_bus, l.to_bus, l.circuit)] = sb * f.q_from;
        v[make_name("fp", 1, 1, l.to_bus, l.from_bus, l.circuit)] = sb * f.p_to;
        v[make_name("fq", 1, 1, l.to_bus, l.from_bus, l.circuit)] = sb * f.q_to;
    }
    std::vector<double> p, q;
    bus_injections(s, st, p, q);
    const auto slack = static_cast<std::size_t>(s.slack_index());
    const auto& g = s.thermal[0];
    v[make_name("u", 1, 1, g.id)] = 1;
    v[make_name("x", g.id)] = 1;
    v[make_name("p", 1, 1, g.id)] = sb * p[slack] + s.demand_p(1, 1, static_cast<int>(slack));
    v[make_name("q", 1, 1, g.id)] = sb * q[slack] + s.demand_q(1, 1, static_cast<int>(slack));
    v[make_name("x", s.facts[0].id)] = 1;
    v[make_name("q", 1, 1, s.facts[0].id)] = q_facts;
    pt.values.assign(m.variables().size(), 0.0);
    for (const auto& [name, val] : v) {
        if (auto id = m.find(name)) pt.values[id->index] = val;
    }
    return pt;
}

AcPointCheck check_power_flow_point(int n_buses, std::uint64_t seed, double tol) {
    AcPointCheck out;
    auto s = ac_case(n_buses, seed);
    auto t = TemporalStructure::hourly_identity(1);
    auto m = assemble_case(CaseSpec::for_kind(CaseKind::RC, 0.0, InertiaConfig{}), s, t);
    const double sb = s.base_power_gw();
    const double q_facts = 0.04 * (static_cast<double>(seed % 3) - 1.0);
    std::vector<double> p_inj(s.buses.size()), q_inj(s.buses.size());
    for (std::size_t i = 1; i < s.buses.size(); ++i) {
        p_inj[i] = -s.demand_p(1, 1, static_cast<int>(i)) / sb;
        q_inj[i] = -s.demand_q(1, 1, static_cast<int>(i)) / sb;
    }
    q_inj[1] += q_facts / sb;
    auto st = newton_power_flow(s, p_inj, q_inj, 1.02);
    out.converged = st.converged;
    if (!st.converged) return out;
    auto pt = point_from_power_flow(s, m, st, q_facts);

    for (const auto& [name, viol] : m.violated_rows(pt.values, tol)) {
        if (kAcFamilies.contains(std::string(name_family(name)))) out.violations.push_back(name);
    }
    for (const auto& var : m.variables()) {
        if (!kAcVars.contains(std::string(name_family(var.name)))) continue;
        const double x = pt.values[m.at(var.name).index];
        if (x < var.lower - tol || x > var.upper + tol) out.violations.push_back(var.name + " bounds");
    }
    out.min_cone_residual = kInf;
    for (const auto& c : cone_residual(pt.solution, s, t)) out.min_cone_residual = std::min(out.min_cone_residual, c.residual);
    auto rec = recover_voltages(pt.solution, s, t);
    for (const auto& bv : rec.voltages) {
        const auto i = static_cast<std::size_t>(s.bus_index(bv.bus));
        out.max_voltage_error = std::max({out.max_voltage_error, std::abs(bv.magnitude - st.v[i]),
                                          std::abs(bv.angle - st.theta[i])});
    }
    for (double e : rec.cycle_error) out.max_voltage_error = std::max(out.max_voltage_error, e);
    return out;
}

}  // namespace lego::testing
