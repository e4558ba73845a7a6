#include "reference_flows.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace lego::testing {

std::vector<double> angle_dc_flows(const SystemData& s, const std::vector<double>& injection) {
    const int n = static_cast<int>(s.buses.size());
    const int slack = s.slack_index();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    for (const auto& l : s.lines) {
        const int i = s.bus_index(l.from_bus), j = s.bus_index(l.to_bus);
        const double y = 1.0 / l.reactance;
        b(i, i) += y;
        b(j, j) += y;
        b(i, j) -= y;
        b(j, i) -= y;
    }
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
        if (i != slack) keep.push_back(i);
    }
    const int m = static_cast<int>(keep.size());
    Eigen::MatrixXd br(m, m);
    Eigen::VectorXd pr(m);
    for (int a = 0; a < m; ++a) {
        pr(a) = injection[static_cast<std::size_t>(keep[a])];
        for (int c = 0; c < m; ++c) br(a, c) = b(keep[a], keep[c]);
    }
    Eigen::VectorXd th = br.fullPivLu().solve(pr);
    std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < m; ++a) theta[static_cast<std::size_t>(keep[a])] = th(a);
    std::vector<double> flows;
    for (const auto& l : s.lines) {
        const auto i = static_cast<std::size_t>(s.bus_index(l.from_bus));
        const auto j = static_cast<std::size_t>(s.bus_index(l.to_bus));
        flows.push_back((theta[i] - theta[j]) / l.reactance);
    }
    return flows;
}

PiFlow line_flow(const Line& l, double va, double ta, double vb, double tb) {
    const double g = l.conductance, b = l.susceptance, hb = l.charging / 2.0;
    PiFlow f;
    const double tab = ta - tb;
    f.p_from = g * va * va - va * vb * (g * std::cos(tab) + b * std::sin(tab));
    f.q_from = -(b + hb) * va * va - va * vb * (g * std::sin(tab) - b * std::cos(tab));
    f.p_to = g * vb * vb - va * vb * (g * std::cos(-tab) + b * std::sin(-tab));
    f.q_to = -(b + hb) * vb * vb - va * vb * (g * std::sin(-tab) - b * std::cos(-tab));
    return f;
}

void bus_injections(const SystemData& s, const AcState& st, std::vector<double>& p, std::vector<double>& q) {
    const std::size_t n = s.buses.size();
    p.assign(n, 0.0);
    q.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v2 = st.v[i] * st.v[i];
        p[i] += s.buses[i].shunt_conductance * v2;
        q[i] -= s.buses[i].shunt_susceptance * v2;
    }
    for (const auto& l : s.lines) {
        const auto i = static_cast<std::size_t>(s.bus_index(l.from_bus));
        const auto j = static_cast<std::size_t>(s.bus_index(l.to_bus));
        const auto f = line_flow(l, st.v[i], st.theta[i], st.v[j], st.theta[j]);
        p[i] += f.p_from;
        q[i] += f.q_from;
        p[j] += f.p_to;
        q[j] += f.q_to;
    }
}

AcState newton_power_flow(const SystemData& s, const std::vector<double>& p_inj, const std::vector<double>& q_inj,
                          double v_slack, double tol, int max_iter) {
    const int n = static_cast<int>(s.buses.size());
    const int slack = s.slack_index();
    AcState st;
    st.v.assign(static_cast<std::size_t>(n), 1.0);
    st.theta.assign(static_cast<std::size_t>(n), 0.0);
    st.v[static_cast<std::size_t>(slack)] = v_slack;
    std::vector<int> pq;
    for (int i = 0; i < n; ++i) {
        if (i != slack) pq.push_back(i);
    }
    const int m = static_cast<int>(pq.size());

    auto mismatch = [&](const AcState& x) {
        std::vector<double> p, q;
        bus_injections(s, x, p, q);
        Eigen::VectorXd f(2 * m);
        for (int a = 0; a < m; ++a) {
            const auto i = static_cast<std::size_t>(pq[a]);
            f(a) = p[i] - p_inj[i];
            f(m + a) = q[i] - q_inj[i];
        }
        return f;
    };
    auto unknown = [&](AcState& x, int c) -> double& {
        const auto i = static_cast<std::size_t>(pq[c % m]);
        return c < m ? x.theta[i] : x.v[i];
    };

    for (st.iterations = 0; st.iterations < max_iter; ++st.iterations) {
        Eigen::VectorXd f = mismatch(st);
        if (f.lpNorm<Eigen::Infinity>() < tol) {
            st.converged = true;
            return st;
        }
        Eigen::MatrixXd jac(2 * m, 2 * m);
        const double h = 1e-7;
        for (int c = 0; c < 2 * m; ++c) {
            AcState plus = st, minus = st;
            unknown(plus, c) += h;
            unknown(minus, c) -= h;
            jac.col(c) = (mismatch(plus) - mismatch(minus)) / (2 * h);
        }
        Eigen::VectorXd dx = jac.fullPivLu().solve(-f);
        for (int c = 0; c < 2 * m; ++c) unknown(st, c) += dx(c);
    }
    st.converged = mismatch(st).lpNorm<Eigen::Infinity>() < tol;
    return st;
}

SystemData random_network(int n_buses, int extra_edges, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> react(0.05, 0.3);
    SystemData s;
    for (int i = 1; i <= n_buses; ++i) {
        Bus b;
        b.id = "b" + std::to_string(i);
        b.is_slack = i == 1;
        s.buses.push_back(b);
    }
    std::set<std::pair<int, int>> used;
    auto add = [&](int a, int b) {
        Line l;
        l.from_bus = s.buses[static_cast<std::size_t>(a)].id;
        l.to_bus = s.buses[static_cast<std::size_t>(b)].id;
        l.circuit = "c1";
        l.reactance = react(rng);
        l.susceptance = -1.0 / l.reactance;
        l.flow_limit = 1.0;
        l.apparent_limit = 1000.0;
        s.lines.push_back(l);
        used.insert({std::min(a, b), std::max(a, b)});
    };
    for (int i = 1; i < n_buses; ++i) {
        std::uniform_int_distribution<int> parent(0, i - 1);
        add(i, parent(rng));
    }
    std::uniform_int_distribution<int> pick(0, n_buses - 1);
    for (int e = 0, tries = 0; e < extra_edges && tries < 100 * (extra_edges + 1); ++tries) {
        int a = pick(rng), b = pick(rng);
        if (a == b || used.contains({std::min(a, b), std::max(a, b)})) continue;
        add(a, b);
        ++e;
    }
    return s;
}

}  // namespace lego::testing
