#include "lego/isf.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <queue>
#include <sstream>

namespace lego {

int IsfMatrix::column_of_bus(int bus) const {
    auto it = std::find(bus_of_column.begin(), bus_of_column.end(), bus);
    return it == bus_of_column.end() ? -1 : static_cast<int>(it - bus_of_column.begin());
}

std::vector<std::vector<int>> network_islands(const SystemData& s) {
    const int n = static_cast<int>(s.buses.size());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& l : s.lines) {
        int a = s.bus_index(l.from_bus), b = s.bus_index(l.to_bus);
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> islands;
    for (int start = 0; start < n; ++start) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<int> island;
        std::queue<int> q;
        q.push(start);
        seen[static_cast<std::size_t>(start)] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            island.push_back(u);
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    q.push(v);
                }
            }
        }
        std::sort(island.begin(), island.end());
        islands.push_back(std::move(island));
    }
    return islands;
}

namespace {

struct ReducedNetwork {
    std::vector<int> bus_of_column;
    std::vector<int> column_of_bus;  // -1 for slack
    Eigen::FullPivLU<Eigen::MatrixXd> lu;
};

ReducedNetwork factor(const SystemData& s) {
    const int slack = s.slack_index();
    if (slack < 0) throw NetworkError("no slack bus declared");
    auto islands = network_islands(s);
    if (islands.size() > 1) {
        std::ostringstream os;
        os << "network is disconnected into " << islands.size() << " islands:";
        for (const auto& isl : islands) {
            os << " {";
            for (std::size_t i = 0; i < isl.size(); ++i) os << (i ? "," : "") << s.buses[static_cast<std::size_t>(isl[i])].id;
            os << "}";
        }
        throw NetworkError(os.str());
    }
    const int n = static_cast<int>(s.buses.size());
    ReducedNetwork net;
    net.column_of_bus.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        if (i == slack) continue;
        net.column_of_bus[static_cast<std::size_t>(i)] = static_cast<int>(net.bus_of_column.size());
        net.bus_of_column.push_back(i);
    }
    const int m = n - 1;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
    for (const auto& l : s.lines) {
        if (l.reactance == 0.0) throw NetworkError("line " + l.from_bus + "-" + l.to_bus + " has zero reactance");
        double y = 1.0 / l.reactance;
        int ca = net.column_of_bus[static_cast<std::size_t>(s.bus_index(l.from_bus))];
        int cb = net.column_of_bus[static_cast<std::size_t>(s.bus_index(l.to_bus))];
        if (ca >= 0) b(ca, ca) += y;
        if (cb >= 0) b(cb, cb) += y;
        if (ca >= 0 && cb >= 0) {
            b(ca, cb) -= y;
            b(cb, ca) -= y;
        }
    }
    net.lu.compute(b);
    if (m > 0 && !net.lu.isInvertible()) throw NetworkError("reduced susceptance matrix is singular");
    return net;
}

void fill_column(const SystemData& s, const ReducedNetwork& net, int col, IsfMatrix& out) {
    const int m = out.n_columns();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(col) = 1.0;
    Eigen::VectorXd theta = net.lu.solve(rhs);
    for (int l = 0; l < out.n_lines; ++l) {
        const auto& line = s.lines[static_cast<std::size_t>(l)];
        int ca = net.column_of_bus[static_cast<std::size_t>(s.bus_index(line.from_bus))];
        int cb = net.column_of_bus[static_cast<std::size_t>(s.bus_index(line.to_bus))];
        double ta = ca >= 0 ? theta(ca) : 0.0;
        double tb = cb >= 0 ? theta(cb) : 0.0;
        out.values[static_cast<std::size_t>(l) * m + col] = (ta - tb) / line.reactance;
    }
}

IsfMatrix allocate(const SystemData& s, const ReducedNetwork& net) {
    IsfMatrix out;
    out.bus_of_column = net.bus_of_column;
    out.n_lines = static_cast<int>(s.lines.size());
    out.values.assign(static_cast<std::size_t>(out.n_lines) * out.bus_of_column.size(), 0.0);
    return out;
}

}  // namespace

IsfMatrix compute_isf(const SystemData& s) {
    auto net = factor(s);
    auto out = allocate(s, net);
    const int m = out.n_columns();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < m; ++c) fill_column(s, net, c, out);
    return out;
}

IsfMatrix compute_isf_serial(const SystemData& s) {
    auto net = factor(s);
    auto out = allocate(s, net);
    for (int c = 0; c < out.n_columns(); ++c) fill_column(s, net, c, out);
    return out;
}

}  // namespace lego
