#include "fixtures.hpp"

namespace lego::testing {

SystemData two_bus_system(int steps) {
    SystemData s;
    Bus b1;
    b1.id = "b1";
    b1.is_slack = true;
    Bus b2;
    b2.id = "b2";
    s.buses = {b1, b2};
    Line l;
    l.from_bus = "b1";
    l.to_bus = "b2";
    l.circuit = "c1";
    l.reactance = 0.1;
    l.conductance = 1.0;
    l.susceptance = -9.9;
    l.flow_limit = 1.0;
    l.apparent_limit = 1000.0;
    s.lines = {l};
    ThermalUnit g;
    g.id = "g1";
    g.bus = "b1";
    g.p_min = 0.1;
    g.p_max = 0.5;
    g.q_min = -0.2;
    g.q_max = 0.2;
    g.inertia_const = 4.0;
    g.c_startup = 0.01;
    g.c_commit = 0.001;
    g.c_var = 0.03;
    g.c_inv = 5.0;
    g.ramp_up = 0.5;
    g.ramp_down = 0.5;
    g.build_max = 1;
    s.thermal = {g};
    s.n_rep_periods = 1;
    s.steps_per_rp = steps;
    s.demand_p = StepGrid(1, steps, 2);
    s.demand_q = StepGrid(1, steps, 2);
    for (int k = 1; k <= steps; ++k) {
        s.demand_p(1, k, 1) = 0.2 + 0.05 * (k - 1);
        s.demand_q(1, k, 1) = 0.02;
    }
    s.profiles = StepGrid(1, steps, 0);
    s.inflows = StepGrid(1, steps, 0);
    s.ens_cost = 5.0;
    return s;
}

}  // namespace lego::testing
