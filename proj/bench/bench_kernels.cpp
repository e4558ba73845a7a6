// Serial references against the OpenMP kernels: shift factors, brute-force
// leaf solves and inertia re-evaluation.

#include <benchmark/benchmark.h>

#include <random>

#include "lego/inertia.hpp"
#include "lego/isf.hpp"
#include "lego/oracle.hpp"
#include "lego/workflows.hpp"

namespace {

using namespace lego;

// Ring of n buses with chords every fourth bus.
SystemData ring_network(int n) {
    SystemData s;
    for (int i = 0; i < n; ++i) {
        Bus b;
        b.id = "n" + std::to_string(i);
        b.is_slack = i == 0;
        s.buses.push_back(b);
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> x(0.05, 0.3);
    auto line = [&](int a, int b) {
        Line l;
        l.from_bus = s.buses[a].id;
        l.to_bus = s.buses[b].id;
        l.circuit = "c1";
        l.reactance = x(rng);
        l.flow_limit = 1.0;
        l.apparent_limit = 1000.0;
        s.lines.push_back(l);
    };
    for (int i = 0; i < n; ++i) line(i, (i + 1) % n);
    for (int i = 0; i + 4 < n; i += 4) line(i, i + 4);
    return s;
}

void BM_IsfSerial(benchmark::State& state) {
    const auto s = ring_network(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_isf_serial(s));
}
void BM_IsfParallel(benchmark::State& state) {
    const auto s = ring_network(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_isf(s));
}
BENCHMARK(BM_IsfSerial)->Arg(40)->Arg(120);
BENCHMARK(BM_IsfParallel)->Arg(40)->Arg(120);

ModelInstance tiny_ic_model() {
    const auto inst = random_tiny_instance(3, true);
    return assemble_case(CaseSpec::for_kind(CaseKind::IC, inst.system), inst.system, inst.time);
}

void BM_OracleSerial(benchmark::State& state) {
    const auto m = tiny_ic_model();
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimum_serial(m));
}
void BM_OracleParallel(benchmark::State& state) {
    const auto m = tiny_ic_model();
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimum(m));
}
BENCHMARK(BM_OracleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleParallel)->Unit(benchmark::kMillisecond);

struct InertiaFixture {
    SystemData system;
    TemporalStructure time;
    Solution solution;
    InertiaConfig config;

    InertiaFixture() {
        const auto inst = random_tiny_instance(5, true);
        system = inst.system;
        time = TemporalStructure::hourly_identity(system.steps_per_rp);
        const auto model = assemble_case(CaseSpec::for_kind(CaseKind::IC, system), system, time);
        for (const auto& v : model.variables()) solution.values[v.name] = v.lower;
        solution.status = SolveStatus::Feasible;
        config = InertiaConfig::from_settings(system.inertia);
    }
};

void BM_InertiaSerial(benchmark::State& state) {
    static const InertiaFixture f;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_inertia_serial(f.solution, f.system, f.time, f.config));
}
void BM_InertiaParallel(benchmark::State& state) {
    static const InertiaFixture f;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_inertia(f.solution, f.system, f.time, f.config));
}
BENCHMARK(BM_InertiaSerial);
BENCHMARK(BM_InertiaParallel);

}  // namespace

BENCHMARK_MAIN();
