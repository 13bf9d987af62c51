#include <benchmark/benchmark.h>

#include <random>

#include "satnc/code.hpp"
#include "satnc/config.hpp"
#include "satnc/dynamics.hpp"
#include "satnc/paths.hpp"
#include "satnc/pipeline.hpp"
#include "satnc/plg.hpp"

using namespace satnc;

namespace {

const GraphSeries& default_graphs() {
    static const GraphSeries g = load_graphs(ScenarioConfig{});
    return g;
}

void BM_MaxFlowSnapshot(benchmark::State& state) {
    const auto& g = default_graphs().snapshots.front();
    for (auto _ : state) benchmark::DoNotOptimize(max_flow(g, 0, 14));
}
BENCHMARK(BM_MaxFlowSnapshot);

void BM_FindPaths(benchmark::State& state) {
    const auto& g = default_graphs().snapshots.front();
    for (auto _ : state) benchmark::DoNotOptimize(find_paths(g, 0, {5, 12, 14}));
}
BENCHMARK(BM_FindPaths);

void BM_ConstructMulticast(benchmark::State& state) {
    const auto& g = default_graphs().snapshots.front();
    const std::vector<int> sinks{5, 12, 14};
    const auto all = find_paths(g, 0, sinks);
    const int rate = all.min_reachable_flow();
    const auto paths = trim_paths(all, rate);
    const auto pruned = prune(g, paths);
    std::vector<int> served;
    for (const auto& sp : paths.sinks) served.push_back(sp.sink);
    const auto plg = build_plg(pruned, 0, served, paths);
    if (!is_generalized_acyclic(plg)) {
        state.SkipWithError("cyclic PLG");
        return;
    }
    const auto order = topo_order(plg);
    for (auto _ : state) {
        auto code = construct_multicast(plg, order, rate, FieldSpec{static_cast<int>(state.range(0))});
        code.lek = extract_lek(code, pruned);
        benchmark::DoNotOptimize(code);
    }
    state.counters["rate"] = rate;
}
BENCHMARK(BM_ConstructMulticast)->Arg(4)->Arg(8)->Arg(16);

void BM_FullDayAnalysis(benchmark::State& state) {
    const ScenarioConfig cfg;
    const auto sc = make_scenario(cfg, default_graphs());
    for (auto _ : state) benchmark::DoNotOptimize(analyze(sc, cfg.run.threshold));
}
BENCHMARK(BM_FullDayAnalysis)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_FieldMul(benchmark::State& state) {
    const Field f(FieldSpec{8});
    std::mt19937 rng(1);
    std::vector<Element> a(1024), b(1024);
    for (auto& x : a) x = rng() % 256;
    for (auto& x : b) x = rng() % 256;
    for (auto _ : state) {
        Element acc = 0;
        for (std::size_t i = 0; i < a.size(); ++i) acc ^= f.mul(a[i], b[i]);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_FieldMul);

}  // namespace
BENCHMARK_MAIN();
