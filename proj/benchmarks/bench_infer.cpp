#include <benchmark/benchmark.h>

#include "decnet/exact_infer.hpp"
#include "support/generators.hpp"

using namespace decnet;
using decnet::testing::NetworkOptions;
using decnet::testing::Rng;

namespace {

BeliefNetwork network_of(int nodes) {
    Rng rng(1234);
    return decnet::testing::random_network(
        rng, NetworkOptions{.min_nodes = nodes, .max_nodes = nodes, .max_states = 2,
                            .max_parents = 3});
}

}  // namespace

static void QueryEnumeration(benchmark::State& state) {
    const BeliefNetwork network = network_of(static_cast<int>(state.range(0)));
    const std::string target = network.node(network.size() - 1).name;
    const Evidence evidence{{network.node(0).name, network.node(0).states[0]}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(query_enumeration(network, target, evidence));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(QueryEnumeration)->DenseRange(6, 14, 2)->Complexity();

static void QueryElimination(benchmark::State& state) {
    const BeliefNetwork network = network_of(static_cast<int>(state.range(0)));
    const std::string target = network.node(network.size() - 1).name;
    const Evidence evidence{{network.node(0).name, network.node(0).states[0]}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(query_ve(network, target, evidence));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(QueryElimination)->DenseRange(6, 14, 2)->Complexity();

static void BarrenPruning(benchmark::State& state) {
    const BeliefNetwork network = network_of(static_cast<int>(state.range(0)));
    const std::vector<std::string> targets{network.node(0).name};
    for (auto _ : state) {
        benchmark::DoNotOptimize(prune_barren(network, targets, {}));
    }
}
BENCHMARK(BarrenPruning)->Arg(10)->Arg(14);

BENCHMARK_MAIN();
