#include <benchmark/benchmark.h>

#include "decnet/approx_infer.hpp"
#include "decnet/decide.hpp"
#include "decnet/transform.hpp"
#include "support/fixtures.hpp"

using namespace decnet;
using decnet::testing::markov_chain_diagram;
using decnet::testing::markov_chain_problem;

static void SolveMarkovChainMemo(benchmark::State& state) {
    const CompiledDecisionProblem problem =
        markov_chain_problem(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(problem, {}));
    }
}
BENCHMARK(SolveMarkovChainMemo)->DenseRange(2, 5);

static void SolveMarkovChainNoMemo(benchmark::State& state) {
    const CompiledDecisionProblem problem =
        markov_chain_problem(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const PreparedProblem prepared = prepare_decision(problem, {});
        MemoTable memo(prepared.baseline, /*enabled=*/false);
        benchmark::DoNotOptimize(
            stage_value(problem, prepared, prepared.first, prepared.evidence, memo));
    }
}
BENCHMARK(SolveMarkovChainNoMemo)->DenseRange(2, 5);

static void SolveClosedChain(benchmark::State& state) {
    const CompiledDecisionProblem problem =
        compile(markov_chain_diagram(static_cast<int>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(problem, {}));
    }
}
BENCHMARK(SolveClosedChain)->DenseRange(2, 4);

static void LogicSampling(benchmark::State& state) {
    const CompiledDecisionProblem problem = compile(decnet::testing::fig2_diagram());
    const Evidence evidence{{"D1", "Action1"}, {"C", "T"}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            logic_sample(problem.network, "V", "T", evidence, state.range(0), 0));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(LogicSampling)->Arg(1000)->Arg(10000);
