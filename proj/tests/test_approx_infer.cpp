#include <doctest.h>

#include <cmath>
#include <vector>

#include "decnet/approx_infer.hpp"
#include "decnet/decide.hpp"
#include "decnet/transform.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace decnet;
using namespace decnet::testing;

namespace {

CompiledDecisionProblem fig2_problem() { return compile(fig2_diagram()); }

const Evidence kFig3Conditioned{{"D1", "Action1"}, {"C", "T"}};

}  // namespace

TEST_CASE("logic sampling is reproducible and seed-sensitive") {
    const BeliefNetwork network = fig2_problem().network;
    const EstimateWithSE a = logic_sample(network, "V", "T", kFig3Conditioned, 20000, 7);
    const EstimateWithSE b = logic_sample(network, "V", "T", kFig3Conditioned, 20000, 7);
    CHECK(a.estimate == b.estimate);
    CHECK(a.standard_error == b.standard_error);
    CHECK(a.accepted == b.accepted);
    CHECK(a.drawn == 20000);
    CHECK(a.seed == 7);

    const EstimateWithSE c = logic_sample(network, "V", "T", kFig3Conditioned, 20000, 8);
    CHECK(a.estimate != c.estimate);
}

TEST_CASE("standard error is exactly the binomial formula") {
    const BeliefNetwork network = fig2_problem().network;
    for (std::uint64_t seed : {0ULL, 1ULL, 2ULL}) {
        const EstimateWithSE e = logic_sample(network, "V", "T", kFig3Conditioned, 5000, seed);
        CHECK(e.standard_error ==
              std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(e.accepted)));
        CHECK(e.accepted <= e.drawn);
        CHECK(e.accepted > 0);
    }
}

TEST_CASE("without evidence nothing is rejected") {
    const BeliefNetwork network = fig1_network();
    const EstimateWithSE e = logic_sample(network, "A", "T", {}, 50000, 0);
    CHECK(e.accepted == e.drawn);
    CHECK(std::abs(e.estimate - 0.4) < 4.0 * e.standard_error);
}

TEST_CASE("the fig3 query lands within three standard errors of the exact value") {
    const BeliefNetwork network = fig2_problem().network;
    const EstimateWithSE e = logic_sample(network, "V", "T", kFig3Conditioned, 100000, 0);
    CHECK(std::abs(e.estimate - kPVTrueAction1CT) < 3.0 * e.standard_error);
}

TEST_CASE("impossible evidence rejects every draw") {
    ChanceNode w{"W", {"T", "F"}, {}, {{0.6, 0.4}}};
    ChanceNode x{"X", {"T", "F"}, {"W"}, {{1.0, 0.0}, {0.0, 1.0}}};
    ChanceNode y{"Y", {"T", "F"}, {"X"}, {{0.5, 0.5}, {0.5, 0.5}}};
    const BeliefNetwork network({w, x, y});
    try {
        logic_sample(network, "Y", "T", {{"X", "F"}, {"W", "T"}}, 500, 0);
        FAIL("expected NoAcceptedSamplesError");
    } catch (const NoAcceptedSamplesError& e) {
        CHECK(e.drawn() == 500);
    }
}

TEST_CASE("sampling a node fixed by the evidence is a usage error") {
    const BeliefNetwork network = fig1_network();
    CHECK_THROWS_AS(logic_sample(network, "A", "T", {{"A", "F"}}, 10, 0), UsageError);
}

TEST_CASE("estimates are consistent across seeds") {
    const BeliefNetwork network = fig2_problem().network;
    double sum = 0.0;
    double pooled_variance = 0.0;
    const int seeds = 50;
    for (int seed = 0; seed < seeds; ++seed) {
        const EstimateWithSE e =
            logic_sample(network, "V", "T", kFig3Conditioned, 20000, seed);
        sum += e.estimate;
        pooled_variance += e.standard_error * e.standard_error;
    }
    const double mean = sum / seeds;
    const double pooled_se = std::sqrt(pooled_variance) / seeds;
    CHECK(std::abs(mean - kPVTrueAction1CT) < 4.0 * pooled_se);
}

TEST_CASE("quadrupling the draws roughly halves the standard error") {
    const BeliefNetwork network = fig2_problem().network;
    double ratio_sum = 0.0;
    const int seeds = 20;
    for (int seed = 0; seed < seeds; ++seed) {
        const EstimateWithSE small =
            logic_sample(network, "V", "T", kFig3Conditioned, 4000, seed);
        const EstimateWithSE large =
            logic_sample(network, "V", "T", kFig3Conditioned, 16000, seed + 1000);
        ratio_sum += large.standard_error / small.standard_error;
    }
    const double mean_ratio = ratio_sum / seeds;
    CHECK(mean_ratio < 0.6);
    CHECK(mean_ratio > 0.4);
}

TEST_CASE("two-sided normal quantile hits the pinned 0.95 value") {
    CHECK(std::abs(normal_quantile_two_sided(0.95) - 1.959964) < 1e-6);
    CHECK(std::abs(normal_quantile_two_sided(0.99) - 2.575829) < 1e-6);
    CHECK_THROWS_AS(normal_quantile_two_sided(1.5), UsageError);
}

TEST_CASE("sample-solve separates the fig3 alternatives") {
    const CompiledDecisionProblem problem = fig2_problem();
    const SampleDecision decision = sample_solve(problem, {{"C", "T"}});
    CHECK(decision.decision == "D1");
    CHECK(decision.chosen == "Action1");
    CHECK(decision.separated);
    REQUIRE(decision.per_alternative.size() == 2);
    for (const auto& [alternative, estimate] : decision.per_alternative) {
        CHECK(estimate.accepted > 0);
        CHECK(estimate.standard_error ==
              std::sqrt(estimate.estimate * (1.0 - estimate.estimate) /
                        static_cast<double>(estimate.accepted)));
    }
    CHECK(std::abs(decision.per_alternative[0].second.estimate - kPVTrueAction1CT) <
          4.0 * decision.per_alternative[0].second.standard_error);
    CHECK(std::abs(decision.per_alternative[1].second.estimate - kPVTrueAction2CT) <
          4.0 * decision.per_alternative[1].second.standard_error);
}

TEST_CASE("per-alternative streams replay through logic_sample") {
    const CompiledDecisionProblem problem = fig2_problem();
    const SampleDecision decision = sample_solve(problem, {{"C", "T"}});
    for (const auto& [alternative, estimate] : decision.per_alternative) {
        Evidence conditioned{{"C", "T"}};
        conditioned.set("D1", alternative);
        const EstimateWithSE replay = logic_sample(problem.network, "V", "T", conditioned,
                                                   estimate.drawn, estimate.seed);
        CHECK(replay.estimate == estimate.estimate);
        CHECK(replay.accepted == estimate.accepted);
    }
}

TEST_CASE("identical alternatives never separate") {
    InfluenceDiagram diagram;
    diagram.name = "tied";
    diagram.chance = {{"A", {"T", "F"}, {}, {{0.5, 0.5}}}};
    diagram.decisions = {{"D1", {"a", "b"}, {}}};
    // v over (D1, A): the same column for both alternatives.
    diagram.values = {{"V", {"D1", "A"}, {3.0, 1.0, 3.0, 1.0}}};
    const CompiledDecisionProblem problem = compile(diagram);

    SampleSolveOptions options;
    options.batch = 256;
    options.max_samples = 4096;
    const SampleDecision decision = sample_solve(problem, {}, options);
    CHECK_FALSE(decision.separated);
    CHECK(decision.per_alternative[0].second.drawn == 4096);
}

TEST_CASE("constant value functions skip sampling entirely") {
    const CompiledDecisionProblem problem = compile(constant_value_diagram(5.0));
    const SampleDecision decision = sample_solve(problem, {});
    CHECK(decision.chosen == "a1");
    CHECK(decision.separated);
    for (const auto& [alternative, estimate] : decision.per_alternative) {
        CHECK(estimate.drawn == 0);
        CHECK(problem.scale * estimate.estimate - problem.offset == 5.0);
    }
}

TEST_CASE("sample-solve demands exactly one remaining decision") {
    const CompiledDecisionProblem problem = compile(two_stage_diagram());
    CHECK_THROWS_AS(sample_solve(problem, {}), UsageError);
    // Committing the first decision leaves one remaining: fine.
    const SampleDecision decision = sample_solve(problem, {{"D1", "a1"}, {"X", "T"}});
    CHECK(decision.decision == "D2");
    CHECK(decision.chosen == "b1");  // v(a1, b1, T)=4 beats v(a1, b2, T)=0
}

TEST_CASE("sampler option validation") {
    const CompiledDecisionProblem problem = fig2_problem();
    SampleSolveOptions bad_batch;
    bad_batch.batch = 0;
    CHECK_THROWS_AS(sample_solve(problem, {}, bad_batch), UsageError);
    CHECK_THROWS_AS(logic_sample(problem.network, "V", "T", {}, 0, 0), UsageError);
}
