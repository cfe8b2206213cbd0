// Acceptance suite: one criterion per entry, one PASS/FAIL line each.
// Returns the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "decnet/approx_infer.hpp"
#include "decnet/decide.hpp"
#include "decnet/exact_infer.hpp"
#include "decnet/text_format.hpp"
#include "decnet/transform.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace decnet;
using namespace decnet::testing;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

void require_close(double actual, double expected, double tolerance, const std::string& what) {
    if (!(std::abs(actual - expected) <= tolerance)) {
        std::ostringstream message;
        message << what << ": got " << actual << ", expected " << expected << " +/- "
                << tolerance;
        throw Failure(message.str());
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Document body: everything after the `network NAME` line.
std::string body_of(const std::string& canonical_text) {
    const auto network_line = canonical_text.find("network ");
    const auto next_line = canonical_text.find('\n', network_line);
    return canonical_text.substr(next_line + 1);
}

// Same-decision check that tolerates exact ties ordered differently by the
// two floating-point routes.
void require_same_choice(const DecisionOutcome& left, const DecisionOutcome& right,
                         double tolerance, const std::string& what) {
    if (left.chosen == right.chosen) return;
    double left_value = 0.0, right_value = 0.0;
    for (const auto& [alternative, value] : left.alternatives) {
        if (alternative == left.chosen) left_value = value;
        if (alternative == right.chosen) right_value = value;
    }
    require(std::abs(left_value - right_value) <= tolerance,
            what + ": different choices with a value gap above tolerance");
}

// --- criteria ---------------------------------------------------------------

 // fig1 inference: P(A=T | C=T) by both engines.
void criterion_1() {
    const Document document = parse_document(slurp(fixture_path("fig1.dnet")));
    const double expected = 0.24 / 0.39;
    const Evidence evidence{{"C", "T"}};
    const double by_enum =
        query_enumeration(document.network, "A", evidence).distribution[0];
    const double by_ve = query_ve(document.network, "A", evidence).distribution[0];
    require_close(by_enum, expected, 1e-9, "enumeration");
    require_close(by_ve, expected, 1e-9, "elimination");
    char printed[32];
    std::snprintf(printed, sizeof printed, "%.6f", by_ve);
    require(std::string(printed) == "0.615385", "six-digit rendering");
}

// Transform fidelity: fig2 compiles to exactly the fig3 network.
void criterion_2() {
    const Document fig2 = parse_document(slurp(fixture_path("fig2.dnet")));
    const Document fig3 = parse_document(slurp(fixture_path("fig3.dnet")));
    const CompiledDecisionProblem problem = compile(fig2.diagram);

    require(problem.scale == 10.0, "k1 == 10");
    require(problem.offset == 3.0, "k2 == 3");
    require(to_string(problem.decisions) == "((D1 (C) (C)))", "decision list");

    const std::string compiled = body_of(serialize_document(problem.network, "fig2"));
    const std::string expected = body_of(serialize_document(fig3.network, "fig3"));
    require(compiled == expected, "compiled network text differs from the fig3 fixture");
}

// Single-decision solve with evidence C=T.
void criterion_3() {
    const Document fig2 = parse_document(slurp(fixture_path("fig2.dnet")));
    const CompiledDecisionProblem problem = compile(fig2.diagram);
    const DecisionOutcome outcome = solve(problem, {{"C", "T"}});
    require(outcome.chosen == "Action1", "chosen alternative");
    require_close((outcome.value + problem.offset) / problem.scale, 0.198 / 0.39, 1e-9,
                  "P(V=T | D1*, C=T)");
    require_close(outcome.value, 10.0 * (0.198 / 0.39) - 3.0, 1e-9, "MEV");
}

// Oracle equivalence over >= 500 random diagrams.
void criterion_4() {
    Rng rng(500500);
    for (int round = 0; round < 500; ++round) {
        const InfluenceDiagram diagram = random_diagram(rng);
        const int made = rand_int(rng, 0, static_cast<int>(diagram.decisions.size()) - 1);
        const Evidence evidence = random_diagram_evidence(rng, diagram, made, 2);

        const DecisionOutcome via_transform = solve(compile(diagram), evidence);
        const TreeSolution reference = solve_by_decision_tree(diagram, evidence);
        require_close(via_transform.value, reference.outcome.value, 1e-9,
                      "round " + std::to_string(round));
        require_same_choice(via_transform, reference.outcome, 1e-9,
                            "round " + std::to_string(round));
    }
}

// Engine equivalence over >= 500 random binary networks.
void criterion_5() {
    Rng rng(51515);
    for (int round = 0; round < 500; ++round) {
        const BeliefNetwork network = random_network(rng, {.max_nodes = 10, .max_states = 2});
        const Evidence evidence =
            sample_positive_evidence(rng, network, static_cast<int>(network.size()) - 1);
        std::string target;
        for (const ChanceNode& node : network.nodes()) {
            if (!evidence.contains(node.name)) {
                target = node.name;
                break;
            }
        }
        const QueryResult slow = query_enumeration(network, target, evidence);
        const QueryResult fast = query_ve(network, target, evidence);
        for (std::size_t s = 0; s < slow.distribution.size(); ++s) {
            require_close(fast.distribution[s], slow.distribution[s], 1e-9,
                          "round " + std::to_string(round));
        }
    }
}

// Affine invariance over >= 100 random diagrams; a, b on a dyadic grid so
// the scaled tables are exact and bit-stability is meaningful.
void criterion_6() {
    Rng rng(66666);
    for (int round = 0; round < 100; ++round) {
        const InfluenceDiagram diagram = random_diagram(rng);
        const double a = rand_int(rng, 1, 640) / 64.0;
        const double b = rand_int(rng, -640, 640) / 64.0;
        InfluenceDiagram scaled = diagram;
        for (double& v : scaled.values.front().table) v = a * v + b;

        const CompiledDecisionProblem problem = compile(diagram);
        const CompiledDecisionProblem scaled_problem = compile(scaled);
        if (problem.scale == 0.0) continue;

        const ChanceNode* v0 = problem.network.find(problem.value_node);
        const ChanceNode* v1 = scaled_problem.network.find(scaled_problem.value_node);
        for (std::size_t r = 0; r < v0->cpt.size(); ++r) {
            require(v0->cpt[r][0] == v1->cpt[r][0],
                    "probability table not bit-stable, round " + std::to_string(round));
        }

        const Evidence evidence = random_diagram_evidence(rng, diagram, 0, 1);
        const DecisionOutcome base = solve(problem, evidence);
        const DecisionOutcome shifted = solve(scaled_problem, evidence);
        require(shifted.chosen == base.chosen, "argmax, round " + std::to_string(round));
        require_close(shifted.value, a * base.value + b, 1e-9,
                      "MEV equivariance, round " + std::to_string(round));
    }
}

// Prior irrelevance over >= 100 compiled problems.
void criterion_7() {
    Rng rng(77777);
    for (int round = 0; round < 100; ++round) {
        const InfluenceDiagram diagram = random_diagram(rng);
        const CompiledDecisionProblem problem = compile(diagram);
        const Evidence evidence = random_diagram_evidence(
            rng, diagram, static_cast<int>(diagram.decisions.size()), 2);

        const double uniform_answer =
            query_ve(problem.network, problem.value_node, evidence).distribution[0];

        std::vector<ChanceNode> nodes = problem.network.nodes();
        for (ChanceNode& node : nodes) {
            if (diagram.find_decision(node.name)) {
                node.cpt[0] = random_row(rng, static_cast<int>(node.states.size()));
            }
        }
        const double skewed_answer =
            query_ve(BeliefNetwork(std::move(nodes)), problem.value_node, evidence)
                .distribution[0];
        require_close(skewed_answer, uniform_answer, 1e-12,
                      "round " + std::to_string(round));
    }
}

// Memoization on the three-stage chain fixture.
std::string criterion_8() {
    const QueryCounts counts = count_engine_queries(markov_chain_problem(3), {});
    require_close(counts.value_with_memo, counts.value_without_memo, 1e-12, "MEV agreement");
    require(counts.with_memo < counts.without_memo, "memo must issue strictly fewer queries");
    std::ostringstream note;
    note << "queries " << counts.with_memo << " vs " << counts.without_memo << ", ratio "
         << static_cast<double>(counts.without_memo) / static_cast<double>(counts.with_memo);
    return note.str();
}

// Sampling: estimate quality, exact SE bookkeeping, and separation.
void criterion_9() {
    const Document fig2 = parse_document(slurp(fixture_path("fig2.dnet")));
    const Document fig3 = parse_document(slurp(fixture_path("fig3.dnet")));
    const double exact = 0.198 / 0.39;

    const EstimateWithSE estimate = logic_sample(
        fig3.network, "V", "T", {{"D1", "Action1"}, {"C", "T"}}, 100000, 0);
    require(std::abs(estimate.estimate - exact) < 3.0 * estimate.standard_error,
            "estimate outside three standard errors");
    require(estimate.standard_error ==
                std::sqrt(estimate.estimate * (1.0 - estimate.estimate) /
                          static_cast<double>(estimate.accepted)),
            "standard error is not the exact binomial formula");

    const SampleDecision decision = sample_solve(compile(fig2.diagram), {{"C", "T"}});
    require(decision.chosen == "Action1", "sample-solve choice");
    require(decision.separated, "sample-solve separation");
}

// Degenerate constant value function, exact and sampling paths.
void criterion_10() {
    const CompiledDecisionProblem problem = compile(constant_value_diagram(5.0));
    require(problem.scale == 0.0, "k1 == 0");

    const DecisionOutcome outcome = solve(problem, {});
    require(outcome.value == 5.0, "exact MEV equals the constant");
    require(outcome.chosen == "a1", "first-declared alternative");

    const SampleDecision decision = sample_solve(problem, {});
    require(decision.chosen == "a1", "sampling path choice");
    require(decision.separated, "sampling path separation");
    for (const auto& [alternative, estimate] : decision.per_alternative) {
        require(problem.scale * estimate.estimate - problem.offset == 5.0,
                "sampled MEV equals the constant");
    }
}

}  // namespace

int main() {
    struct Criterion {
        std::string name;
        std::function<std::string()> run;
    };
    auto plain = [](void (*f)()) {
        return [f]() -> std::string {
            f();
            return "";
        };
    };
    const std::vector<Criterion> criteria{
        {"fig1 inference: P(A=T|C=T) = 0.615385 by both engines", plain(criterion_1)},
        {"transform fidelity: fig2 compiles to the fig3 network, k1=10, k2=3, L",
         plain(criterion_2)},
        {"single-decision solve: Action1, P=0.507692, MEV=2.076923", plain(criterion_3)},
        {"oracle equivalence on 500 random diagrams (1e-9)", plain(criterion_4)},
        {"engine equivalence on 500 random binary networks (1e-9)", plain(criterion_5)},
        {"affine invariance: bit-stable tables, MEV' = a*MEV + b (1e-9)", plain(criterion_6)},
        {"prior irrelevance with all decisions instantiated (1e-12)", plain(criterion_7)},
        {"memoization on the 3-stage chain: fewer queries, equal MEV", criterion_8},
        {"sampling: 3-sigma estimate, exact SE formula, separated solve", plain(criterion_9)},
        {"degenerate constant value: k1=0, exact recovery on both paths",
         plain(criterion_10)},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string note;
        std::string error;
        try {
            note = criteria[i].run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream line;
        line << (error.empty() ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].name;
        if (!note.empty()) line << " [" << note << "]";
        line << "  (" << std::fixed << std::setprecision(2) << seconds << "s)";
        if (!error.empty()) line << "\n      " << error;
        std::cout << line.str() << "\n";
        if (!error.empty()) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
              << "\n";
    return failures;
}
