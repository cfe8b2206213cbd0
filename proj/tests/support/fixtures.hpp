#ifndef DECNET_TESTS_FIXTURES_HPP
#define DECNET_TESTS_FIXTURES_HPP

#include <string>

#include "decnet/model.hpp"
#include "decnet/transform.hpp"

// Programmatic copies of the bundled fixtures plus hand-derived expected
// values. Every frozen constant below was derived by hand from the fixture
// tables (joint-probability arithmetic noted inline) before the engines
// existed; the engines are checked against them, not vice versa.
namespace decnet::testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(DECNET_FIXTURE_DIR) + "/" + name;
}

// A -> B -> C chain.
inline BeliefNetwork fig1_network() {
    ChanceNode a{"A", {"T", "F"}, {}, {{0.4, 0.6}}};
    ChanceNode b{"B", {"T", "F"}, {"A"}, {{0.8, 0.2}, {0.1, 0.9}}};
    ChanceNode c{"C", {"T", "F"}, {"B"}, {{0.7, 0.3}, {0.2, 0.8}}};
    return BeliefNetwork({a, b, c});
}

// fig1 plus decision D1 (observing C) and value over (D1, A).
inline InfluenceDiagram fig2_diagram() {
    InfluenceDiagram diagram;
    diagram.name = "fig2";
    diagram.chance = {
        {"A", {"T", "F"}, {}, {{0.4, 0.6}}},
        {"B", {"T", "F"}, {"A"}, {{0.8, 0.2}, {0.1, 0.9}}},
        {"C", {"T", "F"}, {"B"}, {{0.7, 0.3}, {0.2, 0.8}}},
    };
    diagram.decisions = {{"D1", {"Action1", "Action2"}, {"C"}}};
    diagram.values = {{"V", {"D1", "A"}, {4.0, -1.0, -3.0, 7.0}}};
    return diagram;
}

// --- frozen values for the fig1/fig3 chain -------------------------------
// P(B=T) = 0.4*0.8 + 0.6*0.1 = 0.38
// P(C=T) = 0.38*0.7 + 0.62*0.2 = 0.39
// P(A=T, C=T) = 0.4*(0.8*0.7 + 0.2*0.2) = 0.24
inline constexpr double kPCTrue = 0.39;
inline const double kPosteriorATgivenCT = 0.24 / 0.39;        // = 8/13 ~ 0.615385
inline const double kPosteriorATgivenCF = 0.16 / 0.61;        // ~ 0.262295
// P(V=T | Action1, C=T) = (0.24*0.7 + 0.15*0.2)/0.39 = 0.198/0.39
inline const double kPVTrueAction1CT = 0.198 / 0.39;          // ~ 0.507692
inline const double kPVTrueAction2CT = 0.15 / 0.39;           // ~ 0.384615
inline const double kMevAction1CT = 10.0 * (0.198 / 0.39) - 3.0;  // = 27/13 ~ 2.076923
inline const double kMevAction2CT = 10.0 * (0.15 / 0.39) - 3.0;   // = 11/13 ~ 0.846154
// No evidence (C dropped from the information set):
// P(V=T | Action1) = 0.4*0.7 + 0.6*0.2 = 0.40 -> MEV 1.0
// P(V=T | Action2) = 0.4*0.0 + 0.6*1.0 = 0.60 -> MEV 3.0
inline constexpr double kMevAction1NoEvidence = 1.0;
inline constexpr double kMevAction2NoEvidence = 3.0;
// Contingent on C=F: P(A=T|C=F) = 16/61
// EV(Action1) = 10*(16/61*0.7 + 45/61*0.2) - 3 = 19/61 ~ 0.311475
// EV(Action2) = 10*(45/61) - 3 = 267/61 ~ 4.377049
inline const double kMevAction1CF = 19.0 / 61.0;
inline const double kMevAction2CF = 267.0 / 61.0;

// Two-stage fixture: X is observed between the decisions.
//   X ~ Bernoulli(0.3); D1 observes nothing; D2 observes X (closure adds D1);
//   v(D1, D2, X) as below. By hand:
//     D1=a1: X=T -> max(4,0)=4, X=F -> max(1,3)=3, EV = 0.3*4 + 0.7*3 = 3.3
//     D1=a2: X=T -> max(2,5)=5, X=F -> max(2,0)=2, EV = 0.3*5 + 0.7*2 = 2.9
//   MEV = 3.3 at a1; D2 policy: (a1,T)->b1, (a1,F)->b2, (a2,T)->b2, (a2,F)->b1.
inline InfluenceDiagram two_stage_diagram() {
    InfluenceDiagram diagram;
    diagram.name = "two_stage";
    diagram.chance = {{"X", {"T", "F"}, {}, {{0.3, 0.7}}}};
    diagram.decisions = {
        {"D1", {"a1", "a2"}, {}},
        {"D2", {"b1", "b2"}, {"X"}},
    };
    // parents (D1, D2, X), X fastest.
    diagram.values = {{"V",
                       {"D1", "D2", "X"},
                       {4.0, 1.0, 0.0, 3.0, 2.0, 2.0, 5.0, 0.0}}};
    return diagram;
}
inline constexpr double kTwoStageMev = 3.3;

// Constant value function: compiles to scale 0 and certainty everywhere.
inline InfluenceDiagram constant_value_diagram(double value = 5.0) {
    InfluenceDiagram diagram;
    diagram.name = "constant";
    diagram.chance = {{"A", {"T", "F"}, {}, {{0.4, 0.6}}}};
    diagram.decisions = {{"D1", {"a1", "a2"}, {"A"}}};
    diagram.values = {{"V", {"D1"}, {value, value}}};
    return diagram;
}

// A k-stage Markov chain where each decision observes only the current
// chance state: X1 -> (D1) -> X2 -> (D2) -> ... -> V(Xk, Dk). The value of
// the future depends on the past only through the current X, so a decision
// list that keeps just (Xi) per stage satisfies the principle of optimality
// and lets the memo share information states across histories.
inline InfluenceDiagram markov_chain_diagram(int stages) {
    InfluenceDiagram diagram;
    diagram.name = "markov" + std::to_string(stages);
    diagram.chance.push_back({"X1", {"T", "F"}, {}, {{0.3, 0.7}}});
    for (int i = 1; i < stages; ++i) {
        const std::string x = "X" + std::to_string(i);
        const std::string d = "D" + std::to_string(i);
        // rows over (X_i, D_i): T/a, T/b, F/a, F/b
        diagram.chance.push_back({"X" + std::to_string(i + 1),
                                  {"T", "F"},
                                  {x, d},
                                  {{0.9, 0.1}, {0.4, 0.6}, {0.5, 0.5}, {0.2, 0.8}}});
    }
    for (int i = 1; i <= stages; ++i) {
        diagram.decisions.push_back(
            {"D" + std::to_string(i), {"a", "b"}, {"X" + std::to_string(i)}});
    }
    const std::string xk = "X" + std::to_string(stages);
    const std::string dk = "D" + std::to_string(stages);
    diagram.values = {{"V", {xk, dk}, {6.0, -2.0, 1.0, 3.0}}};
    return diagram;
}

// The compiled Markov problem with the per-stage (Xi-only) decision list.
inline CompiledDecisionProblem markov_chain_problem(int stages) {
    CompiledDecisionProblem problem = compile(markov_chain_diagram(stages));
    DecisionList markov;
    for (int i = 1; i <= stages; ++i) {
        const std::string x = "X" + std::to_string(i);
        markov.push_back({"D" + std::to_string(i), {x}, {x}});
    }
    problem.decisions = std::move(markov);
    return problem;
}

}  // namespace decnet::testing

#endif  // DECNET_TESTS_FIXTURES_HPP
