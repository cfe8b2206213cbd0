#ifndef DECNET_DECIDE_HPP
#define DECNET_DECIDE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "decnet/exact_infer.hpp"
#include "decnet/model.hpp"
#include "decnet/transform.hpp"

namespace decnet {

// Exact-query interface the decision solver runs on. Any engine honoring
// the query_enumeration contract can back it; the two bundled engines are
// elimination (default) and enumeration (the slow oracle).
class ExactEngine {
public:
    virtual ~ExactEngine() = default;
    virtual QueryResult query(const BeliefNetwork& network, const std::string& target,
                              const Evidence& evidence) const = 0;
    virtual double joint(const BeliefNetwork& network, const Evidence& config,
                         const Evidence& given) const = 0;
};

class EliminationEngine final : public ExactEngine {
public:
    QueryResult query(const BeliefNetwork& network, const std::string& target,
                      const Evidence& evidence) const override;
    double joint(const BeliefNetwork& network, const Evidence& config,
                 const Evidence& given) const override;
};

class EnumerationEngine final : public ExactEngine {
public:
    QueryResult query(const BeliefNetwork& network, const std::string& target,
                      const Evidence& evidence) const override;
    double joint(const BeliefNetwork& network, const Evidence& config,
                 const Evidence& given) const override;
};

// Counts calls into a wrapped engine; used by the memoization report.
class CountingEngine final : public ExactEngine {
public:
    explicit CountingEngine(const ExactEngine& inner) : inner_(inner) {}
    QueryResult query(const BeliefNetwork& network, const std::string& target,
                      const Evidence& evidence) const override {
        ++calls_;
        return inner_.query(network, target, evidence);
    }
    double joint(const BeliefNetwork& network, const Evidence& config,
                 const Evidence& given) const override {
        ++calls_;
        return inner_.joint(network, config, given);
    }
    std::int64_t calls() const { return calls_; }

private:
    const ExactEngine& inner_;
    mutable std::int64_t calls_ = 0;
};

const ExactEngine& default_engine();

// Result of solving for the first remaining decision. Values are in value
// units (scale * f - offset). Ties go to the first-declared alternative.
struct DecisionOutcome {
    std::string decision;
    std::string chosen;
    double value = 0.0;
    std::vector<std::pair<std::string, double>> alternatives;  // declaration order
};

// Optimal alternative per information state, per decision.
struct PolicyRule {
    Evidence given;  // predecessor assignment, minus what the evidence fixed
    std::string alternative;
    double value = 0.0;
};
struct DecisionPolicy {
    std::string decision;
    std::vector<PolicyRule> rules;
};
using Policy = std::vector<DecisionPolicy>;

// Cache for the stage recursion, keyed on (stage index, assignment of that
// stage's predecessors not fixed in the baseline evidence). Under the
// no-forgetting closure that key is the entire conditioning state; for
// caller-built coarser decision lists it is sound exactly when the
// principle of optimality holds for the diagram's structure.
class MemoTable {
public:
    explicit MemoTable(Evidence baseline, bool enabled = true)
        : baseline_(std::move(baseline)), enabled_(enabled) {}

    struct Entry {
        double stage_value = 0.0;  // f, in probability space
        std::string best_alternative;
        Evidence assignment;  // the key, as an assignment
    };

    const Entry* find(int stage, const std::string& key) const;
    void store(int stage, const std::string& key, Entry entry);

    const Evidence& baseline() const { return baseline_; }
    bool enabled() const { return enabled_; }
    const std::map<std::pair<int, std::string>, Entry>& entries() const { return entries_; }

private:
    Evidence baseline_;
    bool enabled_;
    std::map<std::pair<int, std::string>, Entry> entries_;
};

// The decision list and evidence after the pre-solve adjustment: committed
// decisions must form a prefix, hypotheticals are merged into the evidence,
// and uninstantiated chance predecessors are dropped from the first
// remaining decision's lists (that decision is made in ignorance of them).
struct PreparedProblem {
    DecisionList decisions;
    Evidence evidence;  // includes hypotheticals
    Evidence baseline;  // evidence before hypotheticals; memo keys exclude it
    int first = 0;      // index of the first remaining decision
};

PreparedProblem prepare_decision(const CompiledDecisionProblem& problem,
                                 const Evidence& evidence,
                                 const Evidence& hypotheticals = {});

// Single-stage solve: one engine query per alternative, pick the max.
// Requires exactly one remaining decision.
DecisionOutcome solve_single(const CompiledDecisionProblem& problem, const Evidence& evidence,
                             const ExactEngine& engine = default_engine());

// The stage recursion f(d, e): max over the stage's alternatives of the
// expected f of the remaining stages, summing over the next stage's
// uninstantiated chance predecessors. Zero-probability observation
// branches are skipped before recursing. Returns f in [0, 1].
double stage_value(const CompiledDecisionProblem& problem, const PreparedProblem& prepared,
                   int stage, const Evidence& evidence, MemoTable& memo,
                   const ExactEngine& engine = default_engine());

// Full solve for the first remaining decision; values per alternative are
// mapped to value units once, at the boundary.
DecisionOutcome solve(const CompiledDecisionProblem& problem, const Evidence& evidence,
                      const Evidence& hypotheticals = {},
                      const ExactEngine& engine = default_engine());

// The arg-max record of a solve: for every information state reached with
// positive probability, the optimal alternative and its expected value.
Policy extract_policy(const CompiledDecisionProblem& problem, const Evidence& evidence,
                      const Evidence& hypotheticals = {},
                      const ExactEngine& engine = default_engine());

// Contingent table for the first remaining decision: enumerates the
// positive-probability assignments of its uninstantiated predecessors as
// hypotheticals and merges the per-assignment policies.
Policy full_policy(const CompiledDecisionProblem& problem, const Evidence& evidence,
                   const ExactEngine& engine = default_engine());

// Independent reference solver on the untransformed diagram: expands the
// full decision/observation tree, maximizing the original value function
// and weighting observations by enumeration over the chance measure. No
// value-to-probability transform, no memoization.
struct TreeSolution {
    DecisionOutcome outcome;
    Policy policy;
};
TreeSolution solve_by_decision_tree(const InfluenceDiagram& diagram, const Evidence& evidence);

// Runs the same solve twice, memo on and off, counting engine calls.
struct QueryCounts {
    std::int64_t with_memo = 0;
    std::int64_t without_memo = 0;
    double value_with_memo = 0.0;
    double value_without_memo = 0.0;
};
QueryCounts count_engine_queries(const CompiledDecisionProblem& problem,
                                 const Evidence& evidence,
                                 const Evidence& hypotheticals = {});

}  // namespace decnet

#endif  // DECNET_DECIDE_HPP
