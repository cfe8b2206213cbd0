#ifndef DECNET_EXACT_INFER_HPP
#define DECNET_EXACT_INFER_HPP

#include <string>
#include <vector>

#include "decnet/model.hpp"

namespace decnet {

// Posterior over a target variable plus the probability of the evidence
// it was conditioned on.
struct QueryResult {
    std::vector<double> distribution;  // aligned with the target's state order
    double evidence_probability = 1.0;

    double probability_of(const ChanceNode& node, std::string_view state) const;
};

// A nonnegative function over the configurations of its scope; the working
// representation used by elimination. Scope entries are network node
// indices; values are mixed-radix addressed, last scope variable fastest.
class Factor {
public:
    Factor();  // scalar 1
    Factor(std::vector<int> scope, std::vector<int> arities, std::vector<double> values);

    const std::vector<int>& scope() const { return scope_; }
    const std::vector<int>& arities() const { return arities_; }
    const std::vector<double>& values() const { return values_; }
    bool mentions(int variable) const;

    static Factor product(const Factor& a, const Factor& b);
    Factor sum_out(int variable) const;
    Factor reduce(int variable, int state) const;
    double total() const;

private:
    std::vector<int> scope_;
    std::vector<int> arities_;
    std::vector<double> values_;
};

// Exact posterior P(target | evidence) by summing the full joint. Slow and
// simple on purpose: this is the oracle the elimination engine is checked
// against. Throws ImpossibleEvidenceError when P(evidence) = 0.
QueryResult query_enumeration(const BeliefNetwork& network, const std::string& target,
                              const Evidence& evidence);

// Same contract as query_enumeration, via variable elimination with a
// greedy min-fill ordering (ties by declaration order). Evidence is
// absorbed by factor reduction before elimination.
QueryResult query_ve(const BeliefNetwork& network, const std::string& target,
                     const Evidence& evidence);

// P(config | evidence) for a joint configuration of several variables,
// by elimination with a joint target. P({} | evidence) = 1.
double joint_probability(const BeliefNetwork& network, const Evidence& config,
                         const Evidence& evidence);

// Enumeration counterpart of joint_probability (oracle route).
double joint_probability_enumeration(const BeliefNetwork& network, const Evidence& config,
                                     const Evidence& evidence);

// P(evidence) itself; 1 for empty evidence.
double evidence_probability(const BeliefNetwork& network, const Evidence& evidence);

// Iteratively removes leaf nodes outside targets and evidence. Queries over
// the kept variables are unchanged by construction.
BeliefNetwork prune_barren(const BeliefNetwork& network,
                           const std::vector<std::string>& targets, const Evidence& evidence);

}  // namespace decnet

#endif  // DECNET_EXACT_INFER_HPP
