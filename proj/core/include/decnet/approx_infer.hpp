#ifndef DECNET_APPROX_INFER_HPP
#define DECNET_APPROX_INFER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "decnet/model.hpp"
#include "decnet/transform.hpp"

namespace decnet {

// A Monte Carlo probability estimate with its standard error
// sqrt(p(1-p)/accepted). Fully determined by (seed, inputs).
struct EstimateWithSE {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::int64_t drawn = 0;
    std::int64_t accepted = 0;
    std::uint64_t seed = 0;
};

// Logic (rejection) sampling: forward samples in topological order, rejects
// draws inconsistent with the evidence, and estimates P(target=state | E).
// Throws NoAcceptedSamplesError when every draw is rejected.
EstimateWithSE logic_sample(const BeliefNetwork& network, const std::string& target,
                            const std::string& state, const Evidence& evidence,
                            std::int64_t draws, std::uint64_t seed);

struct SampleSolveOptions {
    std::int64_t batch = 1024;
    std::int64_t max_samples = 1'000'000;  // per alternative
    double confidence = 0.95;
    std::uint64_t seed = 0;
};

// Sampling-based solve for a problem with exactly one remaining decision.
// Each alternative gets its own deterministic sample stream; estimation
// runs in batches and stops early once the leading alternative's confidence
// lower bound clears every other alternative's upper bound. Estimates stay
// in probability space; expected values are scale*estimate - offset with
// standard error scale*se.
struct SampleDecision {
    std::string decision;
    std::string chosen;
    std::vector<std::pair<std::string, EstimateWithSE>> per_alternative;
    bool separated = false;
    double confidence_z = 0.0;
};

SampleDecision sample_solve(const CompiledDecisionProblem& problem, const Evidence& evidence,
                            const SampleSolveOptions& options = {});

// Two-sided normal quantile for a confidence level (0.95 -> 1.959964).
double normal_quantile_two_sided(double confidence);

}  // namespace decnet

#endif  // DECNET_APPROX_INFER_HPP
