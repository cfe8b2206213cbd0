#include "decnet/approx_infer.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "decnet/decide.hpp"

namespace decnet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic uniforms independent of the standard library's
// distribution implementations.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : rng_(seed) {}
    double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 rng_;
};

class ForwardSampler {
public:
    explicit ForwardSampler(const BeliefNetwork& network) : network_(network) {
        const auto order = topological_order(network);
        topo_.reserve(order.size());
        for (const std::string& name : order) topo_.push_back(network.index_of(name));
        parents_.resize(network.size());
        for (std::size_t i = 0; i < network.size(); ++i) {
            for (const std::string& parent : network.node(i).parents) {
                parents_[i].push_back(network.index_of(parent));
            }
        }
    }

    // One forward draw; false as soon as a sampled node contradicts the
    // evidence (classic logic-sampling rejection).
    bool draw(std::vector<int>& assignment, const std::vector<int>& evidence_states,
              UniformStream& stream) const {
        for (int i : topo_) {
            const ChanceNode& node = network_.node(i);
            std::size_t row = 0;
            for (int p : parents_[i]) {
                row = row * network_.node(p).states.size() +
                      static_cast<std::size_t>(assignment[p]);
            }
            const std::vector<double>& probabilities = node.cpt[row];
            const double u = stream.next();
            int state = static_cast<int>(probabilities.size()) - 1;
            double cumulative = 0.0;
            for (std::size_t s = 0; s < probabilities.size(); ++s) {
                cumulative += probabilities[s];
                if (u < cumulative) {
                    state = static_cast<int>(s);
                    break;
                }
            }
            if (evidence_states[i] >= 0 && evidence_states[i] != state) return false;
            assignment[i] = state;
        }
        return true;
    }

private:
    const BeliefNetwork& network_;
    std::vector<int> topo_;
    std::vector<std::vector<int>> parents_;
};

std::vector<int> resolve_evidence(const BeliefNetwork& network, const Evidence& evidence) {
    std::vector<int> states(network.size(), -1);
    for (const auto& [name, state] : evidence) {
        int i = network.index_of(name);
        if (i < 0) throw StructuralError("evidence references unknown node '" + name + "'");
        int s = network.node(i).state_index(state);
        if (s < 0) {
            throw StructuralError("evidence: '" + state + "' is not a state of '" + name + "'");
        }
        states[i] = s;
    }
    return states;
}

double standard_error_of(double estimate, std::int64_t accepted) {
    return accepted > 0 ? std::sqrt(estimate * (1.0 - estimate) / accepted) : 0.0;
}

}  // namespace

EstimateWithSE logic_sample(const BeliefNetwork& network, const std::string& target,
                            const std::string& state, const Evidence& evidence,
                            std::int64_t draws, std::uint64_t seed) {
    if (draws < 1) throw UsageError("draw count must be at least 1");
    const int t = network.index_of(target);
    if (t < 0) throw StructuralError("unknown sampling target '" + target + "'");
    const int target_state = network.node(t).state_index(state);
    if (target_state < 0) {
        throw StructuralError("'" + state + "' is not a state of '" + target + "'");
    }
    const auto evidence_states = resolve_evidence(network, evidence);
    if (evidence_states[t] >= 0) {
        throw UsageError("sampling target '" + target + "' is fixed by the evidence");
    }

    const ForwardSampler sampler(network);
    UniformStream stream(seed);
    std::vector<int> assignment(network.size(), 0);

    std::int64_t accepted = 0;
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < draws; ++i) {
        if (!sampler.draw(assignment, evidence_states, stream)) continue;
        ++accepted;
        if (assignment[t] == target_state) ++hits;
    }
    if (accepted == 0) {
        throw NoAcceptedSamplesError("no samples consistent with the evidence", draws);
    }

    EstimateWithSE result;
    result.estimate = static_cast<double>(hits) / static_cast<double>(accepted);
    result.standard_error = standard_error_of(result.estimate, accepted);
    result.drawn = draws;
    result.accepted = accepted;
    result.seed = seed;
    return result;
}

double normal_quantile_two_sided(double confidence) {
    if (!(confidence > 0.0) || !(confidence < 1.0)) {
        throw UsageError("confidence level must be in (0, 1)");
    }
    const double p = 1.0 - (1.0 - confidence) / 2.0;

    // Acklam's rational approximation to the inverse normal CDF
    // (relative error below 1.2e-9 everywhere).
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

SampleDecision sample_solve(const CompiledDecisionProblem& problem, const Evidence& evidence,
                            const SampleSolveOptions& options) {
    if (options.batch < 1) throw UsageError("batch size must be at least 1");
    if (options.max_samples < 1) throw UsageError("max samples must be at least 1");

    const PreparedProblem prepared = prepare_decision(problem, evidence);
    if (prepared.first + 1 != static_cast<int>(prepared.decisions.size())) {
        throw UsageError("sampling solves a single remaining decision; found " +
                         std::to_string(prepared.decisions.size() - prepared.first));
    }
    const std::string& decision = prepared.decisions[prepared.first].decision;
    const ChanceNode* decision_node = problem.network.find(decision);
    if (!decision_node) throw StructuralError("decision '" + decision + "' is not in the network");
    const std::vector<std::string>& alternatives = decision_node->states;

    SampleDecision result;
    result.decision = decision;
    result.confidence_z = normal_quantile_two_sided(options.confidence);

    // Constant value function: every alternative is certain and equal;
    // nothing to sample.
    if (problem.scale == 0.0) {
        for (const std::string& alternative : alternatives) {
            result.per_alternative.emplace_back(
                alternative, EstimateWithSE{1.0, 0.0, 0, 0, options.seed});
        }
        result.chosen = alternatives.front();
        result.separated = true;
        return result;
    }

    const int v = problem.network.index_of(problem.value_node);
    if (v < 0) throw StructuralError("value node '" + problem.value_node + "' is missing");
    const int value_true = problem.network.node(v).state_index("T");
    if (value_true < 0) {
        throw StructuralError("value node '" + problem.value_node + "' has no state T");
    }

    const ForwardSampler sampler(problem.network);

    struct AlternativeState {
        std::uint64_t stream_seed = 0;
        UniformStream stream{0};
        std::vector<int> evidence_states;
        std::int64_t drawn = 0;
        std::int64_t accepted = 0;
        std::int64_t hits = 0;
        double estimate() const {
            return accepted > 0 ? static_cast<double>(hits) / static_cast<double>(accepted) : 0.0;
        }
    };

    std::vector<AlternativeState> states(alternatives.size());
    for (std::size_t k = 0; k < alternatives.size(); ++k) {
        Evidence conditioned = prepared.evidence;
        conditioned.set(decision, alternatives[k]);
        states[k].evidence_states = resolve_evidence(problem.network, conditioned);
        // Independent deterministic stream per alternative.
        states[k].stream_seed = splitmix64(options.seed ^ (0xA076BD64C9D3A7F5ULL * (k + 1)));
        states[k].stream = UniformStream(states[k].stream_seed);
    }

    std::vector<int> assignment(problem.network.size(), 0);
    bool separated = false;
    while (true) {
        bool progressed = false;
        for (AlternativeState& alt : states) {
            const std::int64_t quota = std::min<std::int64_t>(
                options.batch, options.max_samples - alt.drawn);
            for (std::int64_t i = 0; i < quota; ++i) {
                ++alt.drawn;
                if (!sampler.draw(assignment, alt.evidence_states, alt.stream)) continue;
                ++alt.accepted;
                if (assignment[v] == value_true) ++alt.hits;
            }
            progressed = progressed || quota > 0;
        }

        const bool all_estimable = std::all_of(states.begin(), states.end(),
                                               [](const AlternativeState& alt) {
                                                   return alt.accepted > 0;
                                               });
        if (all_estimable) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < states.size(); ++k) {
                if (states[k].estimate() > states[best].estimate()) best = k;
            }
            const double lower =
                states[best].estimate() -
                result.confidence_z * standard_error_of(states[best].estimate(),
                                                        states[best].accepted);
            separated = true;
            for (std::size_t k = 0; k < states.size(); ++k) {
                if (k == best) continue;
                const double upper =
                    states[k].estimate() +
                    result.confidence_z *
                        standard_error_of(states[k].estimate(), states[k].accepted);
                if (!(lower > upper)) {
                    separated = false;
                    break;
                }
            }
            if (separated) break;
        }
        if (!progressed) break;  // every alternative is at max_samples
    }

    for (const AlternativeState& alt : states) {
        if (alt.accepted == 0) {
            throw NoAcceptedSamplesError("no samples consistent with the evidence for '" +
                                             decision + "'",
                                         alt.drawn);
        }
    }

    std::size_t best = 0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        EstimateWithSE estimate;
        estimate.estimate = states[k].estimate();
        estimate.standard_error = standard_error_of(estimate.estimate, states[k].accepted);
        estimate.drawn = states[k].drawn;
        estimate.accepted = states[k].accepted;
        estimate.seed = states[k].stream_seed;
        result.per_alternative.emplace_back(alternatives[k], estimate);
        if (states[k].estimate() > states[best].estimate()) best = k;
    }
    result.chosen = alternatives[best];
    result.separated = separated;
    return result;
}

}  // namespace decnet
