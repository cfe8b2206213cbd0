#ifndef DECNET_TRANSFORM_HPP
#define DECNET_TRANSFORM_HPP

#include <string>
#include <vector>

#include "decnet/model.hpp"

namespace decnet {

// One entry per decision, in the total order: the decision, its information
// predecessors (including no-forgetting entries), and the chance-node
// subset of those predecessors.
struct DecisionListEntry {
    std::string decision;
    std::vector<std::string> predecessors;
    std::vector<std::string> chance_predecessors;
};
using DecisionList = std::vector<DecisionListEntry>;

// Lisp-style rendering, e.g. "((D1 (C) (C)))".
std::string to_string(const DecisionList& list);

// Linear map from a value table to a probability table:
// probability = (value + offset) / scale with scale = max-min, offset = -min.
// A constant table degenerates to scale = 0, offset = -value, probability 1
// everywhere; the recovery max_expected_value = scale*f - offset then still
// reproduces the constant exactly.
struct ValueTransform {
    std::vector<double> probability;  // aligned with the input table
    double scale = 0.0;               // k1
    double offset = 0.0;              // k2
};

ValueTransform value_to_probability(const std::vector<double>& table);

// A belief network equivalent of an influence diagram: decisions became
// root chance nodes with uniform priors, the value node became a binary
// chance node whose P(T | parents) row is the transformed value function.
struct CompiledDecisionProblem {
    BeliefNetwork network;
    DecisionList decisions;
    double scale = 0.0;   // k1
    double offset = 0.0;  // k2
    std::string value_node;
};

// Adds the implicit no-forgetting information arcs: every decision observes
// all earlier decisions and everything they observed. Idempotent; added
// entries keep decision order first, then original observes order.
InfluenceDiagram no_forgetting_closure(const InfluenceDiagram& diagram);

// Decision list of an already-closed diagram.
DecisionList build_decision_list(const InfluenceDiagram& diagram);

// Full compilation: validate, close, record the decision list, delete
// information arcs, convert decisions and the value node. Throws
// StructuralError carrying the validation report when the diagram is
// invalid. The output network passes validate_bn.
CompiledDecisionProblem compile(const InfluenceDiagram& diagram);

}  // namespace decnet

#endif  // DECNET_TRANSFORM_HPP
