#ifndef DECNET_MODEL_HPP
#define DECNET_MODEL_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decnet/errors.hpp"

namespace decnet {

// Default tolerance for CPT row sums; overridable per validation call.
inline constexpr double kRowSumTolerance = 1e-9;

// A discrete random variable with a conditional probability table.
// The table holds one row per configuration of the parents, addressed in
// mixed-radix order over the declared parent sequence (last parent varies
// fastest); each row is a distribution over this node's states.
struct ChanceNode {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::string> parents;
    std::vector<std::vector<double>> cpt;

    // Index of a state label, -1 if unknown.
    int state_index(std::string_view label) const;
};

// A variable whose value is chosen, not sampled. `observes` lists the
// declared information arcs: what is known when this decision is made.
struct DecisionNode {
    std::string name;
    std::vector<std::string> alternatives;
    std::vector<std::string> observes;

    int alternative_index(std::string_view label) const;
};

// The terminal value function v over its parent configurations, one entry
// per configuration in the same mixed-radix order as ChanceNode rows.
struct ValueNode {
    std::string name;
    std::vector<std::string> parents;
    std::vector<double> table;
};

// A partial assignment of node identifiers to state/alternative labels.
// Iteration order is name-sorted, so anything derived from it is stable.
class Evidence {
public:
    Evidence() = default;
    Evidence(std::initializer_list<std::pair<const std::string, std::string>> bindings)
        : bound_(bindings) {}

    void set(const std::string& node, const std::string& state) { bound_[node] = state; }
    void erase(const std::string& node) { bound_.erase(node); }
    bool contains(std::string_view node) const { return bound_.find(node) != bound_.end(); }
    // nullptr when unbound.
    const std::string* find(std::string_view node) const;
    const std::string& at(std::string_view node) const;

    std::size_t size() const { return bound_.size(); }
    bool empty() const { return bound_.empty(); }
    auto begin() const { return bound_.begin(); }
    auto end() const { return bound_.end(); }

    // Union of both assignments. Binding the same node to two different
    // values is a UsageError; binding it twice to the same value is fine.
    Evidence merged(const Evidence& extra) const;

    bool operator==(const Evidence&) const = default;

private:
    std::map<std::string, std::string, std::less<>> bound_;
};

// Chance nodes only; the inference substrate. Declaration order is
// preserved and used for every deterministic tie-break.
class BeliefNetwork {
public:
    BeliefNetwork() = default;
    explicit BeliefNetwork(std::vector<ChanceNode> nodes);

    std::size_t size() const { return nodes_.size(); }
    const std::vector<ChanceNode>& nodes() const { return nodes_; }
    const ChanceNode& node(std::size_t i) const { return nodes_[i]; }
    // -1 if absent. Duplicated names resolve to the first declaration.
    int index_of(std::string_view name) const;
    const ChanceNode* find(std::string_view name) const;

private:
    std::vector<ChanceNode> nodes_;
    std::map<std::string, int, std::less<>> index_;
};

enum class NodeKind { Chance, Decision, Value };

// Chance nodes plus totally ordered decisions plus one value node.
// `declaration` records the interleaved block order of the source document
// so serialization can reproduce it; the order of `decisions` defines the
// decision total order D1..Dn.
struct InfluenceDiagram {
    std::string name;
    std::vector<ChanceNode> chance;
    std::vector<DecisionNode> decisions;
    std::vector<ValueNode> values;  // validation demands exactly one
    struct DeclRef {
        NodeKind kind;
        int index;
    };
    std::vector<DeclRef> declaration;

    const ChanceNode* find_chance(std::string_view name) const;
    const DecisionNode* find_decision(std::string_view name) const;
    // Decision position in the total order, -1 if not a decision.
    int decision_order(std::string_view name) const;
    // State/alternative labels of any chance or decision node; nullptr if
    // the name does not resolve to one.
    const std::vector<std::string>* outcome_labels(std::string_view name) const;
    // `declaration` when it covers every node, otherwise the default
    // chance-decisions-value sequence (programmatic diagrams rarely fill it).
    std::vector<DeclRef> declaration_order() const;
};

struct Violation {
    std::string node;  // offending node, empty for whole-model rules
    std::string rule;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate_bn(const BeliefNetwork& network,
                             double row_sum_tolerance = kRowSumTolerance);
ValidationReport validate_id(const InfluenceDiagram& diagram,
                             double row_sum_tolerance = kRowSumTolerance);

// Parents-before-children order; ties broken by declaration order.
// Throws StructuralError on a cycle or dangling parent.
std::vector<std::string> topological_order(const BeliefNetwork& network);

// --- mixed-radix configuration helpers (shared table addressing) ---

// Number of configurations of variables with the given arities.
std::size_t config_count(std::span<const int> arities);

// Row index of a configuration, last variable fastest.
std::size_t config_index(std::span<const int> digits, std::span<const int> arities);

// Advance to the next configuration; false once the counter wraps to zero.
bool next_config(std::vector<int>& digits, std::span<const int> arities);

}  // namespace decnet

#endif  // DECNET_MODEL_HPP
