#include "decnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

namespace decnet {

namespace {

int find_label(const std::vector<std::string>& labels, std::string_view label) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == label) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

int ChanceNode::state_index(std::string_view label) const {
    return find_label(states, label);
}

int DecisionNode::alternative_index(std::string_view label) const {
    return find_label(alternatives, label);
}

const std::string* Evidence::find(std::string_view node) const {
    auto it = bound_.find(node);
    return it == bound_.end() ? nullptr : &it->second;
}

const std::string& Evidence::at(std::string_view node) const {
    const std::string* state = find(node);
    if (!state) {
        throw StructuralError("no binding for node '" + std::string(node) + "'");
    }
    return *state;
}

Evidence Evidence::merged(const Evidence& extra) const {
    Evidence out = *this;
    for (const auto& [node, state] : extra) {
        if (const std::string* prior = out.find(node); prior && *prior != state) {
            throw UsageError("conflicting bindings for '" + node + "': '" + *prior +
                             "' vs '" + state + "'");
        }
        out.set(node, state);
    }
    return out;
}

BeliefNetwork::BeliefNetwork(std::vector<ChanceNode> nodes) : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        index_.emplace(nodes_[i].name, static_cast<int>(i));  // first declaration wins
    }
}

int BeliefNetwork::index_of(std::string_view name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

const ChanceNode* BeliefNetwork::find(std::string_view name) const {
    int i = index_of(name);
    return i < 0 ? nullptr : &nodes_[i];
}

const ChanceNode* InfluenceDiagram::find_chance(std::string_view name) const {
    for (const ChanceNode& node : chance) {
        if (node.name == name) return &node;
    }
    return nullptr;
}

const DecisionNode* InfluenceDiagram::find_decision(std::string_view name) const {
    int i = decision_order(name);
    return i < 0 ? nullptr : &decisions[i];
}

int InfluenceDiagram::decision_order(std::string_view name) const {
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        if (decisions[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

const std::vector<std::string>* InfluenceDiagram::outcome_labels(std::string_view name) const {
    if (const ChanceNode* node = find_chance(name)) return &node->states;
    if (const DecisionNode* node = find_decision(name)) return &node->alternatives;
    return nullptr;
}

std::vector<InfluenceDiagram::DeclRef> InfluenceDiagram::declaration_order() const {
    if (declaration.size() == chance.size() + decisions.size() + values.size()) {
        return declaration;
    }
    std::vector<DeclRef> order;
    for (std::size_t i = 0; i < chance.size(); ++i) {
        order.push_back({NodeKind::Chance, static_cast<int>(i)});
    }
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        order.push_back({NodeKind::Decision, static_cast<int>(i)});
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        order.push_back({NodeKind::Value, static_cast<int>(i)});
    }
    return order;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (const Violation& v : violations) {
        if (!v.node.empty()) out << v.node << ": ";
        out << v.rule;
        if (!v.detail.empty()) out << " (" << v.detail << ")";
        out << '\n';
    }
    return out.str();
}

namespace {

void check_distinct(const std::string& node, const char* rule,
                    const std::vector<std::string>& labels, ValidationReport& report) {
    std::set<std::string_view> seen;
    for (const std::string& label : labels) {
        if (!seen.insert(label).second) {
            report.violations.push_back({node, rule, "duplicate '" + label + "'"});
        }
    }
}

// Arity of every parent, or nullopt when some parent does not resolve to a
// chance/decision node (reported separately).
std::optional<std::vector<int>> parent_arities(
    const std::vector<std::string>& parents,
    const std::function<const std::vector<std::string>*(std::string_view)>& labels_of) {
    std::vector<int> arities;
    arities.reserve(parents.size());
    for (const std::string& parent : parents) {
        const std::vector<std::string>* labels = labels_of(parent);
        if (!labels) return std::nullopt;
        arities.push_back(static_cast<int>(labels->size()));
    }
    return arities;
}

void check_rows(const std::string& node, std::size_t expected_rows, std::size_t width,
                const std::vector<std::vector<double>>& rows, double tolerance,
                ValidationReport& report) {
    if (rows.size() != expected_rows) {
        report.violations.push_back({node, "cpt: one row per parent configuration",
                                     "expected " + std::to_string(expected_rows) + " rows, got " +
                                         std::to_string(rows.size())});
        return;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::vector<double>& row = rows[r];
        if (row.size() != width) {
            report.violations.push_back({node, "cpt: row arity",
                                         "row " + std::to_string(r) + " has " +
                                             std::to_string(row.size()) + " entries, expected " +
                                             std::to_string(width)});
            continue;
        }
        double sum = 0.0;
        bool in_range = true;
        for (double p : row) {
            if (!std::isfinite(p) || p < 0.0 || p > 1.0) in_range = false;
            sum += p;
        }
        if (!in_range) {
            report.violations.push_back(
                {node, "cpt: probability out of range", "row " + std::to_string(r)});
        } else if (std::abs(sum - 1.0) > tolerance) {
            std::ostringstream detail;
            detail << "row " << r << " sums to " << sum;
            report.violations.push_back({node, "cpt: row sum != 1", detail.str()});
        }
    }
}

// Kahn cycle check over resolved arcs: returns false when some arc is left
// standing (a cycle). `arcs[i]` lists children of i.
bool acyclic(std::size_t n, const std::vector<std::vector<int>>& arcs) {
    std::vector<int> in_degree(n, 0);
    for (const auto& children : arcs) {
        for (int child : children) ++in_degree[child];
    }
    std::vector<int> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_degree[i] == 0) stack.push_back(static_cast<int>(i));
    }
    std::size_t removed = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        ++removed;
        for (int child : arcs[v]) {
            if (--in_degree[child] == 0) stack.push_back(child);
        }
    }
    return removed == n;
}

}  // namespace

ValidationReport validate_bn(const BeliefNetwork& network, double row_sum_tolerance) {
    ValidationReport report;

    std::set<std::string_view> names;
    for (const ChanceNode& node : network.nodes()) {
        if (!names.insert(node.name).second) {
            report.violations.push_back({"", "network: duplicate node name", node.name});
        }
    }

    auto labels_of = [&](std::string_view name) -> const std::vector<std::string>* {
        const ChanceNode* node = network.find(name);
        return node ? &node->states : nullptr;
    };

    for (const ChanceNode& node : network.nodes()) {
        if (node.states.size() < 2) {
            report.violations.push_back({node.name, "states: at least two required", ""});
        }
        check_distinct(node.name, "states: distinct labels", node.states, report);
        check_distinct(node.name, "parents: distinct entries", node.parents, report);

        bool parents_ok = true;
        for (const std::string& parent : node.parents) {
            if (network.index_of(parent) < 0) {
                report.violations.push_back({node.name, "parents: unknown node", parent});
                parents_ok = false;
            }
        }
        if (!parents_ok) continue;

        auto arities = parent_arities(node.parents, labels_of);
        check_rows(node.name, config_count(*arities), node.states.size(), node.cpt,
                   row_sum_tolerance, report);
    }

    // Cycle check only over fully resolved arcs.
    std::vector<std::vector<int>> arcs(network.size());
    for (std::size_t i = 0; i < network.size(); ++i) {
        for (const std::string& parent : network.node(i).parents) {
            int p = network.index_of(parent);
            if (p >= 0) arcs[p].push_back(static_cast<int>(i));
        }
    }
    if (!acyclic(network.size(), arcs)) {
        report.violations.push_back({"", "network: cycle", "parent relation is not a DAG"});
    }

    return report;
}

ValidationReport validate_id(const InfluenceDiagram& diagram, double row_sum_tolerance) {
    ValidationReport report;

    // Unique names across all three node kinds.
    std::set<std::string_view> names;
    auto claim_name = [&](const std::string& name) {
        if (!names.insert(name).second) {
            report.violations.push_back({"", "diagram: duplicate node name", name});
        }
    };
    for (const ChanceNode& node : diagram.chance) claim_name(node.name);
    for (const DecisionNode& node : diagram.decisions) claim_name(node.name);
    for (const ValueNode& node : diagram.values) claim_name(node.name);

    if (diagram.values.size() != 1) {
        report.violations.push_back({"", "diagram: exactly one value node",
                                     "found " + std::to_string(diagram.values.size())});
    }

    auto labels_of = [&](std::string_view name) -> const std::vector<std::string>* {
        return diagram.outcome_labels(name);
    };
    auto is_value = [&](std::string_view name) {
        return std::any_of(diagram.values.begin(), diagram.values.end(),
                           [&](const ValueNode& v) { return v.name == name; });
    };

    auto check_parent_refs = [&](const std::string& node,
                                 const std::vector<std::string>& refs, const char* role) {
        bool ok = true;
        for (const std::string& ref : refs) {
            if (labels_of(ref)) continue;
            ok = false;
            if (is_value(ref)) {
                report.violations.push_back({node, "value node has no successors", ref});
            } else {
                report.violations.push_back(
                    {node, std::string(role) + ": unknown node", ref});
            }
        }
        return ok;
    };

    for (const ChanceNode& node : diagram.chance) {
        if (node.states.size() < 2) {
            report.violations.push_back({node.name, "states: at least two required", ""});
        }
        check_distinct(node.name, "states: distinct labels", node.states, report);
        check_distinct(node.name, "parents: distinct entries", node.parents, report);
        if (!check_parent_refs(node.name, node.parents, "parents")) continue;
        auto arities = parent_arities(node.parents, labels_of);
        check_rows(node.name, config_count(*arities), node.states.size(), node.cpt,
                   row_sum_tolerance, report);
    }

    for (std::size_t i = 0; i < diagram.decisions.size(); ++i) {
        const DecisionNode& node = diagram.decisions[i];
        if (node.alternatives.size() < 2) {
            report.violations.push_back({node.name, "alternatives: at least two required", ""});
        }
        check_distinct(node.name, "alternatives: distinct labels", node.alternatives, report);
        check_distinct(node.name, "observes: distinct entries", node.observes, report);
        check_parent_refs(node.name, node.observes, "observes");
        for (const std::string& observed : node.observes) {
            int j = diagram.decision_order(observed);
            if (j >= 0 && static_cast<std::size_t>(j) >= i) {
                report.violations.push_back(
                    {node.name, "decision order inconsistent with information arcs",
                     node.name + " observes " + observed});
            }
        }
    }

    for (const ValueNode& node : diagram.values) {
        check_distinct(node.name, "parents: distinct entries", node.parents, report);
        if (!check_parent_refs(node.name, node.parents, "parents")) continue;
        auto arities = parent_arities(node.parents, labels_of);
        std::size_t expected = config_count(*arities);
        if (node.table.size() != expected) {
            report.violations.push_back({node.name, "table: one entry per parent configuration",
                                         "expected " + std::to_string(expected) + ", got " +
                                             std::to_string(node.table.size())});
        }
        for (double v : node.table) {
            if (!std::isfinite(v)) {
                report.violations.push_back({node.name, "table: value not finite", ""});
                break;
            }
        }
    }

    // Combined graph (chance arcs + information arcs + value arcs) acyclic.
    // Indices: chance, then decisions, then values, in declaration order.
    std::map<std::string_view, int> combined;
    int next = 0;
    for (const ChanceNode& node : diagram.chance) combined.emplace(node.name, next++);
    for (const DecisionNode& node : diagram.decisions) combined.emplace(node.name, next++);
    for (const ValueNode& node : diagram.values) combined.emplace(node.name, next++);
    std::vector<std::vector<int>> arcs(next);
    auto add_arcs = [&](const std::string& to, const std::vector<std::string>& froms) {
        auto to_it = combined.find(to);
        if (to_it == combined.end()) return;
        for (const std::string& from : froms) {
            auto from_it = combined.find(from);
            if (from_it != combined.end()) arcs[from_it->second].push_back(to_it->second);
        }
    };
    for (const ChanceNode& node : diagram.chance) add_arcs(node.name, node.parents);
    for (const DecisionNode& node : diagram.decisions) add_arcs(node.name, node.observes);
    for (const ValueNode& node : diagram.values) add_arcs(node.name, node.parents);
    if (!acyclic(static_cast<std::size_t>(next), arcs)) {
        report.violations.push_back({"", "diagram: cycle", "combined graph is not a DAG"});
    }

    return report;
}

std::vector<std::string> topological_order(const BeliefNetwork& network) {
    const std::size_t n = network.size();
    std::vector<int> in_degree(n, 0);
    std::vector<std::vector<int>> children(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const std::string& parent : network.node(i).parents) {
            int p = network.index_of(parent);
            if (p < 0) {
                throw StructuralError("unknown parent '" + parent + "' of '" +
                                      network.node(i).name + "'");
            }
            children[p].push_back(static_cast<int>(i));
            ++in_degree[i];
        }
    }

    std::vector<std::string> order;
    order.reserve(n);
    std::vector<bool> emitted(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        // Smallest declaration index among ready nodes: deterministic ties.
        int pick = -1;
        for (std::size_t i = 0; i < n; ++i) {
            if (!emitted[i] && in_degree[i] == 0) {
                pick = static_cast<int>(i);
                break;
            }
        }
        if (pick < 0) throw StructuralError("cycle detected in belief network");
        emitted[pick] = true;
        order.push_back(network.node(pick).name);
        for (int child : children[pick]) --in_degree[child];
    }
    return order;
}

std::size_t config_count(std::span<const int> arities) {
    std::size_t count = 1;
    for (int a : arities) count *= static_cast<std::size_t>(a);
    return count;
}

std::size_t config_index(std::span<const int> digits, std::span<const int> arities) {
    std::size_t index = 0;
    for (std::size_t i = 0; i < arities.size(); ++i) {
        index = index * static_cast<std::size_t>(arities[i]) + static_cast<std::size_t>(digits[i]);
    }
    return index;
}

bool next_config(std::vector<int>& digits, std::span<const int> arities) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < arities[i]) return true;
        digits[i] = 0;
    }
    return false;
}

}  // namespace decnet
