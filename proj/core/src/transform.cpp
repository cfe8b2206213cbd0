#include "decnet/transform.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace decnet {

std::string to_string(const DecisionList& list) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i > 0) out << ' ';
        const DecisionListEntry& entry = list[i];
        out << '(' << entry.decision << " (";
        for (std::size_t j = 0; j < entry.predecessors.size(); ++j) {
            if (j > 0) out << ' ';
            out << entry.predecessors[j];
        }
        out << ") (";
        for (std::size_t j = 0; j < entry.chance_predecessors.size(); ++j) {
            if (j > 0) out << ' ';
            out << entry.chance_predecessors[j];
        }
        out << "))";
    }
    out << ')';
    return out.str();
}

ValueTransform value_to_probability(const std::vector<double>& table) {
    if (table.empty()) throw StructuralError("value table is empty");

    const auto [min_it, max_it] = std::minmax_element(table.begin(), table.end());
    ValueTransform result;
    result.scale = *max_it - *min_it;
    if (result.scale == 0.0) {
        // Constant value function: every configuration maps to certainty.
        result.offset = -*min_it;
        result.probability.assign(table.size(), 1.0);
        return result;
    }
    result.offset = -*min_it;
    result.probability.reserve(table.size());
    for (double v : table) {
        result.probability.push_back((v + result.offset) / result.scale);
    }
    return result;
}

InfluenceDiagram no_forgetting_closure(const InfluenceDiagram& diagram) {
    InfluenceDiagram closed = diagram;
    for (std::size_t j = 0; j < closed.decisions.size(); ++j) {
        std::vector<std::string> observes;
        std::set<std::string_view> seen;
        auto append = [&](const std::string& name) {
            if (seen.insert(name).second) observes.push_back(name);
        };
        // Earlier decisions and their (already closed) observations, in
        // decision order, then this decision's own declared arcs.
        for (std::size_t i = 0; i < j; ++i) {
            append(closed.decisions[i].name);
            for (const std::string& name : closed.decisions[i].observes) append(name);
        }
        for (const std::string& name : diagram.decisions[j].observes) append(name);
        closed.decisions[j].observes = std::move(observes);
    }
    return closed;
}

DecisionList build_decision_list(const InfluenceDiagram& diagram) {
    DecisionList list;
    list.reserve(diagram.decisions.size());
    for (const DecisionNode& decision : diagram.decisions) {
        DecisionListEntry entry;
        entry.decision = decision.name;
        entry.predecessors = decision.observes;
        for (const std::string& name : decision.observes) {
            if (diagram.decision_order(name) < 0) entry.chance_predecessors.push_back(name);
        }
        list.push_back(std::move(entry));
    }
    return list;
}

CompiledDecisionProblem compile(const InfluenceDiagram& diagram) {
    const ValidationReport report = validate_id(diagram);
    if (!report.ok()) {
        throw StructuralError("invalid influence diagram:\n" + report.to_string());
    }

    const InfluenceDiagram closed = no_forgetting_closure(diagram);

    CompiledDecisionProblem problem;
    problem.decisions = build_decision_list(closed);

    const ValueNode& value = closed.values.front();
    const ValueTransform vt = value_to_probability(value.table);
    problem.scale = vt.scale;
    problem.offset = vt.offset;
    problem.value_node = value.name;

    // Rebuild every node as a chance node, preserving declaration order.
    // Information arcs are dropped here: converted decisions are roots.
    std::vector<ChanceNode> nodes;
    for (const InfluenceDiagram::DeclRef& ref : closed.declaration_order()) {
        switch (ref.kind) {
            case NodeKind::Chance:
                nodes.push_back(closed.chance[ref.index]);
                break;
            case NodeKind::Decision: {
                const DecisionNode& decision = closed.decisions[ref.index];
                ChanceNode converted;
                converted.name = decision.name;
                converted.states = decision.alternatives;
                converted.cpt = {std::vector<double>(
                    decision.alternatives.size(), 1.0 / decision.alternatives.size())};
                nodes.push_back(std::move(converted));
                break;
            }
            case NodeKind::Value: {
                ChanceNode converted;
                converted.name = value.name;
                converted.states = {"T", "F"};
                converted.parents = value.parents;
                converted.cpt.reserve(vt.probability.size());
                for (double p : vt.probability) converted.cpt.push_back({p, 1.0 - p});
                nodes.push_back(std::move(converted));
                break;
            }
        }
    }
    problem.network = BeliefNetwork(std::move(nodes));
    return problem;
}

}  // namespace decnet
