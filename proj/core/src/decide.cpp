#include "decnet/decide.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace decnet {

QueryResult EliminationEngine::query(const BeliefNetwork& network, const std::string& target,
                                     const Evidence& evidence) const {
    return query_ve(network, target, evidence);
}

double EliminationEngine::joint(const BeliefNetwork& network, const Evidence& config,
                                const Evidence& given) const {
    return joint_probability(network, config, given);
}

QueryResult EnumerationEngine::query(const BeliefNetwork& network, const std::string& target,
                                     const Evidence& evidence) const {
    return query_enumeration(network, target, evidence);
}

double EnumerationEngine::joint(const BeliefNetwork& network, const Evidence& config,
                                const Evidence& given) const {
    return joint_probability_enumeration(network, config, given);
}

const ExactEngine& default_engine() {
    static const EliminationEngine engine;
    return engine;
}

const MemoTable::Entry* MemoTable::find(int stage, const std::string& key) const {
    auto it = entries_.find({stage, key});
    return it == entries_.end() ? nullptr : &it->second;
}

void MemoTable::store(int stage, const std::string& key, Entry entry) {
    entries_.insert_or_assign({stage, key}, std::move(entry));
}

namespace {

int first_remaining_decision(const DecisionList& decisions, const Evidence& evidence) {
    int first = static_cast<int>(decisions.size());
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        if (!evidence.contains(decisions[i].decision)) {
            first = static_cast<int>(i);
            break;
        }
    }
    if (first == static_cast<int>(decisions.size())) {
        throw UsageError("no remaining decision: all decisions are in the evidence");
    }
    // Committed decisions must be a prefix of the total order.
    for (std::size_t i = static_cast<std::size_t>(first) + 1; i < decisions.size(); ++i) {
        if (evidence.contains(decisions[i].decision)) {
            throw UsageError("decision '" + decisions[i].decision +
                             "' is committed but earlier decision '" +
                             decisions[first].decision + "' is not");
        }
    }
    return first;
}

bool is_decision_of(const DecisionList& decisions, std::string_view name) {
    return std::any_of(decisions.begin(), decisions.end(),
                       [&](const DecisionListEntry& e) { return e.decision == name; });
}

// Alternatives of a converted decision node (its states in the compiled
// network).
const std::vector<std::string>& alternatives_of(const CompiledDecisionProblem& problem,
                                                const std::string& decision) {
    const ChanceNode* node = problem.network.find(decision);
    if (!node) throw StructuralError("decision '" + decision + "' is not in the network");
    return node->states;
}

int value_true_index(const CompiledDecisionProblem& problem) {
    const ChanceNode* node = problem.network.find(problem.value_node);
    if (!node) throw StructuralError("value node '" + problem.value_node + "' is missing");
    int t = node->state_index("T");
    if (t < 0) throw StructuralError("value node '" + problem.value_node + "' has no state T");
    return t;
}

// Index of the maximal entry; strict comparison keeps the first of ties.
std::size_t arg_max(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

class StageSolver {
public:
    StageSolver(const CompiledDecisionProblem& problem, const PreparedProblem& prepared,
                MemoTable& memo, const ExactEngine& engine)
        : problem_(problem),
          prepared_(prepared),
          memo_(memo),
          engine_(engine),
          true_index_(value_true_index(problem)) {}

    // f per alternative of the stage's decision, given evidence that
    // instantiates all of the stage's predecessors.
    std::vector<double> alternative_values(int stage, const Evidence& evidence) {
        const DecisionListEntry& entry = prepared_.decisions[stage];
        const std::vector<std::string>& alternatives = alternatives_of(problem_, entry.decision);
        const bool last = stage + 1 == static_cast<int>(prepared_.decisions.size());

        std::vector<double> values;
        values.reserve(alternatives.size());
        for (const std::string& alternative : alternatives) {
            Evidence chosen = evidence;
            chosen.set(entry.decision, alternative);
            if (last) {
                // Base case: one posterior query on the value node.
                const QueryResult result =
                    engine_.query(problem_.network, problem_.value_node, chosen);
                values.push_back(result.distribution[true_index_]);
                continue;
            }

            // Sum over the next stage's uninstantiated chance predecessors.
            const DecisionListEntry& next = prepared_.decisions[stage + 1];
            std::vector<const ChanceNode*> unset;
            for (const std::string& name : next.chance_predecessors) {
                if (!chosen.contains(name)) {
                    const ChanceNode* node = problem_.network.find(name);
                    if (!node) {
                        throw StructuralError("predecessor '" + name + "' is not in the network");
                    }
                    unset.push_back(node);
                }
            }
            if (unset.empty()) {
                values.push_back(solve_stage(stage + 1, chosen));
                continue;
            }

            std::vector<int> arities;
            arities.reserve(unset.size());
            for (const ChanceNode* node : unset) {
                arities.push_back(static_cast<int>(node->states.size()));
            }
            double f = 0.0;
            std::vector<int> digits(unset.size(), 0);
            do {
                Evidence observed;
                for (std::size_t k = 0; k < unset.size(); ++k) {
                    observed.set(unset[k]->name, unset[k]->states[digits[k]]);
                }
                const double weight = engine_.joint(problem_.network, observed, chosen);
                if (weight > 0.0) {
                    f += weight * solve_stage(stage + 1, chosen.merged(observed));
                }
            } while (next_config(digits, arities));
            values.push_back(f);
        }
        return values;
    }

    // Evaluates a stage once and records the arg-max in the memo.
    std::pair<std::vector<double>, std::size_t> evaluate_and_store(int stage,
                                                                   const Evidence& evidence) {
        const auto [key, assignment] = stage_key(stage, evidence);
        std::vector<double> values = alternative_values(stage, evidence);
        const std::size_t best = arg_max(values);
        if (memo_.enabled()) {
            memo_.store(stage, key,
                        {values[best],
                         alternatives_of(problem_, prepared_.decisions[stage].decision)[best],
                         assignment});
        }
        return {std::move(values), best};
    }

    // Memoized max over alternative_values.
    double solve_stage(int stage, const Evidence& evidence) {
        if (memo_.enabled()) {
            const auto [key, assignment] = stage_key(stage, evidence);
            if (const MemoTable::Entry* hit = memo_.find(stage, key)) return hit->stage_value;
        }
        const auto [values, best] = evaluate_and_store(stage, evidence);
        return values[best];
    }

private:
    // Key: the stage's predecessor assignment, minus baseline-fixed nodes.
    std::pair<std::string, Evidence> stage_key(int stage, const Evidence& evidence) const {
        std::string key;
        Evidence assignment;
        for (const std::string& name : prepared_.decisions[stage].predecessors) {
            if (memo_.baseline().contains(name)) continue;
            const std::string& state = evidence.at(name);
            key += name;
            key += '=';
            key += state;
            key += ';';
            assignment.set(name, state);
        }
        return {std::move(key), std::move(assignment)};
    }

    const CompiledDecisionProblem& problem_;
    const PreparedProblem& prepared_;
    MemoTable& memo_;
    const ExactEngine& engine_;
    int true_index_;
};

DecisionOutcome solve_prepared(const CompiledDecisionProblem& problem,
                               const PreparedProblem& prepared, MemoTable& memo,
                               const ExactEngine& engine) {
    // Surfaces impossible evidence (and dangling names) before recursing.
    engine.joint(problem.network, {}, prepared.evidence);

    StageSolver solver(problem, prepared, memo, engine);
    const auto [values, best] = solver.evaluate_and_store(prepared.first, prepared.evidence);

    const DecisionListEntry& entry = prepared.decisions[prepared.first];
    const std::vector<std::string>& alternatives = alternatives_of(problem, entry.decision);

    DecisionOutcome outcome;
    outcome.decision = entry.decision;
    outcome.chosen = alternatives[best];
    outcome.value = problem.scale * values[best] - problem.offset;
    outcome.alternatives.reserve(alternatives.size());
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
        outcome.alternatives.emplace_back(alternatives[i],
                                          problem.scale * values[i] - problem.offset);
    }
    return outcome;
}

}  // namespace

PreparedProblem prepare_decision(const CompiledDecisionProblem& problem,
                                 const Evidence& evidence, const Evidence& hypotheticals) {
    PreparedProblem prepared;
    prepared.baseline = evidence;
    prepared.first = first_remaining_decision(problem.decisions, evidence);
    prepared.decisions = problem.decisions;

    const DecisionListEntry& first = prepared.decisions[prepared.first];
    for (const auto& [name, state] : hypotheticals) {
        if (std::find(first.predecessors.begin(), first.predecessors.end(), name) ==
            first.predecessors.end()) {
            throw UsageError("hypothetical '" + name + "' is not an information predecessor of '" +
                             first.decision + "'");
        }
    }
    prepared.evidence = evidence.merged(hypotheticals);

    // The first remaining decision is made only on currently available
    // information: drop its uninstantiated chance predecessors. Later
    // stages keep theirs; the recursion sums those out.
    DecisionListEntry& adjusted = prepared.decisions[prepared.first];
    auto uninstantiated = [&](const std::string& name) {
        return !prepared.evidence.contains(name) && !is_decision_of(problem.decisions, name);
    };
    std::erase_if(adjusted.predecessors, uninstantiated);
    std::erase_if(adjusted.chance_predecessors, uninstantiated);
    return prepared;
}

DecisionOutcome solve_single(const CompiledDecisionProblem& problem, const Evidence& evidence,
                             const ExactEngine& engine) {
    const PreparedProblem prepared = prepare_decision(problem, evidence);
    if (prepared.first + 1 != static_cast<int>(prepared.decisions.size())) {
        throw UsageError("expected exactly one remaining decision, got " +
                         std::to_string(prepared.decisions.size() - prepared.first));
    }

    const DecisionListEntry& entry = prepared.decisions[prepared.first];
    const std::vector<std::string>& alternatives = alternatives_of(problem, entry.decision);
    const int true_index = value_true_index(problem);

    DecisionOutcome outcome;
    outcome.decision = entry.decision;
    std::vector<double> values;
    values.reserve(alternatives.size());
    for (const std::string& alternative : alternatives) {
        Evidence chosen = prepared.evidence;
        chosen.set(entry.decision, alternative);
        const QueryResult result = engine.query(problem.network, problem.value_node, chosen);
        values.push_back(result.distribution[true_index]);
        outcome.alternatives.emplace_back(
            alternative, problem.scale * values.back() - problem.offset);
    }
    const std::size_t best = arg_max(values);
    outcome.chosen = alternatives[best];
    outcome.value = problem.scale * values[best] - problem.offset;
    return outcome;
}

double stage_value(const CompiledDecisionProblem& problem, const PreparedProblem& prepared,
                   int stage, const Evidence& evidence, MemoTable& memo,
                   const ExactEngine& engine) {
    StageSolver solver(problem, prepared, memo, engine);
    return solver.solve_stage(stage, evidence);
}

DecisionOutcome solve(const CompiledDecisionProblem& problem, const Evidence& evidence,
                      const Evidence& hypotheticals, const ExactEngine& engine) {
    const PreparedProblem prepared = prepare_decision(problem, evidence, hypotheticals);
    MemoTable memo(prepared.baseline);
    return solve_prepared(problem, prepared, memo, engine);
}

Policy extract_policy(const CompiledDecisionProblem& problem, const Evidence& evidence,
                      const Evidence& hypotheticals, const ExactEngine& engine) {
    const PreparedProblem prepared = prepare_decision(problem, evidence, hypotheticals);
    MemoTable memo(prepared.baseline);
    solve_prepared(problem, prepared, memo, engine);

    Policy policy;
    for (int stage = prepared.first; stage < static_cast<int>(prepared.decisions.size());
         ++stage) {
        DecisionPolicy decision_policy;
        decision_policy.decision = prepared.decisions[stage].decision;
        for (const auto& [key, entry] : memo.entries()) {
            if (key.first != stage) continue;
            decision_policy.rules.push_back(
                {entry.assignment, entry.best_alternative,
                 problem.scale * entry.stage_value - problem.offset});
        }
        policy.push_back(std::move(decision_policy));
    }
    return policy;
}

Policy full_policy(const CompiledDecisionProblem& problem, const Evidence& evidence,
                   const ExactEngine& engine) {
    const PreparedProblem prepared = prepare_decision(problem, evidence);
    const DecisionListEntry& original = problem.decisions[prepared.first];

    std::vector<const ChanceNode*> unset;
    for (const std::string& name : original.chance_predecessors) {
        if (!evidence.contains(name)) {
            const ChanceNode* node = problem.network.find(name);
            if (!node) throw StructuralError("predecessor '" + name + "' is not in the network");
            unset.push_back(node);
        }
    }
    if (unset.empty()) return extract_policy(problem, evidence, {}, engine);

    std::vector<int> arities;
    arities.reserve(unset.size());
    for (const ChanceNode* node : unset) arities.push_back(static_cast<int>(node->states.size()));

    Policy merged;
    std::set<std::pair<std::string, std::string>> seen;  // (decision, key) pairs
    auto rule_key = [](const PolicyRule& rule) {
        std::string key;
        for (const auto& [name, state] : rule.given) {
            key += name;
            key += '=';
            key += state;
            key += ';';
        }
        return key;
    };

    std::vector<int> digits(unset.size(), 0);
    do {
        Evidence hypothetical;
        for (std::size_t k = 0; k < unset.size(); ++k) {
            hypothetical.set(unset[k]->name, unset[k]->states[digits[k]]);
        }
        if (!(engine.joint(problem.network, hypothetical, evidence) > 0.0)) continue;

        const Policy partial = extract_policy(problem, evidence, hypothetical, engine);
        for (const DecisionPolicy& decision_policy : partial) {
            auto it = std::find_if(merged.begin(), merged.end(), [&](const DecisionPolicy& d) {
                return d.decision == decision_policy.decision;
            });
            if (it == merged.end()) {
                merged.push_back({decision_policy.decision, {}});
                it = std::prev(merged.end());
            }
            for (const PolicyRule& rule : decision_policy.rules) {
                if (seen.insert({decision_policy.decision, rule_key(rule)}).second) {
                    it->rules.push_back(rule);
                }
            }
        }
    } while (next_config(digits, arities));
    return merged;
}

QueryCounts count_engine_queries(const CompiledDecisionProblem& problem,
                                 const Evidence& evidence, const Evidence& hypotheticals) {
    QueryCounts counts;
    const PreparedProblem prepared = prepare_decision(problem, evidence, hypotheticals);

    {
        CountingEngine counting(default_engine());
        MemoTable memo(prepared.baseline, /*enabled=*/true);
        counts.value_with_memo = solve_prepared(problem, prepared, memo, counting).value;
        counts.with_memo = counting.calls();
    }
    {
        CountingEngine counting(default_engine());
        MemoTable memo(prepared.baseline, /*enabled=*/false);
        counts.value_without_memo = solve_prepared(problem, prepared, memo, counting).value;
        counts.without_memo = counting.calls();
    }
    return counts;
}

// ---------------------------------------------------------------------------
// Decision-tree reference solver
// ---------------------------------------------------------------------------

namespace {

// Enumeration over the diagram's chance measure, with decisions treated as
// exogenous inputs read from the running assignment.
class ChanceMeasure {
public:
    explicit ChanceMeasure(const InfluenceDiagram& diagram) : diagram_(diagram) {
        for (std::size_t i = 0; i < diagram.chance.size(); ++i) {
            chance_index_.emplace(diagram.chance[i].name, static_cast<int>(i));
        }
    }

    bool is_chance(std::string_view name) const {
        return chance_index_.find(name) != chance_index_.end();
    }

    // Ancestral closure (within chance arcs) of the named chance nodes.
    std::vector<int> relevant_closure(const std::vector<std::string>& names) const {
        std::vector<bool> in(diagram_.chance.size(), false);
        std::vector<int> stack;
        for (const std::string& name : names) {
            auto it = chance_index_.find(name);
            if (it != chance_index_.end() && !in[it->second]) {
                in[it->second] = true;
                stack.push_back(it->second);
            }
        }
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (const std::string& parent : diagram_.chance[i].parents) {
                auto it = chance_index_.find(parent);
                if (it != chance_index_.end() && !in[it->second]) {
                    in[it->second] = true;
                    stack.push_back(it->second);
                }
            }
        }
        std::vector<int> closure;
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (in[i]) closure.push_back(static_cast<int>(i));
        }
        return closure;
    }

    // Sums payoff(config) weighted by the chance probability of each
    // configuration of `relevant` consistent with `assignment`; also
    // returns the total weight (the probability of the assignment's
    // restriction to `relevant`).
    template <typename Payoff>
    std::pair<double, double> weighted_sum(const std::vector<int>& relevant,
                                           const Evidence& assignment, Payoff&& payoff) const {
        std::vector<int> fixed(diagram_.chance.size(), -1);
        std::vector<int> free_vars;
        std::vector<int> free_arities;
        for (int i : relevant) {
            const ChanceNode& node = diagram_.chance[i];
            if (const std::string* state = assignment.find(node.name)) {
                int s = node.state_index(*state);
                if (s < 0) {
                    throw StructuralError("'" + *state + "' is not a state of '" + node.name +
                                          "'");
                }
                fixed[i] = s;
            } else {
                free_vars.push_back(i);
                free_arities.push_back(static_cast<int>(node.states.size()));
            }
        }

        double weighted = 0.0;
        double total = 0.0;
        std::vector<int> config(diagram_.chance.size(), -1);
        for (int i : relevant) config[i] = fixed[i];
        std::vector<int> digits(free_vars.size(), 0);
        do {
            for (std::size_t k = 0; k < free_vars.size(); ++k) config[free_vars[k]] = digits[k];
            double p = 1.0;
            for (int i : relevant) p *= cpt_entry(i, config, assignment);
            if (p > 0.0) {
                weighted += p * payoff(config);
                total += p;
            }
        } while (next_config(digits, free_arities));
        return {weighted, total};
    }

    // State label of a chance node inside a weighted_sum configuration.
    const std::string& state_label(int chance, const std::vector<int>& config) const {
        return diagram_.chance[chance].states[config[chance]];
    }

    int index_of(std::string_view name) const {
        auto it = chance_index_.find(name);
        return it == chance_index_.end() ? -1 : it->second;
    }

private:
    double cpt_entry(int node_index, const std::vector<int>& config,
                     const Evidence& assignment) const {
        const ChanceNode& node = diagram_.chance[node_index];
        std::size_t row = 0;
        for (const std::string& parent : node.parents) {
            const std::vector<std::string>* labels = diagram_.outcome_labels(parent);
            if (!labels) throw StructuralError("unknown parent '" + parent + "'");
            int state;
            if (int pc = index_of(parent); pc >= 0) {
                state = config[pc];
                if (state < 0) {
                    // Parent outside the ancestral closure cannot happen.
                    throw StructuralError("unresolved chance parent '" + parent + "'");
                }
            } else {
                const std::string* label = assignment.find(parent);
                if (!label) {
                    throw StructuralError("decision input '" + parent +
                                          "' is unassigned; evidence on descendants of "
                                          "unmade decisions is not supported");
                }
                state = static_cast<int>(
                    std::find(labels->begin(), labels->end(), *label) - labels->begin());
                if (state == static_cast<int>(labels->size())) {
                    throw StructuralError("'" + *label + "' is not an alternative of '" +
                                          parent + "'");
                }
            }
            row = row * labels->size() + static_cast<std::size_t>(state);
        }
        return node.cpt[row][config[node_index]];
    }

    const InfluenceDiagram& diagram_;
    std::map<std::string, int, std::less<>> chance_index_;
};

class TreeSolver {
public:
    TreeSolver(const InfluenceDiagram& diagram, const Evidence& evidence)
        : closed_(no_forgetting_closure(diagram)),
          list_(build_decision_list(closed_)),
          measure_(closed_),
          initial_(evidence) {
        if (closed_.values.size() != 1) {
            throw StructuralError("decision-tree solver needs exactly one value node");
        }
        first_ = first_remaining_decision(list_, evidence);
        policy_.resize(list_.size());
        check_initial_evidence();
    }

    TreeSolution run() {
        const std::vector<std::string>& alternatives = list_alternatives(first_);
        const auto [values, best] = decision_split(first_, initial_);

        TreeSolution solution;
        solution.outcome.decision = list_[first_].decision;
        solution.outcome.chosen = alternatives[best];
        solution.outcome.value = values[best];
        for (std::size_t i = 0; i < alternatives.size(); ++i) {
            solution.outcome.alternatives.emplace_back(alternatives[i], values[i]);
        }
        for (int stage = first_; stage < static_cast<int>(list_.size()); ++stage) {
            DecisionPolicy decision_policy;
            decision_policy.decision = list_[stage].decision;
            for (auto& [key, rule] : policy_[stage]) decision_policy.rules.push_back(rule);
            solution.policy.push_back(std::move(decision_policy));
        }
        return solution;
    }

private:
    void check_initial_evidence() {
        std::vector<std::string> chance_names;
        for (const auto& [name, state] : initial_) {
            if (measure_.is_chance(name)) chance_names.push_back(name);
        }
        const auto relevant = measure_.relevant_closure(chance_names);
        const double total =
            measure_.weighted_sum(relevant, initial_, [](const auto&) { return 1.0; }).second;
        if (!(total > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
    }

    const std::vector<std::string>& list_alternatives(int stage) const {
        const DecisionNode* decision = closed_.find_decision(list_[stage].decision);
        if (!decision) throw StructuralError("unknown decision '" + list_[stage].decision + "'");
        return decision->alternatives;
    }

    // Value of the subtree starting at `stage` (observation layer first,
    // except for the first remaining decision, whose uninstantiated
    // predecessors are ignored rather than observed).
    double at_stage(int stage, const Evidence& assignment) {
        if (stage == static_cast<int>(list_.size())) return expected_value(assignment);

        std::vector<std::string> unseen;
        if (stage != first_) {
            for (const std::string& name : list_[stage].chance_predecessors) {
                if (!assignment.contains(name)) unseen.push_back(name);
            }
        }
        if (unseen.empty()) {
            const auto [values, best] = decision_split(stage, assignment);
            return values[best];
        }

        // Observation layer: weight each predecessor configuration by its
        // conditional probability, then choose within it.
        std::vector<int> arity;
        std::vector<const ChanceNode*> nodes;
        for (const std::string& name : unseen) {
            const ChanceNode* node = closed_.find_chance(name);
            if (!node) throw StructuralError("unknown chance node '" + name + "'");
            nodes.push_back(node);
            arity.push_back(static_cast<int>(node->states.size()));
        }

        double total = 0.0;
        std::vector<int> digits(unseen.size(), 0);
        do {
            Evidence observed = assignment;
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                observed.set(nodes[k]->name, nodes[k]->states[digits[k]]);
            }
            const double weight = conditional_probability(observed, assignment, unseen);
            if (weight > 0.0) {
                const auto [values, best] = decision_split(stage, observed);
                total += weight * values[best];
            }
        } while (next_config(digits, arity));
        return total;
    }

    // Max layer for the stage's decision; records the policy rule.
    std::pair<std::vector<double>, std::size_t> decision_split(int stage,
                                                               const Evidence& assignment) {
        const std::vector<std::string>& alternatives = list_alternatives(stage);
        std::vector<double> values;
        values.reserve(alternatives.size());
        for (const std::string& alternative : alternatives) {
            Evidence chosen = assignment;
            chosen.set(list_[stage].decision, alternative);
            values.push_back(at_stage(stage + 1, chosen));
        }
        const std::size_t best = arg_max(values);

        std::string key;
        Evidence restricted;
        for (const std::string& name : list_[stage].predecessors) {
            if (initial_.contains(name) || !assignment.contains(name)) continue;
            key += name;
            key += '=';
            key += assignment.at(name);
            key += ';';
            restricted.set(name, assignment.at(name));
        }
        policy_[stage].insert_or_assign(key,
                                        PolicyRule{restricted, alternatives[best], values[best]});
        return {std::move(values), best};
    }

    // P(observed \ given | given) over the chance measure.
    double conditional_probability(const Evidence& observed, const Evidence& given,
                                   const std::vector<std::string>& targets) {
        std::vector<std::string> names = targets;
        for (const auto& [name, state] : given) {
            if (measure_.is_chance(name)) names.push_back(name);
        }
        const auto relevant = measure_.relevant_closure(names);
        const double joint =
            measure_.weighted_sum(relevant, observed, [](const auto&) { return 1.0; }).second;
        const double denom =
            measure_.weighted_sum(relevant, given, [](const auto&) { return 1.0; }).second;
        if (!(denom > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
        return joint / denom;
    }

    // E[v | assignment]; all decisions are assigned at this point.
    double expected_value(const Evidence& assignment) {
        const ValueNode& value = closed_.values.front();
        std::vector<std::string> names;
        for (const std::string& parent : value.parents) {
            if (measure_.is_chance(parent)) names.push_back(parent);
        }
        for (const auto& [name, state] : assignment) {
            if (measure_.is_chance(name)) names.push_back(name);
        }
        const auto relevant = measure_.relevant_closure(names);

        auto payoff = [&](const std::vector<int>& config) {
            std::size_t row = 0;
            for (const std::string& parent : value.parents) {
                const std::vector<std::string>* labels = closed_.outcome_labels(parent);
                int state;
                if (int pc = measure_.index_of(parent); pc >= 0) {
                    state = config[pc];
                } else {
                    const std::string& label = assignment.at(parent);
                    state = static_cast<int>(
                        std::find(labels->begin(), labels->end(), label) - labels->begin());
                }
                row = row * labels->size() + static_cast<std::size_t>(state);
            }
            return value.table[row];
        };
        const auto [weighted, total] = measure_.weighted_sum(relevant, assignment, payoff);
        if (!(total > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
        return weighted / total;
    }

    InfluenceDiagram closed_;
    DecisionList list_;
    ChanceMeasure measure_;
    Evidence initial_;
    int first_ = 0;
    std::vector<std::map<std::string, PolicyRule>> policy_;
};

}  // namespace

TreeSolution solve_by_decision_tree(const InfluenceDiagram& diagram, const Evidence& evidence) {
    TreeSolver solver(diagram, evidence);
    return solver.run();
}

}  // namespace decnet
