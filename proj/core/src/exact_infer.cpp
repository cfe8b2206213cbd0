#include "decnet/exact_infer.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace decnet {

namespace {

// Parent indices per node; throws on dangling references.
std::vector<std::vector<int>> resolve_parents(const BeliefNetwork& network) {
    std::vector<std::vector<int>> parents(network.size());
    for (std::size_t i = 0; i < network.size(); ++i) {
        parents[i].reserve(network.node(i).parents.size());
        for (const std::string& name : network.node(i).parents) {
            int p = network.index_of(name);
            if (p < 0) {
                throw StructuralError("unknown parent '" + name + "' of '" +
                                      network.node(i).name + "'");
            }
            parents[i].push_back(p);
        }
    }
    return parents;
}

// Evidence as a per-node state index, -1 where unobserved.
std::vector<int> resolve_assignment(const BeliefNetwork& network, const Evidence& evidence,
                                    const char* what) {
    std::vector<int> states(network.size(), -1);
    for (const auto& [name, state] : evidence) {
        int i = network.index_of(name);
        if (i < 0) {
            throw StructuralError(std::string(what) + " references unknown node '" + name + "'");
        }
        int s = network.node(i).state_index(state);
        if (s < 0) {
            throw StructuralError(std::string(what) + ": '" + state +
                                  "' is not a state of '" + name + "'");
        }
        states[i] = s;
    }
    return states;
}

int node_arity(const BeliefNetwork& network, int i) {
    return static_cast<int>(network.node(i).states.size());
}

double cpt_entry(const BeliefNetwork& network, const std::vector<std::vector<int>>& parents,
                 const std::vector<int>& assignment, int node) {
    const ChanceNode& cn = network.node(node);
    std::size_t row = 0;
    for (int p : parents[node]) {
        row = row * network.node(p).states.size() + static_cast<std::size_t>(assignment[p]);
    }
    return cn.cpt[row][assignment[node]];
}

// Nodes that survive barren pruning for the given targets/evidence.
std::vector<bool> kept_after_pruning(const BeliefNetwork& network,
                                     const std::vector<std::vector<int>>& parents,
                                     const std::vector<bool>& keep_always) {
    const std::size_t n = network.size();
    std::vector<bool> kept(n, true);
    std::vector<int> kept_children(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (int p : parents[i]) ++kept_children[p];
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (kept[i] && !keep_always[i] && kept_children[i] == 0) {
                kept[i] = false;
                changed = true;
                for (int p : parents[i]) --kept_children[p];
            }
        }
    }
    return kept;
}

}  // namespace

double QueryResult::probability_of(const ChanceNode& node, std::string_view state) const {
    int s = node.state_index(state);
    if (s < 0) {
        throw StructuralError("'" + std::string(state) + "' is not a state of '" + node.name +
                              "'");
    }
    return distribution[s];
}

Factor::Factor() : values_{1.0} {}

Factor::Factor(std::vector<int> scope, std::vector<int> arities, std::vector<double> values)
    : scope_(std::move(scope)), arities_(std::move(arities)), values_(std::move(values)) {}

bool Factor::mentions(int variable) const {
    return std::find(scope_.begin(), scope_.end(), variable) != scope_.end();
}

Factor Factor::product(const Factor& a, const Factor& b) {
    std::vector<int> scope = a.scope_;
    std::vector<int> arities = a.arities_;
    for (std::size_t i = 0; i < b.scope_.size(); ++i) {
        if (!a.mentions(b.scope_[i])) {
            scope.push_back(b.scope_[i]);
            arities.push_back(b.arities_[i]);
        }
    }

    // Positions of each operand's scope within the union scope.
    auto positions = [&](const std::vector<int>& sub) {
        std::vector<int> pos(sub.size());
        for (std::size_t i = 0; i < sub.size(); ++i) {
            pos[i] = static_cast<int>(
                std::find(scope.begin(), scope.end(), sub[i]) - scope.begin());
        }
        return pos;
    };
    const std::vector<int> a_pos = positions(a.scope_);
    const std::vector<int> b_pos = positions(b.scope_);

    std::vector<double> values(config_count(arities));
    std::vector<int> digits(scope.size(), 0);
    std::vector<int> a_digits(a.scope_.size()), b_digits(b.scope_.size());
    std::size_t flat = 0;
    do {
        for (std::size_t i = 0; i < a_pos.size(); ++i) a_digits[i] = digits[a_pos[i]];
        for (std::size_t i = 0; i < b_pos.size(); ++i) b_digits[i] = digits[b_pos[i]];
        values[flat++] = a.values_[config_index(a_digits, a.arities_)] *
                         b.values_[config_index(b_digits, b.arities_)];
    } while (next_config(digits, arities));

    return Factor(std::move(scope), std::move(arities), std::move(values));
}

Factor Factor::sum_out(int variable) const {
    auto it = std::find(scope_.begin(), scope_.end(), variable);
    if (it == scope_.end()) return *this;
    const std::size_t drop = static_cast<std::size_t>(it - scope_.begin());

    std::vector<int> scope, arities;
    for (std::size_t i = 0; i < scope_.size(); ++i) {
        if (i == drop) continue;
        scope.push_back(scope_[i]);
        arities.push_back(arities_[i]);
    }

    std::vector<double> values(config_count(arities), 0.0);
    std::vector<int> digits(scope_.size(), 0);
    std::vector<int> out_digits(scope.size());
    do {
        std::size_t k = 0;
        for (std::size_t i = 0; i < scope_.size(); ++i) {
            if (i != drop) out_digits[k++] = digits[i];
        }
        values[config_index(out_digits, arities)] += values_[config_index(digits, arities_)];
    } while (next_config(digits, arities_));

    return Factor(std::move(scope), std::move(arities), std::move(values));
}

Factor Factor::reduce(int variable, int state) const {
    auto it = std::find(scope_.begin(), scope_.end(), variable);
    if (it == scope_.end()) return *this;
    const std::size_t drop = static_cast<std::size_t>(it - scope_.begin());

    std::vector<int> scope, arities;
    for (std::size_t i = 0; i < scope_.size(); ++i) {
        if (i == drop) continue;
        scope.push_back(scope_[i]);
        arities.push_back(arities_[i]);
    }

    std::vector<double> values(config_count(arities));
    std::vector<int> digits(scope_.size(), 0);
    digits[drop] = state;
    std::vector<int> out_digits(scope.size(), 0);
    std::size_t flat = 0;
    // Walk the sliced configurations in output order.
    do {
        std::size_t k = 0;
        for (std::size_t i = 0; i < scope_.size(); ++i) {
            if (i != drop) digits[i] = out_digits[k++];
        }
        values[flat++] = values_[config_index(digits, arities_)];
    } while (next_config(out_digits, arities));

    return Factor(std::move(scope), std::move(arities), std::move(values));
}

double Factor::total() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return sum;
}

namespace {

// Greedy min-fill over the interaction graph of the factor scopes; ties by
// smallest node index, i.e. declaration order.
std::vector<int> min_fill_order(const std::vector<Factor>& factors,
                                const std::set<int>& to_eliminate) {
    std::map<int, std::set<int>> adj;
    for (const Factor& f : factors) {
        const std::vector<int>& scope = f.scope();
        for (int u : scope) adj[u];
        for (std::size_t i = 0; i < scope.size(); ++i) {
            for (std::size_t j = i + 1; j < scope.size(); ++j) {
                adj[scope[i]].insert(scope[j]);
                adj[scope[j]].insert(scope[i]);
            }
        }
    }

    std::set<int> remaining = to_eliminate;
    std::vector<int> order;
    order.reserve(remaining.size());
    while (!remaining.empty()) {
        int best = -1;
        long best_fill = std::numeric_limits<long>::max();
        for (int v : remaining) {
            const std::set<int>& nb = adj[v];
            long fill = 0;
            for (auto i = nb.begin(); i != nb.end(); ++i) {
                for (auto j = std::next(i); j != nb.end(); ++j) {
                    if (!adj[*i].count(*j)) ++fill;
                }
            }
            if (fill < best_fill) {
                best_fill = fill;
                best = v;
            }
        }
        order.push_back(best);
        remaining.erase(best);
        std::set<int> nb = adj[best];
        for (int u : nb) {
            adj[u].erase(best);
            for (int w : nb) {
                if (u != w) adj[u].insert(w);
            }
        }
        adj.erase(best);
    }
    return order;
}

// Unnormalized joint factor over `targets` with the evidence absorbed:
// entry(config) = P(targets = config, E). Targets must be evidence-free.
Factor eliminate_to(const BeliefNetwork& network, const std::vector<int>& targets,
                    const std::vector<int>& evidence_states) {
    const auto parents = resolve_parents(network);

    std::vector<bool> keep_always(network.size(), false);
    for (int t : targets) keep_always[t] = true;
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (evidence_states[i] >= 0) keep_always[i] = true;
    }
    const std::vector<bool> kept = kept_after_pruning(network, parents, keep_always);

    std::vector<Factor> factors;
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (!kept[i]) continue;
        std::vector<int> scope = parents[i];
        scope.push_back(static_cast<int>(i));
        std::vector<int> arities;
        arities.reserve(scope.size());
        for (int v : scope) arities.push_back(node_arity(network, v));
        std::vector<double> values;
        values.reserve(config_count(arities));
        for (const std::vector<double>& row : network.node(i).cpt) {
            values.insert(values.end(), row.begin(), row.end());
        }
        Factor f(std::move(scope), std::move(arities), std::move(values));
        std::vector<int> observed;
        for (int v : f.scope()) {
            if (evidence_states[v] >= 0) observed.push_back(v);
        }
        for (int v : observed) f = f.reduce(v, evidence_states[v]);
        factors.push_back(std::move(f));
    }

    std::set<int> to_eliminate;
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (kept[i] && evidence_states[i] < 0 &&
            std::find(targets.begin(), targets.end(), static_cast<int>(i)) == targets.end()) {
            to_eliminate.insert(static_cast<int>(i));
        }
    }

    for (int v : min_fill_order(factors, to_eliminate)) {
        Factor combined;
        std::vector<Factor> rest;
        rest.reserve(factors.size());
        for (Factor& f : factors) {
            if (f.mentions(v)) {
                combined = Factor::product(combined, f);
            } else {
                rest.push_back(std::move(f));
            }
        }
        rest.push_back(combined.sum_out(v));
        factors = std::move(rest);
    }

    Factor result;
    for (const Factor& f : factors) result = Factor::product(result, f);
    return result;
}

// Reads P(config | E) off a joint factor; throws when P(E) = 0.
double factor_conditional(const Factor& joint, const std::vector<int>& targets,
                          const std::vector<int>& target_states) {
    const double total = joint.total();
    if (!(total > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
    std::vector<int> digits(joint.scope().size(), 0);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        auto it = std::find(joint.scope().begin(), joint.scope().end(), targets[i]);
        digits[it - joint.scope().begin()] = target_states[i];
    }
    return joint.values()[config_index(digits, joint.arities())] / total;
}

int require_target(const BeliefNetwork& network, const std::string& target,
                   const std::vector<int>& evidence_states) {
    int t = network.index_of(target);
    if (t < 0) throw StructuralError("unknown query target '" + target + "'");
    if (evidence_states[t] >= 0) {
        throw UsageError("query target '" + target + "' is fixed by the evidence");
    }
    return t;
}

}  // namespace

QueryResult query_enumeration(const BeliefNetwork& network, const std::string& target,
                              const Evidence& evidence) {
    const auto evidence_states = resolve_assignment(network, evidence, "evidence");
    const int t = require_target(network, target, evidence_states);
    const auto parents = resolve_parents(network);

    std::vector<int> free_vars;
    std::vector<int> free_arities;
    std::vector<int> assignment(network.size(), 0);
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (evidence_states[i] >= 0) {
            assignment[i] = evidence_states[i];
        } else {
            free_vars.push_back(static_cast<int>(i));
            free_arities.push_back(node_arity(network, static_cast<int>(i)));
        }
    }

    QueryResult result;
    result.distribution.assign(network.node(t).states.size(), 0.0);
    double total = 0.0;
    std::vector<int> digits(free_vars.size(), 0);
    do {
        for (std::size_t k = 0; k < free_vars.size(); ++k) assignment[free_vars[k]] = digits[k];
        double p = 1.0;
        for (std::size_t i = 0; i < network.size(); ++i) {
            p *= cpt_entry(network, parents, assignment, static_cast<int>(i));
        }
        result.distribution[assignment[t]] += p;
        total += p;
    } while (next_config(digits, free_arities));

    if (!(total > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
    for (double& p : result.distribution) p /= total;
    result.evidence_probability = total;
    return result;
}

QueryResult query_ve(const BeliefNetwork& network, const std::string& target,
                     const Evidence& evidence) {
    const auto evidence_states = resolve_assignment(network, evidence, "evidence");
    const int t = require_target(network, target, evidence_states);

    const Factor joint = eliminate_to(network, {t}, evidence_states);
    const double total = joint.total();
    if (!(total > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");

    QueryResult result;
    const int arity = node_arity(network, t);
    result.distribution.assign(arity, 0.0);
    for (int s = 0; s < arity; ++s) {
        result.distribution[s] =
            factor_conditional(joint, {t}, {s});
    }
    result.evidence_probability = total;
    return result;
}

double joint_probability(const BeliefNetwork& network, const Evidence& config,
                         const Evidence& evidence) {
    const auto evidence_states = resolve_assignment(network, evidence, "evidence");
    const auto config_states = resolve_assignment(network, config, "configuration");

    std::vector<int> targets;
    std::vector<int> target_states;
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (config_states[i] < 0) continue;
        if (evidence_states[i] >= 0) {
            throw UsageError("configuration overlaps evidence at '" + network.node(i).name + "'");
        }
        targets.push_back(static_cast<int>(i));
        target_states.push_back(config_states[i]);
    }

    const Factor joint = eliminate_to(network, targets, evidence_states);
    return factor_conditional(joint, targets, target_states);
}

double joint_probability_enumeration(const BeliefNetwork& network, const Evidence& config,
                                     const Evidence& evidence) {
    const double p_evidence = evidence_probability(network, evidence);
    if (!(p_evidence > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
    const Evidence both = evidence.merged(config);
    if (both.size() != evidence.size() + config.size()) {
        throw UsageError("configuration overlaps evidence");
    }
    return evidence_probability(network, both) / p_evidence;
}

double evidence_probability(const BeliefNetwork& network, const Evidence& evidence) {
    const auto evidence_states = resolve_assignment(network, evidence, "evidence");
    const auto parents = resolve_parents(network);

    std::vector<int> free_vars;
    std::vector<int> free_arities;
    std::vector<int> assignment(network.size(), 0);
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (evidence_states[i] >= 0) {
            assignment[i] = evidence_states[i];
        } else {
            free_vars.push_back(static_cast<int>(i));
            free_arities.push_back(node_arity(network, static_cast<int>(i)));
        }
    }

    double total = 0.0;
    std::vector<int> digits(free_vars.size(), 0);
    do {
        for (std::size_t k = 0; k < free_vars.size(); ++k) assignment[free_vars[k]] = digits[k];
        double p = 1.0;
        for (std::size_t i = 0; i < network.size(); ++i) {
            p *= cpt_entry(network, parents, assignment, static_cast<int>(i));
        }
        total += p;
    } while (next_config(digits, free_arities));
    return total;
}

BeliefNetwork prune_barren(const BeliefNetwork& network, const std::vector<std::string>& targets,
                           const Evidence& evidence) {
    const auto parents = resolve_parents(network);
    std::vector<bool> keep_always(network.size(), false);
    for (const std::string& name : targets) {
        int i = network.index_of(name);
        if (i < 0) throw StructuralError("unknown target '" + name + "'");
        keep_always[i] = true;
    }
    for (const auto& [name, state] : evidence) {
        int i = network.index_of(name);
        if (i < 0) throw StructuralError("evidence references unknown node '" + name + "'");
        keep_always[i] = true;
    }

    const std::vector<bool> kept = kept_after_pruning(network, parents, keep_always);
    std::vector<ChanceNode> nodes;
    for (std::size_t i = 0; i < network.size(); ++i) {
        if (kept[i]) nodes.push_back(network.node(i));
    }
    return BeliefNetwork(std::move(nodes));
}

}  // namespace decnet
