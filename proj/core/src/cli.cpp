#include "decnet/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "decnet/approx_infer.hpp"
#include "decnet/decide.hpp"
#include "decnet/errors.hpp"
#include "decnet/exact_infer.hpp"
#include "decnet/model.hpp"
#include "decnet/text_format.hpp"
#include "decnet/transform.hpp"

namespace decnet {

namespace {

using nlohmann::json;

// Result numbers print at six decimal places; the JSON mirror carries the
// same rounded values so both outputs agree digit for digit.
std::string fixed6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    return buffer;
}

double round6(double value) { return std::strtod(fixed6(value).c_str(), nullptr); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::pair<std::string, std::string> split_binding(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw UsageError("expected Name=state, got '" + text + "'");
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}

Evidence gather_evidence(const std::vector<std::string>& bindings,
                         const std::string& evidence_file) {
    Evidence evidence;
    if (!evidence_file.empty()) {
        evidence = parse_evidence_text(read_file(evidence_file));
    }
    for (const std::string& text : bindings) {
        const auto [name, state] = split_binding(text);
        if (evidence.contains(name)) {
            throw UsageError("node '" + name + "' is bound more than once");
        }
        evidence.set(name, state);
    }
    return evidence;
}

Document load_document(const std::string& path, double tolerance) {
    Document document = parse_document(read_file(path));
    const ValidationReport report = document.is_diagram
                                        ? validate_id(document.diagram, tolerance)
                                        : validate_bn(document.network, tolerance);
    if (!report.ok()) {
        throw StructuralError("'" + path + "' failed validation:\n" + report.to_string());
    }
    return document;
}

const BeliefNetwork& require_network(const Document& document, const char* subcommand) {
    if (document.is_diagram) {
        throw UsageError(std::string(subcommand) +
                         " expects a belief network; run `transform` on the diagram first");
    }
    return document.network;
}

const InfluenceDiagram& require_diagram(const Document& document, const char* subcommand) {
    if (!document.is_diagram) {
        throw UsageError(std::string(subcommand) + " expects an influence diagram");
    }
    return document.diagram;
}

std::string policy_key_text(const Evidence& given) {
    if (given.empty()) return "()";
    std::string text;
    for (const auto& [name, state] : given) {
        if (!text.empty()) text += ", ";
        text += name + "=" + state;
    }
    return text;
}

json policy_to_json(const Policy& policy) {
    json decisions = json::array();
    for (const DecisionPolicy& decision_policy : policy) {
        json rules = json::array();
        for (const PolicyRule& rule : decision_policy.rules) {
            json given = json::object();
            for (const auto& [name, state] : rule.given) given[name] = state;
            rules.push_back({{"given", given},
                             {"alternative", rule.alternative},
                             {"mev", round6(rule.value)}});
        }
        decisions.push_back({{"decision", decision_policy.decision}, {"rules", rules}});
    }
    return json{{"decisions", decisions}};
}

void print_policy(std::ostream& out, const Policy& policy) {
    for (const DecisionPolicy& decision_policy : policy) {
        out << "decision " << decision_policy.decision << ":\n";
        for (const PolicyRule& rule : decision_policy.rules) {
            out << "  " << policy_key_text(rule.given) << " -> " << rule.alternative
                << "  (MEV = " << fixed6(rule.value) << ")\n";
        }
    }
}

void print_outcome(std::ostream& out, const DecisionOutcome& outcome) {
    out << "decision " << outcome.decision << " = " << outcome.chosen
        << ", MEV = " << fixed6(outcome.value) << "\n";
    for (const auto& [alternative, value] : outcome.alternatives) {
        out << "  " << alternative << ": " << fixed6(value) << "\n";
    }
}

json outcome_to_json(const DecisionOutcome& outcome) {
    json alternatives = json::array();
    for (const auto& [alternative, value] : outcome.alternatives) {
        alternatives.push_back({{"alternative", alternative}, {"mev", round6(value)}});
    }
    return json{{"decision", outcome.decision},
                {"chosen", outcome.chosen},
                {"mev", round6(outcome.value)},
                {"alternatives", alternatives}};
}

struct CommandContext {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    int exit_code = 0;
};

// --- subcommand bodies -----------------------------------------------------

struct ValidateOptions {
    std::string file;
    double tolerance = kRowSumTolerance;
    bool json_output = false;
};

void run_validate(const ValidateOptions& options, CommandContext& ctx) {
    const Document document = [&] {
        return parse_document(read_file(options.file));
    }();
    const ValidationReport report = document.is_diagram
                                        ? validate_id(document.diagram, options.tolerance)
                                        : validate_bn(document.network, options.tolerance);
    if (options.json_output) {
        json violations = json::array();
        for (const Violation& v : report.violations) {
            violations.push_back({{"node", v.node}, {"rule", v.rule}, {"detail", v.detail}});
        }
        ctx.out << json{{"ok", report.ok()}, {"violations", violations}}.dump(2) << "\n";
    } else {
        ctx.out << report.to_string();
        if (report.ok()) ctx.out << "\n";
    }
    ctx.exit_code = report.ok() ? 0 : 2;
}

struct InferOptions {
    std::string file;
    std::string target;
    std::vector<std::string> evidence;
    std::string evidence_file;
    std::string engine = "ve";
    double tolerance = kRowSumTolerance;
    bool json_output = false;
};

void run_infer(const InferOptions& options, CommandContext& ctx) {
    const Document document = load_document(options.file, options.tolerance);
    const BeliefNetwork& network = require_network(document, "infer");
    const Evidence evidence = gather_evidence(options.evidence, options.evidence_file);

    std::string target = options.target;
    std::string state;
    if (const auto eq = target.find('='); eq != std::string::npos) {
        state = target.substr(eq + 1);
        target.resize(eq);
    }

    const QueryResult result = options.engine == "enum"
                                   ? query_enumeration(network, target, evidence)
                                   : query_ve(network, target, evidence);
    const ChanceNode* node = network.find(target);

    if (options.json_output) {
        json posterior = json::object();
        for (std::size_t s = 0; s < node->states.size(); ++s) {
            posterior[node->states[s]] = round6(result.distribution[s]);
        }
        json output{{"target", target},
                    {"posterior", posterior},
                    {"evidence_probability", round6(result.evidence_probability)}};
        if (!state.empty()) {
            output["state"] = state;
            output["probability"] = round6(result.probability_of(*node, state));
        }
        ctx.out << output.dump(2) << "\n";
        return;
    }
    if (!state.empty()) {
        ctx.out << fixed6(result.probability_of(*node, state)) << "\n";
    } else {
        for (std::size_t s = 0; s < node->states.size(); ++s) {
            ctx.out << node->states[s] << ": " << fixed6(result.distribution[s]) << "\n";
        }
    }
}

struct TransformOptions {
    std::string file;
    std::string output_file;
    double tolerance = kRowSumTolerance;
    bool json_output = false;
};

void run_transform(const TransformOptions& options, CommandContext& ctx) {
    const Document document = load_document(options.file, options.tolerance);
    const InfluenceDiagram& diagram = require_diagram(document, "transform");
    const CompiledDecisionProblem problem = compile(diagram);

    const std::string network_text = serialize_document(problem.network, document.name);
    const std::string summary = "k1 = " + format_real(problem.scale) +
                                ", k2 = " + format_real(problem.offset) +
                                ", L = " + to_string(problem.decisions);
    if (!options.output_file.empty()) {
        std::ofstream out(options.output_file, std::ios::binary);
        if (!out) throw UsageError("cannot write '" + options.output_file + "'");
        out << network_text;
    }
    if (options.json_output) {
        ctx.out << json{{"k1", problem.scale},
                        {"k2", problem.offset},
                        {"L", to_string(problem.decisions)},
                        {"network", network_text}}
                       .dump(2)
                << "\n";
    } else {
        ctx.out << network_text << summary << "\n";
    }
}

struct SolveOptions {
    std::string file;
    std::vector<std::string> evidence;
    std::string evidence_file;
    std::vector<std::string> hypotheticals;
    double tolerance = kRowSumTolerance;
    bool json_output = false;
};

void run_solve(const SolveOptions& options, CommandContext& ctx) {
    const Document document = load_document(options.file, options.tolerance);
    const InfluenceDiagram& diagram = require_diagram(document, "solve");
    const CompiledDecisionProblem problem = compile(diagram);
    const Evidence evidence = gather_evidence(options.evidence, options.evidence_file);
    Evidence hypotheticals;
    for (const std::string& text : options.hypotheticals) {
        const auto [name, state] = split_binding(text);
        if (hypotheticals.contains(name)) {
            throw UsageError("node '" + name + "' is bound more than once");
        }
        hypotheticals.set(name, state);
    }

    const DecisionOutcome outcome = solve(problem, evidence, hypotheticals);
    if (options.json_output) {
        ctx.out << outcome_to_json(outcome).dump(2) << "\n";
    } else {
        print_outcome(ctx.out, outcome);
    }
}

struct PolicyOptions {
    std::string file;
    std::vector<std::string> evidence;
    std::string evidence_file;
    double tolerance = kRowSumTolerance;
    bool json_output = false;
};

void run_policy(const PolicyOptions& options, CommandContext& ctx) {
    const Document document = load_document(options.file, options.tolerance);
    const InfluenceDiagram& diagram = require_diagram(document, "policy");
    const CompiledDecisionProblem problem = compile(diagram);
    const Evidence evidence = gather_evidence(options.evidence, options.evidence_file);

    const Policy policy = full_policy(problem, evidence);
    if (options.json_output) {
        ctx.out << policy_to_json(policy).dump(2) << "\n";
    } else {
        print_policy(ctx.out, policy);
    }
}

struct SampleOptions {
    std::string file;
    std::string target;
    std::vector<std::string> evidence;
    std::string evidence_file;
    std::int64_t draws = 10000;
    std::uint64_t seed = 0;
    double tolerance = kRowSumTolerance;
    bool json_output = false;
};

void run_sample(const SampleOptions& options, CommandContext& ctx) {
    const Document document = load_document(options.file, options.tolerance);
    const BeliefNetwork& network = require_network(document, "sample");
    const Evidence evidence = gather_evidence(options.evidence, options.evidence_file);
    const auto [target, state] = split_binding(options.target);

    const EstimateWithSE estimate =
        logic_sample(network, target, state, evidence, options.draws, options.seed);
    if (options.json_output) {
        ctx.out << json{{"target", target},
                        {"state", state},
                        {"estimate", round6(estimate.estimate)},
                        {"standard_error", round6(estimate.standard_error)},
                        {"drawn", estimate.drawn},
                        {"accepted", estimate.accepted},
                        {"seed", estimate.seed}}
                       .dump(2)
                << "\n";
    } else {
        ctx.out << "estimate = " << fixed6(estimate.estimate)
                << ", se = " << fixed6(estimate.standard_error) << ", drawn = " << estimate.drawn
                << ", accepted = " << estimate.accepted << ", seed = " << estimate.seed << "\n";
    }
}

struct SampleSolveCliOptions {
    std::string file;
    std::vector<std::string> evidence;
    std::string evidence_file;
    SampleSolveOptions sampling;
    double tolerance = kRowSumTolerance;
    bool json_output = false;
};

void run_sample_solve(const SampleSolveCliOptions& options, CommandContext& ctx) {
    const Document document = load_document(options.file, options.tolerance);
    const InfluenceDiagram& diagram = require_diagram(document, "sample-solve");
    const CompiledDecisionProblem problem = compile(diagram);
    const Evidence evidence = gather_evidence(options.evidence, options.evidence_file);

    const SampleDecision decision = sample_solve(problem, evidence, options.sampling);
    auto mev_of = [&](const EstimateWithSE& e) { return problem.scale * e.estimate - problem.offset; };
    auto mev_se_of = [&](const EstimateWithSE& e) { return problem.scale * e.standard_error; };

    const EstimateWithSE* chosen = nullptr;
    for (const auto& [alternative, estimate] : decision.per_alternative) {
        if (alternative == decision.chosen) chosen = &estimate;
    }

    if (options.json_output) {
        json alternatives = json::array();
        for (const auto& [alternative, estimate] : decision.per_alternative) {
            alternatives.push_back({{"alternative", alternative},
                                    {"estimate", round6(estimate.estimate)},
                                    {"standard_error", round6(estimate.standard_error)},
                                    {"mev", round6(mev_of(estimate))},
                                    {"mev_standard_error", round6(mev_se_of(estimate))},
                                    {"drawn", estimate.drawn},
                                    {"accepted", estimate.accepted},
                                    {"seed", estimate.seed}});
        }
        ctx.out << json{{"decision", decision.decision},
                        {"chosen", decision.chosen},
                        {"mev", round6(mev_of(*chosen))},
                        {"separated", decision.separated},
                        {"alternatives", alternatives}}
                       .dump(2)
                << "\n";
    } else {
        ctx.out << "decision " << decision.decision << " = " << decision.chosen
                << ", MEV = " << fixed6(mev_of(*chosen)) << " +/- " << fixed6(mev_se_of(*chosen))
                << ", separated = " << (decision.separated ? "true" : "false") << "\n";
        for (const auto& [alternative, estimate] : decision.per_alternative) {
            ctx.out << "  " << alternative << ": estimate = " << fixed6(estimate.estimate)
                    << ", se = " << fixed6(estimate.standard_error)
                    << ", MEV = " << fixed6(mev_of(estimate)) << ", drawn = " << estimate.drawn
                    << ", accepted = " << estimate.accepted << "\n";
        }
    }
    if (!decision.separated) ctx.exit_code = 4;
}

struct SessionOptions {
    std::string file;
    double tolerance = kRowSumTolerance;
};

void run_session(const SessionOptions& options, CommandContext& ctx) {
    const Document document = load_document(options.file, options.tolerance);
    const InfluenceDiagram& diagram = require_diagram(document, "session");
    const CompiledDecisionProblem problem = compile(diagram);

    Evidence evidence;
    auto remaining = [&]() {
        std::vector<std::string> names;
        for (const DecisionListEntry& entry : problem.decisions) {
            if (!evidence.contains(entry.decision)) names.push_back(entry.decision);
        }
        return names;
    };

    std::string line;
    while (ctx.out << "> " << std::flush, std::getline(ctx.in, line)) {
        std::istringstream words(line);
        std::string command;
        words >> command;
        if (command.empty()) continue;
        try {
            if (command == "quit") {
                break;
            } else if (command == "show") {
                ctx.out << "evidence:\n";
                if (evidence.empty()) ctx.out << "  (none)\n";
                for (const auto& [name, state] : evidence) {
                    ctx.out << "  " << name << " = " << state << "\n";
                }
                const auto names = remaining();
                ctx.out << "remaining decisions:";
                if (names.empty()) ctx.out << " (none)";
                for (const std::string& name : names) ctx.out << " " << name;
                ctx.out << "\n";
            } else if (command == "set") {
                std::string binding;
                words >> binding;
                const auto [name, state] = split_binding(binding);
                if (problem.network.index_of(name) < 0) {
                    throw UsageError("unknown node '" + name + "'");
                }
                const bool is_decision =
                    std::any_of(problem.decisions.begin(), problem.decisions.end(),
                                [&](const DecisionListEntry& e) { return e.decision == name; });
                if (is_decision) {
                    throw UsageError("'" + name + "' is a decision; use `commit`");
                }
                if (evidence.contains(name)) {
                    throw UsageError("node '" + name + "' is bound more than once");
                }
                if (problem.network.find(name)->state_index(state) < 0) {
                    throw UsageError("'" + state + "' is not a state of '" + name + "'");
                }
                evidence.set(name, state);
                ctx.out << name << " = " << state << "\n";
            } else if (command == "unset") {
                std::string name;
                words >> name;
                if (!evidence.contains(name)) {
                    throw UsageError("node '" + name + "' is not bound");
                }
                evidence.erase(name);
                ctx.out << "unset " << name << "\n";
            } else if (command == "solve") {
                print_outcome(ctx.out, solve(problem, evidence));
            } else if (command == "policy") {
                print_policy(ctx.out, full_policy(problem, evidence));
            } else if (command == "commit") {
                std::string alternative;
                words >> alternative;
                const auto names = remaining();
                if (names.empty()) throw UsageError("no remaining decision");
                const std::string& decision = names.front();
                const ChanceNode* node = problem.network.find(decision);
                if (node->state_index(alternative) < 0) {
                    throw UsageError("'" + alternative + "' is not an alternative of '" +
                                     decision + "'");
                }
                evidence.set(decision, alternative);
                ctx.out << "committed " << decision << " = " << alternative << "\n";
            } else {
                throw UsageError("unknown command '" + command + "'");
            }
        } catch (const std::exception& e) {
            ctx.out << "error: " << e.what() << "\n";
        }
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"decision-network toolkit: compile influence diagrams into belief "
                 "networks and solve them exactly or by sampling",
                 "decnet"};
    app.require_subcommand(1);

    CommandContext ctx{in, out, err};

    ValidateOptions validate_options;
    CLI::App* validate = app.add_subcommand("validate", "check a document's invariants");
    validate->add_option("file", validate_options.file, "document to check")->required();
    validate->add_option("--row-sum-tolerance", validate_options.tolerance,
                         "CPT row-sum tolerance");
    validate->add_flag("--json", validate_options.json_output, "machine-readable output");

    InferOptions infer_options;
    CLI::App* infer = app.add_subcommand("infer", "posterior query on a belief network");
    infer->add_option("file", infer_options.file, "network document")->required();
    infer->add_option("--target", infer_options.target, "Name or Name=state")->required();
    infer->add_option("--evidence", infer_options.evidence, "Name=state (repeatable)");
    infer->add_option("--evidence-file", infer_options.evidence_file,
                      "file with one Name = state per line");
    infer->add_option("--engine", infer_options.engine, "ve or enum")
        ->check(CLI::IsMember({"ve", "enum"}));
    infer->add_option("--row-sum-tolerance", infer_options.tolerance, "CPT row-sum tolerance");
    infer->add_flag("--json", infer_options.json_output, "machine-readable output");

    TransformOptions transform_options;
    CLI::App* transform =
        app.add_subcommand("transform", "compile an influence diagram into a belief network");
    transform->add_option("file", transform_options.file, "diagram document")->required();
    transform->add_option("-o,--output", transform_options.output_file,
                          "also write the network to a file");
    transform->add_option("--row-sum-tolerance", transform_options.tolerance,
                          "CPT row-sum tolerance");
    transform->add_flag("--json", transform_options.json_output, "machine-readable output");

    SolveOptions solve_options;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "maximum-expected-value solve of the first decision");
    solve_cmd->add_option("file", solve_options.file, "diagram document")->required();
    solve_cmd->add_option("--evidence", solve_options.evidence, "Name=state (repeatable)");
    solve_cmd->add_option("--evidence-file", solve_options.evidence_file,
                          "file with one Name = state per line");
    solve_cmd->add_option("--hypothetical", solve_options.hypotheticals,
                          "Name=state hypothetical instantiation (repeatable)");
    solve_cmd->add_option("--row-sum-tolerance", solve_options.tolerance,
                          "CPT row-sum tolerance");
    solve_cmd->add_flag("--json", solve_options.json_output, "machine-readable output");

    PolicyOptions policy_options;
    CLI::App* policy_cmd =
        app.add_subcommand("policy", "full contingent policy for the remaining decisions");
    policy_cmd->add_option("file", policy_options.file, "diagram document")->required();
    policy_cmd->add_option("--evidence", policy_options.evidence, "Name=state (repeatable)");
    policy_cmd->add_option("--evidence-file", policy_options.evidence_file,
                           "file with one Name = state per line");
    policy_cmd->add_option("--row-sum-tolerance", policy_options.tolerance,
                           "CPT row-sum tolerance");
    policy_cmd->add_flag("--json", policy_options.json_output, "machine-readable output");

    SampleOptions sample_options;
    CLI::App* sample = app.add_subcommand("sample", "logic-sampling estimate on a network");
    sample->add_option("file", sample_options.file, "network document")->required();
    sample->add_option("--target", sample_options.target, "Name=state")->required();
    sample->add_option("--evidence", sample_options.evidence, "Name=state (repeatable)");
    sample->add_option("--evidence-file", sample_options.evidence_file,
                       "file with one Name = state per line");
    sample->add_option("-n,--samples", sample_options.draws, "forward draws")
        ->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_options.seed, "RNG seed (default 0)");
    sample->add_option("--row-sum-tolerance", sample_options.tolerance,
                       "CPT row-sum tolerance");
    sample->add_flag("--json", sample_options.json_output, "machine-readable output");

    SampleSolveCliOptions sample_solve_options;
    CLI::App* sample_solve_cmd = app.add_subcommand(
        "sample-solve", "sampling-based solve of a single remaining decision");
    sample_solve_cmd->add_option("file", sample_solve_options.file, "diagram document")
        ->required();
    sample_solve_cmd->add_option("--evidence", sample_solve_options.evidence,
                                 "Name=state (repeatable)");
    sample_solve_cmd->add_option("--evidence-file", sample_solve_options.evidence_file,
                                 "file with one Name = state per line");
    sample_solve_cmd->add_option("--batch", sample_solve_options.sampling.batch,
                                 "draws per alternative per round");
    sample_solve_cmd->add_option("--max-samples", sample_solve_options.sampling.max_samples,
                                 "per-alternative draw budget");
    sample_solve_cmd->add_option("--confidence", sample_solve_options.sampling.confidence,
                                 "confidence level for the stopping rule");
    sample_solve_cmd->add_option("--seed", sample_solve_options.sampling.seed,
                                 "RNG seed (default 0)");
    sample_solve_cmd->add_option("--row-sum-tolerance", sample_solve_options.tolerance,
                                 "CPT row-sum tolerance");
    sample_solve_cmd->add_flag("--json", sample_solve_options.json_output,
                               "machine-readable output");

    SessionOptions session_options;
    CLI::App* session = app.add_subcommand("session", "interactive sequential-decision session");
    session->add_option("file", session_options.file, "diagram document")->required();
    session->add_option("--row-sum-tolerance", session_options.tolerance,
                        "CPT row-sum tolerance");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));

        if (validate->parsed()) run_validate(validate_options, ctx);
        if (infer->parsed()) run_infer(infer_options, ctx);
        if (transform->parsed()) run_transform(transform_options, ctx);
        if (solve_cmd->parsed()) run_solve(solve_options, ctx);
        if (policy_cmd->parsed()) run_policy(policy_options, ctx);
        if (sample->parsed()) run_sample(sample_options, ctx);
        if (sample_solve_cmd->parsed()) run_sample_solve(sample_solve_options, ctx);
        if (session->parsed()) run_session(session_options, ctx);
        return ctx.exit_code;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ImpossibleEvidenceError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const NoAcceptedSamplesError& e) {
        err << "error: " << e.what() << " (drawn " << e.drawn() << ")\n";
        return 4;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace decnet
