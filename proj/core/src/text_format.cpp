#include "decnet/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace decnet {

namespace {

// ---------------------------------------------------------------------------
// Lexing
// ---------------------------------------------------------------------------

struct Token {
    enum class Kind { Ident, Number, LBrace, RBrace, Colon, Comma, Semi, Arrow, End };
    Kind kind = Kind::End;
    std::string text;
    double number = 0.0;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& source) : source_(source) {}

    Token next() {
        skip_blank();
        Token token;
        token.line = line_;
        token.column = column_;
        if (at_end()) return token;

        const char c = peek();
        if (c == '{') return punct(token, Token::Kind::LBrace);
        if (c == '}') return punct(token, Token::Kind::RBrace);
        if (c == ':') return punct(token, Token::Kind::Colon);
        if (c == ',') return punct(token, Token::Kind::Comma);
        if (c == ';') return punct(token, Token::Kind::Semi);
        if (c == '-' && pos_ + 1 < source_.size() && source_[pos_ + 1] == '>') {
            advance();
            advance();
            token.kind = Token::Kind::Arrow;
            return token;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            token.kind = Token::Kind::Ident;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                                 peek() == '_')) {
                token.text += peek();
                advance();
            }
            return token;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
            token.kind = Token::Kind::Number;
            std::string text;
            if (peek() == '-' || peek() == '+') {
                text += peek();
                advance();
            }
            bool digits = false;
            while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                                 peek() == '.')) {
                digits = digits || std::isdigit(static_cast<unsigned char>(peek()));
                text += peek();
                advance();
            }
            if (!at_end() && (peek() == 'e' || peek() == 'E')) {
                text += peek();
                advance();
                if (!at_end() && (peek() == '-' || peek() == '+')) {
                    text += peek();
                    advance();
                }
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
                    text += peek();
                    advance();
                }
            }
            char* end = nullptr;
            token.number = std::strtod(text.c_str(), &end);
            if (!digits || end == text.c_str() || *end != '\0') {
                throw ParseError("malformed number '" + text + "'", token.line, token.column);
            }
            token.text = std::move(text);
            return token;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
    }

private:
    bool at_end() const { return pos_ >= source_.size(); }
    char peek() const { return source_[pos_]; }
    void advance() {
        if (source_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }
    void skip_blank() {
        while (!at_end()) {
            if (std::isspace(static_cast<unsigned char>(peek()))) {
                advance();
            } else if (peek() == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }
    Token punct(Token token, Token::Kind kind) {
        advance();
        token.kind = kind;
        return token;
    }

    const std::string& source_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct RawRow {
    std::vector<std::string> lhs;
    std::vector<double> rhs;
    int line = 0;
    int column = 0;
};

struct RawNode {
    NodeKind kind = NodeKind::Chance;
    std::string name;
    std::vector<std::string> labels;   // states or alternatives
    std::vector<std::string> parents;  // parents or observes
    std::vector<RawRow> rows;
    int line = 0;
    int column = 0;
};

class Parser {
public:
    explicit Parser(const std::string& source) : lexer_(source) { advance(); }

    Document parse() {
        expect_keyword("network");
        Document document;
        document.name = expect_ident("network name");

        std::vector<RawNode> raw;
        while (current_.kind != Token::Kind::End) {
            const Token at = current_;
            const std::string block = expect_ident("block keyword");
            if (block == "chance") {
                raw.push_back(parse_chance(at));
            } else if (block == "decision") {
                raw.push_back(parse_decision(at));
            } else if (block == "value") {
                raw.push_back(parse_value(at));
            } else {
                throw ParseError("expected 'chance', 'decision' or 'value', got '" + block + "'",
                                 at.line, at.column);
            }
        }
        return assemble(std::move(document), raw);
    }

private:
    void advance() { current_ = lexer_.next(); }

    std::string expect_ident(const std::string& what) {
        if (current_.kind != Token::Kind::Ident) {
            throw ParseError("expected " + what, current_.line, current_.column);
        }
        std::string text = current_.text;
        advance();
        return text;
    }

    void expect_keyword(const std::string& keyword) {
        if (current_.kind != Token::Kind::Ident || current_.text != keyword) {
            throw ParseError("expected '" + keyword + "'", current_.line, current_.column);
        }
        advance();
    }

    void expect(Token::Kind kind, const char* what) {
        if (current_.kind != kind) {
            throw ParseError(std::string("expected ") + what, current_.line, current_.column);
        }
        advance();
    }

    bool at_keyword(const std::string& keyword) const {
        return current_.kind == Token::Kind::Ident && current_.text == keyword;
    }

    std::vector<std::string> ident_list() {
        std::vector<std::string> names;
        names.push_back(expect_ident("identifier"));
        while (current_.kind == Token::Kind::Comma) {
            advance();
            names.push_back(expect_ident("identifier"));
        }
        return names;
    }

    std::vector<double> number_list() {
        std::vector<double> numbers;
        auto one = [&] {
            if (current_.kind != Token::Kind::Number) {
                throw ParseError("expected a number", current_.line, current_.column);
            }
            numbers.push_back(current_.number);
            advance();
        };
        one();
        while (current_.kind == Token::Kind::Comma) {
            advance();
            one();
        }
        return numbers;
    }

    std::vector<RawRow> row_list() {
        std::vector<RawRow> rows;
        expect(Token::Kind::LBrace, "'{'");
        while (current_.kind != Token::Kind::RBrace) {
            RawRow row;
            row.line = current_.line;
            row.column = current_.column;
            if (current_.kind == Token::Kind::Ident) {
                row.lhs = ident_list();
            }
            expect(Token::Kind::Arrow, "'->'");
            row.rhs = number_list();
            expect(Token::Kind::Semi, "';'");
            rows.push_back(std::move(row));
        }
        advance();  // consume '}'
        return rows;
    }

    RawNode parse_chance(const Token& at) {
        RawNode node;
        node.kind = NodeKind::Chance;
        node.line = at.line;
        node.column = at.column;
        node.name = expect_ident("node name");
        expect(Token::Kind::LBrace, "'{'");
        expect_keyword("states");
        expect(Token::Kind::Colon, "':'");
        node.labels = ident_list();
        expect(Token::Kind::Semi, "';'");
        if (at_keyword("parents")) {
            advance();
            expect(Token::Kind::Colon, "':'");
            node.parents = ident_list();
            expect(Token::Kind::Semi, "';'");
        }
        expect_keyword("cpt");
        node.rows = row_list();
        expect(Token::Kind::RBrace, "'}'");
        return node;
    }

    RawNode parse_decision(const Token& at) {
        RawNode node;
        node.kind = NodeKind::Decision;
        node.line = at.line;
        node.column = at.column;
        node.name = expect_ident("node name");
        expect(Token::Kind::LBrace, "'{'");
        expect_keyword("alternatives");
        expect(Token::Kind::Colon, "':'");
        node.labels = ident_list();
        expect(Token::Kind::Semi, "';'");
        if (at_keyword("observes")) {
            advance();
            expect(Token::Kind::Colon, "':'");
            node.parents = ident_list();
            expect(Token::Kind::Semi, "';'");
        }
        expect(Token::Kind::RBrace, "'}'");
        return node;
    }

    RawNode parse_value(const Token& at) {
        RawNode node;
        node.kind = NodeKind::Value;
        node.line = at.line;
        node.column = at.column;
        node.name = expect_ident("node name");
        expect(Token::Kind::LBrace, "'{'");
        if (at_keyword("parents")) {
            advance();
            expect(Token::Kind::Colon, "':'");
            node.parents = ident_list();
            expect(Token::Kind::Semi, "';'");
        }
        expect_keyword("table");
        node.rows = row_list();
        expect(Token::Kind::RBrace, "'}'");
        return node;
    }

    // Second pass: resolve references, check row coverage, build the model.
    Document assemble(Document document, const std::vector<RawNode>& raw) {
        std::map<std::string, const RawNode*> by_name;
        for (const RawNode& node : raw) {
            if (!by_name.emplace(node.name, &node).second) {
                throw ParseError("duplicate node '" + node.name + "'", node.line, node.column);
            }
        }
        auto labels_of = [&](const std::string& name) -> const std::vector<std::string>* {
            auto it = by_name.find(name);
            if (it == by_name.end() || it->second->kind == NodeKind::Value) return nullptr;
            return &it->second->labels;
        };

        // Resolve a node's rows into a dense table, one row per parent
        // configuration in mixed-radix order.
        auto resolve_rows = [&](const RawNode& node, std::size_t width) {
            std::vector<int> arities;
            for (const std::string& parent : node.parents) {
                const std::vector<std::string>* labels = labels_of(parent);
                if (!labels) {
                    throw ParseError("unknown reference '" + parent + "' in '" + node.name + "'",
                                     node.line, node.column);
                }
                arities.push_back(static_cast<int>(labels->size()));
            }
            const std::size_t expected = config_count(arities);
            std::vector<std::vector<double>> table(expected);
            std::vector<bool> seen(expected, false);
            for (const RawRow& row : node.rows) {
                if (row.lhs.size() != node.parents.size()) {
                    throw ParseError("row names " + std::to_string(row.lhs.size()) +
                                         " parent states, node has " +
                                         std::to_string(node.parents.size()) + " parents",
                                     row.line, row.column);
                }
                std::vector<int> digits(row.lhs.size());
                for (std::size_t k = 0; k < row.lhs.size(); ++k) {
                    const std::vector<std::string>* labels = labels_of(node.parents[k]);
                    auto it = std::find(labels->begin(), labels->end(), row.lhs[k]);
                    if (it == labels->end()) {
                        throw ParseError("'" + row.lhs[k] + "' is not a state of '" +
                                             node.parents[k] + "'",
                                         row.line, row.column);
                    }
                    digits[k] = static_cast<int>(it - labels->begin());
                }
                const std::size_t index = config_index(digits, arities);
                if (seen[index]) {
                    throw ParseError("duplicate row for this parent configuration", row.line,
                                     row.column);
                }
                if (row.rhs.size() != width) {
                    throw ParseError("row has " + std::to_string(row.rhs.size()) +
                                         " entries, expected " + std::to_string(width),
                                     row.line, row.column);
                }
                seen[index] = true;
                table[index] = row.rhs;
            }
            for (std::size_t i = 0; i < expected; ++i) {
                if (!seen[i]) {
                    throw ParseError("node '" + node.name + "' is missing " +
                                         std::to_string(std::count(seen.begin(), seen.end(),
                                                                   false)) +
                                         " parent configuration row(s)",
                                     node.line, node.column);
                }
            }
            return table;
        };

        InfluenceDiagram diagram;
        diagram.name = document.name;
        for (const RawNode& node : raw) {
            switch (node.kind) {
                case NodeKind::Chance: {
                    ChanceNode chance;
                    chance.name = node.name;
                    chance.states = node.labels;
                    chance.parents = node.parents;
                    chance.cpt = resolve_rows(node, node.labels.size());
                    diagram.declaration.push_back(
                        {NodeKind::Chance, static_cast<int>(diagram.chance.size())});
                    diagram.chance.push_back(std::move(chance));
                    break;
                }
                case NodeKind::Decision: {
                    DecisionNode decision;
                    decision.name = node.name;
                    decision.alternatives = node.labels;
                    decision.observes = node.parents;
                    for (const std::string& observed : decision.observes) {
                        if (!by_name.count(observed)) {
                            throw ParseError("unknown reference '" + observed + "' in '" +
                                                 node.name + "'",
                                             node.line, node.column);
                        }
                    }
                    diagram.declaration.push_back(
                        {NodeKind::Decision, static_cast<int>(diagram.decisions.size())});
                    diagram.decisions.push_back(std::move(decision));
                    break;
                }
                case NodeKind::Value: {
                    ValueNode value;
                    value.name = node.name;
                    value.parents = node.parents;
                    for (const std::vector<double>& row : resolve_rows(node, 1)) {
                        value.table.push_back(row.front());
                    }
                    diagram.declaration.push_back(
                        {NodeKind::Value, static_cast<int>(diagram.values.size())});
                    diagram.values.push_back(std::move(value));
                    break;
                }
            }
        }

        document.is_diagram = !diagram.decisions.empty() || !diagram.values.empty();
        if (document.is_diagram) {
            document.diagram = std::move(diagram);
        } else {
            document.network = BeliefNetwork(std::move(diagram.chance));
        }
        return document;
    }

    Lexer lexer_;
    Token current_;
};

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

// Fixed-point micro-units (10^-6) rendered without trailing zeros.
std::string format_micros(long long micros) {
    std::string out = std::to_string(micros / 1000000);
    long long fraction = micros % 1000000;
    if (fraction == 0) return out;
    char buffer[8];
    std::snprintf(buffer, sizeof buffer, "%06lld", fraction);
    std::string digits(buffer);
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    return out + "." + digits;
}

// A probability row at six decimal places. Rows that already sum to one
// keep doing so after rounding: the largest entry absorbs the residue.
// Anything else (an invalid row being round-tripped) is emitted verbatim
// so validation reports survive the trip.
std::string format_probability_row(const std::vector<double>& row) {
    double sum = 0.0;
    bool plausible = !row.empty();
    for (double p : row) {
        if (!(p >= 0.0 && p <= 1.0)) plausible = false;
        sum += p;
    }
    std::string out;
    if (plausible && std::abs(sum - 1.0) <= 1e-9) {
        std::vector<long long> micros(row.size());
        long long total = 0;
        std::size_t largest = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
            micros[i] = std::llround(row[i] * 1e6);
            total += micros[i];
            if (row[i] > row[largest]) largest = i;
        }
        micros[largest] += 1000000 - total;
        for (std::size_t i = 0; i < micros.size(); ++i) {
            if (i > 0) out += ", ";
            out += format_micros(micros[i]);
        }
    } else {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out += ", ";
            out += format_real(row[i]);
        }
    }
    return out;
}

void write_row_lhs(std::ostream& out, const std::vector<const std::vector<std::string>*>& labels,
                   const std::vector<int>& digits) {
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i > 0) out << ", ";
        out << (*labels[i])[digits[i]];
    }
    if (!digits.empty()) out << ' ';
}

template <typename RowWriter>
void write_table(std::ostream& out, const std::vector<const std::vector<std::string>*>& labels,
                 RowWriter&& write_row) {
    std::vector<int> arities;
    arities.reserve(labels.size());
    for (const auto* l : labels) arities.push_back(static_cast<int>(l->size()));
    std::vector<int> digits(labels.size(), 0);
    std::size_t index = 0;
    do {
        out << "    ";
        write_row_lhs(out, labels, digits);
        out << "-> ";
        write_row(index++);
        out << " ;\n";
    } while (next_config(digits, arities));
}

template <typename LabelsOf>
void write_chance(std::ostream& out, const ChanceNode& node, LabelsOf&& labels_of) {
    out << "chance " << node.name << " {\n";
    out << "  states: ";
    for (std::size_t i = 0; i < node.states.size(); ++i) {
        if (i > 0) out << ", ";
        out << node.states[i];
    }
    out << " ;\n";
    if (!node.parents.empty()) {
        out << "  parents: ";
        for (std::size_t i = 0; i < node.parents.size(); ++i) {
            if (i > 0) out << ", ";
            out << node.parents[i];
        }
        out << " ;\n";
    }
    out << "  cpt {\n";
    std::vector<const std::vector<std::string>*> labels;
    for (const std::string& parent : node.parents) {
        const std::vector<std::string>* l = labels_of(parent);
        if (!l) throw StructuralError("cannot serialize: unknown parent '" + parent + "'");
        labels.push_back(l);
    }
    write_table(out, labels,
                [&](std::size_t index) { out << format_probability_row(node.cpt[index]); });
    out << "  }\n}\n";
}

}  // namespace

std::string format_real(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6g", value);
    return buffer;
}

Document parse_document(const std::string& text) {
    Parser parser(text);
    return parser.parse();
}

std::string serialize_document(const BeliefNetwork& network, const std::string& name) {
    std::ostringstream out;
    out << "# format: 1\n";
    out << "network " << name << "\n";
    auto labels_of = [&](const std::string& parent) -> const std::vector<std::string>* {
        const ChanceNode* node = network.find(parent);
        return node ? &node->states : nullptr;
    };
    for (const ChanceNode& node : network.nodes()) {
        write_chance(out, node, labels_of);
    }
    return out.str();
}

std::string serialize_document(const InfluenceDiagram& diagram) {
    std::ostringstream out;
    out << "# format: 1\n";
    out << "network " << diagram.name << "\n";
    auto labels_of = [&](const std::string& name) -> const std::vector<std::string>* {
        return diagram.outcome_labels(name);
    };
    for (const InfluenceDiagram::DeclRef& ref : diagram.declaration_order()) {
        switch (ref.kind) {
            case NodeKind::Chance:
                write_chance(out, diagram.chance[ref.index], labels_of);
                break;
            case NodeKind::Decision: {
                const DecisionNode& node = diagram.decisions[ref.index];
                out << "decision " << node.name << " {\n";
                out << "  alternatives: ";
                for (std::size_t i = 0; i < node.alternatives.size(); ++i) {
                    if (i > 0) out << ", ";
                    out << node.alternatives[i];
                }
                out << " ;\n";
                if (!node.observes.empty()) {
                    out << "  observes: ";
                    for (std::size_t i = 0; i < node.observes.size(); ++i) {
                        if (i > 0) out << ", ";
                        out << node.observes[i];
                    }
                    out << " ;\n";
                }
                out << "}\n";
                break;
            }
            case NodeKind::Value: {
                const ValueNode& node = diagram.values[ref.index];
                out << "value " << node.name << " {\n";
                if (!node.parents.empty()) {
                    out << "  parents: ";
                    for (std::size_t i = 0; i < node.parents.size(); ++i) {
                        if (i > 0) out << ", ";
                        out << node.parents[i];
                    }
                    out << " ;\n";
                }
                out << "  table {\n";
                std::vector<const std::vector<std::string>*> labels;
                for (const std::string& parent : node.parents) {
                    const std::vector<std::string>* l = labels_of(parent);
                    if (!l) {
                        throw StructuralError("cannot serialize: unknown parent '" + parent +
                                              "'");
                    }
                    labels.push_back(l);
                }
                write_table(out, labels,
                            [&](std::size_t index) { out << format_real(node.table[index]); });
                out << "  }\n}\n";
                break;
            }
        }
    }
    return out.str();
}

std::string serialize_document(const Document& document) {
    return document.is_diagram ? serialize_document(document.diagram)
                               : serialize_document(document.network, document.name);
}

Evidence parse_evidence_text(const std::string& text) {
    Evidence evidence;
    std::istringstream in(text);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto trim = [](std::string s) {
            const auto begin = s.find_first_not_of(" \t\r");
            if (begin == std::string::npos) return std::string();
            const auto end = s.find_last_not_of(" \t\r");
            return s.substr(begin, end - begin + 1);
        };
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'Name = state'", line_number, 1);
        }
        const std::string name = trim(trimmed.substr(0, eq));
        const std::string state = trim(trimmed.substr(eq + 1));
        if (name.empty() || state.empty()) {
            throw ParseError("expected 'Name = state'", line_number, 1);
        }
        if (evidence.contains(name)) {
            throw UsageError("node '" + name + "' is bound more than once");
        }
        evidence.set(name, state);
    }
    return evidence;
}

}  // namespace decnet
