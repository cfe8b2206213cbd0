#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "decnet/text_format.hpp"
#include "decnet/transform.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace decnet;
using namespace decnet::testing;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool models_equal(const BeliefNetwork& a, const BeliefNetwork& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const ChanceNode& x = a.node(i);
        const ChanceNode& y = b.node(i);
        if (x.name != y.name || x.states != y.states || x.parents != y.parents ||
            x.cpt != y.cpt) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("parsing the bundled fixtures") {
    SUBCASE("fig1 is a three-node network") {
        const Document document = parse_document(slurp(fixture_path("fig1.dnet")));
        CHECK_FALSE(document.is_diagram);
        CHECK(document.name == "fig1");
        REQUIRE(document.network.size() == 3);
        CHECK(models_equal(document.network, fig1_network()));
    }
    SUBCASE("fig2 is an influence diagram matching the programmatic fixture") {
        const Document document = parse_document(slurp(fixture_path("fig2.dnet")));
        REQUIRE(document.is_diagram);
        const InfluenceDiagram& diagram = document.diagram;
        REQUIRE(diagram.decisions.size() == 1);
        CHECK(diagram.decisions[0].observes == std::vector<std::string>{"C"});
        REQUIRE(diagram.values.size() == 1);
        CHECK(diagram.values[0].table == std::vector<double>{4.0, -1.0, -3.0, 7.0});
        CHECK(validate_id(diagram).ok());
    }
    SUBCASE("fig3 carries the nine probability rows") {
        const Document document = parse_document(slurp(fixture_path("fig3.dnet")));
        REQUIRE_FALSE(document.is_diagram);
        REQUIRE(document.network.size() == 5);
        const ChanceNode& v = *document.network.find("V");
        CHECK(v.cpt == std::vector<std::vector<double>>{
                           {0.7, 0.3}, {0.2, 0.8}, {0.0, 1.0}, {1.0, 0.0}});
        CHECK(document.network.find("D1")->cpt.front() == std::vector<double>{0.5, 0.5});
    }
}

TEST_CASE("a value block alone already makes a diagram") {
    const Document document = parse_document(
        "network t\n"
        "chance A { states: T, F ; cpt { -> 0.5, 0.5 ; } }\n"
        "value V { parents: A ; table { T -> 1 ; F -> 0 ; } }\n");
    CHECK(document.is_diagram);
    CHECK(document.diagram.decisions.empty());
}

TEST_CASE("parse errors carry positions") {
    SUBCASE("missing separator") {
        try {
            parse_document("network t\nchance A {\n  states: T, F ;\n  cpt {\n    -> 0.5 0.5 ;\n  }\n}\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 5);
        }
    }
    SUBCASE("duplicate node") {
        try {
            parse_document(
                "network t\n"
                "chance A { states: T, F ; cpt { -> 0.5, 0.5 ; } }\n"
                "chance A { states: T, F ; cpt { -> 0.5, 0.5 ; } }\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("unknown reference") {
        CHECK_THROWS_AS(parse_document("network t\nchance A { states: T, F ; parents: Z ; "
                                       "cpt { T -> 0.5, 0.5 ; F -> 0.5, 0.5 ; } }\n"),
                        ParseError);
    }
    SUBCASE("missing row") {
        CHECK_THROWS_AS(parse_document(
                            "network t\n"
                            "chance A { states: T, F ; cpt { -> 0.5, 0.5 ; } }\n"
                            "chance B { states: T, F ; parents: A ; cpt { T -> 0.5, 0.5 ; } }\n"),
                        ParseError);
    }
    SUBCASE("duplicate row") {
        CHECK_THROWS_AS(parse_document(
                            "network t\n"
                            "chance A { states: T, F ; cpt { -> 0.5, 0.5 ; } }\n"
                            "chance B { states: T, F ; parents: A ; cpt { T -> 0.5, 0.5 ; "
                            "T -> 0.5, 0.5 ; F -> 0.5, 0.5 ; } }\n"),
                        ParseError);
    }
    SUBCASE("row arity mismatch on a three-state node") {
        CHECK_THROWS_AS(
            parse_document("network t\nchance A { states: a, b, c ; cpt { -> 0.7, 0.2 ; } }\n"),
            ParseError);
    }
    SUBCASE("malformed number") {
        CHECK_THROWS_AS(
            parse_document("network t\nchance A { states: T, F ; cpt { -> 0.5, . ; } }\n"),
            ParseError);
    }
}

TEST_CASE("canonical serialization") {
    SUBCASE("parentless rows use the bare arrow form") {
        const std::string text = serialize_document(fig1_network(), "fig1");
        CHECK(text.find("    -> 0.4, 0.6 ;\n") != std::string::npos);
        CHECK(text.find("# format: 1\nnetwork fig1\n") == 0);
    }
    SUBCASE("one third becomes 0.333333 with the residue on the first largest entry") {
        ChanceNode u{"U", {"a", "b", "c"}, {}, {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}}};
        const std::string text = serialize_document(BeliefNetwork({u}), "t");
        CHECK(text.find("0.333334, 0.333333, 0.333333") != std::string::npos);
        const Document reparsed = parse_document(text);
        CHECK(validate_bn(reparsed.network).ok());
    }
    SUBCASE("diagram serialization reproduces the declaration order and observes") {
        const Document document = parse_document(slurp(fixture_path("fig2.dnet")));
        const std::string text = serialize_document(document.diagram);
        CHECK(text.find("decision D1 {\n  alternatives: Action1, Action2 ;\n  observes: C ;\n}") !=
              std::string::npos);
        CHECK(text.find("value V {\n  parents: D1, A ;\n  table {\n    Action1, T -> 4 ;") !=
              std::string::npos);
    }
    SUBCASE("values print with %.6g") {
        CHECK(format_real(-3.0) == "-3");
        CHECK(format_real(1.0 / 3.0) == "0.333333");
        CHECK(format_real(10.0) == "10");
    }
}

TEST_CASE("serialize-parse round trips") {
    SUBCASE("fixture fixed point") {
        for (const std::string name : {"fig1.dnet", "fig2.dnet", "fig3.dnet"}) {
            const std::string once = serialize_document(parse_document(slurp(fixture_path(name))));
            const std::string twice = serialize_document(parse_document(once));
            CHECK(once == twice);
        }
    }
    SUBCASE("micro-exact random networks reparse to identical models") {
        Rng rng(606);
        for (int round = 0; round < 40; ++round) {
            const BeliefNetwork network = random_network(rng, {.max_nodes = 8, .max_states = 4});
            const Document reparsed = parse_document(serialize_document(network, "t"));
            REQUIRE_FALSE(reparsed.is_diagram);
            CHECK(models_equal(network, reparsed.network));
        }
    }
    SUBCASE("random diagrams survive serialize/parse/serialize") {
        Rng rng(707);
        for (int round = 0; round < 30; ++round) {
            const InfluenceDiagram diagram = random_diagram(rng);
            const std::string once = serialize_document(diagram);
            const Document reparsed = parse_document(once);
            REQUIRE(reparsed.is_diagram);
            CHECK(serialize_document(reparsed.diagram) == once);
            CHECK(validate_id(reparsed.diagram).ok());
        }
    }
}

TEST_CASE("parser fails cleanly on truncated documents") {
    Rng rng(808);
    const std::string text = serialize_document(random_diagram(rng));
    for (std::size_t cut = 0; cut < text.size(); cut += 7) {
        try {
            parse_document(text.substr(0, cut));
        } catch (const ParseError&) {
            // a position-carrying error is the expected outcome
        }
    }
    CHECK(true);
}

TEST_CASE("evidence files") {
    SUBCASE("bindings with comments and blank lines") {
        const Evidence evidence = parse_evidence_text(
            "# observed this morning\n"
            "C = T\n"
            "\n"
            "D1=Action1  # already decided\n");
        CHECK(evidence.size() == 2);
        CHECK(evidence.at("C") == "T");
        CHECK(evidence.at("D1") == "Action1");
    }
    SUBCASE("rebinding is an error, not an override") {
        CHECK_THROWS_AS(parse_evidence_text("C = T\nC = F\n"), UsageError);
        CHECK_THROWS_AS(parse_evidence_text("C = T\nC = T\n"), UsageError);
    }
    SUBCASE("malformed line carries its number") {
        try {
            parse_evidence_text("C = T\nnonsense\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
}
