#ifndef DECNET_TEXT_FORMAT_HPP
#define DECNET_TEXT_FORMAT_HPP

#include <string>

#include "decnet/model.hpp"

namespace decnet {

// A parsed document: a belief network, or an influence diagram when the
// text declares at least one decision or value block.
struct Document {
    bool is_diagram = false;
    std::string name;
    BeliefNetwork network;     // populated when !is_diagram
    InfluenceDiagram diagram;  // populated when is_diagram
};

// Grammar (whitespace-insensitive, `#` comments to end of line):
//   network NAME
//   chance NAME { states: s1, s2 ; parents: p1 ; cpt { pState -> q1, q2 ; } }
//   decision NAME { alternatives: a1, a2 ; observes: n1 ; }
//   value NAME { parents: p1 ; table { pState -> real ; } }
// The parents line and row left-hand tuple are omitted for parentless
// nodes; rows cover every parent configuration exactly once.
Document parse_document(const std::string& text);

// Canonical form: nodes in declaration order, one row per line, CPT rows
// re-emitted to exactly one configuration per line in table order.
// Probabilities are written at six decimal places with the row's largest
// entry absorbing the rounding residue, so a serialized valid row re-parses
// with a row sum inside the validation tolerance.
std::string serialize_document(const BeliefNetwork& network, const std::string& name);
std::string serialize_document(const InfluenceDiagram& diagram);
std::string serialize_document(const Document& document);

// One `Name = state` binding per line; `#` comments allowed. Binding a
// node twice is an error, not an override.
Evidence parse_evidence_text(const std::string& text);

// %.6g formatting used for free-form reals (value tables, k1/k2).
std::string format_real(double value);

}  // namespace decnet

#endif  // DECNET_TEXT_FORMAT_HPP
