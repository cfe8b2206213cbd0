#ifndef DECNET_ERRORS_HPP
#define DECNET_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace decnet {

// Malformed or inconsistent model data where a valid model was required
// (dangling reference, cycle, empty table, ...).
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Caller asked for something the API cannot mean (hypothetical on a
// non-predecessor, decision committed out of order, conflicting evidence).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// The supplied evidence has probability zero under the network.
class ImpossibleEvidenceError : public std::runtime_error {
public:
    explicit ImpossibleEvidenceError(const std::string& what) : std::runtime_error(what) {}
};

// Logic sampling rejected every draw; carries how many were drawn.
class NoAcceptedSamplesError : public std::runtime_error {
public:
    NoAcceptedSamplesError(const std::string& what, std::int64_t drawn)
        : std::runtime_error(what), drawn_(drawn) {}
    std::int64_t drawn() const { return drawn_; }

private:
    std::int64_t drawn_;
};

// Document text could not be parsed; position is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace decnet

#endif  // DECNET_ERRORS_HPP
