#pragma once

#include <stdexcept>
#include <string>

namespace qcastle {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A word refers to a symbol outside the alphabet.
struct InvalidSymbol : Error {
    explicit InvalidSymbol(const std::string& msg) : Error(msg) {}
};

/// Two operands live over different shift spaces.
struct SpaceMismatch : Error {
    explicit SpaceMismatch(const std::string& msg) : Error(msg) {}
};

/// kakutani_rokhlin was handed a set that is not a feedback set.
struct NotFeedback : Error {
    explicit NotFeedback(const std::string& msg) : Error(msg) {}
};

/// high_castle was handed a space with a periodic orbit of period < N.
struct HasShortPeriod : Error {
    explicit HasShortPeriod(const std::string& msg) : Error(msg) {}
};

/// A deepening loop or enumeration exceeded its configured budget.
/// Signals a configuration beyond desk scale, not a mathematical failure.
struct DepthExhausted : Error {
    explicit DepthExhausted(const std::string& msg) : Error(msg) {}
};

/// Numeric iteration failed to converge.
struct NumericalFailure : Error {
    explicit NumericalFailure(const std::string& msg) : Error(msg) {}
};

/// A matrix was singular below the configured floor.
struct Singular : Error {
    explicit Singular(const std::string& msg) : Error(msg) {}
};

/// The eigenvalue perturbation lemma does not cover real 2x2 cocycles.
struct FieldDimUnsupported : Error {
    explicit FieldDimUnsupported(const std::string& msg) : Error(msg) {}
};

/// Subspace propagation lost rank numerically.
struct IllConditionedFrame : Error {
    explicit IllConditionedFrame(const std::string& msg) : Error(msg) {}
};

/// remove_qc over R^2 met a short tower (needs the eigenvalue lemma, d >= 3).
struct ShortTowerUnsupported : Error {
    explicit ShortTowerUnsupported(const std::string& msg) : Error(msg) {}
};

/// The cocycle is not constant on some floor of the castle.
struct NotConstantOnFloor : Error {
    explicit NotConstantOnFloor(const std::string& msg) : Error(msg) {}
};

/// The castle handed to the verifier does not partition the space.
struct NotPartition : Error {
    explicit NotPartition(const std::string& msg) : Error(msg) {}
};

/// Input file rejected; carries line/column context in the message.
struct ParseError : Error {
    int line = 0, column = 0;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " (line " + std::to_string(line_) + ", column " + std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};

} // namespace qcastle
