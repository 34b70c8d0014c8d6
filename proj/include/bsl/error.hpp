#pragma once

#include <stdexcept>
#include <string>

namespace bsl {

/// Invalid argument or violated precondition (bad curve, point inside the obstacle, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (singular system, degenerate stationary point, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bsl
