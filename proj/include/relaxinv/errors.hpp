#ifndef RELAXINV_ERRORS_HPP
#define RELAXINV_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relaxinv {

// Dimension mismatch between operator, map and data vectors.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Invalid grid or parameter value (non-positive times, negative noise, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Solver produced a non-finite quantity or an internal decomposition failed.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; offset is the byte position where parsing stopped.
struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t byte_offset)
        : std::runtime_error(msg + " (byte offset " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::size_t offset;
};

}  // namespace relaxinv

#endif
