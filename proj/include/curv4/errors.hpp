#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curv4 {

// Syntax or lookup failure while parsing an expression or a metric file.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Runtime evaluation failure (division by zero, log of non-positive, ...).
class EvalError : public std::runtime_error {
public:
    EvalError(std::string msg, std::size_t node_offset)
        : std::runtime_error(std::move(msg)), node_offset_(node_offset) {}
    std::size_t node_offset() const { return node_offset_; }

private:
    std::size_t node_offset_;
};

// Quadrature refinement failed to settle, or a homogeneity assertion failed.
class ConvergenceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A tensor or chart violated a structural precondition.
class ValidationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace curv4
