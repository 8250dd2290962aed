#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "curv4/errors.hpp"

namespace curv4::expr {

enum class NodeKind : std::uint8_t {
    kConstant,   // value
    kCoord,      // index 0..3 (x1..x4)
    kNeg,
    kSin, kCos, kExp, kLog, kSqrt, kSinh, kCosh,
    kAdd, kSub, kMul, kDiv, kPow,
};

struct Node {
    NodeKind kind;
    double value = 0.0;      // kConstant
    int coord = -1;          // kCoord
    int lhs = -1, rhs = -1;  // children (rhs unused for unary)
    std::uint32_t offset = 0;  // byte offset in source text, for diagnostics
};

// Immutable arithmetic expression over x1..x4. Value type; copy is cheap
// enough (flat node vector) and evaluation is reentrant.
class Expr {
public:
    Expr() = default;

    double eval(const std::array<double, 4>& x) const;

    // Canonical text form; parse(pretty()) reproduces the same tree.
    std::string pretty() const;

    // Bitmask of coordinates referenced (bit k = x{k+1}).
    unsigned coord_mask() const;

    bool is_constant() const { return coord_mask() == 0; }

    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return root_; }

    friend Expr parse(const std::string& text);

private:
    std::vector<Node> nodes_;
    int root_ = -1;
};

// Parses `text`; throws ParseError with a byte offset on failure.
Expr parse(const std::string& text);

}  // namespace curv4::expr
