#include "curv4/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace curv4::expr {

namespace {

struct Parser {
    const std::string& src;
    std::size_t pos = 0;
    std::vector<Node>* nodes;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= src.size();
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ParseError("syntax error: " + what + " at offset " + std::to_string(pos), pos);
    }

    int push(Node n) {
        nodes->push_back(n);
        return static_cast<int>(nodes->size()) - 1;
    }

    int make_unary(NodeKind k, int child, std::uint32_t off) {
        Node n;
        n.kind = k;
        n.lhs = child;
        n.offset = off;
        return push(n);
    }

    int make_binary(NodeKind k, int l, int r, std::uint32_t off) {
        Node n;
        n.kind = k;
        n.lhs = l;
        n.rhs = r;
        n.offset = off;
        return push(n);
    }

    // Pratt parser. Precedence: + - (1) < * / (2) < unary - (3) < ^ (4).
    // ^ is right associative, everything else left.
    int parse_expr(int min_prec) {
        int lhs = parse_prefix();
        for (;;) {
            skip_ws();
            if (pos >= src.size()) break;
            char c = src[pos];
            int prec;
            NodeKind kind;
            switch (c) {
                case '+': prec = 1; kind = NodeKind::kAdd; break;
                case '-': prec = 1; kind = NodeKind::kSub; break;
                case '*': prec = 2; kind = NodeKind::kMul; break;
                case '/': prec = 2; kind = NodeKind::kDiv; break;
                case '^': prec = 4; kind = NodeKind::kPow; break;
                default: return lhs;
            }
            if (prec < min_prec) return lhs;
            const auto off = static_cast<std::uint32_t>(pos);
            ++pos;
            // Right associativity for ^: recurse at the same precedence.
            int rhs = parse_expr(kind == NodeKind::kPow ? prec : prec + 1);
            lhs = make_binary(kind, lhs, rhs, off);
        }
        return lhs;
    }

    int parse_prefix() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        char c = src[pos];
        if (c == '-') {
            const auto off = static_cast<std::uint32_t>(pos);
            ++pos;
            // unary minus binds looser than ^ : -x^2 == -(x^2)
            int child = parse_expr(4);
            return make_unary(NodeKind::kNeg, child, off);
        }
        if (c == '+') {  // unary plus is a no-op
            ++pos;
            return parse_expr(4);
        }
        return parse_atom();
    }

    int parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of input");
        char c = src[pos];
        if (c == '(') {
            ++pos;
            int inner = parse_expr(1);
            if (peek() != ')') fail("expected ')'");
            ++pos;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    int parse_number() {
        const auto off = static_cast<std::uint32_t>(pos);
        double value = 0.0;
        const char* first = src.data() + pos;
        const char* last = src.data() + src.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc()) fail("malformed number");
        pos += static_cast<std::size_t>(ptr - first);
        Node n;
        n.kind = NodeKind::kConstant;
        n.value = value;
        n.offset = off;
        return push(n);
    }

    int parse_ident() {
        const auto off = static_cast<std::uint32_t>(pos);
        std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string name = src.substr(start, pos - start);

        if (name == "pi") {
            Node n;
            n.kind = NodeKind::kConstant;
            n.value = std::numbers::pi;
            n.offset = off;
            return push(n);
        }
        if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '4') {
            Node n;
            n.kind = NodeKind::kCoord;
            n.coord = name[1] - '1';
            n.offset = off;
            return push(n);
        }

        NodeKind fk;
        if (name == "sin") fk = NodeKind::kSin;
        else if (name == "cos") fk = NodeKind::kCos;
        else if (name == "exp") fk = NodeKind::kExp;
        else if (name == "log") fk = NodeKind::kLog;
        else if (name == "sqrt") fk = NodeKind::kSqrt;
        else if (name == "sinh") fk = NodeKind::kSinh;
        else if (name == "cosh") fk = NodeKind::kCosh;
        else {
            pos = start;
            throw ParseError("unknown identifier '" + name + "' at offset " + std::to_string(start),
                             start);
        }
        if (peek() != '(') fail("expected '(' after function name");
        ++pos;
        int arg = parse_expr(1);
        if (peek() != ')') fail("expected ')'");
        ++pos;
        return make_unary(fk, arg, off);
    }
};

double eval_node(const std::vector<Node>& nodes, int idx, const std::array<double, 4>& x) {
    const Node& n = nodes[static_cast<std::size_t>(idx)];
    switch (n.kind) {
        case NodeKind::kConstant: return n.value;
        case NodeKind::kCoord: return x[static_cast<std::size_t>(n.coord)];
        case NodeKind::kNeg: return -eval_node(nodes, n.lhs, x);
        case NodeKind::kSin: return std::sin(eval_node(nodes, n.lhs, x));
        case NodeKind::kCos: return std::cos(eval_node(nodes, n.lhs, x));
        case NodeKind::kExp: return std::exp(eval_node(nodes, n.lhs, x));
        case NodeKind::kSinh: return std::sinh(eval_node(nodes, n.lhs, x));
        case NodeKind::kCosh: return std::cosh(eval_node(nodes, n.lhs, x));
        case NodeKind::kLog: {
            double v = eval_node(nodes, n.lhs, x);
            if (!(v > 0.0)) throw EvalError("log of non-positive value at offset " +
                                            std::to_string(n.offset), n.offset);
            return std::log(v);
        }
        case NodeKind::kSqrt: {
            double v = eval_node(nodes, n.lhs, x);
            if (v < 0.0) throw EvalError("sqrt of negative value at offset " +
                                         std::to_string(n.offset), n.offset);
            return std::sqrt(v);
        }
        case NodeKind::kAdd: return eval_node(nodes, n.lhs, x) + eval_node(nodes, n.rhs, x);
        case NodeKind::kSub: return eval_node(nodes, n.lhs, x) - eval_node(nodes, n.rhs, x);
        case NodeKind::kMul: return eval_node(nodes, n.lhs, x) * eval_node(nodes, n.rhs, x);
        case NodeKind::kDiv: {
            double den = eval_node(nodes, n.rhs, x);
            if (den == 0.0) throw EvalError("division by zero at offset " +
                                            std::to_string(n.offset), n.offset);
            return eval_node(nodes, n.lhs, x) / den;
        }
        case NodeKind::kPow: {
            double base = eval_node(nodes, n.lhs, x);
            double e = eval_node(nodes, n.rhs, x);
            double v = std::pow(base, e);
            if (std::isnan(v)) throw EvalError("invalid power at offset " +
                                               std::to_string(n.offset), n.offset);
            return v;
        }
    }
    throw EvalError("corrupt expression node", 0);
}

int node_prec(NodeKind k) {
    switch (k) {
        case NodeKind::kAdd:
        case NodeKind::kSub: return 1;
        case NodeKind::kMul:
        case NodeKind::kDiv: return 2;
        case NodeKind::kNeg: return 3;
        case NodeKind::kPow: return 4;
        default: return 5;  // atoms and function calls never need parentheses
    }
}

void print_number(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

void print_node(const std::vector<Node>& nodes, int idx, std::string& out) {
    const Node& n = nodes[static_cast<std::size_t>(idx)];
    auto child = [&](int c, int min_prec, bool strict) {
        const int p = node_prec(nodes[static_cast<std::size_t>(c)].kind);
        const bool paren = strict ? p <= min_prec : p < min_prec;
        if (paren) out.push_back('(');
        print_node(nodes, c, out);
        if (paren) out.push_back(')');
    };
    switch (n.kind) {
        case NodeKind::kConstant: print_number(out, n.value); return;
        case NodeKind::kCoord:
            out.push_back('x');
            out.push_back(static_cast<char>('1' + n.coord));
            return;
        case NodeKind::kNeg:
            out.push_back('-');
            child(n.lhs, 3, true);
            return;
        case NodeKind::kSin: out += "sin("; break;
        case NodeKind::kCos: out += "cos("; break;
        case NodeKind::kExp: out += "exp("; break;
        case NodeKind::kLog: out += "log("; break;
        case NodeKind::kSqrt: out += "sqrt("; break;
        case NodeKind::kSinh: out += "sinh("; break;
        case NodeKind::kCosh: out += "cosh("; break;
        case NodeKind::kAdd:
            child(n.lhs, 1, false);
            out.push_back('+');
            child(n.rhs, 1, true);
            return;
        case NodeKind::kSub:
            child(n.lhs, 1, false);
            out.push_back('-');
            child(n.rhs, 1, true);
            return;
        case NodeKind::kMul:
            child(n.lhs, 2, false);
            out.push_back('*');
            child(n.rhs, 2, true);
            return;
        case NodeKind::kDiv:
            child(n.lhs, 2, false);
            out.push_back('/');
            child(n.rhs, 2, true);
            return;
        case NodeKind::kPow:
            child(n.lhs, 4, true);
            out.push_back('^');
            child(n.rhs, 4, false);
            return;
    }
    // shared tail for the unary function cases
    print_node(nodes, n.lhs, out);
    out.push_back(')');
}

}  // namespace

Expr parse(const std::string& text) {
    Expr e;
    Parser p{text, 0, &e.nodes_};
    e.root_ = p.parse_expr(1);
    if (!p.eof()) p.fail("trailing input");
    return e;
}

double Expr::eval(const std::array<double, 4>& x) const {
    if (root_ < 0) throw EvalError("empty expression", 0);
    return eval_node(nodes_, root_, x);
}

std::string Expr::pretty() const {
    std::string out;
    if (root_ >= 0) print_node(nodes_, root_, out);
    return out;
}

unsigned Expr::coord_mask() const {
    unsigned mask = 0;
    for (const Node& n : nodes_)
        if (n.kind == NodeKind::kCoord) mask |= 1u << n.coord;
    return mask;
}

}  // namespace curv4::expr
