#include "ftcons/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace ftcons {

struct Expression::Node {
    enum class Op { Number, VarT, VarX, Neg, Add, Sub, Mul, Div, Pow, Call };
    Op op;
    Real value = 0.0;
    Real (*fn)(Real) = nullptr;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Function {
    std::string_view name;
    Real (*fn)(Real);
};

const std::array<Function, 8> kFunctions{{
    {"sin", [](Real v) { return std::sin(v); }},
    {"cos", [](Real v) { return std::cos(v); }},
    {"tan", [](Real v) { return std::tan(v); }},
    {"exp", [](Real v) { return std::exp(v); }},
    {"log", [](Real v) { return std::log(v); }},
    {"sqrt", [](Real v) { return std::sqrt(v); }},
    {"abs", [](Real v) { return std::abs(v); }},
    {"tanh", [](Real v) { return std::tanh(v); }},
}};

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    NodePtr parse() {
        NodePtr n = sum();
        skip_space();
        if (pos_ != s_.size()) {
            fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ExpressionError("bad expression '" + std::string(s_) + "' at position " +
                              std::to_string(pos_) + ": " + what);
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum() {
        NodePtr n = product();
        for (;;) {
            if (accept('+')) {
                n = make(Node::Op::Add, n, product());
            } else if (accept('-')) {
                n = make(Node::Op::Sub, n, product());
            } else {
                return n;
            }
        }
    }

    NodePtr product() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) {
                n = make(Node::Op::Mul, n, unary());
            } else if (accept('/')) {
                n = make(Node::Op::Div, n, unary());
            } else {
                return n;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) {
            return make(Node::Op::Neg, unary());
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) {
            return make(Node::Op::Pow, base, unary());
        }
        return base;
    }

    NodePtr atom() {
        skip_space();
        if (pos_ >= s_.size()) {
            fail("unexpected end");
        }
        if (accept('(')) {
            NodePtr n = sum();
            if (!accept(')')) {
                fail("missing ')'");
            }
            return n;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            return name();
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        Real v = 0.0;
        const char* first = s_.data() + pos_;
        const auto [end, ec] = std::from_chars(first, s_.data() + s_.size(), v);
        if (ec != std::errc{}) {
            fail("malformed number");
        }
        pos_ += static_cast<std::size_t>(end - first);
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Number;
        n->value = v;
        return n;
    }

    NodePtr name() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        const std::string_view id = s_.substr(start, pos_ - start);
        if (id == "t") {
            return make(Node::Op::VarT);
        }
        if (id == "x") {
            return make(Node::Op::VarX);
        }
        if (id == "pi" || id == "e") {
            auto n = std::make_shared<Node>();
            n->op = Node::Op::Number;
            n->value = id == "pi" ? std::numbers::pi : std::numbers::e;
            return n;
        }
        for (const auto& f : kFunctions) {
            if (f.name == id) {
                if (!accept('(')) {
                    fail("expected '(' after " + std::string(id));
                }
                NodePtr arg = sum();
                if (!accept(')')) {
                    fail("missing ')'");
                }
                auto n = std::make_shared<Node>();
                n->op = Node::Op::Call;
                n->fn = f.fn;
                n->lhs = std::move(arg);
                return n;
            }
        }
        pos_ = start;
        fail("unknown name '" + std::string(id) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

Real eval(const Node& n, Real t, Real x) {
    switch (n.op) {
        case Node::Op::Number:
            return n.value;
        case Node::Op::VarT:
            return t;
        case Node::Op::VarX:
            return x;
        case Node::Op::Neg:
            return -eval(*n.lhs, t, x);
        case Node::Op::Add:
            return eval(*n.lhs, t, x) + eval(*n.rhs, t, x);
        case Node::Op::Sub:
            return eval(*n.lhs, t, x) - eval(*n.rhs, t, x);
        case Node::Op::Mul:
            return eval(*n.lhs, t, x) * eval(*n.rhs, t, x);
        case Node::Op::Div:
            return eval(*n.lhs, t, x) / eval(*n.rhs, t, x);
        case Node::Op::Pow:
            return std::pow(eval(*n.lhs, t, x), eval(*n.rhs, t, x));
        case Node::Op::Call:
            return n.fn(eval(*n.lhs, t, x));
    }
    return 0.0;
}

bool mentions_variable(const Node& n) {
    if (n.op == Node::Op::VarT || n.op == Node::Op::VarX) {
        return true;
    }
    return (n.lhs && mentions_variable(*n.lhs)) || (n.rhs && mentions_variable(*n.rhs));
}

}  // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.text_ = std::string(text);
    e.root_ = Parser(e.text_).parse();
    return e;
}

Real Expression::evaluate(Real t, Real x) const { return eval(*root_, t, x); }

bool Expression::has_variables() const noexcept { return mentions_variable(*root_); }

Real evaluate_constant(std::string_view text) {
    const Expression e = Expression::parse(text);
    if (e.has_variables()) {
        throw ExpressionError("expression '" + std::string(text) + "' must be a constant");
    }
    return e.evaluate();
}

}  // namespace ftcons
