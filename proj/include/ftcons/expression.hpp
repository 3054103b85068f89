#pragma once

#include "ftcons/matrix.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ftcons {

class ExpressionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arithmetic expression over the variables t and x, e.g. "pi/2" or
/// "0.5*sin(x) + cos(t)". Supports + - * / ^, unary minus, parentheses, the
/// constants pi and e, and sin cos tan exp log sqrt abs tanh. ^ binds tighter
/// than unary minus and is right-associative.
class Expression {
public:
    static Expression parse(std::string_view text);

    Real evaluate(Real t = 0.0, Real x = 0.0) const;
    /// True when the expression mentions t or x.
    bool has_variables() const noexcept;
    const std::string& text() const noexcept { return text_; }

    struct Node;

private:
    std::string text_;
    std::shared_ptr<const Node> root_;
};

/// Parses and evaluates a constant expression; throws ExpressionError if it uses variables.
Real evaluate_constant(std::string_view text);

}  // namespace ftcons
