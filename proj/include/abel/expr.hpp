#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "abel/errors.hpp"
#include "abel/jet.hpp"

namespace abel {

enum class NodeKind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

enum class FuncId { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Abs };

const char* func_name(FuncId f);

struct ExprNode {
    NodeKind kind;
    double number = 0.0;                   // Number
    long long exponent = 0;                // Pow
    FuncId func = FuncId::Sin;             // Call
    std::shared_ptr<const ExprNode> left;  // unary operand / left operand / pow base
    std::shared_ptr<const ExprNode> right; // right operand of binary nodes
};

/// Parsed coefficient function of the single variable x.
///
/// Grammar: +,-,*,/ with standard precedence, unary minus, ^ with an integer
/// literal exponent, the functions sin cos tan exp log sqrt sinh cosh tanh
/// abs, decimal number literals, and the constants pi and e.  Implicit
/// multiplication is a syntax error.  Immutable and shareable across threads.
class Expression {
public:
    static Expression parse(std::string_view text);

    static Expression number(double value);
    static Expression variable();
    static Expression apply(FuncId f, const Expression& arg);

    Expression operator-() const;
    friend Expression operator+(const Expression& a, const Expression& b);
    friend Expression operator-(const Expression& a, const Expression& b);
    friend Expression operator*(const Expression& a, const Expression& b);
    friend Expression operator/(const Expression& a, const Expression& b);
    Expression pow(long long n) const;

    /// Jet of the expression at x0 to the requested order.
    Jet eval_jet(double x0, int order) const;
    /// Pointwise evaluation (used by oracles and the Newton inversion).
    double eval(double x) const;

    /// Symbolic derivative; the grammar is closed under differentiation.
    Expression derivative() const;
    /// The expression with every occurrence of x replaced by `inner`.
    Expression substitute(const Expression& inner) const;

    /// True when no Variable node occurs; value() then gives the constant.
    bool is_constant() const;
    double constant_value() const;

    std::string render() const;
    const std::string& source_text() const { return source_; }
    const ExprNode& root() const { return *ast_; }
    std::shared_ptr<const ExprNode> node() const { return ast_; }

private:
    explicit Expression(std::shared_ptr<const ExprNode> ast, std::string source = {});

    std::shared_ptr<const ExprNode> ast_;
    std::string source_;
};

/// Structural equality of ASTs (used by the round-trip tests).
bool same_structure(const ExprNode& a, const ExprNode& b);

}  // namespace abel
