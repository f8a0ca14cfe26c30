#include "abel/expr.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <utility>
#include <vector>

namespace abel {

SyntaxError::SyntaxError(std::string message, std::size_t offset, std::vector<std::string> expected)
    : Error(std::move(message)), offset_(offset), expected_(std::move(expected)) {}

NonIntegerExponent::NonIntegerExponent(std::string message, std::size_t offset)
    : Error(std::move(message)), offset_(offset) {}

EvalDomainError::EvalDomainError(std::string message, std::string subexpression)
    : Error(std::move(message)), subexpression_(std::move(subexpression)) {}

const char* func_name(FuncId f) {
    switch (f) {
        case FuncId::Sin: return "sin";
        case FuncId::Cos: return "cos";
        case FuncId::Tan: return "tan";
        case FuncId::Exp: return "exp";
        case FuncId::Log: return "log";
        case FuncId::Sqrt: return "sqrt";
        case FuncId::Sinh: return "sinh";
        case FuncId::Cosh: return "cosh";
        case FuncId::Tanh: return "tanh";
        case FuncId::Abs: return "abs";
    }
    return "?";
}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Number;
    n->number = v;
    return n;
}

NodePtr make_variable() {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Variable;
    return n;
}

NodePtr make_unary(NodeKind k, NodePtr operand) {
    // fold -literal into a literal so parse(render()) round-trips structurally
    if (k == NodeKind::Negate && operand->kind == NodeKind::Number) {
        return make_number(-operand->number);
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->left = std::move(operand);
    return n;
}

NodePtr make_binary(NodeKind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->left = std::move(a);
    n->right = std::move(b);
    return n;
}

NodePtr make_pow(NodePtr base, long long e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Pow;
    n->left = std::move(base);
    n->exponent = e;
    return n;
}

NodePtr make_call(FuncId f, NodePtr arg) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Call;
    n->func = f;
    n->left = std::move(arg);
    return n;
}

// ---------------------------------------------------------------- lexer ---

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
    bool integral = false;  // number written without '.', exponent part
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& current() const { return current_; }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        current_.offset = pos_;
        if (pos_ >= text_.size()) {
            current_ = {Tok::End, pos_, {}};
            return;
        }
        const char c = text_[pos_];
        switch (c) {
            case '+': current_ = {Tok::Plus, pos_++, text_.substr(current_.offset, 1)}; return;
            case '-': current_ = {Tok::Minus, pos_++, text_.substr(current_.offset, 1)}; return;
            case '*': current_ = {Tok::Star, pos_++, text_.substr(current_.offset, 1)}; return;
            case '/': current_ = {Tok::Slash, pos_++, text_.substr(current_.offset, 1)}; return;
            case '^': current_ = {Tok::Caret, pos_++, text_.substr(current_.offset, 1)}; return;
            case '(': current_ = {Tok::LParen, pos_++, text_.substr(current_.offset, 1)}; return;
            case ')': current_ = {Tok::RParen, pos_++, text_.substr(current_.offset, 1)}; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            current_ = {Tok::Ident, start, text_.substr(start, pos_ - start)};
            return;
        }
        throw SyntaxError("unexpected character '" + std::string(1, c) + "' at offset " +
                              std::to_string(pos_),
                          pos_, {"number", "identifier", "operator"});
    }

private:
    void lex_number() {
        const std::size_t start = pos_;
        bool integral = true;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            integral = false;
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                integral = false;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to the next token (the constant e)
            }
        }
        std::string_view slice = text_.substr(start, pos_ - start);
        if (slice == ".") {
            throw SyntaxError("malformed number at offset " + std::to_string(start), start, {"digit"});
        }
        double value = 0.0;
        auto res = std::from_chars(slice.data(), slice.data() + slice.size(), value);
        if (res.ec != std::errc()) {
            throw SyntaxError("malformed number '" + std::string(slice) + "'", start, {"number"});
        }
        current_ = {Tok::Number, start, slice, value, integral};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;
};

// --------------------------------------------------------------- parser ---

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    NodePtr parse() {
        NodePtr e = parse_sum();
        if (lex_.current().kind != Tok::End) {
            fail({"operator", "end of input"});
        }
        return e;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) {
        const Token& t = lex_.current();
        std::string got = t.kind == Tok::End ? "end of input" : "'" + std::string(t.text) + "'";
        std::string msg = "syntax error at offset " + std::to_string(t.offset) + ": unexpected " + got +
                          ", expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += " or ";
            msg += expected[i];
        }
        throw SyntaxError(std::move(msg), t.offset, std::move(expected));
    }

    bool accept(Tok k) {
        if (lex_.current().kind == k) {
            lex_.advance();
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr e = parse_term();
        for (;;) {
            if (accept(Tok::Plus)) {
                e = make_binary(NodeKind::Add, e, parse_term());
            } else if (accept(Tok::Minus)) {
                e = make_binary(NodeKind::Sub, e, parse_term());
            } else {
                return e;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr e = parse_unary();
        for (;;) {
            if (accept(Tok::Star)) {
                e = make_binary(NodeKind::Mul, e, parse_unary());
            } else if (accept(Tok::Slash)) {
                e = make_binary(NodeKind::Div, e, parse_unary());
            } else {
                return e;
            }
        }
    }

    NodePtr parse_unary() {
        if (accept(Tok::Minus)) {
            return make_unary(NodeKind::Negate, parse_unary());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (lex_.current().kind == Tok::Caret) {
            lex_.advance();
            return make_pow(base, parse_exponent());
        }
        return base;
    }

    // The exponent of '^' must be an integer literal, optionally negated
    // and/or parenthesized.  Anything else that still parses as an
    // expression (2.5, (1/2), x) is a NonIntegerExponent.
    long long parse_exponent() {
        const std::size_t at = lex_.current().offset;
        NodePtr e = parse_unary();
        bool ok = false;
        long long value = fold_integer(*e, &ok);
        if (!ok) {
            throw NonIntegerExponent(
                "exponent at offset " + std::to_string(at) + " is not an integer literal", at);
        }
        return value;
    }

    long long fold_integer(const ExprNode& n, bool* ok) {
        if (n.kind == NodeKind::Number) {
            if (!integral_literal_) {
                *ok = false;
                return 0;
            }
            *ok = true;
            return static_cast<long long>(n.number);
        }
        *ok = false;
        return 0;
    }

    NodePtr parse_primary() {
        const Token t = lex_.current();
        switch (t.kind) {
            case Tok::Number:
                integral_literal_ = t.integral && std::abs(t.number) < 1e15 &&
                                    t.number == std::floor(t.number);
                lex_.advance();
                return make_number(t.number);
            case Tok::LParen: {
                lex_.advance();
                NodePtr e = parse_sum();
                if (!accept(Tok::RParen)) fail({"')'"});
                // parentheses around a literal keep literal status: x^(2)
                return e;
            }
            case Tok::Ident: {
                integral_literal_ = false;
                lex_.advance();
                if (t.text == "x") return make_variable();
                if (t.text == "pi") return make_number(M_PI);
                if (t.text == "e") return make_number(M_E);
                FuncId f;
                if (lookup_func(t.text, &f)) {
                    if (!accept(Tok::LParen)) fail({"'('"});
                    NodePtr arg = parse_sum();
                    if (!accept(Tok::RParen)) fail({"')'"});
                    return make_call(f, arg);
                }
                throw SyntaxError("unknown identifier '" + std::string(t.text) + "' at offset " +
                                      std::to_string(t.offset),
                                  t.offset, {"x", "pi", "e", "function name"});
            }
            default:
                fail({"number", "'('", "identifier"});
        }
    }

    static bool lookup_func(std::string_view s, FuncId* out) {
        static constexpr std::pair<const char*, FuncId> table[] = {
            {"sin", FuncId::Sin},   {"cos", FuncId::Cos},   {"tan", FuncId::Tan},
            {"exp", FuncId::Exp},   {"log", FuncId::Log},   {"sqrt", FuncId::Sqrt},
            {"sinh", FuncId::Sinh}, {"cosh", FuncId::Cosh}, {"tanh", FuncId::Tanh},
            {"abs", FuncId::Abs},
        };
        for (const auto& [name, id] : table) {
            if (s == name) {
                *out = id;
                return true;
            }
        }
        return false;
    }

    Lexer lex_;
    // whether the most recent primary was an integer literal (tracked for '^')
    bool integral_literal_ = false;
};

// --------------------------------------------------------------- render ---

int precedence_level(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Negate: return 3;
        case NodeKind::Pow: return 4;
        case NodeKind::Number: return n.number < 0.0 ? 3 : 5;
        case NodeKind::Variable:
        case NodeKind::Call: return 5;
    }
    return 5;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void render_node(const ExprNode& n, std::string& out);

void render_child(const ExprNode& child, int min_level, std::string& out) {
    if (precedence_level(child) < min_level) {
        out += '(';
        render_node(child, out);
        out += ')';
    } else {
        render_node(child, out);
    }
}

void render_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case NodeKind::Number:
            out += format_double(n.number);
            return;
        case NodeKind::Variable:
            out += 'x';
            return;
        case NodeKind::Negate:
            out += '-';
            render_child(*n.left, 4, out);
            return;
        case NodeKind::Add:
            render_child(*n.left, 1, out);
            out += '+';
            render_child(*n.right, 2, out);
            return;
        case NodeKind::Sub:
            render_child(*n.left, 1, out);
            out += '-';
            render_child(*n.right, 2, out);
            return;
        case NodeKind::Mul:
            render_child(*n.left, 2, out);
            out += '*';
            render_child(*n.right, 3, out);
            return;
        case NodeKind::Div:
            render_child(*n.left, 2, out);
            out += '/';
            render_child(*n.right, 3, out);
            return;
        case NodeKind::Pow:
            render_child(*n.left, 5, out);
            out += '^';
            if (n.exponent < 0) {
                out += '(';
                out += std::to_string(n.exponent);
                out += ')';
            } else {
                out += std::to_string(n.exponent);
            }
            return;
        case NodeKind::Call:
            out += func_name(n.func);
            out += '(';
            render_node(*n.left, out);
            out += ')';
            return;
    }
}

// ----------------------------------------------------------- evaluation ---

std::string describe(const ExprNode& n) {
    std::string s;
    render_node(n, s);
    return s;
}

Jet eval_node(const ExprNode& n, double x0, int order) {
    switch (n.kind) {
        case NodeKind::Number:
            return Jet::constant(x0, n.number, order);
        case NodeKind::Variable:
            return Jet::variable(x0, order);
        case NodeKind::Negate:
            return -eval_node(*n.left, x0, order);
        case NodeKind::Add:
            return eval_node(*n.left, x0, order) + eval_node(*n.right, x0, order);
        case NodeKind::Sub:
            return eval_node(*n.left, x0, order) - eval_node(*n.right, x0, order);
        case NodeKind::Mul:
            return eval_node(*n.left, x0, order) * eval_node(*n.right, x0, order);
        case NodeKind::Div: {
            Jet denom = eval_node(*n.right, x0, order);
            if (denom.value() == 0.0) {
                throw EvalDomainError("division by zero in '" + describe(n) + "'", describe(*n.right));
            }
            return eval_node(*n.left, x0, order) / denom;
        }
        case NodeKind::Pow: {
            Jet base = eval_node(*n.left, x0, order);
            if (n.exponent < 0 && base.value() == 0.0) {
                throw EvalDomainError("negative power of zero in '" + describe(n) + "'", describe(*n.left));
            }
            return pow(base, n.exponent);
        }
        case NodeKind::Call: {
            Jet arg = eval_node(*n.left, x0, order);
            try {
                switch (n.func) {
                    case FuncId::Sin: return sin(arg);
                    case FuncId::Cos: return cos(arg);
                    case FuncId::Tan: return tan(arg);
                    case FuncId::Exp: return exp(arg);
                    case FuncId::Log: return log(arg);
                    case FuncId::Sqrt:
                        if (arg.value() <= 0.0) throw DomainError("sqrt of a non-positive value");
                        return sqrt(arg);
                    case FuncId::Sinh: return sinh(arg);
                    case FuncId::Cosh: return cosh(arg);
                    case FuncId::Tanh: return tanh(arg);
                    case FuncId::Abs: return abs(arg);
                }
            } catch (const DomainError& e) {
                throw EvalDomainError(std::string(e.what()) + " in '" + describe(n) + "'", describe(n));
            } catch (const DivisionByZeroConstantTerm&) {
                throw EvalDomainError("pole in '" + describe(n) + "'", describe(n));
            }
            throw Error("unreachable");
        }
    }
    throw Error("unreachable");
}

double eval_scalar(const ExprNode& n, double x) {
    switch (n.kind) {
        case NodeKind::Number: return n.number;
        case NodeKind::Variable: return x;
        case NodeKind::Negate: return -eval_scalar(*n.left, x);
        case NodeKind::Add: return eval_scalar(*n.left, x) + eval_scalar(*n.right, x);
        case NodeKind::Sub: return eval_scalar(*n.left, x) - eval_scalar(*n.right, x);
        case NodeKind::Mul: return eval_scalar(*n.left, x) * eval_scalar(*n.right, x);
        case NodeKind::Div: {
            double d = eval_scalar(*n.right, x);
            if (d == 0.0) throw EvalDomainError("division by zero in '" + describe(n) + "'", describe(*n.right));
            return eval_scalar(*n.left, x) / d;
        }
        case NodeKind::Pow: {
            double b = eval_scalar(*n.left, x);
            if (n.exponent < 0 && b == 0.0) {
                throw EvalDomainError("negative power of zero in '" + describe(n) + "'", describe(*n.left));
            }
            return std::pow(b, static_cast<double>(n.exponent));
        }
        case NodeKind::Call: {
            double u = eval_scalar(*n.left, x);
            switch (n.func) {
                case FuncId::Sin: return std::sin(u);
                case FuncId::Cos: return std::cos(u);
                case FuncId::Tan: return std::tan(u);
                case FuncId::Exp: return std::exp(u);
                case FuncId::Log:
                    if (u <= 0.0) throw EvalDomainError("log of a non-positive value in '" + describe(n) + "'", describe(n));
                    return std::log(u);
                case FuncId::Sqrt:
                    if (u < 0.0) throw EvalDomainError("sqrt of a negative value in '" + describe(n) + "'", describe(n));
                    return std::sqrt(u);
                case FuncId::Sinh: return std::sinh(u);
                case FuncId::Cosh: return std::cosh(u);
                case FuncId::Tanh: return std::tanh(u);
                case FuncId::Abs: return std::abs(u);
            }
            throw Error("unreachable");
        }
    }
    throw Error("unreachable");
}

// ----------------------------------------------------------- derivative ---

NodePtr derive(const NodePtr& n);

NodePtr simplify_mul(NodePtr a, NodePtr b) {
    if (a->kind == NodeKind::Number) {
        if (a->number == 0.0) return make_number(0.0);
        if (a->number == 1.0) return b;
    }
    if (b->kind == NodeKind::Number) {
        if (b->number == 0.0) return make_number(0.0);
        if (b->number == 1.0) return a;
    }
    return make_binary(NodeKind::Mul, std::move(a), std::move(b));
}

NodePtr simplify_add(NodePtr a, NodePtr b) {
    if (a->kind == NodeKind::Number && a->number == 0.0) return b;
    if (b->kind == NodeKind::Number && b->number == 0.0) return a;
    return make_binary(NodeKind::Add, std::move(a), std::move(b));
}

NodePtr simplify_sub(NodePtr a, NodePtr b) {
    if (b->kind == NodeKind::Number && b->number == 0.0) return a;
    if (a->kind == NodeKind::Number && a->number == 0.0) return make_unary(NodeKind::Negate, std::move(b));
    return make_binary(NodeKind::Sub, std::move(a), std::move(b));
}

NodePtr derive(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::Number: return make_number(0.0);
        case NodeKind::Variable: return make_number(1.0);
        case NodeKind::Negate: return make_unary(NodeKind::Negate, derive(n->left));
        case NodeKind::Add: return simplify_add(derive(n->left), derive(n->right));
        case NodeKind::Sub: return simplify_sub(derive(n->left), derive(n->right));
        case NodeKind::Mul:
            return simplify_add(simplify_mul(derive(n->left), n->right),
                                simplify_mul(n->left, derive(n->right)));
        case NodeKind::Div:
            // (u/v)' = (u'v - uv')/v^2
            return make_binary(NodeKind::Div,
                               simplify_sub(simplify_mul(derive(n->left), n->right),
                                            simplify_mul(n->left, derive(n->right))),
                               make_pow(n->right, 2));
        case NodeKind::Pow: {
            if (n->exponent == 0) return make_number(0.0);
            NodePtr inner = simplify_mul(make_number(static_cast<double>(n->exponent)),
                                         n->exponent == 1 ? make_number(1.0)
                                                          : make_pow(n->left, n->exponent - 1));
            return simplify_mul(inner, derive(n->left));
        }
        case NodeKind::Call: {
            NodePtr u = n->left;
            NodePtr du = derive(u);
            NodePtr outer;
            switch (n->func) {
                case FuncId::Sin: outer = make_call(FuncId::Cos, u); break;
                case FuncId::Cos: outer = make_unary(NodeKind::Negate, make_call(FuncId::Sin, u)); break;
                case FuncId::Tan:
                    outer = simplify_add(make_number(1.0), make_pow(make_call(FuncId::Tan, u), 2));
                    break;
                case FuncId::Exp: outer = make_call(FuncId::Exp, u); break;
                case FuncId::Log: outer = make_binary(NodeKind::Div, make_number(1.0), u); break;
                case FuncId::Sqrt:
                    outer = make_binary(NodeKind::Div, make_number(1.0),
                                        simplify_mul(make_number(2.0), make_call(FuncId::Sqrt, u)));
                    break;
                case FuncId::Sinh: outer = make_call(FuncId::Cosh, u); break;
                case FuncId::Cosh: outer = make_call(FuncId::Sinh, u); break;
                case FuncId::Tanh:
                    outer = simplify_sub(make_number(1.0), make_pow(make_call(FuncId::Tanh, u), 2));
                    break;
                case FuncId::Abs:
                    // d|u| = (|u|/u) u'
                    outer = make_binary(NodeKind::Div, make_call(FuncId::Abs, u), u);
                    break;
            }
            return simplify_mul(outer, du);
        }
    }
    throw Error("unreachable");
}

NodePtr substitute_node(const NodePtr& n, const NodePtr& replacement) {
    switch (n->kind) {
        case NodeKind::Number: return n;
        case NodeKind::Variable: return replacement;
        case NodeKind::Negate: return make_unary(NodeKind::Negate, substitute_node(n->left, replacement));
        case NodeKind::Pow: return make_pow(substitute_node(n->left, replacement), n->exponent);
        case NodeKind::Call: return make_call(n->func, substitute_node(n->left, replacement));
        default:
            return make_binary(n->kind, substitute_node(n->left, replacement),
                               substitute_node(n->right, replacement));
    }
}

bool contains_variable(const ExprNode& n) {
    switch (n.kind) {
        case NodeKind::Number: return false;
        case NodeKind::Variable: return true;
        case NodeKind::Negate:
        case NodeKind::Pow:
        case NodeKind::Call: return contains_variable(*n.left);
        default: return contains_variable(*n.left) || contains_variable(*n.right);
    }
}

}  // namespace

// ----------------------------------------------------------- Expression ---

Expression::Expression(std::shared_ptr<const ExprNode> ast, std::string source)
    : ast_(std::move(ast)), source_(std::move(source)) {}

Expression Expression::parse(std::string_view text) {
    if (text.empty()) {
        throw SyntaxError("empty expression", 0, {"expression"});
    }
    Parser p(text);
    return Expression(p.parse(), std::string(text));
}

Expression Expression::number(double value) { return Expression(make_number(value)); }

Expression Expression::variable() { return Expression(make_variable()); }

Expression Expression::apply(FuncId f, const Expression& arg) {
    return Expression(make_call(f, arg.ast_));
}

Expression Expression::operator-() const { return Expression(make_unary(NodeKind::Negate, ast_)); }

Expression operator+(const Expression& a, const Expression& b) {
    return Expression(simplify_add(a.ast_, b.ast_));
}
Expression operator-(const Expression& a, const Expression& b) {
    return Expression(simplify_sub(a.ast_, b.ast_));
}
Expression operator*(const Expression& a, const Expression& b) {
    return Expression(simplify_mul(a.ast_, b.ast_));
}
Expression operator/(const Expression& a, const Expression& b) {
    return Expression(make_binary(NodeKind::Div, a.ast_, b.ast_));
}

Expression Expression::pow(long long n) const { return Expression(make_pow(ast_, n)); }

Jet Expression::eval_jet(double x0, int order) const {
    if (order < 0) throw Error("eval_jet needs a non-negative order");
    return eval_node(*ast_, x0, order);
}

double Expression::eval(double x) const { return eval_scalar(*ast_, x); }

Expression Expression::derivative() const { return Expression(derive(ast_)); }

Expression Expression::substitute(const Expression& inner) const {
    return Expression(substitute_node(ast_, inner.ast_));
}

bool Expression::is_constant() const { return !contains_variable(*ast_); }

double Expression::constant_value() const { return eval(0.0); }

std::string Expression::render() const {
    std::string out;
    render_node(*ast_, out);
    return out;
}

bool same_structure(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case NodeKind::Number: return a.number == b.number;
        case NodeKind::Variable: return true;
        case NodeKind::Negate:
        case NodeKind::Call:
            return (a.kind != NodeKind::Call || a.func == b.func) && same_structure(*a.left, *b.left);
        case NodeKind::Pow:
            return a.exponent == b.exponent && same_structure(*a.left, *b.left);
        default:
            return same_structure(*a.left, *b.left) && same_structure(*a.right, *b.right);
    }
}

}  // namespace abel
