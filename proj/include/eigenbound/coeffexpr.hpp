#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eigenbound {

enum class TokenKind { number, identifier, op, paren, function };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position;
};

// Grammar: numbers, the variable x, constants pi and e, + - * / ^, parentheses,
// and calls exp log sqrt sin cos abs (one argument) and pow (two).
std::vector<Token> tokenize(std::string_view text);

enum class NodeKind { constant, variable, negate, add, sub, mul, div, pow, call };
enum class Function { exp, log, sqrt, sin, cos, abs, pow };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    double value = 0.0;
    Function fn = Function::exp;
    std::vector<NodePtr> children;
};

// Immutable expression tree in one variable x. Copies share structure.
class Expr {
public:
    Expr() = default;
    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    static Expr constant(double v);
    static Expr variable();
    static Expr negate(Expr e);
    static Expr binary(NodeKind k, Expr l, Expr r);
    static Expr call(Function f, std::vector<Expr> args);

    double operator()(double x) const;
    // Fully parenthesized text that parses back to the same tree.
    std::string to_string() const;
    const NodePtr& root() const { return root_; }
    bool empty() const { return !root_; }

private:
    NodePtr root_;
};

Expr parse(const std::vector<Token>& tokens);
Expr parse(std::string_view text);
double evaluate(const Expr& e, double x);
bool structurally_equal(const Expr& a, const Expr& b);

std::string function_name(Function f);
std::optional<Function> function_by_name(std::string_view name);

struct PositivityCheck {
    bool pass = true;
    std::optional<double> first_violation;
    std::string message;
};

// Samples a on an interior grid of (0, p); endpoints are skipped.
PositivityCheck validate_positive(const Expr& a, double p, int samples);

struct Coefficients {
    Expr a;
    Expr b;
};

// "laplacian" (a=1, b=0) and "ou" (a=1, b=-x).
std::optional<Coefficients> preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace eigenbound
