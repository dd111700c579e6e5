#include "eigenbound/coeffexpr.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <numbers>

#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

constexpr int max_nesting = 256;

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

class Parser {
public:
    Parser(const std::vector<Token>& toks, std::size_t end) : toks_(toks), end_(end) {}

    Expr run() {
        if (toks_.empty()) throw SyntaxError("empty expression", 0);
        Expr e = expr(0);
        if (pos_ != toks_.size()) throw SyntaxError("unexpected '" + toks_[pos_].lexeme + "'", where());
        return e;
    }

private:
    const std::vector<Token>& toks_;
    std::size_t end_;
    std::size_t pos_ = 0;

    std::size_t where() const { return pos_ < toks_.size() ? toks_[pos_].position : end_; }
    bool at(std::string_view lex) const { return pos_ < toks_.size() && toks_[pos_].lexeme == lex; }
    void expect(std::string_view lex) {
        if (!at(lex)) throw SyntaxError("expected '" + std::string(lex) + "'", where());
        ++pos_;
    }
    void guard(int depth) const {
        if (depth > max_nesting) throw SyntaxError("expression nested too deeply", where());
    }

    Expr expr(int depth) {
        guard(depth);
        Expr lhs = term(depth + 1);
        while (at("+") || at("-")) {
            NodeKind k = toks_[pos_++].lexeme == "+" ? NodeKind::add : NodeKind::sub;
            lhs = Expr::binary(k, lhs, term(depth + 1));
        }
        return lhs;
    }

    Expr term(int depth) {
        guard(depth);
        Expr lhs = unary(depth + 1);
        while (at("*") || at("/")) {
            NodeKind k = toks_[pos_++].lexeme == "*" ? NodeKind::mul : NodeKind::div;
            lhs = Expr::binary(k, lhs, unary(depth + 1));
        }
        return lhs;
    }

    // Unary minus sits below ^, so -x^2 is -(x^2), while 2^-x still parses.
    Expr unary(int depth) {
        guard(depth);
        if (at("-")) {
            ++pos_;
            return Expr::negate(unary(depth + 1));
        }
        if (at("+")) {
            ++pos_;
            return unary(depth + 1);
        }
        return power(depth + 1);
    }

    Expr power(int depth) {
        guard(depth);
        Expr base = primary(depth + 1);
        if (at("^")) {
            ++pos_;
            return Expr::binary(NodeKind::pow, base, unary(depth + 1));
        }
        return base;
    }

    Expr primary(int depth) {
        guard(depth);
        if (pos_ >= toks_.size()) throw SyntaxError("expected operand", end_);
        const Token& t = toks_[pos_];
        switch (t.kind) {
        case TokenKind::number: {
            ++pos_;
            double v = 0.0;
            auto res = std::from_chars(t.lexeme.data(), t.lexeme.data() + t.lexeme.size(), v);
            if (res.ec != std::errc()) throw SyntaxError("bad number '" + t.lexeme + "'", t.position);
            return Expr::constant(v);
        }
        case TokenKind::identifier:
            ++pos_;
            if (t.lexeme == "x") return Expr::variable();
            if (t.lexeme == "pi") return Expr::constant(std::numbers::pi);
            return Expr::constant(std::numbers::e);
        case TokenKind::function: {
            ++pos_;
            Function f = *function_by_name(t.lexeme);
            expect("(");
            std::vector<Expr> args{expr(depth + 1)};
            while (at(",")) {
                ++pos_;
                args.push_back(expr(depth + 1));
            }
            std::size_t arity = f == Function::pow ? 2 : 1;
            if (args.size() != arity)
                throw SyntaxError(t.lexeme + " takes " + std::to_string(arity) + " argument(s)",
                                  t.position);
            expect(")");
            return Expr::call(f, std::move(args));
        }
        case TokenKind::paren:
            if (t.lexeme == "(") {
                ++pos_;
                Expr e = expr(depth + 1);
                expect(")");
                return e;
            }
            break;
        case TokenKind::op:
            break;
        }
        throw SyntaxError("expected operand, found '" + t.lexeme + "'", t.position);
    }
};

[[noreturn]] void domain_fail(const char* what, const ExprNode& n) {
    throw DomainError(std::string(what) + " in " + Expr(std::make_shared<ExprNode>(n)).to_string());
}

double checked_pow(double base, double ex, const ExprNode& n) {
    if (base == 0.0 && ex < 0.0) domain_fail("zero raised to a negative power", n);
    if (base < 0.0 && ex != std::floor(ex)) domain_fail("negative base with non-integer exponent", n);
    return std::pow(base, ex);
}

double eval_node(const ExprNode& n, double x) {
    switch (n.kind) {
    case NodeKind::constant:
        return n.value;
    case NodeKind::variable:
        return x;
    case NodeKind::negate:
        return -eval_node(*n.children[0], x);
    case NodeKind::add:
        return eval_node(*n.children[0], x) + eval_node(*n.children[1], x);
    case NodeKind::sub:
        return eval_node(*n.children[0], x) - eval_node(*n.children[1], x);
    case NodeKind::mul:
        return eval_node(*n.children[0], x) * eval_node(*n.children[1], x);
    case NodeKind::div: {
        double d = eval_node(*n.children[1], x);
        if (d == 0.0) domain_fail("division by zero", n);
        return eval_node(*n.children[0], x) / d;
    }
    case NodeKind::pow:
        return checked_pow(eval_node(*n.children[0], x), eval_node(*n.children[1], x), n);
    case NodeKind::call: {
        double u = eval_node(*n.children[0], x);
        switch (n.fn) {
        case Function::exp: return std::exp(u);
        case Function::log:
            if (u <= 0.0) domain_fail("log of non-positive value", n);
            return std::log(u);
        case Function::sqrt:
            if (u < 0.0) domain_fail("sqrt of negative value", n);
            return std::sqrt(u);
        case Function::sin: return std::sin(u);
        case Function::cos: return std::cos(u);
        case Function::abs: return std::abs(u);
        case Function::pow: return checked_pow(u, eval_node(*n.children[1], x), n);
        }
    }
    }
    return 0.0;
}

void print_node(const ExprNode& n, std::string& out) {
    auto bin = [&](const char* op) {
        out += '(';
        print_node(*n.children[0], out);
        out += op;
        print_node(*n.children[1], out);
        out += ')';
    };
    switch (n.kind) {
    case NodeKind::constant: out += format_number(n.value); break;
    case NodeKind::variable: out += 'x'; break;
    case NodeKind::negate:
        out += "(-";
        print_node(*n.children[0], out);
        out += ')';
        break;
    case NodeKind::add: bin(" + "); break;
    case NodeKind::sub: bin(" - "); break;
    case NodeKind::mul: bin(" * "); break;
    case NodeKind::div: bin(" / "); break;
    case NodeKind::pow: bin(" ^ "); break;
    case NodeKind::call:
        out += function_name(n.fn);
        out += '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i) out += ", ";
            print_node(*n.children[i], out);
        }
        out += ')';
        break;
    }
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
    if (a.kind == NodeKind::constant && a.value != b.value) return false;
    if (a.kind == NodeKind::call && a.fn != b.fn) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!equal_nodes(*a.children[i], *b.children[i])) return false;
    return true;
}

}  // namespace

std::string function_name(Function f) {
    switch (f) {
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::abs: return "abs";
    case Function::pow: return "pow";
    }
    return "?";
}

std::optional<Function> function_by_name(std::string_view name) {
    for (Function f : {Function::exp, Function::log, Function::sqrt, Function::sin, Function::cos,
                       Function::abs, Function::pow})
        if (function_name(f) == name) return f;
    return std::nullopt;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (is_digit(c) || (c == '.' && i + 1 < text.size() && is_digit(text[i + 1]))) {
            while (i < text.size() && is_digit(text[i])) ++i;
            if (i < text.size() && text[i] == '.') {
                ++i;
                while (i < text.size() && is_digit(text[i])) ++i;
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < text.size() && is_digit(text[j])) {
                    i = j;
                    while (i < text.size() && is_digit(text[i])) ++i;
                }
            }
            out.push_back({TokenKind::number, std::string(text.substr(start, i - start)), start});
        } else if (is_ident_start(c)) {
            while (i < text.size() && is_ident_char(text[i])) ++i;
            std::string word(text.substr(start, i - start));
            if (function_by_name(word))
                out.push_back({TokenKind::function, word, start});
            else if (word == "x" || word == "pi" || word == "e")
                out.push_back({TokenKind::identifier, word, start});
            else
                throw LexError("unknown identifier '" + word + "'", start);
        } else if (c == '(' || c == ')') {
            out.push_back({TokenKind::paren, std::string(1, c), start});
            ++i;
        } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == ',') {
            out.push_back({TokenKind::op, std::string(1, c), start});
            ++i;
        } else {
            throw LexError(std::string("unexpected character '") + c + "'", start);
        }
    }
    return out;
}

Expr Expr::constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::constant;
    n->value = v;
    return Expr(n);
}

Expr Expr::variable() {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::variable;
    return Expr(n);
}

Expr Expr::negate(Expr e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::negate;
    n->children = {e.root()};
    return Expr(n);
}

Expr Expr::binary(NodeKind k, Expr l, Expr r) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->children = {l.root(), r.root()};
    return Expr(n);
}

Expr Expr::call(Function f, std::vector<Expr> args) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::call;
    n->fn = f;
    for (auto& a : args) n->children.push_back(a.root());
    return Expr(n);
}

double Expr::operator()(double x) const {
    double v = eval_node(*root_, x);
    if (std::isnan(v)) throw DomainError("expression " + to_string() + " is undefined at x = " + format_number(x));
    return v;
}

std::string Expr::to_string() const {
    std::string out;
    if (root_) print_node(*root_, out);
    return out;
}

Expr parse(const std::vector<Token>& tokens) {
    std::size_t end = tokens.empty() ? 0 : tokens.back().position + tokens.back().lexeme.size();
    return Parser(tokens, end).run();
}

Expr parse(std::string_view text) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw SyntaxError("empty expression", 0);
    return parse(tokenize(text));
}

double evaluate(const Expr& e, double x) { return e(x); }

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return equal_nodes(*a.root(), *b.root());
}

PositivityCheck validate_positive(const Expr& a, double p, int samples) {
    PositivityCheck out;
    if (samples < 2) samples = 2;
    for (int k = 1; k <= samples; ++k) {
        double x = p * k / (samples + 1.0);
        try {
            double v = a(x);
            if (!(v > 0.0) || !std::isfinite(v)) {
                out.pass = false;
                out.first_violation = x;
                out.message = "a(" + format_number(x) + ") = " + format_number(v) + " is not positive";
                return out;
            }
        } catch (const DomainError& e) {
            out.pass = false;
            out.first_violation = x;
            out.message = e.what();
            return out;
        }
    }
    return out;
}

std::optional<Coefficients> preset(std::string_view name) {
    if (name == "laplacian") return Coefficients{Expr::constant(1.0), Expr::constant(0.0)};
    if (name == "ou") return Coefficients{Expr::constant(1.0), Expr::negate(Expr::variable())};
    return std::nullopt;
}

std::vector<std::string> preset_names() { return {"laplacian", "ou"}; }

}  // namespace eigenbound
