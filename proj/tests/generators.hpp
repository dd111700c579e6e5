#pragma once

// Hand-rolled generators for the property tests. Seeded, so failures replay.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "eigenbound/coeffexpr.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }
inline int integer(Rng& r, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(r); }

// Non-negative literals of assorted shapes: integers, short decimals, tiny and huge magnitudes.
inline double literal(Rng& r) {
    switch (integer(r, 0, 3)) {
    case 0: return integer(r, 0, 99);
    case 1: return integer(r, 0, 9999) / 100.0;
    case 2: return uniform(r, 0.0, 1.0) * std::pow(10.0, integer(r, -12, 12));
    default: return uniform(r, 0.0, 10.0);
    }
}

inline eigenbound::Expr expr(Rng& r, int depth) {
    using namespace eigenbound;
    if (depth <= 0 || integer(r, 0, 9) < 2) return integer(r, 0, 1) ? Expr::variable() : Expr::constant(literal(r));
    switch (integer(r, 0, 7)) {
    case 0: return Expr::negate(expr(r, depth - 1));
    case 1: return Expr::binary(NodeKind::add, expr(r, depth - 1), expr(r, depth - 1));
    case 2: return Expr::binary(NodeKind::sub, expr(r, depth - 1), expr(r, depth - 1));
    case 3: return Expr::binary(NodeKind::mul, expr(r, depth - 1), expr(r, depth - 1));
    case 4: return Expr::binary(NodeKind::div, expr(r, depth - 1), expr(r, depth - 1));
    case 5: return Expr::binary(NodeKind::pow, expr(r, depth - 1), expr(r, depth - 1));
    case 6: {
        static const Function unary[] = {Function::exp, Function::log, Function::sqrt,
                                         Function::sin, Function::cos, Function::abs};
        return Expr::call(unary[integer(r, 0, 5)], {expr(r, depth - 1)});
    }
    default: return Expr::call(Function::pow, {expr(r, depth - 1), expr(r, depth - 1)});
    }
}

// Random whitespace between tokens of a printed expression.
inline std::string reflow(Rng& r, const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == ' ') {
            out += std::string(static_cast<std::size_t>(integer(r, 0, 2)), ' ');
            if (integer(r, 0, 5) == 0) out += '\t';
        } else {
            out += c;
        }
    }
    return out;
}

// Piecewise-constant non-negative weight on [0, p] with a few breakpoints.
struct Piecewise {
    std::vector<double> breaks;  // 0 = b_0 < ... < b_k = p
    std::vector<double> level;   // value on [b_i, b_{i+1})
    double operator()(double x) const {
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            if (x < breaks[i + 1]) return level[i];
        return level.back();
    }
    // Integral over [0, x].
    double head(double x) const {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            double hi = std::min(x, breaks[i + 1]);
            if (hi > breaks[i]) s += level[i] * (hi - breaks[i]);
        }
        return s;
    }
    double total() const { return head(breaks.back()); }
    double tail(double x) const { return total() - head(x); }
};

inline Piecewise piecewise(Rng& r, double p, bool allow_zero) {
    Piecewise w;
    int k = integer(r, 1, 6);
    std::vector<double> cuts;
    for (int i = 0; i < k - 1; ++i) cuts.push_back(uniform(r, 0.0, p));
    std::sort(cuts.begin(), cuts.end());
    w.breaks.push_back(0.0);
    for (double c : cuts) w.breaks.push_back(c);
    w.breaks.push_back(p);
    for (int i = 0; i < k; ++i) {
        double v = std::exp(uniform(r, -3.0, 3.0));
        if (allow_zero && integer(r, 0, 4) == 0 && i > 0) v = 0.0;
        w.level.push_back(v);
    }
    return w;
}

}  // namespace gen
