#include "eigenbound/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

bool relevant_overflow(BoundaryCase c, const MeasureTable& t) {
    return c == BoundaryCase::ND ? t.nu_overflow() : t.mu_overflow();
}

// Scan the interior nodes, then golden-section on the two panels around the best node.
SupValue scan_and_refine(const MeasureTable& t, const std::function<double(std::size_t)>& at_node,
                         const std::function<double(double)>& at_x, bool refine = true) {
    const auto& x = t.grid();
    const std::size_t N = t.nodes();
    std::size_t best = 1;
    double best_v = -infinity;
    for (std::size_t i = 1; i + 1 < N; ++i) {
        double v = at_node(i);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    SupValue out{best_v, x[best]};
    if (!refine) return out;
    double lo = x[best - 1], hi = x[best + 1];
    auto g = num::golden_max(at_x, lo, hi, (hi - lo) * 1e-10);
    if (g.value > out.value) out = {g.value, g.x};
    return out;
}

}  // namespace

SupValue delta(BoundaryCase c, const MeasureTable& t) {
    if (relevant_overflow(c, t)) return {infinity, t.right_end()};
    const bool nd = c == BoundaryCase::ND;
    auto node = [&](std::size_t i) {
        auto m = t.coords_node(i);
        return nd ? m.mu_head * m.nu_tail : m.nu_head * m.mu_tail;
    };
    auto at = [&](double x) {
        auto m = t.coords_at(x);
        return nd ? m.mu_head * m.nu_tail : m.nu_head * m.mu_tail;
    };
    return scan_and_refine(t, node, at);
}

std::pair<double, double> basic_bounds(BoundaryCase c, const MeasureTable& t) {
    double d = delta(c, t).value;
    if (!std::isfinite(d)) return {0.0, 0.0};
    return {1.0 / (4.0 * d), 1.0 / d};
}

SupValue delta1(BoundaryCase c, const MeasureTable& t) {
    if (relevant_overflow(c, t)) throw CriterionDegenerate("delta is infinite");
    if (c == BoundaryCase::ND) {
        Cumulative root(t, Cumulative::Against::mu, [](const MeasureCoordinates& m) { return std::sqrt(m.nu_tail); });
        Cumulative cube(t, Cumulative::Against::mu, [](const MeasureCoordinates& m) { return std::pow(m.nu_tail, 1.5); });
        auto f = [](double phi, double a, double b) {
            double s = std::sqrt(phi);
            return s * a + b / s;
        };
        return scan_and_refine(
            t, [&](std::size_t i) { return f(t.nu_tail()[i], root.head_node(i), cube.tail_node(i)); },
            [&](double x) { return f(t.nu_tail_at(x), root.head(x), cube.tail(x)); });
    }
    Cumulative root(t, Cumulative::Against::mu, [](const MeasureCoordinates& m) { return std::sqrt(m.nu_head); });
    Cumulative cube(t, Cumulative::Against::mu, [](const MeasureCoordinates& m) { return std::pow(m.nu_head, 1.5); });
    auto f = [](double phi, double a, double b) {
        double s = std::sqrt(phi);
        return a / s + s * b;
    };
    return scan_and_refine(
        t, [&](std::size_t i) { return f(t.nu_cum()[i], cube.head_node(i), root.tail_node(i)); },
        [&](double x) { return f(t.nu_cum_at(x), cube.head(x), root.tail(x)); });
}

SupValue delta1_prime(BoundaryCase c, const MeasureTable& t, bool refine) {
    if (relevant_overflow(c, t)) throw CriterionDegenerate("delta is infinite");
    if (c == BoundaryCase::ND) {
        Cumulative sq(t, Cumulative::Against::mu, [](const MeasureCoordinates& m) { return m.nu_tail * m.nu_tail; });
        auto f = [](double mu_head, double phi, double tail) { return mu_head * phi + tail / phi; };
        return scan_and_refine(
            t, [&](std::size_t i) { return f(t.mu_cum()[i], t.nu_tail()[i], sq.tail_node(i)); },
            [&](double x) { return f(t.mu_cum_at(x), t.nu_tail_at(x), sq.tail(x)); }, refine);
    }
    Cumulative sq(t, Cumulative::Against::mu, [](const MeasureCoordinates& m) { return m.nu_head * m.nu_head; });
    auto f = [](double head, double phi, double mu_tail) { return head / phi + phi * mu_tail; };
    return scan_and_refine(
        t, [&](std::size_t i) { return f(sq.head_node(i), t.nu_cum()[i], t.mu_tail()[i]); },
        [&](double x) { return f(sq.head(x), t.nu_cum_at(x), t.mu_tail_at(x)); }, refine);
}

BoundsReport degenerate_bounds(BoundaryCase c) {
    BoundsReport r;
    r.boundary = c;
    r.delta = infinity;
    r.lower_basic = r.upper_basic = 0.0;
    r.lower_improved = r.upper_improved = 0.0;
    r.delta1 = r.delta1_prime = infinity;
    r.positive = false;
    r.positivity = c == BoundaryCase::ND ? "lambda0 = 0 (nu(0,D) infinite)"
                                         : "eigenvalue = 0 (mu(0,D) infinite)";
    return r;
}

BoundsReport compute_bounds(BoundaryCase c, const MeasureTable& t, double eps_b) {
    SupValue d = delta(c, t);
    if (!std::isfinite(d.value)) {
        BoundsReport r = degenerate_bounds(c);
        r.right_end = t.right_end();
        return r;
    }
    BoundsReport r;
    r.boundary = c;
    r.right_end = t.right_end();
    r.delta = d.value;
    r.x_delta = d.x;
    r.lower_basic = 1.0 / (4.0 * d.value);
    r.upper_basic = 1.0 / d.value;
    r.positive = true;
    r.positivity = "positive (delta finite)";
    if (c == BoundaryCase::NN) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.delta1 = r.delta1_prime = r.lower_improved = r.upper_improved = nan;
        r.lower_basic = r.upper_basic = nan;
        r.positivity = "gap positive (delta finite)";
        return r;
    }
    SupValue d1 = delta1(c, t), d1p = delta1_prime(c, t);
    r.delta1 = d1.value;
    r.x_delta1 = d1.x;
    r.delta1_prime = d1p.value;
    r.x_delta1_prime = d1p.x;
    r.lower_improved = 1.0 / d1.value;
    r.upper_improved = 1.0 / d1p.value;
    double slack = 10.0 * eps_b * d.value;
    r.containment = d1p.value >= d.value - slack && d1p.value <= 2.0 * d.value + slack;
    return r;
}

double effective_truncation(const ProblemSpec& problem) {
    double prev_mass = 0.0, last_ok = problem.truncation_schedule.front();
    bool first = true;
    for (double p : problem.truncation_schedule) {
        MeasureTable t = MeasureTable::build(problem, p);
        bool nd = problem.boundary == BoundaryCase::ND;
        if (nd ? t.nu_overflow() : t.mu_overflow()) break;
        double mass = nd ? t.nu_total() : t.mu_total();
        last_ok = p;
        if (!first && mass - prev_mass <= problem.tol.oracle * mass) break;
        prev_mass = mass;
        first = false;
    }
    return last_ok;
}

BoundsReport compute_bounds(const ProblemSpec& problem) {
    if (!problem.infinite()) {
        MeasureTable t = build_tables(problem, problem.right_end);
        return compute_bounds(problem.boundary, t, problem.tol.bound);
    }
    HypothesisReport hyp = hypothesis_check(problem);
    if (!hyp.pass()) throw HypothesisError("hypothesis check failed");
    if (hyp.lambda_zero) {
        BoundsReport r = degenerate_bounds(problem.boundary);
        r.right_end = infinity;
        return r;
    }
    double p = effective_truncation(problem);
    MeasureTable t = build_tables(problem, p);
    return compute_bounds(problem.boundary, t, problem.tol.bound);
}

}  // namespace eigenbound
