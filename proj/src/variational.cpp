#include "eigenbound/variational.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "eigenbound/errors.hpp"

namespace eigenbound {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

OperatorValue blank_value(std::size_t n) {
    OperatorValue op;
    op.values.assign(n, infinity);
    return op;
}

void summarize(OperatorValue& op, const MeasureTable& t, const char* what) {
    bool any = false;
    for (std::size_t i = 0; i < op.values.size(); ++i) {
        double v = op.values[i];
        if (!std::isfinite(v)) continue;
        if (!any) {
            op.lo = op.hi = op.argmin = op.argmax = i;
            op.inf = op.sup = v;
            any = true;
            continue;
        }
        op.hi = i;
        if (v < op.inf) {
            op.inf = v;
            op.argmin = i;
        }
        if (v > op.sup) {
            op.sup = v;
            op.argmax = i;
        }
    }
    if (!any) throw DegenerationError(std::string(what) + ": evaluation window is empty");
    op.x_argmin = t.grid()[op.argmin];
    op.x_argmax = t.grid()[op.argmax];
}

}  // namespace

std::vector<double> inner_integrals(BoundaryCase c, const GridFunction& f) {
    const auto& panels = f.table->panel_data();
    std::vector<double> F(f.size(), 0.0);
    auto panel_mass = [&](std::size_t i) {
        Hermite H = hermite_on(f, i);
        const auto& hm = panels[i].hm;
        return H.f0 * hm[0] + H.d0 * hm[1] + H.f1 * hm[2] + H.d1 * hm[3];
    };
    if (c == BoundaryCase::ND) {
        for (std::size_t i = 0; i < panels.size(); ++i) F[i + 1] = F[i] + panel_mass(i);
    } else {
        for (std::size_t i = panels.size(); i-- > 0;) F[i] = F[i + 1] + panel_mass(i);
    }
    return F;
}

namespace {

void polish(OperatorValue& op, const GridFunction& f, const GridFunction& g) {
    const auto& x = f.table->grid();
    auto ratio = [&](double s) { return g.value_at(s) / f.value_at(s); };
    auto bracket_ok = [&](std::size_t k) {
        return k >= 1 && k - 1 >= op.lo && k + 1 <= op.hi && op.in_window(k - 1) && op.in_window(k + 1);
    };
    if (bracket_ok(op.argmax)) {
        std::size_t k = op.argmax;
        auto best = num::golden_max(ratio, x[k - 1], x[k + 1], (x[k + 1] - x[k - 1]) * 1e-9);
        if (best.value > op.sup) {
            op.sup = best.value;
            op.x_argmax = best.x;
        }
    }
    if (bracket_ok(op.argmin)) {
        std::size_t k = op.argmin;
        auto best = num::golden_max([&](double s) { return -ratio(s); }, x[k - 1], x[k + 1],
                                    (x[k + 1] - x[k - 1]) * 1e-9);
        if (-best.value < op.inf) {
            op.inf = -best.value;
            op.x_argmin = best.x;
        }
    }
}

}  // namespace

OperatorValue eval_I(BoundaryCase c, const GridFunction& f) {
    const MeasureTable& t = *f.table;
    const auto& n = t.nu_density();
    const std::size_t N = t.nodes();
    auto F = inner_integrals(c, f);
    OperatorValue op = blank_value(N);
    const bool nd = c == BoundaryCase::ND;
    const std::size_t first = std::max<std::size_t>(1, f.lo);
    const std::size_t last = std::min(N - 2, f.hi);
    for (std::size_t i = first; i <= last; ++i) {
        double d = f.deriv[i];
        if (d == 0.0) continue;
        if (nd ? d > 0.0 : d < 0.0)
            throw DomainError(std::string("I needs f' ") + (nd ? "< 0" : "> 0") +
                              " on the interior; violated at x = " + fmt(t.grid()[i]));
        op.values[i] = nd ? -n[i] * F[i] / d : n[i] * F[i] / d;
    }
    summarize(op, t, "I");
    return op;
}

GridFunction ii_product(BoundaryCase c, const GridFunction& f) {
    const MeasureTable& t = *f.table;
    const auto& panels = t.panel_data();
    const auto& n = t.nu_density();
    const std::size_t N = t.nodes();
    auto F = inner_integrals(c, f);

    GridFunction g;
    g.table = &t;
    g.values.assign(N, 0.0);
    g.deriv.assign(N, 0.0);
    g.deriv_left.assign(N, 0.0);
    g.lo = 0;
    g.outside = Outside::zero;
    std::size_t support_end = N - 1;
    if (c == BoundaryCase::ND) {
        if (f.outside == Outside::zero) support_end = f.hi;
        for (std::size_t i = support_end; i-- > 0;) {
            Hermite H = hermite_on(f, i);
            const auto& a = panels[i].hm_nu_right;
            g.values[i] = g.values[i + 1] + F[i] * panels[i].nu +
                          (H.f0 * a[0] + H.d0 * a[1] + H.f1 * a[2] + H.d1 * a[3]);
        }
        for (std::size_t i = 0; i < support_end; ++i) g.deriv[i] = -n[i] * F[i];
        for (std::size_t i = 1; i <= support_end; ++i) g.deriv_left[i] = -n[i] * F[i];
    } else {
        for (std::size_t i = 0; i + 1 < N; ++i) {
            Hermite H = hermite_on(f, i);
            const auto& a = panels[i].hm_nu_left;
            g.values[i + 1] = g.values[i] + F[i + 1] * panels[i].nu +
                              (H.f0 * a[0] + H.d0 * a[1] + H.f1 * a[2] + H.d1 * a[3]);
        }
        for (std::size_t i = 0; i < N; ++i) g.deriv[i] = g.deriv_left[i] = n[i] * F[i];
    }
    g.hi = support_end;
    return g;
}

IIResult eval_II(BoundaryCase c, const GridFunction& f, bool refine) {
    const MeasureTable& t = *f.table;
    const std::size_t N = t.nodes();
    const bool nd = c == BoundaryCase::ND;
    GridFunction g = ii_product(c, f);
    const std::size_t support_end = g.hi;

    OperatorValue op = blank_value(N);
    const std::size_t last = std::min(N - 2, nd ? support_end - 1 : N - 2);
    for (std::size_t i = 1; i <= last; ++i) {
        if (!(f.values[i] > 0.0))
            throw DomainError("II needs f > 0 on the interior; violated at x = " + fmt(t.grid()[i]));
        op.values[i] = g.values[i] / f.values[i];
    }
    summarize(op, t, "II");
    if (refine) polish(op, f, g);
    return {std::move(op), std::move(g)};
}

OperatorValue eval_R(const GridFunction& h, const Expr& a, const Expr& b) {
    const MeasureTable& t = *h.table;
    const std::size_t N = t.nodes();
    OperatorValue op = blank_value(N);
    for (std::size_t i = 1; i + 1 < N; ++i) {
        double x = t.grid()[i];
        double av = a(x), bv = b(x), hv = h.values[i];
        op.values[i] = -(av * hv * hv + bv * hv + av * h.deriv[i]);
    }
    summarize(op, t, "R");
    return op;
}

OperatorValue eval_Rbar(const GridFunction& h, const Expr& a, const Expr& b,
                        const std::optional<std::vector<double>>& flux_slope) {
    const MeasureTable& t = *h.table;
    const auto& x = t.grid();
    const std::size_t N = t.nodes();
    OperatorValue op = blank_value(N);
    double hmax = 0.0;
    for (double v : h.values) hmax = std::max(hmax, std::abs(v));
    const double guard = 1e-12 * hmax;

    std::vector<double> slope(N, 0.0);
    std::size_t first = 1, last = N - 2;
    if (flux_slope) {
        slope = *flux_slope;
    } else {
        std::vector<double> q(N);
        for (std::size_t i = 1; i + 1 < N; ++i) q[i] = a(x[i]) * h.deriv[i] + b(x[i]) * h.values[i];
        auto diff3 = [&](std::size_t l, std::size_t c, std::size_t r) {
            double h1 = x[c] - x[l], h2 = x[r] - x[c];
            return -h2 / (h1 * (h1 + h2)) * q[l] + (h2 - h1) / (h1 * h2) * q[c] +
                   h1 / (h2 * (h1 + h2)) * q[r];
        };
        first = 3;
        last = N - 4;
        double scale = 0.0;
        for (std::size_t i = first; i <= last; ++i) {
            slope[i] = diff3(i - 1, i, i + 1);
            double wide = diff3(i - 2, i, i + 2);
            scale = std::max(scale, std::abs(slope[i]));
            op.difference_gap = std::max(op.difference_gap, std::abs(wide - slope[i]));
        }
        if (scale > 0.0) op.difference_gap /= scale;
    }
    for (std::size_t i = first; i <= last; ++i) {
        if (std::abs(h.values[i]) <= guard) continue;
        op.values[i] = -slope[i] / h.values[i];
    }
    summarize(op, t, "Rbar");
    return op;
}

double bound_lower(BoundaryCase c, const GridFunction& f, Operator op, const Coefficients* coeffs) {
    switch (op) {
    case Operator::I: return 1.0 / eval_I(c, f).sup;
    case Operator::II: return 1.0 / eval_II(c, f).op.sup;
    case Operator::R:
    case Operator::Rbar:
        if (!coeffs) throw Error("R and Rbar bounds need the coefficients a and b");
        return op == Operator::R ? eval_R(f, coeffs->a, coeffs->b).inf
                                 : eval_Rbar(f, coeffs->a, coeffs->b).inf;
    }
    return 0.0;
}

double bound_upper(BoundaryCase c, const GridFunction& f, Operator op) {
    if (op == Operator::I) return 1.0 / eval_I(c, f).inf;
    if (op == Operator::II) return 1.0 / eval_II(c, f).op.inf;
    throw Error("upper bounds use the I or II operator");
}

}  // namespace eigenbound
