#include "eigenbound/testfn.hpp"

#include <cmath>
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

GridFunction blank(const MeasureTable& t) {
    GridFunction f;
    f.table = &t;
    f.values.assign(t.nodes(), 0.0);
    f.deriv.assign(t.nodes(), 0.0);
    f.deriv_left.assign(t.nodes(), 0.0);
    f.lo = 0;
    f.hi = t.nodes() - 1;
    return f;
}

}  // namespace

double Hermite::value(double t) const {
    double t2 = t * t, t3 = t2 * t;
    return f0 * (2 * t3 - 3 * t2 + 1) + d0 * h * (t3 - 2 * t2 + t) + f1 * (-2 * t3 + 3 * t2) +
           d1 * h * (t3 - t2);
}

double Hermite::slope(double t) const {
    double t2 = t * t;
    return f0 * (6 * t2 - 6 * t) / h + d0 * (3 * t2 - 4 * t + 1) + f1 * (-6 * t2 + 6 * t) / h +
           d1 * (3 * t2 - 2 * t);
}

Hermite hermite_on(const GridFunction& f, std::size_t i) {
    const Panel& p = f.table->panel_data()[i];
    Hermite H{f.values[i], f.deriv[i], f.values[i + 1], f.deriv_left[i + 1], p.h};
    if (!std::isfinite(H.d0) || !std::isfinite(H.d1)) H.d0 = H.d1 = (H.f1 - H.f0) / p.h;
    return H;
}

GridFunction GridFunction::smooth(const MeasureTable& t, std::vector<double> values,
                                  std::vector<double> deriv) {
    GridFunction f;
    f.table = &t;
    f.values = std::move(values);
    f.deriv_left = deriv;
    f.deriv = std::move(deriv);
    f.lo = 0;
    f.hi = t.nodes() - 1;
    return f;
}

double GridFunction::value_at(double x) const {
    std::size_t i = table->locate(x);
    const Panel& p = table->panel_data()[i];
    return hermite_on(*this, i).value((x - p.x) / p.h);
}

double GridFunction::deriv_at(double x) const {
    std::size_t i = table->locate(x);
    const Panel& p = table->panel_data()[i];
    return hermite_on(*this, i).slope((x - p.x) / p.h);
}

void GridFunction::scale(double s) {
    for (auto& v : values) v *= s;
    for (auto& v : deriv) v *= s;
    for (auto& v : deriv_left) v *= s;
}

GridFunction phi(BoundaryCase c, const MeasureTable& t) {
    if (t.nu_overflow()) {
        if (c == BoundaryCase::ND)
            throw CriterionDegenerate("nu(0, D) is infinite, so the principal eigenvalue is 0");
        throw DivergenceError("nu(0, p) exceeds the overflow guard");
    }
    GridFunction f = blank(t);
    const auto& n = t.nu_density();
    for (std::size_t i = 0; i < t.nodes(); ++i) {
        if (c == BoundaryCase::ND) {
            f.values[i] = t.nu_tail()[i];
            f.deriv[i] = -n[i];
        } else {
            f.values[i] = t.nu_cum()[i];
            f.deriv[i] = n[i];
        }
    }
    f.deriv_left = f.deriv;
    return f;
}

GridFunction power(const GridFunction& f, double gamma) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("power exponent must lie in (0, 1]");
    if (gamma == 1.0) return f;
    for (std::size_t i = f.lo + 1; i < f.hi; ++i)
        if (!(f.values[i] > 0.0))
            throw DomainError("power of a function that is not positive at x = " +
                              fmt(f.table->grid()[i]));
    GridFunction g = f;
    auto d = [gamma](double v, double dv) {
        if (dv == 0.0) return 0.0;
        return gamma * std::pow(v, gamma - 1.0) * dv;
    };
    for (std::size_t i = 0; i < f.size(); ++i) {
        double v = std::max(f.values[i], 0.0);
        g.values[i] = std::pow(v, gamma);
        g.deriv[i] = d(v, f.deriv[i]);
        g.deriv_left[i] = d(v, f.deriv_left[i]);
    }
    return g;
}

GridFunction localized_nd(const MeasureTable& t, double x0, double x1) {
    const double p = t.right_end();
    if (!(x0 >= 0.0 && x0 < x1 && x1 <= p))
        throw RangeError("localized_nd needs 0 <= x0 < x1 <= p, got x0 = " + fmt(x0) +
                         ", x1 = " + fmt(x1));
    if (t.nu_overflow()) throw CriterionDegenerate("nu(0, D) is infinite, so the principal eigenvalue is 0");
    std::size_t i0 = t.nearest_node(x0), i1 = t.nearest_node(x1);
    if (i0 >= i1) throw RangeError("x0 and x1 fall on the same grid node");
    GridFunction f = blank(t);
    const auto& panels = t.panel_data();
    const auto& n = t.nu_density();
    for (std::size_t i = i1; i-- > i0;) f.values[i] = f.values[i + 1] + panels[i].nu;
    for (std::size_t i = 0; i < i0; ++i) f.values[i] = f.values[i0];
    for (std::size_t i = i0; i < i1; ++i) f.deriv[i] = -n[i];
    for (std::size_t i = i0 + 1; i <= i1; ++i) f.deriv_left[i] = -n[i];
    f.lo = 0;
    f.hi = i1;
    f.outside = Outside::zero;
    return f;
}

GridFunction localized_dn(const MeasureTable& t, double x0) {
    const double p = t.right_end();
    if (!(x0 > 0.0 && x0 <= p)) throw RangeError("localized_dn needs 0 < x0 <= p, got x0 = " + fmt(x0));
    if (t.nu_overflow()) throw DivergenceError("nu(0, p) exceeds the overflow guard");
    std::size_t i0 = t.nearest_node(x0);
    if (i0 == 0) throw RangeError("x0 falls on the left endpoint node");
    GridFunction f = blank(t);
    const auto& n = t.nu_density();
    for (std::size_t i = 0; i < t.nodes(); ++i) f.values[i] = t.nu_cum()[std::min(i, i0)];
    for (std::size_t i = 0; i < i0; ++i) f.deriv[i] = n[i];
    for (std::size_t i = 1; i <= i0; ++i) f.deriv_left[i] = n[i];
    f.lo = 0;
    f.hi = i0;
    f.outside = Outside::constant;
    return f;
}

double mu_integral(const GridFunction& f) {
    const auto& panels = f.table->panel_data();
    std::vector<double> parts(panels.size());
    for (std::size_t i = 0; i < panels.size(); ++i) {
        Hermite H = hermite_on(f, i);
        const auto& hm = panels[i].hm;
        parts[i] = H.f0 * hm[0] + H.d0 * hm[1] + H.f1 * hm[2] + H.d1 * hm[3];
    }
    return num::pairwise_sum(parts);
}

GridFunction center(const GridFunction& f) {
    const MeasureTable& t = *f.table;
    if (t.mu_overflow()) throw DivergenceError("mu(0, p) is infinite, so centering is undefined");
    double mean = mu_integral(f) / t.mu_total();
    GridFunction g = f;
    for (auto& v : g.values) v -= mean;
    g.lo = 0;
    g.hi = t.nodes() - 1;
    g.outside = Outside::zero;
    return g;
}

double dirichlet_energy(const GridFunction& f) {
    const auto& R = num::panel_rule();
    const auto& panels = f.table->panel_data();
    std::vector<double> parts(panels.size());
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const Panel& p = panels[i];
        Hermite H = hermite_on(f, i);
        if (H.f0 == 0.0 && H.f1 == 0.0 && H.d0 == 0.0 && H.d1 == 0.0) continue;
        double s = 0.0;
        for (std::size_t q = 0; q < R.size; ++q) {
            double d = H.slope((R.node[q] + 1.0) / 2.0);
            s += R.weight[q] * d * d / p.n[q];
        }
        parts[i] = s * p.h / 2.0;
    }
    return num::pairwise_sum(parts);
}

double l2_norm_sq(const GridFunction& f) {
    const auto& R = num::panel_rule();
    const auto& panels = f.table->panel_data();
    std::vector<double> parts(panels.size());
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const Panel& p = panels[i];
        Hermite H = hermite_on(f, i);
        if (H.f0 == 0.0 && H.f1 == 0.0 && H.d0 == 0.0 && H.d1 == 0.0) continue;
        double s = 0.0;
        for (std::size_t q = 0; q < R.size; ++q) {
            double v = H.value((R.node[q] + 1.0) / 2.0);
            s += R.weight[q] * v * v * p.m[q];
        }
        parts[i] = s * p.h / 2.0;
    }
    return num::pairwise_sum(parts);
}

}  // namespace eigenbound
