#include "eigenbound/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace eigenbound::num {

namespace {

// Positive half of the G7-K15 pair, outermost first (QUADPACK qk15 values).
constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kronrod_x[1], [3], [5], [7].
constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double lagrange(const PanelRule& r, std::size_t j, double s) {
    double p = 1.0;
    for (std::size_t k = 0; k < PanelRule::size; ++k)
        if (k != j) p *= (s - r.node[k]) / (r.node[j] - r.node[k]);
    return p;
}

PanelRule make_rule() {
    PanelRule r;
    for (std::size_t i = 0; i < 8; ++i) {
        r.node[i] = -kronrod_x[i];
        r.weight[i] = kronrod_w[i];
        r.node[14 - i] = kronrod_x[i];
        r.weight[14 - i] = kronrod_w[i];
    }
    for (std::size_t g = 0; g < 4; ++g) {
        std::size_t i = 2 * g + 1;
        r.gauss_weight[i] = gauss_w[g];
        r.gauss_weight[14 - i] = gauss_w[g];
    }
    for (std::size_t j = 0; j < PanelRule::size; ++j) {
        double p = 1.0;
        for (std::size_t k = 0; k < PanelRule::size; ++k)
            if (k != j) p *= r.node[j] - r.node[k];
        r.bary[j] = 1.0 / p;
    }
    // 16-point Gauss-Legendre integrates the degree-14 basis exactly.
    const GaussRule gl = gauss_legendre(16);
    for (std::size_t q = 0; q < PanelRule::size; ++q) {
        const double s = r.node[q];
        for (std::size_t j = 0; j < PanelRule::size; ++j) {
            double lo = 0.0, hi = 0.0;
            for (std::size_t g = 0; g < gl.node.size(); ++g) {
                double tl = -1.0 + (s + 1.0) * (gl.node[g] + 1.0) / 2.0;
                double tr = s + (1.0 - s) * (gl.node[g] + 1.0) / 2.0;
                lo += gl.weight[g] * lagrange(r, j, tl);
                hi += gl.weight[g] * lagrange(r, j, tr);
            }
            r.left[q][j] = lo * (s + 1.0) / 2.0;
            r.right[q][j] = hi * (1.0 - s) / 2.0;
        }
    }
    return r;
}

}  // namespace

double PanelRule::integrate(std::span<const double, size> v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size; ++i) s += weight[i] * v[i];
    return s;
}

double PanelRule::integrate_gauss(std::span<const double, size> v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size; ++i) s += gauss_weight[i] * v[i];
    return s;
}

double PanelRule::interpolate(std::span<const double, size> v, double s) const {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
        double d = s - node[j];
        if (d == 0.0) return v[j];
        double t = bary[j] / d;
        num += t * v[j];
        den += t;
    }
    return num / den;
}

double PanelRule::integrate_to(std::span<const double, size> v, double s) const {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return integrate(v);
    static const GaussRule gl = gauss_legendre(16);
    double acc = 0.0;
    for (std::size_t g = 0; g < gl.node.size(); ++g) {
        double t = -1.0 + (s + 1.0) * (gl.node[g] + 1.0) / 2.0;
        acc += gl.weight[g] * interpolate(v, t);
    }
    return acc * (s + 1.0) / 2.0;
}

double PanelRule::integrate_from(std::span<const double, size> v, double s) const {
    if (s >= 1.0) return 0.0;
    if (s <= -1.0) return integrate(v);
    static const GaussRule gl = gauss_legendre(16);
    double acc = 0.0;
    for (std::size_t g = 0; g < gl.node.size(); ++g) {
        double t = s + (1.0 - s) * (gl.node[g] + 1.0) / 2.0;
        acc += gl.weight[g] * interpolate(v, t);
    }
    return acc * (1.0 - s) / 2.0;
}

const PanelRule& panel_rule() {
    static const PanelRule rule = make_rule();
    return rule;
}

GaussRule gauss_legendre(int n) {
    GaussRule g;
    g.node.resize(n);
    g.weight.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        g.node[n - 1 - i] = x;
        g.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

Extremum golden_max(const std::function<double(double)>& f, double lo, double hi,
                    double xtol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    Extremum best{c, fc};
    if (fd > best.value) best = {d, fd};
    for (int it = 0; it < 200 && (b - a) > xtol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
            if (fc > best.value) best = {c, fc};
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
            if (fd > best.value) best = {d, fd};
        }
    }
    return best;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace eigenbound::num
