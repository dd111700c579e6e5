#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace eigenbound::num {

// Kronrod 15-point rule on [-1, 1] with the embedded 7-point Gauss rule.
// Nodes are sorted ascending; gauss_weight is zero on the Kronrod-only nodes.
struct PanelRule {
    static constexpr std::size_t size = 15;
    using Samples = std::array<double, size>;

    Samples node{};
    Samples weight{};
    Samples gauss_weight{};
    Samples bary{};
    // left[q][r] = integral of the r-th Lagrange basis polynomial over [-1, node[q]],
    // right[q][r] over [node[q], 1].
    std::array<Samples, size> left{};
    std::array<Samples, size> right{};

    double integrate(std::span<const double, size> v) const;
    double integrate_gauss(std::span<const double, size> v) const;
    // Value at s of the polynomial interpolating v at the nodes.
    double interpolate(std::span<const double, size> v, double s) const;
    // Integral of that polynomial over [-1, s].
    double integrate_to(std::span<const double, size> v, double s) const;
    // Integral over [s, 1].
    double integrate_from(std::span<const double, size> v, double s) const;
};

const PanelRule& panel_rule();

struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

struct Extremum {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section search for a maximum of f on [lo, hi]; only interior points are evaluated.
Extremum golden_max(const std::function<double(double)>& f, double lo, double hi,
                    double xtol);

// Pairwise summation with a fixed split, so results do not depend on call order.
double pairwise_sum(std::span<const double> v);

}  // namespace eigenbound::num
