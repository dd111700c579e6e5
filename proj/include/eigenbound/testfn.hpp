#pragma once

#include <cstddef>
#include <vector>

#include "eigenbound/measures.hpp"

namespace eigenbound {

// What f does outside its support window.
enum class Outside { zero, constant };

// A function sampled at the table nodes with one-sided derivatives, interpolated
// by cubic Hermite pieces. deriv is the right derivative (used on panel i),
// deriv_left the left one (used on panel i-1); they differ only at kinks.
struct GridFunction {
    const MeasureTable* table = nullptr;
    std::vector<double> values;
    std::vector<double> deriv;
    std::vector<double> deriv_left;
    std::size_t lo = 0;
    std::size_t hi = 0;
    Outside outside = Outside::zero;

    static GridFunction smooth(const MeasureTable& t, std::vector<double> values,
                               std::vector<double> deriv);

    std::size_t size() const { return values.size(); }
    double value_at(double x) const;
    double deriv_at(double x) const;
    void scale(double s);
};

struct Hermite {
    double f0, d0, f1, d1, h;
    double value(double t) const;
    double slope(double t) const;
};

// Hermite data on panel i. A non-finite endpoint derivative (e.g. sqrt at a zero)
// falls back to the secant on that panel.
Hermite hermite_on(const GridFunction& f, std::size_t panel);

// phi = nu(x, p) for ND, nu(0, x) for DN and NN.
GridFunction phi(BoundaryCase c, const MeasureTable& table);
GridFunction power(const GridFunction& f, double gamma);
GridFunction localized_nd(const MeasureTable& table, double x0, double x1);
GridFunction localized_dn(const MeasureTable& table, double x0);
GridFunction center(const GridFunction& f);

// Integral of f against mu.
double mu_integral(const GridFunction& f);
// Integral of e^C f'^2, i.e. f'^2 against 1/n.
double dirichlet_energy(const GridFunction& f);
// mu(f^2)
double l2_norm_sq(const GridFunction& f);

}  // namespace eigenbound
