#pragma once

#include <string>
#include <utility>

#include "eigenbound/measures.hpp"

namespace eigenbound {

struct SupValue {
    double value = 0.0;
    double x = 0.0;
};

// delta = sup mu(0,x) nu(x,p) for ND, sup nu(0,x) mu(x,p) for DN and NN.
// Infinite when the relevant measure overflowed.
SupValue delta(BoundaryCase c, const MeasureTable& table);

// (1/(4 delta), 1/delta); (0, 0) when delta is infinite.
std::pair<double, double> basic_bounds(BoundaryCase c, const MeasureTable& table);

SupValue delta1(BoundaryCase c, const MeasureTable& table);
// refine = false keeps the sup over grid nodes only, matching what node-snapped
// localized test functions can reach.
SupValue delta1_prime(BoundaryCase c, const MeasureTable& table, bool refine = true);

struct BoundsReport {
    BoundaryCase boundary = BoundaryCase::ND;
    double delta = 0.0;
    double lower_basic = 0.0;
    double upper_basic = 0.0;
    double delta1 = 0.0;
    double delta1_prime = 0.0;
    double lower_improved = 0.0;
    double upper_improved = 0.0;
    double x_delta = 0.0;
    double x_delta1 = 0.0;
    double x_delta1_prime = 0.0;
    bool positive = true;
    // delta <= delta1' <= 2 delta, checked with slack 10 eps_b.
    bool containment = true;
    // Right end actually used; differs from D when D is infinite.
    double right_end = 0.0;
    std::string positivity;
};

BoundsReport compute_bounds(BoundaryCase c, const MeasureTable& table, double eps_b);
BoundsReport degenerate_bounds(BoundaryCase c);
// Finite D: one table. Infinite D: the criterion decides lambda = 0, or the bounds
// are taken on the truncation where the relevant tail mass became negligible.
BoundsReport compute_bounds(const ProblemSpec& problem);

// Truncation point whose tail mass (nu for ND, mu otherwise) is below eps_o relative.
double effective_truncation(const ProblemSpec& problem);

}  // namespace eigenbound
