#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "eigenbound/coeffexpr.hpp"
#include "eigenbound/testfn.hpp"

namespace eigenbound {

// Pointwise values of an operator at the table nodes. Nodes outside the
// evaluation window hold +infinity (the 1/0 convention) and are ignored by inf/sup.
struct OperatorValue {
    std::vector<double> values;
    std::size_t lo = 0;
    std::size_t hi = 0;
    double inf = 0.0;
    double sup = 0.0;
    std::size_t argmin = 0;
    std::size_t argmax = 0;
    double x_argmin = 0.0;
    double x_argmax = 0.0;
    // R-bar only: largest gap between the 3-point and 5-point difference stencils.
    double difference_gap = 0.0;

    bool in_window(std::size_t i) const { return i >= lo && i <= hi && std::isfinite(values[i]); }
};

enum class Operator { I, II, R, Rbar };

// ND uses the Neumann-at-0 orientation; DN and NN the mirrored one.
OperatorValue eval_I(BoundaryCase c, const GridFunction& f);

struct IIResult {
    OperatorValue op;
    // f * II(f), with its derivative taken from the inner integral.
    GridFunction product;
};

// Inner mu-integrals at the nodes: prefix from 0 (ND) or suffix from p (DN, NN).
std::vector<double> inner_integrals(BoundaryCase c, const GridFunction& f);

// f * II(f), with derivative -n F (ND) or n F (DN, NN). No positivity needed.
GridFunction ii_product(BoundaryCase c, const GridFunction& f);

// refine: polish inf and sup by golden section on the Hermite ratio product/f.
IIResult eval_II(BoundaryCase c, const GridFunction& f, bool refine = true);

// R(h) = -(a h^2 + b h + a h').
OperatorValue eval_R(const GridFunction& h, const Expr& a, const Expr& b);

// Rbar(h) = -(a h' + b h)' / h. flux_slope, when given, is (a h' + b h)' at the nodes;
// otherwise a centered difference is used.
OperatorValue eval_Rbar(const GridFunction& h, const Expr& a, const Expr& b,
                        const std::optional<std::vector<double>>& flux_slope = std::nullopt);

double bound_lower(BoundaryCase c, const GridFunction& f, Operator op,
                   const Coefficients* coeffs = nullptr);
double bound_upper(BoundaryCase c, const GridFunction& f, Operator op = Operator::II);

}  // namespace eigenbound
