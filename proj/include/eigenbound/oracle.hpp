#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "eigenbound/measures.hpp"
#include "eigenbound/testfn.hpp"

namespace eigenbound {

// Finite-volume form of (e^C f')' = -lambda (e^C/a) f on the table nodes:
// conductance 1/nu(x_i, x_{i+1}) between neighbours, mass of the dual cell
// (midpoint to midpoint) at each node. Dirichlet nodes are dropped.
struct Discretization {
    std::shared_ptr<const MeasureTable> table;
    BoundaryCase boundary = BoundaryCase::ND;
    std::vector<double> conductance;  // per panel
    std::vector<double> mass;         // per node
    std::vector<double> mass_left;    // part of the dual cell left of the node
    std::vector<double> mass_right;
    std::size_t first = 0;            // first free node
    std::size_t last = 0;             // last free node
};

Discretization discretize(std::shared_ptr<const MeasureTable> table, BoundaryCase c);

struct EigenSolution {
    double lambda = 0.0;
    // Sup-norm 1; ND positive, DN positive at the right end, NN increasing.
    GridFunction eigenfunction;
    // Node values of the discrete eigenvector (Dirichlet node included as 0).
    std::vector<double> nodal;
    double residual = 0.0;
    std::size_t N = 0;
    std::size_t iterations = 0;
    std::shared_ptr<const MeasureTable> table;
    BoundaryCase boundary = BoundaryCase::ND;
};

// Principal eigenvalue (ND, DN) or first nonzero one (NN) by Sturm bisection,
// eigenvector by inverse iteration.
EigenSolution fd_eigensolve(std::shared_ptr<const MeasureTable> table, BoundaryCase c,
                            double eps_o = Tolerances{}.oracle);
// Builds the table first; N overrides the grid size when positive. D must be finite.
EigenSolution fd_eigensolve(const ProblemSpec& problem, int N = 0);

// sum c_i (f_{i+1} - f_i)^2 / sum M_j f_j^2 on the same matrices the solver uses.
double discrete_rayleigh(const Discretization& d, const std::vector<double>& nodal);

struct EigenDiagnostics {
    double I_deviation = 0.0;   // sup |lambda I(g) - 1| over the interior window
    double II_deviation = 0.0;  // ND and DN only
    bool monotone = true;       // strictly, on the interior
    bool sign_ok = true;
    double end_value = 0.0;     // g at the right end
};

EigenDiagnostics eigen_residuals(const EigenSolution& sol);

struct LimitResult {
    double lambda = 0.0;
    std::vector<double> points;
    std::vector<double> trace;
    std::string stop;
    // ND traces should decrease with p; set when one rises by more than eps_o.
    bool non_monotone = false;
};

LimitResult infinite_domain_limit(const ProblemSpec& problem);

struct DualityResult {
    double lambda_nd = 0.0;
    double lambda_dn_dual = 0.0;
    double delta = 0.0;
    double delta_dual = 0.0;
};

// ND on the problem against DN on the table with mu and nu exchanged. D must be finite.
DualityResult duality_pair(const ProblemSpec& problem);

}  // namespace eigenbound
