#pragma once

#include <string>
#include <vector>

#include "eigenbound/measures.hpp"
#include "eigenbound/testfn.hpp"

namespace eigenbound {

enum class TraceKind { lower, upper, rayleigh, eta };
enum class Monotonicity { constant, non_increasing, non_decreasing, mixed };
enum class StopReason { max_n, converged, degenerate };

std::string to_string(TraceKind k);
std::string to_string(Monotonicity m);
std::string to_string(StopReason s);

// Direction of a sequence, with differences up to slack * max|v| counted as ties.
Monotonicity classify(const std::vector<double>& values, double slack);

struct IterationTrace {
    BoundaryCase boundary = BoundaryCase::ND;
    TraceKind kind = TraceKind::lower;
    std::vector<double> values;
    // Where the sup (lower, eta) or inf (upper) was attained at each step.
    std::vector<double> x_extremum;
    // Upper traces: the localization points (x0, x1) of the best test function per step.
    std::vector<double> x0;
    std::vector<double> x1;
    // Eta traces: sign changes of the centered iterate at each step.
    std::vector<std::vector<double>> sign_changes;
    Monotonicity monotonicity = Monotonicity::constant;
    StopReason stop = StopReason::max_n;
    std::string note;
};

struct IterateOptions {
    double eps_b = 1e-8;
    bool renormalize = true;
    // Outer search over localization points.
    int coarse = 32;
    int refine_rounds = 2;
    int refine_width = 5;
    bool pattern_search = true;
};

// delta_n = sup II(f_n), f_1 = sqrt(phi), f_n = f_{n-1} II(f_{n-1}). ND and DN.
IterationTrace lower_sequence(BoundaryCase c, const MeasureTable& table, int n_max,
                              const IterateOptions& opt = {});

struct UpperResult {
    IterationTrace upper;     // delta_n'
    IterationTrace rayleigh;  // dbar_n
    // dbar_1 against delta_1' taken over the same grid nodes, within 10 eps_b.
    double dbar1_gap = 0.0;
    bool dbar1_matches = true;
};

// Evenly spaced localization points k p / count.
std::vector<double> default_x0_grid(double p, int count);
std::vector<double> default_x1_grid(double p, int count);

UpperResult upper_sequence_nd(const MeasureTable& table, int n_max, const std::vector<double>& x0_grid,
                              const std::vector<double>& x1_grid, const IterateOptions& opt = {});
UpperResult upper_sequence_nd(const MeasureTable& table, int n_max, const IterateOptions& opt = {});
UpperResult upper_sequence_dn(const MeasureTable& table, int n_max, const std::vector<double>& x0_grid,
                              const IterateOptions& opt = {});
UpperResult upper_sequence_dn(const MeasureTable& table, int n_max, const IterateOptions& opt = {});

// eta_n for the NN gap: eta_1 = sup I(fbar_1) with f_1 = sqrt(nu(0, x)), then the ratio
// sup of suffix mu-integrals of fbar_n over fbar_{n-1}.
IterationTrace eta_sequence(const MeasureTable& table, int n_max, const IterateOptions& opt = {});
// Same with a caller-supplied first iterate; f1' must be positive on the interior.
IterationTrace eta_sequence(const GridFunction& f1, int n_max, const IterateOptions& opt = {});

// Truncation regression: inf over the support of II(g 1_{[0, x_cut)}).
double truncated_inf_II(const GridFunction& g, double x_cut);

}  // namespace eigenbound
