#include "eigenbound/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "eigenbound/bounds.hpp"
#include "eigenbound/errors.hpp"
#include "eigenbound/variational.hpp"

namespace eigenbound {

namespace {

constexpr std::size_t centre = num::PanelRule::size / 2;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Symmetric tridiagonal T restricted to the free nodes.
struct Tridiag {
    std::vector<double> d;  // diagonal
    std::vector<double> e;  // e[k] couples k and k+1
    std::size_t size() const { return d.size(); }
};

Tridiag scaled_matrix(const Discretization& D) {
    Tridiag T;
    const auto& c = D.conductance;
    const auto& M = D.mass;
    const std::size_t n_nodes = M.size();
    for (std::size_t j = D.first; j <= D.last; ++j) {
        double k = 0.0;
        if (j > 0) k += c[j - 1];
        if (j + 1 < n_nodes) k += c[j];
        T.d.push_back(k / M[j]);
        if (j < D.last) T.e.push_back(-c[j] / (std::sqrt(M[j]) * std::sqrt(M[j + 1])));
    }
    return T;
}

// Eigenvalues of T below sigma.
std::size_t sturm_count(const Tridiag& T, double sigma) {
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t k = 0; k < T.size(); ++k) {
        double off = k == 0 ? 0.0 : T.e[k - 1] * T.e[k - 1] / q;
        q = T.d[k] - sigma - off;
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

// k-th smallest eigenvalue (1-based) by bisection on the Gershgorin interval.
double bisect(const Tridiag& T, std::size_t k) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < T.size(); ++i) {
        double r = (i > 0 ? std::abs(T.e[i - 1]) : 0.0) + (i + 1 < T.size() ? std::abs(T.e[i]) : 0.0);
        hi = std::max(hi, T.d[i] + r);
        lo = std::min(lo, T.d[i] - r);
    }
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(T, mid) >= k) hi = mid;
        else lo = mid;
        if (hi - lo <= 2e-16 * std::max(std::abs(lo), std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

// Solve (T - sigma) x = r with partial pivoting; exact zero pivots are replaced by
// a tiny multiple of the matrix scale.
std::vector<double> shifted_solve(const Tridiag& T, double sigma, std::vector<double> r) {
    const std::size_t n = T.size();
    double scale = std::abs(sigma);
    for (double v : T.d) scale = std::max(scale, std::abs(v));
    const double tiny = 1e-16 * scale;
    std::vector<double> dl(T.e), d(n), du(T.e), du2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) d[i] = T.d[i] - sigma;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = tiny;
            double f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            r[i + 1] -= f * r[i];
            dl[i] = 0.0;
        } else {
            double f = d[i] / dl[i];
            d[i] = dl[i];
            double tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            du[i] = tmp;
            std::swap(r[i], r[i + 1]);
            r[i + 1] -= f * r[i];
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = r[i];
        if (i + 1 < n) s -= du[i] * x[i + 1];
        if (i + 2 < n) s -= du2[i] * x[i + 2];
        x[i] = s / d[i];
    }
    return x;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> apply(const Tridiag& T, const std::vector<double>& y) {
    const std::size_t n = T.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = T.d[i] * y[i];
        if (i > 0) s += T.e[i - 1] * y[i - 1];
        if (i + 1 < n) s += T.e[i] * y[i + 1];
        out[i] = s;
    }
    return out;
}

double backward_error(const Tridiag& T, const std::vector<double>& y, double lambda) {
    auto Ty = apply(T, y);
    double r = 0.0, tn = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) r = std::max(r, std::abs(Ty[i] - lambda * y[i]));
    for (std::size_t i = 0; i < T.size(); ++i) {
        double row = std::abs(T.d[i]) + (i > 0 ? std::abs(T.e[i - 1]) : 0.0) +
                     (i + 1 < T.size() ? std::abs(T.e[i]) : 0.0);
        tn = std::max(tn, row);
    }
    return r / ((tn + std::abs(lambda)) * inf_norm(y));
}

void project_out(std::vector<double>& y, const std::vector<double>& u) {
    double uy = 0.0, uu = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        uy += u[i] * y[i];
        uu += u[i] * u[i];
    }
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= uy / uu * u[i];
}

}  // namespace

Discretization discretize(std::shared_ptr<const MeasureTable> table, BoundaryCase c) {
    Discretization D;
    D.boundary = c;
    const auto& panels = table->panel_data();
    const std::size_t N = table->nodes();
    D.conductance.resize(panels.size());
    D.mass.assign(N, 0.0);
    D.mass_left.assign(N, 0.0);
    D.mass_right.assign(N, 0.0);
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const Panel& p = panels[i];
        if (!(p.nu > 0.0) || !std::isfinite(p.nu))
            throw DomainError("panel at x = " + fmt(p.x) + " has nu mass " + fmt(p.nu));
        D.conductance[i] = 1.0 / p.nu;
        D.mass_right[i] = p.mu_left[centre];
        D.mass_left[i + 1] = p.mu_right[centre];
    }
    for (std::size_t j = 0; j < N; ++j) {
        D.mass[j] = D.mass_left[j] + D.mass_right[j];
        if (!(D.mass[j] > 0.0) || !std::isfinite(D.mass[j]))
            throw DomainError("dual cell at x = " + fmt(table->grid()[j]) + " has mass " + fmt(D.mass[j]) +
                              "; the operator is not definite there");
    }
    D.first = c == BoundaryCase::DN ? 1 : 0;
    D.last = c == BoundaryCase::ND ? N - 2 : N - 1;
    D.table = std::move(table);
    return D;
}

EigenSolution fd_eigensolve(std::shared_ptr<const MeasureTable> table, BoundaryCase c, double eps_o) {
    Discretization D = discretize(table, c);
    Tridiag T = scaled_matrix(D);
    const std::size_t n = T.size();
    const bool nn = c == BoundaryCase::NN;
    if (n < (nn ? 2u : 1u)) throw RangeError("grid too small for the eigenproblem");
    double lambda = bisect(T, nn ? 2 : 1);

    std::vector<double> sqrtM(n);
    for (std::size_t k = 0; k < n; ++k) sqrtM[k] = std::sqrt(D.mass[D.first + k]);

    // A shift just below lambda keeps the solve regular while isolating the eigenvector.
    double sigma = lambda - std::max(1e-8 * lambda, 1e-300);
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) y[k] = sqrtM[k] * (1.0 + 0.5 * std::sin(1.0 + 3.0 * k / n));
    if (nn) {
        for (std::size_t k = 0; k < n; ++k) y[k] = sqrtM[k] * (static_cast<double>(k) / n - 0.5);
        project_out(y, sqrtM);
    }
    double res = infinity;
    std::size_t it = 0;
    for (; it < 50; ++it) {
        y = shifted_solve(T, sigma, y);
        if (nn) project_out(y, sqrtM);
        double s = inf_norm(y);
        if (!(s > 0.0) || !std::isfinite(s)) throw ConvergenceError("inverse iteration broke down");
        for (double& v : y) v /= s;
        res = backward_error(T, y, lambda);
        if (res <= 1e-13 && it >= 1) break;
    }
    if (!(res <= eps_o))
        throw ConvergenceError("inverse iteration residual " + fmt(res) + " exceeds " + fmt(eps_o));

    EigenSolution sol;
    sol.lambda = lambda;
    sol.residual = res;
    sol.iterations = it + 1;
    sol.table = table;
    sol.boundary = c;
    sol.N = table->nodes();
    const std::size_t N = table->nodes();
    std::vector<double> f(N, 0.0);
    for (std::size_t k = 0; k < n; ++k) f[D.first + k] = y[k] / sqrtM[k];
    // The quotient of the converged vector is accurate to the square of its error,
    // tighter than the bisection interval on strongly graded grids.
    lambda = discrete_rayleigh(D, f);
    sol.lambda = lambda;

    double sign = 1.0;
    if (c == BoundaryCase::ND) sign = f[0] < 0.0 ? -1.0 : 1.0;
    else if (c == BoundaryCase::DN) sign = f[N - 1] < 0.0 ? -1.0 : 1.0;
    else sign = f[N - 1] < f[0] ? -1.0 : 1.0;
    double s = inf_norm(f);
    for (double& v : f) v *= sign / s;

    // Derivative from the discrete flux balance: e^C f' equals -lambda times the mu-mass
    // of f to the left (ND, NN) or lambda times the mass to the right (DN).
    const auto& nd = table->nu_density();
    std::vector<double> deriv(N, 0.0);
    if (c == BoundaryCase::DN) {
        double acc = 0.0;
        for (std::size_t j = N; j-- > 0;) {
            deriv[j] = nd[j] * lambda * (acc + D.mass_right[j] * f[j]);
            acc += D.mass[j] * f[j];
        }
    } else {
        double acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            deriv[j] = -nd[j] * lambda * (acc + D.mass_left[j] * f[j]);
            acc += D.mass[j] * f[j];
        }
    }
    sol.nodal = f;
    sol.eigenfunction = GridFunction::smooth(*sol.table, std::move(f), std::move(deriv));
    return sol;
}

EigenSolution fd_eigensolve(const ProblemSpec& problem, int N) {
    if (problem.infinite()) throw RangeError("fd_eigensolve needs a finite right end; truncate first");
    ProblemSpec p = problem;
    if (N > 0) p.grid_size = N;
    auto table = std::make_shared<const MeasureTable>(build_tables(p, p.right_end));
    return fd_eigensolve(table, p.boundary, p.tol.oracle);
}

double discrete_rayleigh(const Discretization& d, const std::vector<double>& f) {
    std::vector<double> energy, mass;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        double df = f[i + 1] - f[i];
        energy.push_back(d.conductance[i] * df * df);
    }
    for (std::size_t j = 0; j < f.size(); ++j) mass.push_back(d.mass[j] * f[j] * f[j]);
    return num::pairwise_sum(energy) / num::pairwise_sum(mass);
}

EigenDiagnostics eigen_residuals(const EigenSolution& sol) {
    EigenDiagnostics out;
    const GridFunction& g = sol.eigenfunction;
    const std::size_t N = g.size();
    const BoundaryCase c = sol.boundary;
    const BoundaryCase orient = c == BoundaryCase::ND ? BoundaryCase::ND : BoundaryCase::DN;

    GridFunction h = c == BoundaryCase::NN ? center(g) : g;
    OperatorValue I = eval_I(orient, h);
    for (std::size_t i = 0; i < N; ++i)
        if (I.in_window(i)) out.I_deviation = std::max(out.I_deviation, std::abs(sol.lambda * I.values[i] - 1.0));
    if (c != BoundaryCase::NN) {
        OperatorValue II = eval_II(orient, g, false).op;
        for (std::size_t i = 0; i < N; ++i)
            if (II.in_window(i))
                out.II_deviation = std::max(out.II_deviation, std::abs(sol.lambda * II.values[i] - 1.0));
    }
    for (std::size_t i = 1; i + 1 < N; ++i) {
        double v = g.values[i], w = g.values[i + 1];
        bool step_ok = c == BoundaryCase::ND ? w < v : w > v;
        if (!step_ok) out.monotone = false;
        if (c != BoundaryCase::NN && !(v > 0.0)) out.sign_ok = false;
    }
    if (c == BoundaryCase::NN && !(g.values[0] < 0.0 && g.values[N - 1] > 0.0)) out.sign_ok = false;
    out.end_value = g.values[N - 1];
    return out;
}

LimitResult infinite_domain_limit(const ProblemSpec& problem) {
    if (!problem.infinite()) throw RangeError("infinite_domain_limit needs D = inf");
    LimitResult r;
    r.stop = "schedule exhausted";
    for (double p : problem.truncation_schedule) {
        ProblemSpec q = truncate(problem, p);
        auto table = std::make_shared<const MeasureTable>(MeasureTable::build(q, p));
        if (table->mu_overflow() || table->nu_overflow()) {
            r.stop = "measure overflow at p = " + fmt(p);
            break;
        }
        double lambda = fd_eigensolve(table, problem.boundary, problem.tol.oracle).lambda;
        if (!r.trace.empty() && problem.boundary == BoundaryCase::ND &&
            lambda > r.trace.back() * (1.0 + problem.tol.oracle) + 1e-12 * r.trace.front())
            r.non_monotone = true;
        r.points.push_back(p);
        r.trace.push_back(lambda);
        std::size_t k = r.trace.size();
        if (k >= 2 && std::abs(r.trace[k - 1] - r.trace[k - 2]) < problem.tol.oracle * std::abs(r.trace[k - 1])) {
            r.stop = "relative change below eps_o";
            break;
        }
    }
    if (r.trace.empty()) throw DivergenceError("no truncation could be solved before the measures overflowed");
    r.lambda = r.trace.back();
    return r;
}

DualityResult duality_pair(const ProblemSpec& problem) {
    if (problem.infinite()) throw RangeError("duality_pair needs a finite right end");
    auto table = std::make_shared<const MeasureTable>(build_tables(problem, problem.right_end));
    auto dual = std::make_shared<const MeasureTable>(table->dual());
    DualityResult r;
    r.lambda_nd = fd_eigensolve(table, BoundaryCase::ND, problem.tol.oracle).lambda;
    r.lambda_dn_dual = fd_eigensolve(dual, BoundaryCase::DN, problem.tol.oracle).lambda;
    r.delta = delta(BoundaryCase::ND, *table).value;
    r.delta_dual = delta(BoundaryCase::DN, *dual).value;
    return r;
}

}  // namespace eigenbound
