#include <doctest.h>

#include <cmath>

#include "eigenbound/errors.hpp"
#include "eigenbound/oracle.hpp"
#include "generators.hpp"
#include "problems.hpp"
#include "reference_values.hpp"

using namespace eigenbound;
using suite::rel;

namespace {

ProblemSpec with_grid(ProblemSpec p, int N) {
    p.grid_size = N;
    return p;
}

}  // namespace

TEST_CASE("closed-form eigenvalues") {
    CHECK(rel(fd_eigensolve(suite::laplacian(BoundaryCase::ND)).lambda, ref::lap_lambda) < 1e-4);
    CHECK(rel(fd_eigensolve(suite::laplacian(BoundaryCase::DN)).lambda, ref::lap_lambda) < 1e-4);
    CHECK(rel(fd_eigensolve(suite::laplacian(BoundaryCase::NN)).lambda, ref::lap_gap) < 1e-4);
    CHECK(std::abs(fd_eigensolve(suite::ou(BoundaryCase::DN, 8.0), 4000).lambda - 1.0) < 1e-3);
    // Hermite polynomials on (0, 1): x^2 - 1 vanishes at 1 with f'(0) = 0, x^3 - 3x has f(0) = f'(1) = 0.
    CHECK(rel(fd_eigensolve(suite::ou(BoundaryCase::ND, 1.0)).lambda, 2.0) < 1e-6);
    CHECK(rel(fd_eigensolve(suite::ou(BoundaryCase::DN, 1.0)).lambda, 3.0) < 1e-6);
}

TEST_CASE("eigenvalues against the independent dense solver") {
    CHECK(rel(fd_eigensolve(suite::varying(BoundaryCase::ND)).lambda, ref::varying_lambda_nd) < 1e-6);
    CHECK(rel(fd_eigensolve(suite::varying(BoundaryCase::DN)).lambda, ref::varying_lambda_dn) < 1e-6);
    CHECK(rel(fd_eigensolve(suite::ou(BoundaryCase::DN, 4.0)).lambda, ref::ou_lambda_dn_4) < 1e-6);
    CHECK(rel(fd_eigensolve(suite::ou(BoundaryCase::ND, 3.0)).lambda, ref::ou_lambda_nd_3) < 1e-6);
}

TEST_CASE("eigenfunction conventions and residual") {
    for (auto c : {BoundaryCase::ND, BoundaryCase::DN, BoundaryCase::NN}) {
        EigenSolution s = fd_eigensolve(suite::laplacian(c));
        double sup = 0.0;
        for (double v : s.eigenfunction.values) sup = std::max(sup, std::abs(v));
        CHECK(sup == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.residual <= Tolerances{}.oracle);
        CHECK(s.N == s.table->nodes());
    }
    EigenSolution nd = fd_eigensolve(suite::laplacian(BoundaryCase::ND));
    CHECK(nd.eigenfunction.values.front() > 0.0);
    for (std::size_t i = 1; i + 1 < nd.eigenfunction.size(); ++i) {
        CHECK(nd.eigenfunction.values[i] > 0.0);
        CHECK(nd.eigenfunction.values[i] < nd.eigenfunction.values[i - 1]);
        double x = nd.table->grid()[i];
        CHECK(std::abs(nd.eigenfunction.values[i] - std::cos(M_PI * x / 2)) < 1e-5);
    }
}

TEST_CASE("eigenfunction identities on the closed-form suite") {
    for (const auto& p : {suite::laplacian(BoundaryCase::ND), suite::laplacian(BoundaryCase::DN),
                          suite::ou(BoundaryCase::DN, 4.0), suite::ou(BoundaryCase::DN, 8.0),
                          suite::varying(BoundaryCase::ND), suite::varying(BoundaryCase::DN)}) {
        EigenSolution s = fd_eigensolve(p);
        EigenDiagnostics d = eigen_residuals(s);
        CHECK(d.I_deviation <= 5e-3);
        CHECK(d.II_deviation <= 5e-3);
        CHECK(d.monotone);
        CHECK(d.sign_ok);
        if (p.boundary == BoundaryCase::ND) CHECK(d.end_value == 0.0);
    }
    EigenDiagnostics nn = eigen_residuals(fd_eigensolve(suite::laplacian(BoundaryCase::NN)));
    CHECK(nn.I_deviation <= 5e-3);
}

TEST_CASE("property: lambda is the minimum of the discrete Rayleigh quotient") {
    gen::Rng rng(17);
    for (const auto& p : {suite::laplacian(BoundaryCase::ND), suite::ou(BoundaryCase::DN, 4.0),
                          suite::varying(BoundaryCase::NN)}) {
        auto t = suite::table(p);
        EigenSolution s = fd_eigensolve(t, p.boundary);
        Discretization d = discretize(t, p.boundary);
        CHECK(rel(discrete_rayleigh(d, s.nodal), s.lambda) <= 1e-10);
        double total_mass = 0.0;
        for (double m : d.mass) total_mass += m;
        for (int k = 0; k < 20; ++k) {
            std::vector<double> v = s.nodal;
            for (std::size_t i = d.first; i <= d.last; ++i) v[i] += gen::uniform(rng, -0.05, 0.05);
            if (p.boundary == BoundaryCase::NN) {
                double m = 0.0;
                for (std::size_t i = 0; i < v.size(); ++i) m += d.mass[i] * v[i];
                for (auto& x : v) x -= m / total_mass;
            }
            CHECK(discrete_rayleigh(d, v) >= s.lambda * (1 - 1e-12));
        }
    }
}

TEST_CASE("property: grid doubling shrinks the change by at least 3") {
    for (const auto& p : {suite::laplacian(BoundaryCase::ND), suite::laplacian(BoundaryCase::NN),
                          suite::varying(BoundaryCase::DN), suite::ou(BoundaryCase::DN, 4.0)}) {
        double l1 = fd_eigensolve(p, 250).lambda;
        double l2 = fd_eigensolve(p, 500).lambda;
        double l3 = fd_eigensolve(p, 1000).lambda;
        CHECK(std::abs(l1 - l2) >= 3 * std::abs(l2 - l3));
    }
}

TEST_CASE("property: strict domain monotonicity and the gap above lambda0") {
    const std::pair<double, double> pairs[] = {{1.0, 2.0}, {2.0, 3.0}, {3.0, 5.0}};
    for (auto [p, q] : pairs) {
        double lp = fd_eigensolve(suite::ou(BoundaryCase::ND, p)).lambda;
        double lq = fd_eigensolve(suite::ou(BoundaryCase::ND, q)).lambda;
        CHECK(lp > lq);
        double gp = fd_eigensolve(suite::ou(BoundaryCase::NN, p)).lambda;
        CHECK(gp > lp);
    }
    for (double p : {0.5, 1.0}) {
        auto nd = suite::varying(BoundaryCase::ND);
        auto nn = suite::varying(BoundaryCase::NN);
        nd.right_end = nn.right_end = p;
        CHECK(fd_eigensolve(nn).lambda > fd_eigensolve(nd).lambda);
    }
}

TEST_CASE("infinite domains") {
    CHECK_THROWS_AS(fd_eigensolve(suite::ou(BoundaryCase::DN, infinity)), RangeError);
    CHECK_THROWS_AS(infinite_domain_limit(suite::laplacian(BoundaryCase::ND)), RangeError);

    LimitResult ou = infinite_domain_limit(suite::ou(BoundaryCase::DN, infinity));
    CHECK(std::abs(ou.lambda - 1.0) < 1e-2);
    for (std::size_t i = 0; i < ou.points.size(); ++i)
        if (ou.points[i] >= 8.0) CHECK(std::abs(ou.trace[i] - 1.0) < 1e-2);

    // Laplacian ND on (0, inf): (pi / 2p)^2 down to 0.
    auto lap = suite::laplacian(BoundaryCase::ND, infinity);
    lap.truncation_schedule = {2, 4, 8, 16, 32};
    LimitResult l = infinite_domain_limit(lap);
    REQUIRE(l.trace.size() == 5);
    for (std::size_t i = 0; i < l.trace.size(); ++i) {
        double p = l.points[i];
        CHECK(rel(l.trace[i], M_PI * M_PI / (4 * p * p)) < 1e-4);
        if (i) CHECK(l.trace[i] < l.trace[i - 1]);
    }
    CHECK_FALSE(l.non_monotone);
}

TEST_CASE("duality") {
    DualityResult lap = duality_pair(suite::laplacian(BoundaryCase::ND));
    CHECK(std::abs(lap.lambda_nd - ref::lap_lambda) < 2e-4 * ref::lap_lambda);
    CHECK(std::abs(lap.lambda_dn_dual - ref::lap_lambda) < 2e-4 * ref::lap_lambda);

    for (const auto& p : {suite::ou(BoundaryCase::ND, 3.0), suite::varying(BoundaryCase::ND)}) {
        DualityResult r = duality_pair(p);
        CHECK(rel(r.lambda_dn_dual, r.lambda_nd) <= 1e-3);
        CHECK(std::abs(r.delta - r.delta_dual) <= 10 * Tolerances{}.bound);
    }
    // The identity is not an artefact of one grid.
    DualityResult fine = duality_pair(with_grid(suite::ou(BoundaryCase::ND, 3.0), 4000));
    CHECK(rel(fine.lambda_dn_dual, fine.lambda_nd) <= 1e-3);
    CHECK(rel(fine.lambda_nd, ref::ou_lambda_nd_3) <= 1e-6);
}
