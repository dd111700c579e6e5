#include <doctest.h>

#include <cmath>

#include "eigenbound/errors.hpp"
#include "eigenbound/testfn.hpp"
#include "problems.hpp"

using namespace eigenbound;

namespace {

const MeasureTable& lap() {
    static auto t = suite::table(suite::laplacian(BoundaryCase::ND));
    return *t;
}

double sup_diff(const GridFunction& f, double (*g)(double)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) worst = std::max(worst, std::abs(f.values[i] - g(f.table->grid()[i])));
    return worst;
}

}  // namespace

TEST_CASE("phi on the Laplacian") {
    CHECK(sup_diff(phi(BoundaryCase::ND, lap()), [](double x) { return 1.0 - x; }) < 1e-12);
    CHECK(sup_diff(phi(BoundaryCase::DN, lap()), [](double x) { return x; }) < 1e-12);
    auto f = phi(BoundaryCase::ND, lap());
    for (double d : f.deriv) CHECK(d == -1.0);
}

TEST_CASE("phi for ND refuses an infinite nu tail") {
    MeasureTable t = MeasureTable::build(suite::ou(BoundaryCase::ND, infinity), 64.0);
    REQUIRE(t.nu_overflow());
    CHECK_THROWS_AS(phi(BoundaryCase::ND, t), CriterionDegenerate);
}

TEST_CASE("power") {
    auto f = power(phi(BoundaryCase::ND, lap()), 0.5);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        double x = lap().grid()[i];
        CHECK(f.values[i] == doctest::Approx(std::sqrt(1.0 - x)).epsilon(1e-12));
        CHECK(f.deriv[i] == doctest::Approx(-0.5 / std::sqrt(1.0 - x)).epsilon(1e-12));
    }
    auto same = power(phi(BoundaryCase::ND, lap()), 1.0);
    CHECK(same.values == phi(BoundaryCase::ND, lap()).values);

    std::vector<double> v, d;
    for (double x : lap().grid()) {
        v.push_back(x - 0.5);
        d.push_back(1.0);
    }
    CHECK_THROWS_AS(power(GridFunction::smooth(lap(), v, d), 0.5), DomainError);
    CHECK_THROWS_AS(power(phi(BoundaryCase::DN, lap()), 1.5), DomainError);
}

TEST_CASE("localized_nd") {
    auto f = localized_nd(lap(), 0.25, 0.75);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double x = lap().grid()[i];
        double expect = x <= 0.25 ? 0.5 : (x < 0.75 ? 0.75 - x : 0.0);
        CHECK(f.values[i] == doctest::Approx(expect).epsilon(1e-9).scale(1.0));
    }
    auto full = localized_nd(lap(), 0.0, 1.0);
    CHECK(sup_diff(full, [](double x) { return 1.0 - x; }) < 1e-12);
    CHECK_THROWS_AS(localized_nd(lap(), 0.5, 0.5), RangeError);
    CHECK_THROWS_AS(localized_nd(lap(), 0.6, 0.5), RangeError);
}

TEST_CASE("localized_dn") {
    auto f = localized_dn(lap(), 0.5);
    CHECK(sup_diff(f, [](double x) { return std::min(x, 0.5); }) < 1e-12);
    CHECK(sup_diff(localized_dn(lap(), 1.0), [](double x) { return x; }) < 1e-12);
    CHECK_THROWS_AS(localized_dn(lap(), 0.0), RangeError);
}

TEST_CASE("center") {
    auto f = power(phi(BoundaryCase::DN, lap()), 0.5);
    auto c = center(f);
    // The mean of sqrt(x) carries the quadrature error of its endpoint singularity.
    CHECK(sup_diff(c, [](double x) { return std::sqrt(x) - 2.0 / 3.0; }) < 1e-8);
    CHECK(std::abs(mu_integral(c)) <= 2 * Tolerances{}.quadrature);

    std::vector<double> ones(lap().nodes(), 3.0), zeros(lap().nodes(), 0.0);
    auto flat = center(GridFunction::smooth(lap(), ones, zeros));
    for (double v : flat.values) CHECK(std::abs(v) < 1e-14);

    MeasureTable t = MeasureTable::build(make_problem({parse("1"), parse("x")}, infinity, BoundaryCase::DN), 64.0);
    REQUIRE(t.mu_overflow());
    std::vector<double> o(t.nodes(), 1.0), z(t.nodes(), 0.0);
    CHECK_THROWS_AS(center(GridFunction::smooth(t, o, z)), DivergenceError);
}

TEST_CASE("property: center is idempotent") {
    auto t = suite::table(suite::ou(BoundaryCase::DN, 4.0));
    for (double g : {0.3, 0.5, 1.0}) {
        auto c1 = center(power(phi(BoundaryCase::DN, *t), g));
        auto c2 = center(c1);
        for (std::size_t i = 0; i < c1.size(); ++i) CHECK(std::abs(c1.values[i] - c2.values[i]) <= 2e-10);
    }
}

TEST_CASE("energy and mass") {
    auto x = phi(BoundaryCase::DN, lap());
    CHECK(dirichlet_energy(x) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(l2_norm_sq(x) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(dirichlet_energy(localized_nd(lap(), 0.25, 0.75)) == doctest::Approx(0.5).epsilon(1e-9));
    std::vector<double> zeros(lap().nodes(), 0.0);
    auto z = GridFunction::smooth(lap(), zeros, zeros);
    CHECK(dirichlet_energy(z) == 0.0);
    CHECK(l2_norm_sq(z) == 0.0);
}

TEST_CASE("property: stored derivatives match divided differences to O(h^2)") {
    auto t = suite::table(suite::ou(BoundaryCase::DN, 4.0));
    for (auto f : {phi(BoundaryCase::DN, *t), power(phi(BoundaryCase::DN, *t), 0.5), phi(BoundaryCase::ND, *t)}) {
        for (std::size_t i = 1; i + 2 < f.size(); ++i) {
            if (t->grid()[i] < 0.1) continue;  // sqrt(nu(0, x)) is singular at 0
            double h = t->grid()[i + 1] - t->grid()[i];
            double secant = (f.values[i + 1] - f.values[i]) / h;
            double avg = 0.5 * (f.deriv[i] + f.deriv[i + 1]);
            // secant minus trapezoid average is -h^2 f'''/12
            CHECK(std::abs(secant - avg) <= 100.0 * h * h * std::max(1.0, std::abs(f.deriv[i])));
        }
    }
}

TEST_CASE("property: localized_nd tends to nu(. v x0, p) as x1 -> p") {
    auto t = suite::table(suite::ou(BoundaryCase::ND, 3.0));
    const double x0 = 0.7;
    double prev = infinity;
    for (double x1 : {2.0, 2.5, 2.9, 2.99, 3.0}) {
        auto f = localized_nd(*t, x0, x1);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            double x = t->grid()[i];
            worst = std::max(worst, std::abs(f.values[i] - t->nu_tail_at(std::max(x, t->grid()[t->nearest_node(x0)]))));
        }
        CHECK(worst <= prev);
        prev = worst;
    }
    CHECK(prev < 1e-12);
}
