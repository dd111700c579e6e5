#include <doctest.h>

#include <cmath>

#include "eigenbound/errors.hpp"
#include "eigenbound/testfn.hpp"
#include "eigenbound/variational.hpp"
#include "generators.hpp"
#include "problems.hpp"
#include "reference_values.hpp"

using namespace eigenbound;

namespace {

const MeasureTable& lap() {
    static auto t = suite::table(suite::laplacian(BoundaryCase::ND));
    return *t;
}

}  // namespace

TEST_CASE("I on the Laplacian") {
    auto nd = eval_I(BoundaryCase::ND, phi(BoundaryCase::ND, lap()));
    for (std::size_t i = nd.lo; i <= nd.hi; ++i) {
        double x = lap().grid()[i];
        CHECK(nd.values[i] == doctest::Approx(x - x * x / 2).epsilon(1e-10));
    }
    CHECK(nd.sup == doctest::Approx(0.5).epsilon(1e-6));

    auto root = eval_I(BoundaryCase::ND, power(phi(BoundaryCase::ND, lap()), 0.5));
    CHECK(root.sup <= 1.0);

    auto dn = eval_I(BoundaryCase::DN, phi(BoundaryCase::DN, lap()));
    for (std::size_t i = dn.lo; i <= dn.hi; ++i) {
        double x = lap().grid()[i];
        CHECK(dn.values[i] == doctest::Approx((1 - x * x) / 2).epsilon(1e-10));
    }
    CHECK(dn.sup == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(dn.inf <= dn.sup);
    CHECK(dn.x_argmax >= lap().grid()[dn.lo]);
    CHECK(dn.x_argmax <= lap().grid()[dn.hi]);
}

TEST_CASE("I needs the right sign of f'") {
    CHECK_THROWS_AS(eval_I(BoundaryCase::ND, phi(BoundaryCase::DN, lap())), DomainError);
    CHECK_THROWS_AS(eval_I(BoundaryCase::DN, phi(BoundaryCase::ND, lap())), DomainError);
}

TEST_CASE("II on the Laplacian") {
    // ND, f = 1 - x: II(f)(x) = (1/(1-x)) int_x^1 (s - s^2/2) ds. 1/3 at 0, 1/2 as x -> 1.
    auto nd = eval_II(BoundaryCase::ND, phi(BoundaryCase::ND, lap()));
    for (std::size_t i = nd.op.lo; i <= nd.op.hi; ++i) {
        double x = lap().grid()[i];
        double expect = (1.0 / 3 - x * x / 2 + x * x * x / 6) / (1 - x);
        CHECK(nd.op.values[i] == doctest::Approx(expect).epsilon(1e-9));
    }
    CHECK(nd.op.values[1] == doctest::Approx(1.0 / 3).epsilon(1e-6));
    CHECK(nd.op.sup == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(bound_lower(BoundaryCase::ND, phi(BoundaryCase::ND, lap()), Operator::II) ==
          doctest::Approx(2.0).epsilon(1e-6));

    // DN, f = x: II(f)(x) = 1/2 - x^2/6.
    auto dn = eval_II(BoundaryCase::DN, phi(BoundaryCase::DN, lap()));
    for (std::size_t i = dn.op.lo; i <= dn.op.hi; ++i) {
        double x = lap().grid()[i];
        CHECK(dn.op.values[i] == doctest::Approx(0.5 - x * x / 6).epsilon(1e-9));
    }
    CHECK(dn.op.sup == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("II product carries the analytic derivative") {
    for (auto c : {BoundaryCase::ND, BoundaryCase::DN}) {
        auto f = power(phi(c, lap()), 0.5);
        auto g = ii_product(c, f);
        auto inner = inner_integrals(c, f);
        const double sign = c == BoundaryCase::ND ? -1.0 : 1.0;
        // One-sided derivatives; the right one vanishes past the ND support.
        for (std::size_t i = 0; i + 1 < g.size(); ++i)
            CHECK(g.deriv[i] == doctest::Approx(sign * inner[i]).epsilon(1e-13));
        for (std::size_t i = 1; i < g.size(); ++i)
            CHECK(g.deriv_left[i] == doctest::Approx(sign * inner[i]).epsilon(1e-13));
    }
    std::vector<double> v(lap().nodes(), -1.0), d(lap().nodes(), 0.0);
    CHECK_THROWS_AS(eval_II(BoundaryCase::ND, GridFunction::smooth(lap(), v, d)), DomainError);
}

TEST_CASE("improved lower bound from sqrt(phi)") {
    for (auto c : {BoundaryCase::ND, BoundaryCase::DN}) {
        double lower = bound_lower(c, power(phi(c, lap()), 0.5), Operator::II);
        CHECK(lower == doctest::Approx(1.0 / ref::lap_delta1).epsilon(1e-8));
        CHECK(lower == doctest::Approx(2.339).epsilon(1e-3));
    }
}

TEST_CASE("upper bounds from localized families") {
    // inf I(f) = nu(x0, x1) mu(0, x0) for the ND localized function.
    auto f = localized_nd(lap(), 0.25, 1.0);
    CHECK(bound_upper(BoundaryCase::ND, f, Operator::I) == doctest::Approx(1.0 / (0.75 * 0.25)).epsilon(1e-6));
    double best = infinity;
    for (int k = 1; k < 100; ++k) best = std::min(best, bound_upper(BoundaryCase::ND, localized_nd(lap(), k / 100.0, 1.0), Operator::I));
    CHECK(best == doctest::Approx(4.0).epsilon(1e-6));

    // DN, f = min(x, x0): inf II attained at x0; 8/3 at x0 = 3/4.
    CHECK(bound_upper(BoundaryCase::DN, localized_dn(lap(), 0.75)) == doctest::Approx(8.0 / 3).epsilon(1e-6));
    CHECK(bound_upper(BoundaryCase::DN, localized_dn(lap(), 0.75)) >= M_PI * M_PI / 4);
    CHECK_THROWS_AS(bound_upper(BoundaryCase::ND, f, Operator::R), Error);
}

TEST_CASE("property: sup II(f) <= sup I(f) on random canonical f") {
    gen::Rng rng(5);
    auto ou = suite::table(suite::ou(BoundaryCase::ND, 3.0));
    auto var = suite::table(suite::varying(BoundaryCase::ND));
    for (int k = 0; k < 40; ++k) {
        const MeasureTable& t = k % 3 == 0 ? lap() : (k % 3 == 1 ? *ou : *var);
        auto c = gen::integer(rng, 0, 1) ? BoundaryCase::ND : BoundaryCase::DN;
        double gamma = gen::uniform(rng, 0.05, 1.0);
        auto f = power(phi(c, t), gamma);
        double sI = eval_I(c, f).sup;
        double sII = eval_II(c, f).op.sup;
        CHECK(sII <= sI * (1 + 1e-8));
    }
}

TEST_CASE("property: R and Rbar agree with -Lg/g and -(Lg)'/g'") {
    // g = exp(-x^2) on OU (0, 1): Lg = g'' - x g' = (6x^2 - 2) g, (Lg)' = 12x g + (6x^2 - 2) g'.
    auto p = suite::ou(BoundaryCase::ND, 1.0);
    auto t = suite::table(p);
    const auto& x = t->grid();
    std::vector<double> h(x.size()), dh(x.size()), gp(x.size()), gpp(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double g = std::exp(-x[i] * x[i]);
        h[i] = -2 * x[i];
        dh[i] = -2;
        gp[i] = -2 * x[i] * g;
        gpp[i] = (4 * x[i] * x[i] - 2) * g;
    }
    auto R = eval_R(GridFunction::smooth(*t, h, dh), p.a, p.b);
    for (std::size_t i = R.lo; i <= R.hi; ++i) CHECK(R.values[i] == doctest::Approx(2 - 6 * x[i] * x[i]).epsilon(1e-12));

    auto Rbar = eval_Rbar(GridFunction::smooth(*t, gp, gpp), p.a, p.b);
    double worst = 0.0, hmax = 0.0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) hmax = std::max(hmax, x[i + 1] - x[i]);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!Rbar.in_window(i)) continue;
        double g = std::exp(-x[i] * x[i]);
        double lg1 = 12 * x[i] * g + (6 * x[i] * x[i] - 2) * gp[i];
        worst = std::max(worst, std::abs(Rbar.values[i] + lg1 / gp[i]) / std::abs(lg1 / gp[i]));
    }
    CHECK(worst <= 50 * hmax * hmax);
}
