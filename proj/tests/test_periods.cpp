#include <doctest.h>

#include <cmath>

#include "gmdet/errors.hpp"
#include "gmdet/periods.hpp"
#include "support.hpp"

using namespace gmdet;
using namespace gmdet::periods;

namespace {

const double kPi = std::acos(-1.0);

ExpPolynomial poly(std::vector<cplx> a) { return ExpPolynomial::make(std::move(a)); }

double gaussian_oracle(cplx a1, cplx a2) {
    return std::abs(std::exp(-a1 * a1 / (4.0 * a2))) * std::sqrt(kPi / std::abs(a2));
}

}  // namespace

TEST_CASE("complex literals") {
    CHECK(parse_complex("1+2*i") == cplx(1, 2));
    CHECK(parse_complex("-2*i") == cplx(0, -2));
    CHECK(parse_complex("1/2-i") == cplx(0.5, -1));
    CHECK(parse_complex("3") == cplx(3, 0));
    CHECK(parse_complex("0.25+0.5*i") == cplx(0.25, 0.5));
    CHECK_THROWS_AS(parse_complex("1+"), Error);
    CHECK_THROWS_AS(parse_complex("x"), Error);
    RF g = parse_gaussian_rational("1/2-i");
    CHECK(g.rational_part() == RF(Rational(1, 2)));
    CHECK(g.w_part() == RF(-1));
}

TEST_CASE("polynomials need m >= 3 and a nonzero leading coefficient") {
    CHECK_THROWS_AS(poly({1}), Error);
    CHECK_THROWS_AS(poly({1, 0}), Error);
    CHECK(poly({0, 1}).m() == 3);
}

TEST_CASE("rays") {
    auto r3 = rays(poly({0, 1}));
    REQUIRE(r3.size() == 2);
    CHECK(r3[0] == doctest::Approx(kPi / 2));
    CHECK(r3[1] == doctest::Approx(3 * kPi / 2));
    auto r4 = rays(poly({0, 0, 1}));
    REQUIRE(r4.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(r4[k] == doctest::Approx((2 * k + 1) * kPi / 3));

    std::mt19937 rng(83);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 3 + trial % 4;
        std::vector<cplx> a(m - 1);
        for (auto& c : a) c = {u(rng), u(rng)};
        ExpPolynomial f = poly(a);
        for (double th : rays(f)) CHECK((f.lead() * std::exp(cplx(0, (m - 1) * th))).real() < 0);
    }
}

TEST_CASE("Gaussian periods") {
    PeriodMatrix P = period_matrix(poly({0, -1}), 1e-10);
    CHECK(std::abs(P.P(0, 0)) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
    CHECK(P.error(0, 0) < 1e-10);
    for (auto [a1, a2] : {std::pair<cplx, cplx>{1, 2}, {cplx(0, 1), cplx(1, -1)}, {-3, cplx(0.5, 0.5)}}) {
        PeriodMatrix Q = period_matrix(poly({a1, a2}), 1e-10);
        CHECK(std::abs(std::abs(Q.P(0, 0)) - gaussian_oracle(a1, a2)) / gaussian_oracle(a1, a2) < 1e-8);
    }
}

TEST_CASE("cubic period determinant against a tighter self-oracle") {
    ExpPolynomial f = poly({0, 0, 1});
    cplx d1 = period_matrix(f, 1e-8).P.determinant();
    cplx d2 = period_matrix(f, 1e-10).P.determinant();
    CHECK(std::abs(d1 - d2) / std::abs(d2) < 1e-6);
}

TEST_CASE("parallel and serial period matrices agree") {
    ExpPolynomial f = poly({1, cplx(0, 1), 0, 1});
    PeriodMatrix a = period_matrix(f, 1e-9), b = period_matrix_serial(f, 1e-9);
    CHECK((a.P - b.P).norm() == 0.0);
}

TEST_CASE("critical values") {
    cplx a1(1, 2), a2(3, -1);
    auto cv = critical_values(poly({a1, a2}));
    REQUIRE(cv.size() == 1);
    CHECK(std::abs(cv[0] - (-a1 * a1 / (4.0 * a2))) < 1e-12);
    try {
        critical_values(poly({0, 0, 1}));
        FAIL("expected degenerate-critical-point");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateCriticalPoint);
    }
}

TEST_CASE("critical value sum matches the exact trace") {
    std::mt19937 rng(89);
    std::uniform_int_distribution<int> h(-10, 10);
    for (int trial = 0; trial < 10; ++trial) {
        int m = 3 + trial % 4;
        std::vector<std::string> lits;
        std::vector<cplx> a;
        for (int k = 0; k < m - 1; ++k) {
            int re = h(rng), im = h(rng);
            if (k == m - 2 && re == 0 && im == 0) re = 1;
            lits.push_back(std::to_string(re) + (im < 0 ? "" : "+") + std::to_string(im) + "*i");
            a.push_back(parse_complex(lits.back()));
        }
        std::vector<RF> exact;
        for (const auto& s : lits) exact.push_back(parse_gaussian_rational(s));
        RF sum = exact_critical_sum(exact);
        ExpPolynomial f = poly(a);
        cplx num = 0;
        for (cplx b : critical_points(f)) num += f.eval(b);
        double re = Rational(sum.rational_part().p().constant_term()).get_d() /
                    Rational(sum.d().constant_term()).get_d();
        double im = Rational(sum.w_part().p().constant_term()).get_d() / Rational(sum.d().constant_term()).get_d();
        CHECK(std::abs(num - cplx(re, im)) / std::max(1.0, std::abs(num)) < 1e-12);
    }
}

TEST_CASE("stationary phase value and the quadratic ratio") {
    CHECK(std::abs(stationary_phase_value(poly({0, 1})) - std::sqrt(kPi)) < 1e-14);
    PeriodResult r = compute_periods(poly({cplx(1, 1), 2}), 1e-10);
    CHECK(std::abs(std::abs(r.ratio) - 1) < 1e-8);
}

TEST_CASE("ratio is constant over draws for m = 4") {
    ConstancyResult c = ratio_constancy(poly({0, 0, 1}), 5, 7, 1e-9);
    CHECK(c.ratios.size() == 5);
    CHECK(c.max_relative_deviation < 1e-6);
    ConstancyResult s = ratio_constancy_serial(poly({0, 0, 1}), 5, 7, 1e-9);
    CHECK(s.max_relative_deviation == doctest::Approx(c.max_relative_deviation));
}

TEST_CASE("rational reconstruction") {
    CHECK(likely_rational(-0.5) == "-1/2");
    CHECK(likely_rational(3.0) == "3");
    CHECK(likely_rational(std::sqrt(2.0)).empty());
}

TEST_CASE("Newton identities and the Vandermonde Jacobian") {
    auto b3 = symmetric_bridge(3);
    auto a3 = coefficient_vars(3);
    RF s1 = RF::var(b3.s.at(0));
    CHECK(b3.F == RF::var(a3[0]) * s1 + RF::var(a3[1]) * s1 * s1);
    CHECK(b3.newton_ok);

    auto b4 = symmetric_bridge(4);
    RF u1 = RF::var(b4.s.at(0)), u2 = RF::var(b4.s.at(1));
    CHECK(b4.power_sums.at(1) == u1 * u1 - RF(2) * u2);
    CHECK(b4.power_sums.at(2) == u1 * u1 * u1 - RF(3) * u1 * u2);
    CHECK(b4.newton_ok);
    CHECK(b4.jacobian_sign != 0);
    CHECK(b4.jacobian == RF(b4.jacobian_sign) * b4.vandermonde);
    CHECK(b4.vandermonde == RF::var("z2") - RF::var("z1"));
    for (int m = 5; m <= 6; ++m) {
        auto b = symmetric_bridge(m);
        CHECK(b.newton_ok);
        CHECK(b.jacobian_sign != 0);
    }
}

TEST_CASE("triangular change of variables") {
    std::vector<Var> t{intern("t1"), intern("t2")};
    RF G = gmdet::testing::rf("t1^2 + 3*t1*t2 - t2^2");
    auto q = triangular_change_of_variables(G, t);
    CHECK(q.identity);
    CHECK(q.Q == G);
    CHECK(q.substitution.at(0) == RF::var(t[0]));
    CHECK(q.substitution.at(1) == RF::var(t[1]));

    auto ce = critical_expansion(4);
    CHECK(ce.gradient_vanishes);
    auto r = triangular_change_of_variables(ce.G, ce.t);
    CHECK(r.identity);
    CHECK(r.unit_jacobian);
    CHECK(r.substitution.at(0) == RF::var(ce.t.at(0)));
    CHECK(r.substitution.at(1) != RF::var(ce.t.at(1)));
}

TEST_CASE("Hessian of the quadratic form is a rational multiple of the scaling") {
    for (int m = 3; m <= 5; ++m) {
        auto ce = critical_expansion(m);
        auto r = triangular_change_of_variables(ce.G, ce.t);
        RF lead = RF::var(coefficient_vars(m).back());
        RF ratio = r.hessian_det / (RF(m - 1) * lead).pow(m - 2);
        CHECK(ratio.is_constant());
        CHECK_FALSE(ratio.is_zero());
    }
}
