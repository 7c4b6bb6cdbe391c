#include <doctest.h>

#include "gmdet/derham.hpp"
#include "gmdet/epsilon.hpp"
#include "gmdet/errors.hpp"
#include "gmdet/fourier.hpp"
#include "support.hpp"

using namespace gmdet;
using gmdet::testing::base_form;

namespace {

RMatrix m2(long a, long b, long c, long d) {
    RMatrix m(2, 2);
    m(0, 0) = RF(a), m(0, 1) = RF(b), m(1, 0) = RF(c), m(1, 1) = RF(d);
    return m;
}

BaseForm lhs_of(const FourierData& d) { return -h1_trace(h1_basis(fourier_spec(d))); }

}  // namespace

TEST_CASE("rank one, one simple pole") {
    FourierData d;
    d.poles.push_back({RF(1), {RMatrix::scalar(1, RF(3))}});
    const ScalarTower T = fourier_tower();
    CHECK(lhs_of(d) == base_form("dt/t^2 - 3*dt/t", T));
    CHECK(fourier_closed_form(d) == base_form("dt/t^2 - 3*dt/t", T));
    CHECK(verify_conjecture(fourier_spec(d)).verdict == Verdict::Verified);
}

TEST_CASE("rank two with a double pole at infinity") {
    FourierData d;
    d.rank = 2;
    d.poles.push_back({RF(1), {m2(1, 2, 0, 1)}});
    d.poles.push_back({RF(-2), {m2(0, 1, 1, 1), m2(2, 0, 1, 1)}});
    d.g_inf = {m2(1, -1, 2, 0)};
    const ScalarTower T = fourier_tower();
    // (sum r m_x x - sum Tr((g2 + 1/t)^{-1} g^x_1)) dt/t^2, computed by hand:
    // g2 + 1/t = [[1+s, -1], [2, s]] with s = 1/t, det = s^2 + s + 2
    // sum g^x_1 = [[1, 3], [1, 2]]; Tr(adj * sum) = s*1 + 1*1 + (-2)*3 + (1+s)*2 = 3s - 3
    BaseForm expected = base_form("(2*1 + 2*2*(-2))*dt/t^2 - ((3/t - 3)/(1/t^2 + 1/t + 2))*dt/t^2", T);
    CHECK(fourier_closed_form(d) == expected);
    CHECK(lhs_of(d) == expected);
    CHECK(verify_conjecture(fourier_spec(d)).verdict == Verdict::Verified);
}

TEST_CASE("rank two with an irregular point at infinity") {
    FourierData d;
    d.rank = 2;
    d.poles.push_back({RF(3), {m2(1, 1, 0, 2)}});
    d.g_inf = {m2(1, 0, 0, 1), m2(0, 1, 1, 0), m2(2, 1, 1, 1)};
    const ScalarTower T = fourier_tower();
    // m_inf = 4: (r m x - Tr(g_4^{-1} g_3)) dt/t^2; g_4^{-1} = [[1, -1], [-1, 2]], Tr(g_4^{-1} g_3) = -2
    BaseForm expected = base_form("(6 + 2)*dt/t^2", T);
    CHECK(fourier_closed_form(d) == expected);
    CHECK(lhs_of(d) == expected);
    CHECK(verify_conjecture(fourier_spec(d)).verdict == Verdict::Verified);
}

TEST_CASE("closed forms on random instances of every regime") {
    std::mt19937 rng(73);
    for (FourierRegime r : {FourierRegime::AtMostOne, FourierRegime::Two, FourierRegime::AtLeastThree})
        for (int k = 0; k < 3; ++k) {
            FourierData d = random_fourier(rng, r);
            CHECK(lhs_of(d) == fourier_closed_form(d));
        }
}

TEST_CASE("random instances are admissible and shaped as requested") {
    std::mt19937 rng(79);
    for (int k = 0; k < 30; ++k) {
        FourierRegime r = static_cast<FourierRegime>(k % 3);
        FourierData d = random_fourier(rng, r);
        CHECK(d.rank >= 1);
        CHECK(d.rank <= 3);
        CHECK(d.poles.size() >= 1);
        CHECK(d.poles.size() <= 3);
        for (const auto& p : d.poles) CHECK(p.g.size() <= 3);
        if (r == FourierRegime::AtMostOne) CHECK(d.m_inf() <= 1);
        if (r == FourierRegime::Two) CHECK(d.m_inf() == 2);
        if (r == FourierRegime::AtLeastThree) CHECK(d.m_inf() >= 3);
        CHECK(check_admissible(fourier_spec(d)));
    }
}

TEST_CASE("Fourier data validation") {
    FourierData d;
    d.rank = 2;
    d.poles.push_back({RF(1), {RMatrix::scalar(1, RF(1))}});
    CHECK_THROWS_AS(validate(d), Error);
    d.poles[0].g[0] = m2(1, 0, 0, 1);
    d.poles[0].g[0](0, 1) = RF::var("t");
    CHECK_THROWS_AS(validate(d), Error);
    d.poles[0].g[0](0, 1) = RF(0);
    CHECK_NOTHROW(validate(d));
    d.poles.push_back({RF(1), {m2(1, 0, 0, 1)}});
    CHECK_THROWS_AS(validate(d), Error);
}
