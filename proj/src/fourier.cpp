#include "gmdet/fourier.hpp"

#include <algorithm>

#include "gmdet/errors.hpp"

namespace gmdet {

namespace {

bool constant_matrix(const RMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_constant()) return false;
    return true;
}

void check_matrix(const RMatrix& m, std::size_t r, const std::string& where) {
    if (m.rows() != r || m.cols() != r)
        throw Error(ErrorKind::MalformedInput, where + ": expected a " + std::to_string(r) + "x" +
                                                   std::to_string(r) + " matrix");
    if (!constant_matrix(m)) throw Error(ErrorKind::MalformedInput, where + ": entries must be rational constants");
}

}  // namespace

ScalarTower fourier_tower() { return ScalarTower::make({"t"}, {}, "z"); }

void validate(const FourierData& data) {
    if (data.rank == 0) throw Error(ErrorKind::MalformedInput, "rank must be positive");
    for (std::size_t p = 0; p < data.poles.size(); ++p) {
        const auto& pole = data.poles[p];
        std::string where = "poles[" + std::to_string(p) + "]";
        if (!pole.point.is_constant()) throw Error(ErrorKind::MalformedInput, where + ": point must be rational");
        if (pole.g.empty()) throw Error(ErrorKind::MalformedInput, where + ": no matrices");
        for (std::size_t i = 0; i < pole.g.size(); ++i)
            check_matrix(pole.g[i], data.rank, where + ".g[" + std::to_string(i) + "]");
        for (std::size_t q = 0; q < p; ++q)
            if (data.poles[q].point == pole.point)
                throw Error(ErrorKind::MalformedInput, where + ": repeated point " + pole.point.to_string());
    }
    for (std::size_t k = 0; k < data.g_inf.size(); ++k)
        check_matrix(data.g_inf[k], data.rank, "g_inf[" + std::to_string(k) + "]");
}

ConnectionSpec fourier_spec(const FourierData& data) {
    validate(data);
    ScalarTower tower = fourier_tower();
    const std::size_t r = data.rank;
    const RF z = RF::var(tower.fiber);
    const Var tv = tower.base_vars.front();
    const RF t = RF::var(tv);

    AbsoluteForm1 A(r);
    RMatrix fiber = RMatrix::scalar(r, t.inverse());
    Divisor D;
    for (const auto& pole : data.poles) {
        RF lin = z - pole.point;
        for (std::size_t i = 0; i < pole.g.size(); ++i) fiber += pole.g[i] * lin.pow(-static_cast<long>(i + 1));
        D.push_back({Point::at(pole.point), static_cast<int>(pole.g.size())});
    }
    for (std::size_t k = 0; k < data.g_inf.size(); ++k) fiber += data.g_inf[k] * z.pow(static_cast<long>(k));
    A.fiber = fiber;
    A.set_base(tv, RMatrix::scalar(r, -z / (t * t)));
    D.push_back({Point::infinity(), std::max(2, data.m_inf())});
    return make_spec(tower, A, D);
}

BaseForm fourier_closed_form(const FourierData& data) {
    validate(data);
    const std::size_t r = data.rank;
    const Var tv = intern("t");
    const RF t = RF::var(tv);
    RF S;
    for (const auto& pole : data.poles) S += RF(static_cast<long>(r * pole.g.size())) * pole.point;

    RF coeff;  // of dt/t^2
    const int m = data.m_inf();
    if (m <= 1) {
        RF tr;
        for (const auto& pole : data.poles) tr += pole.g.front().trace();
        coeff = S - t * tr;
    } else if (m == 2) {
        RMatrix inv = (data.g_inf[0] + RMatrix::scalar(r, t.inverse())).inverse();
        coeff = S;
        for (const auto& pole : data.poles) coeff -= (inv * pole.g.front()).trace();
    } else {
        RMatrix h = data.g_inf[m - 3];
        if (m == 3) h += RMatrix::scalar(r, t.inverse());
        coeff = S - (data.g_inf[m - 2].inverse() * h).trace();
    }
    BaseForm out;
    if (!coeff.is_zero()) out.c[tv] = coeff / (t * t);
    return out;
}

const char* to_string(FourierRegime r) {
    switch (r) {
        case FourierRegime::AtMostOne: return "m_inf<=1";
        case FourierRegime::Two: return "m_inf=2";
        case FourierRegime::AtLeastThree: return "m_inf>=3";
    }
    return "?";
}

FourierData random_fourier(std::mt19937& rng, FourierRegime regime) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    static const std::vector<Rational> pool = {Rational(0),  Rational(1),  Rational(-1), Rational(2),
                                               Rational(-2), Rational(3),  Rational(1, 2), Rational(-1, 2),
                                               Rational(3, 2), Rational(-3)};
    for (;;) {
        FourierData d;
        d.rank = static_cast<std::size_t>(pick(1, 3));
        const std::size_t r = d.rank;
        auto random_matrix = [&](bool invertible) {
            for (;;) {
                RMatrix m(r, r);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) m(i, j) = RF(static_cast<long>(pick(-3, 3)));
                if (!invertible || !m.det().is_zero()) return m;
            }
        };
        std::vector<Rational> points = pool;
        std::shuffle(points.begin(), points.end(), rng);
        int npoles = pick(1, 3);
        for (int p = 0; p < npoles; ++p) {
            FourierPole pole;
            pole.point = RF(points[p]);
            int mult = pick(1, 3);
            for (int i = 1; i <= mult; ++i) pole.g.push_back(random_matrix(i == mult));
            d.poles.push_back(std::move(pole));
        }
        if (regime == FourierRegime::Two) {
            d.g_inf.push_back(random_matrix(false));
        } else if (regime == FourierRegime::AtLeastThree) {
            int m = pick(3, 4);
            for (int k = 2; k <= m; ++k) d.g_inf.push_back(random_matrix(k == m));
        }
        ConnectionSpec spec = fourier_spec(d);
        if (check_admissible(spec)) return d;
    }
}

}  // namespace gmdet
