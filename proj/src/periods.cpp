#include "gmdet/periods.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>

#include "gmdet/errors.hpp"
#include "gmdet/expr.hpp"
#include "gmdet/univariate.hpp"

namespace gmdet::periods {

namespace {

using boost::math::quadrature::gauss_kronrod;
using F128 = boost::multiprecision::float128;
using C128 = boost::multiprecision::complex128;

constexpr double kPi = std::numbers::pi;

}  // namespace

ExpPolynomial ExpPolynomial::make(std::vector<cplx> coeffs) {
    if (coeffs.size() < 2) throw Error(ErrorKind::MalformedInput, "need coefficients a_1..a_{m-1} with m >= 3");
    if (coeffs.back() == cplx(0)) throw Error(ErrorKind::MalformedInput, "leading coefficient a_{m-1} is zero");
    for (const auto& c : coeffs)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw Error(ErrorKind::MalformedInput, "non-finite coefficient");
    return ExpPolynomial{std::move(coeffs)};
}

cplx ExpPolynomial::eval(cplx z) const {
    cplx acc = 0;
    for (std::size_t k = a.size(); k-- > 0;) acc = (acc + a[k]) * z;
    return acc;
}

cplx ExpPolynomial::derivative(cplx z) const {
    cplx acc = 0;
    for (std::size_t k = a.size(); k-- > 0;) acc = acc * z + a[k] * static_cast<double>(k + 1);
    return acc;
}

// ---------------------------------------------------------------- literals

namespace {

struct LiteralTerm {
    std::string number;
    bool imaginary = false;
    bool negative = false;
};

std::vector<LiteralTerm> split_literal(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw Error(ErrorKind::MalformedInput, "empty complex literal");
    std::vector<LiteralTerm> terms;
    std::size_t i = 0;
    while (i < s.size()) {
        LiteralTerm t;
        if (s[i] == '+' || s[i] == '-') {
            t.negative = s[i] == '-';
            ++i;
        } else if (!terms.empty()) {
            throw Error(ErrorKind::MalformedInput, "bad complex literal '" + text + "'");
        }
        std::size_t start = i;
        while (i < s.size()) {
            char c = s[i];
            bool exp_sign = (c == '+' || c == '-') && i > start && (s[i - 1] == 'e' || s[i - 1] == 'E');
            if ((c == '+' || c == '-') && !exp_sign) break;
            ++i;
        }
        std::string body = s.substr(start, i - start);
        if (!body.empty() && body.back() == 'i') {
            t.imaginary = true;
            body.pop_back();
            if (!body.empty() && body.back() == '*') body.pop_back();
        }
        if (body.empty() && !t.imaginary) throw Error(ErrorKind::MalformedInput, "bad complex literal '" + text + "'");
        t.number = body.empty() ? "1" : body;
        if (t.number.find_first_not_of("0123456789./eE+-") != std::string::npos)
            throw Error(ErrorKind::MalformedInput, "bad complex literal '" + text + "'");
        terms.push_back(t);
    }
    return terms;
}

double parse_real(const std::string& s) {
    auto slash = s.find('/');
    try {
        std::size_t pos = 0;
        if (slash == std::string::npos) {
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        }
        double p = std::stod(s.substr(0, slash), &pos);
        if (pos != slash) throw std::invalid_argument(s);
        std::string den = s.substr(slash + 1);
        double q = std::stod(den, &pos);
        if (pos != den.size() || q == 0) throw std::invalid_argument(s);
        return p / q;
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::MalformedInput, "bad number '" + s + "'");
    }
}

Rational parse_exact(const std::string& s) {
    if (s.find_first_of(".eE") != std::string::npos) {
        // Decimal literal: exact value of the decimal expansion.
        auto e = s.find_first_of("eE");
        std::string mant = s.substr(0, e);
        long exp10 = e == std::string::npos ? 0 : std::stol(s.substr(e + 1));
        auto dot = mant.find('.');
        std::string digits = mant;
        if (dot != std::string::npos) {
            digits.erase(dot, 1);
            exp10 -= static_cast<long>(mant.size() - dot - 1);
        }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorKind::MalformedInput, "bad number '" + s + "'");
        mpz_class num(digits), scale = 1;
        for (long k = 0; k < std::labs(exp10); ++k) scale *= 10;
        Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
        r.canonicalize();
        return r;
    }
    try {
        Rational r(s);
        if (r.get_den() == 0) throw std::invalid_argument(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::MalformedInput, "bad number '" + s + "'");
    }
}

ExtPtr gaussian_extension() {
    static ExtPtr ext = make_extension("i", Poly(-1));
    return ext;
}

}  // namespace

cplx parse_complex(const std::string& text) {
    cplx z = 0;
    for (const auto& t : split_literal(text)) {
        double v = parse_real(t.number) * (t.negative ? -1 : 1);
        z += t.imaginary ? cplx(0, v) : cplx(v, 0);
    }
    return z;
}

RF parse_gaussian_rational(const std::string& text) {
    RF z;
    RF i = RF::generator(gaussian_extension());
    for (const auto& t : split_literal(text)) {
        RF v(parse_exact(t.number) * (t.negative ? -1 : 1));
        z += t.imaginary ? v * i : v;
    }
    return z;
}

// ---------------------------------------------------------------- quadrature

std::vector<double> rays(const ExpPolynomial& f) {
    int m = f.m();
    std::vector<double> out;
    for (int k = 0; k <= m - 2; ++k) out.push_back((-std::arg(f.lead()) + (2 * k + 1) * kPi) / (m - 1));
    return out;
}

double truncation_radius(const ExpPolynomial& f, int power, double tol) {
    int m = f.m();
    double c = std::abs(f.lead());
    double lower = 0;
    for (std::size_t k = 0; k + 1 < f.a.size(); ++k) lower += std::abs(f.a[k]);
    // For r >= R0 the lower-order terms are at most half the leading one.
    double R = std::max(1.0, 2 * lower / c);
    double target = std::log(tol) - std::log(1e3);
    auto log_tail = [&](double r) {
        // int_r^inf exp(-c s^{m-1}/2) s^power ds <= exp(-c r^{m-1}/2) r^power / (c (m-1) r^{m-2} / 2 - power / r)
        double rate = c * (m - 1) * std::pow(r, m - 2) / 2 - power / r;
        if (rate <= 0) return 0.0;
        return -c * std::pow(r, m - 1) / 2 + power * std::log(r) - std::log(rate);
    };
    while (log_tail(R) > target) R *= 1.1;
    return R;
}

namespace {

template <class Real, class Complex>
Complex integrand(const ExpPolynomial& f, const Complex& dir, int power, Real r) {
    Complex z = dir * r;
    Complex acc(0);
    for (std::size_t k = f.a.size(); k-- > 0;) acc = (acc + Complex(Real(f.a[k].real()), Real(f.a[k].imag()))) * z;
    Complex zp(1);
    for (int k = 0; k < power; ++k) zp *= z;
    return exp(acc) * zp * dir;
}

constexpr int kPanels = 8;

}  // namespace

RayIntegral ray_integral(const ExpPolynomial& f, double theta, int power, double tol, bool extended) {
    double R = truncation_radius(f, power, tol);
    RayIntegral out;
    if (!extended) {
        cplx dir = std::polar(1.0, theta);
        auto g = [&](double r) { return integrand<double, cplx>(f, dir, power, r); };
        for (int p = 0; p < kPanels; ++p) {
            double err = 0;
            out.value += gauss_kronrod<double, 61>::integrate(g, R * p / kPanels, R * (p + 1) / kPanels, 20,
                                                              tol * 1e-2, &err);
            out.error += err;
        }
    } else {
        F128 th(theta);
        C128 dir(cos(th), sin(th));
        auto g = [&](F128 r) { return integrand<F128, C128>(f, dir, power, r); };
        C128 total(0);
        F128 err_total = 0;
        for (int p = 0; p < kPanels; ++p) {
            F128 err = 0;
            total += gauss_kronrod<F128, 61>::integrate(g, F128(R) * p / kPanels, F128(R) * (p + 1) / kPanels, 20,
                                                        F128(tol) * F128(1e-3), &err);
            err_total += err;
        }
        out.value = cplx(static_cast<double>(total.real()), static_cast<double>(total.imag()));
        out.error = static_cast<double>(err_total);
    }
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag()))
        throw Error(ErrorKind::Precision, "ray integral overflowed at working precision");
    return out;
}

namespace {

PeriodMatrix assemble(const ExpPolynomial& f, const std::vector<RayIntegral>& I, bool extended) {
    int n = f.m() - 2;
    PeriodMatrix pm;
    pm.extended = extended;
    pm.P.resize(n, n);
    pm.error.resize(n, n);
    // I[k * n + j] = int_{gamma_k} exp(f) z^j dz
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j < n; ++j) {
            pm.P(i - 1, j) = I[i * n + j].value - I[j].value;
            pm.error(i - 1, j) = I[i * n + j].error + I[j].error;
        }
    return pm;
}

}  // namespace

PeriodMatrix period_matrix(const ExpPolynomial& f, double tol) {
    if (!(tol > 0)) throw Error(ErrorKind::MalformedInput, "tolerance must be positive");
    bool extended = tol < 1e-10;
    int n = f.m() - 2;
    auto th = rays(f);
    int tasks = (n + 1) * n;
    std::vector<RayIntegral> I(tasks);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < tasks; ++k) {
        try {
            I[k] = ray_integral(f, th[k / n], k % n, tol, extended);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return assemble(f, I, extended);
}

PeriodMatrix period_matrix_serial(const ExpPolynomial& f, double tol) {
    if (!(tol > 0)) throw Error(ErrorKind::MalformedInput, "tolerance must be positive");
    bool extended = tol < 1e-10;
    int n = f.m() - 2;
    auto th = rays(f);
    std::vector<RayIntegral> I;
    for (int k = 0; k < (n + 1) * n; ++k) I.push_back(ray_integral(f, th[k / n], k % n, tol, extended));
    return assemble(f, I, extended);
}

// ---------------------------------------------------------------- critical points

std::vector<cplx> critical_points(const ExpPolynomial& f) {
    int n = f.m() - 2;
    Eigen::VectorXcd c(n + 1);
    for (int k = 0; k <= n; ++k) c(k) = f.a[k] * static_cast<double>(k + 1);
    std::vector<cplx> roots;
    if (n == 1) {
        roots.push_back(-c(0) / c(1));
    } else {
        Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver(c);
        for (Eigen::Index k = 0; k < solver.roots().size(); ++k) roots.push_back(solver.roots()(k));
    }
    using LC = std::complex<long double>;
    for (auto& r : roots) {
        LC z(r.real(), r.imag());
        for (int it = 0; it < 8; ++it) {
            LC d1 = 0, d2 = 0;
            for (int k = n; k >= 0; --k) {
                d2 = d2 * z + d1;
                d1 = d1 * z + LC(c(k).real(), c(k).imag());
            }
            if (d2 == LC(0)) break;
            z -= d1 / d2;
        }
        r = cplx(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    double scale = 1;
    for (const auto& r : roots) scale = std::max(scale, std::abs(r));
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-6 * scale)
                throw Error(ErrorKind::DegenerateCriticalPoint, "f' has a repeated root");
    std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return roots;
}

std::vector<cplx> critical_values(const ExpPolynomial& f) {
    std::vector<cplx> out;
    for (const auto& b : critical_points(f)) out.push_back(f.eval(b));
    return out;
}

cplx stationary_phase_value(const ExpPolynomial& f) {
    cplx sum = 0;
    for (const auto& v : critical_values(f)) sum += v;
    int m = f.m();
    cplx base = 2 * kPi / (static_cast<double>(m - 1) * f.lead());
    return std::exp(sum + 0.5 * (m - 2) * std::log(base));
}

RF exact_critical_sum(const std::vector<RF>& coeffs) {
    if (coeffs.size() < 2 || coeffs.back().is_zero())
        throw Error(ErrorKind::MalformedInput, "need a_1..a_{m-1} with a_{m-1} != 0");
    Var z = intern("__crit_z");
    std::vector<RF> d;
    RF fz;
    RF zz = RF::var(z);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        d.push_back(coeffs[k] * RF(static_cast<long>(k + 1)));
        fz += coeffs[k] * zz.pow(static_cast<long>(k + 1));
    }
    UPoly fp(d);
    if (gcd(fp, fp.derivative()).degree() > 0)
        throw Error(ErrorKind::DegenerateCriticalPoint, "f' has a repeated root");
    return resultant_trace(fp, fz, z);
}

PeriodResult compute_periods(const ExpPolynomial& f, double tol) {
    PeriodResult r;
    r.f = f;
    r.tol = tol;
    r.critical_values = critical_values(f);
    r.matrix = period_matrix(f, tol);
    r.det = r.matrix.P.determinant();
    r.closed_form = stationary_phase_value(f);
    r.ratio = r.det / r.closed_form;
    return r;
}

// ---------------------------------------------------------------- direct integral

cplx direct_multiple_integral(const ExpPolynomial& f, double tol) {
    int m = f.m();
    auto th = rays(f);
    if (m == 3) {
        cplx d0 = std::polar(1.0, th[0]), d1 = std::polar(1.0, th[1]);
        double R = truncation_radius(f, 0, tol);
        // sigma_1 = gamma_1 - gamma_0 as one path r in (-R, R).
        auto g = [&](double r) { return r >= 0 ? std::exp(f.eval(d1 * r)) * d1 : -std::exp(f.eval(-d0 * r)) * d0; };
        cplx total = 0;
        for (int p = 0; p < 2 * kPanels; ++p) {
            double lo = -R + 2 * R * p / (2 * kPanels), hi = -R + 2 * R * (p + 1) / (2 * kPanels);
            total += gauss_kronrod<double, 61>::integrate(g, lo, hi, 20, tol * 1e-2);
        }
        return total;
    }
    if (m != 4) throw Error(ErrorKind::NotInScope, "direct multiple integral implemented for m = 3, 4");
    double R = truncation_radius(f, 1, tol);
    std::vector<cplx> dir = {std::polar(1.0, th[0]), std::polar(1.0, th[1]), std::polar(1.0, th[2])};
    auto pair_integral = [&](int a, int b) {
        cplx ea = dir[a], eb = dir[b];
        auto outer = [&](double r1) {
            cplx z1 = ea * r1;
            cplx e1 = std::exp(f.eval(z1));
            auto inner = [&](double r2) {
                cplx z2 = eb * r2;
                return std::exp(f.eval(z2)) * (z2 - z1) * eb;
            };
            cplx s = 0;
            for (int p = 0; p < kPanels; ++p)
                s += gauss_kronrod<double, 31>::integrate(inner, R * p / kPanels, R * (p + 1) / kPanels, 12,
                                                          tol * 1e-2);
            return e1 * s * ea;
        };
        cplx s = 0;
        for (int p = 0; p < kPanels; ++p)
            s += gauss_kronrod<double, 31>::integrate(outer, R * p / kPanels, R * (p + 1) / kPanels, 12, tol * 1e-2);
        return s;
    };
    // sigma_1 x sigma_2 = (gamma_1 - gamma_0) x (gamma_2 - gamma_0)
    return pair_integral(1, 2) - pair_integral(1, 0) - pair_integral(0, 2) + pair_integral(0, 0);
}

// ---------------------------------------------------------------- constancy

namespace {

std::vector<ExpPolynomial> make_draws(const ExpPolynomial& base, int draws, unsigned seed) {
    if (std::abs(std::arg(base.lead())) >= kPi / 4)
        throw Error(ErrorKind::Precondition, "constancy draws need |arg a_{m-1}| < pi/4");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    std::vector<ExpPolynomial> out;
    while (static_cast<int>(out.size()) < draws) {
        std::vector<cplx> a = base.a;
        for (std::size_t k = 0; k + 1 < a.size(); ++k) a[k] += cplx(u(rng), u(rng));
        a.back() *= cplx(1 + u(rng) / 2, u(rng) / 2);
        if (std::abs(std::arg(a.back())) >= kPi / 4) continue;
        ExpPolynomial f = ExpPolynomial::make(a);
        try {
            critical_points(f);
        } catch (const Error&) {
            continue;
        }
        out.push_back(f);
    }
    return out;
}

double max_deviation(const std::vector<cplx>& q) {
    double dev = 0;
    for (const auto& x : q) dev = std::max(dev, std::abs(x - q.front()) / std::abs(q.front()));
    return dev;
}

}  // namespace

ConstancyResult ratio_constancy(const ExpPolynomial& base, int draws, unsigned seed, double tol) {
    ConstancyResult r;
    r.draws = make_draws(base, draws, seed);
    r.ratios.resize(r.draws.size());
    std::exception_ptr failure;
    const int count = static_cast<int>(r.draws.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
        try {
            const auto& f = r.draws[k];
            r.ratios[k] = period_matrix_serial(f, tol).P.determinant() / stationary_phase_value(f);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    r.max_relative_deviation = max_deviation(r.ratios);
    return r;
}

ConstancyResult ratio_constancy_serial(const ExpPolynomial& base, int draws, unsigned seed, double tol) {
    ConstancyResult r;
    r.draws = make_draws(base, draws, seed);
    for (const auto& f : r.draws)
        r.ratios.push_back(period_matrix_serial(f, tol).P.determinant() / stationary_phase_value(f));
    r.max_relative_deviation = max_deviation(r.ratios);
    return r;
}

std::string likely_rational(double x, long max_den, double rel) {
    if (!std::isfinite(x)) return {};
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double y = x;
    for (int it = 0; it < 40; ++it) {
        double a = std::floor(y);
        if (std::abs(a) > 1e12) break;
        long ai = static_cast<long>(a);
        long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        if (std::abs(static_cast<double>(p2) / q2 - x) <= rel * std::max(1.0, std::abs(x)))
            return q2 == 1 ? std::to_string(p2) : std::to_string(p2) + "/" + std::to_string(q2);
        p0 = p1, q0 = q1, p1 = p2, q1 = q2;
        double frac = y - a;
        if (frac == 0) break;
        y = 1 / frac;
    }
    return {};
}

}  // namespace gmdet::periods
