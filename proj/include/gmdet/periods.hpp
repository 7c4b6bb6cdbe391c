#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

#include "gmdet/ratfunc.hpp"

namespace gmdet::periods {

using cplx = std::complex<double>;

/// f(z) = a_{m-1} z^{m-1} + ... + a_1 z, stored as a[k-1] = a_k.
struct ExpPolynomial {
    std::vector<cplx> a;

    /// Validates m >= 3 and a_{m-1} != 0 (malformed-input otherwise).
    static ExpPolynomial make(std::vector<cplx> coeffs);
    int m() const { return static_cast<int>(a.size()) + 1; }
    const cplx& lead() const { return a.back(); }
    cplx eval(cplx z) const;
    cplx derivative(cplx z) const;
};

/// Parses "re+im*i", "3", "-2*i", "1/2-i" and similar complex literals.
cplx parse_complex(const std::string& text);
/// Exact Gaussian-rational version of the same literal, as an element of Q(i).
RF parse_gaussian_rational(const std::string& text);

/// theta_k = (-arg a_{m-1} + (2k+1) pi) / (m-1), k = 0..m-2.
std::vector<double> rays(const ExpPolynomial& f);

struct RayIntegral {
    cplx value;
    double error = 0;
};

/// Radius beyond which the tail of |exp(f) z^power| along ray theta is
/// below tol (relative to 1).
double truncation_radius(const ExpPolynomial& f, int power, double tol);
/// int_0^infinity exp(f(r e^{i theta})) (r e^{i theta})^power e^{i theta} dr.
/// Extended precision (float128) when `extended`.
RayIntegral ray_integral(const ExpPolynomial& f, double theta, int power, double tol, bool extended);

struct PeriodMatrix {
    Eigen::MatrixXcd P;    // (m-2) x (m-2), P(i-1, j-1) = int_{sigma_i} exp(f) z^{j-1} dz
    Eigen::MatrixXd error;  // absolute error estimates per entry
    bool extended = false;
};

/// Ray integrals run in parallel (one task per ray and power).
PeriodMatrix period_matrix(const ExpPolynomial& f, double tol);
PeriodMatrix period_matrix_serial(const ExpPolynomial& f, double tol);

/// Roots of f' (Eigen companion solver polished by Newton). Throws
/// degenerate-critical-point when two roots coincide.
std::vector<cplx> critical_points(const ExpPolynomial& f);
std::vector<cplx> critical_values(const ExpPolynomial& f);
/// prod exp(f(beta)) * (2 pi / ((m-1) a_{m-1}))^{(m-2)/2}, principal branch.
cplx stationary_phase_value(const ExpPolynomial& f);

/// Exact sum of f over the roots of f' for coefficients in Q(i): the trace
/// of f on Q(i)[z]/(f').
RF exact_critical_sum(const std::vector<RF>& coeffs);

struct PeriodResult {
    ExpPolynomial f;
    double tol = 0;
    PeriodMatrix matrix;
    cplx det;
    std::vector<cplx> critical_values;
    cplx closed_form;
    cplx ratio;
};

PeriodResult compute_periods(const ExpPolynomial& f, double tol);

/// det P via the direct multiple integral
/// int_{sigma_1 x ... } exp(sum f(z_i)) prod_{i<j}(z_j - z_i): a single ray
/// integral for m = 3, nested two-dimensional quadrature for m = 4.
cplx direct_multiple_integral(const ExpPolynomial& f, double tol);

struct ConstancyResult {
    std::vector<ExpPolynomial> draws;
    std::vector<cplx> ratios;
    double max_relative_deviation = 0;
};

/// Random coefficient perturbations of `base` (a_{m-1} kept with
/// |arg| < pi/4); ratios computed in parallel across draws.
ConstancyResult ratio_constancy(const ExpPolynomial& base, int draws, unsigned seed, double tol);
ConstancyResult ratio_constancy_serial(const ExpPolynomial& base, int draws, unsigned seed, double tol);

/// Continued-fraction reconstruction p/q with q <= max_den and relative
/// error below rel; empty when none is found.
std::string likely_rational(double x, long max_den = 64, double rel = 1e-6);

// ---------------------------------------------------------------- symbolic

/// Symbols a_1..a_{m-1} (named "a1", ...).
std::vector<Var> coefficient_vars(int m);

struct SymmetricBridge {
    int m = 0;
    std::vector<Var> s;            // s_1..s_{m-2}
    std::vector<RF> power_sums;    // p_1..p_{m-1} in s with s_{m-1} = 0
    RF F;                          // sum a_k p_k
    RF jacobian;                   // det d(s_1..s_{m-2}) / d(z_1..z_{m-2})
    RF vandermonde;                // prod_{i<j} (z_j - z_i)
    int jacobian_sign = 0;         // jacobian = sign * vandermonde, 0 if neither
    bool newton_ok = false;        // p_k(s(z)) = z_1^k + ... with and without z_{m-1}
};

SymmetricBridge symmetric_bridge(int m);

struct CriticalExpansion {
    std::vector<Var> t;  // t_1..t_{m-2}
    std::vector<RF> b;   // critical point in s-coordinates
    RF F_at_b;
    RF G;                // F(b + t) - F(b)
    bool gradient_vanishes = false;
};

/// Expansion of F at the divisor of zeros of f'.
CriticalExpansion critical_expansion(int m);

struct TriangularResult {
    std::vector<RF> substitution;  // t'_j as a function of t
    RF Q;                          // quadratic in t'
    bool identity = false;         // G(t) = Q(t'(t)) identically
    bool unit_jacobian = false;    // t'_j - t_j depends only on t_1..t_{j-1}
    RF hessian_det;
};

/// Triangular change of variables making G quadratic. Throws not-in-scope
/// when the pairing structure of the weight argument fails.
TriangularResult triangular_change_of_variables(const RF& G, const std::vector<Var>& t);

}  // namespace gmdet::periods
