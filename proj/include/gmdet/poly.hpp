#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gmdet/symbols.hpp"

namespace gmdet {

using Rational = mpq_class;

/// Exponent vector indexed by variable id, trailing zeros trimmed.
class Monomial {
public:
    Monomial() = default;
    static Monomial of(Var v, std::uint32_t e = 1);

    std::uint32_t exponent(Var v) const { return v < e_.size() ? e_[v] : 0; }
    std::uint32_t degree() const { return deg_; }
    bool is_one() const { return deg_ == 0; }
    std::size_t width() const { return e_.size(); }

    bool divides(const Monomial& other) const;
    Monomial operator*(const Monomial& o) const;
    /// Requires divides(o's dividend); i.e. this is a multiple of o.
    Monomial operator/(const Monomial& o) const;
    Monomial with_exponent(Var v, std::uint32_t e) const;
    static Monomial gcd(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial& o) const { return e_ == o.e_; }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] != 0) f(static_cast<Var>(i), e_[i]);
    }

private:
    void trim();
    std::vector<std::uint32_t> e_;
    std::uint32_t deg_ = 0;
};

/// Graded lexicographic comparison; variables with smaller id rank higher.
int compare(const Monomial& a, const Monomial& b);

struct Term {
    Monomial mono;
    Rational coeff;
};

/// Sparse distributed multivariate polynomial over Q. Terms are kept sorted
/// in strictly decreasing graded-lex order with nonzero coefficients.
class Poly {
public:
    Poly() = default;
    Poly(long c);  // NOLINT(google-explicit-constructor)
    Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
    static Poly var(Var v, std::uint32_t e = 1);
    static Poly monomial(const Monomial& m, const Rational& c);
    static Poly from_terms(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_value() const;  // requires is_constant()
    Rational constant_term() const;
    std::size_t size() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading() const { return terms_.front(); }
    const Rational& lc() const { return terms_.front().coeff; }

    std::uint32_t total_degree() const;
    std::uint32_t degree(Var v) const;
    std::uint32_t min_degree(Var v) const;
    bool contains(Var v) const { return degree(v) > 0; }
    std::vector<Var> variables() const;
    Monomial monomial_content() const;

    /// Coefficients with respect to v: result[k] is the coefficient of v^k.
    std::vector<Poly> coeffs(Var v) const;
    static Poly from_coeffs(Var v, const std::vector<Poly>& cs);

    Poly derivative(Var v) const;
    Poly substitute(Var v, const Poly& value) const;
    Poly monic() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    Poly pow(unsigned e) const;
    Poly mul_monomial(const Monomial& m) const;
    Poly div_monomial(const Monomial& m) const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    std::string to_string() const;
    std::size_t hash() const;

private:
    void normalize_terms();
    std::vector<Term> terms_;
};

/// Multivariate division by a single divisor: a = q*b + r with no term of r
/// divisible by lm(b). Unique for a fixed monomial order.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
/// Exact division; throws if b does not divide a.
Poly divide_exact(const Poly& a, const Poly& b);
/// Returns the quotient when b divides a, nothing otherwise.
bool try_divide(const Poly& a, const Poly& b, Poly& quotient);

/// Monic greatest common divisor over Q (primitive PRS, recursive in the
/// variables). gcd(0,0) = 0.
Poly gcd(const Poly& a, const Poly& b);
/// gcd of the coefficients of p viewed as a polynomial in v.
Poly content(const Poly& p, Var v);

std::string rational_to_string(const Rational& q);

}  // namespace gmdet
