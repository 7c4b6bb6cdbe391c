#pragma once

#include <memory>
#include <string>

#include "gmdet/poly.hpp"

namespace gmdet {

/// Quadratic extension K(w), w^2 = square. The square must not involve w.
struct Extension {
    Var gen;
    Poly square;
};
using ExtPtr = std::shared_ptr<const Extension>;

ExtPtr make_extension(std::string_view gen, const Poly& square);

/// Element (p + q*w)/d of K or K(w). Canonical form: d is monic in graded-lex
/// order, gcd(p, q, d) = 1, and the extension pointer is dropped when q = 0.
/// With this normalization equality is structural.
class RationalFunction {
public:
    RationalFunction() : d_(1) {}
    RationalFunction(long c) : p_(c), d_(1) {}  // NOLINT
    RationalFunction(const Rational& c) : p_(c), d_(1) {}  // NOLINT
    RationalFunction(const Poly& p) : p_(p), d_(1) {}  // NOLINT
    RationalFunction(const Poly& num, const Poly& den);

    static RationalFunction make(Poly p, Poly q, Poly d, ExtPtr ext);
    static RationalFunction var(Var v) { return Poly::var(v); }
    static RationalFunction var(std::string_view name) { return Poly::var(intern(name)); }
    static RationalFunction generator(const ExtPtr& ext);

    const Poly& p() const { return p_; }
    const Poly& q() const { return q_; }
    const Poly& d() const { return d_; }
    const ExtPtr& ext() const { return ext_; }

    bool is_zero() const { return p_.is_zero() && q_.is_zero(); }
    bool is_one() const;
    bool has_w() const { return !q_.is_zero(); }
    bool is_polynomial() const { return q_.is_zero() && d_.is_constant(); }
    bool is_constant() const { return is_polynomial() && p_.is_constant(); }
    Rational constant_value() const;
    bool contains(Var v) const { return p_.contains(v) || q_.contains(v) || d_.contains(v); }

    RationalFunction operator-() const;
    RationalFunction& operator+=(const RationalFunction& o);
    RationalFunction& operator-=(const RationalFunction& o);
    RationalFunction& operator*=(const RationalFunction& o);
    RationalFunction& operator/=(const RationalFunction& o);
    friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
    friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
    friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
    friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }

    RationalFunction inverse() const;
    RationalFunction pow(long e) const;
    RationalFunction conjugate() const;
    /// N(f) = f * conj(f), an element of K.
    RationalFunction norm() const;
    /// Rational part p/d and irrational part q/d (coefficient of w).
    RationalFunction rational_part() const { return {p_, d_}; }
    RationalFunction w_part() const { return {q_, d_}; }

    RationalFunction derivative(Var v) const;
    RationalFunction substitute(Var v, const RationalFunction& value) const;

    bool operator==(const RationalFunction& o) const;
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    void normalize();
    Poly p_, q_, d_;
    ExtPtr ext_;
};

using RF = RationalFunction;

/// The extension shared by a and b, or null; throws when they differ.
ExtPtr common_extension(const ExtPtr& a, const ExtPtr& b);

}  // namespace gmdet
