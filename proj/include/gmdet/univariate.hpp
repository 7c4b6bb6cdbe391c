#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gmdet/ratfunc.hpp"

namespace gmdet {

/// Dense univariate polynomial over K; c[k] multiplies x^k. Trimmed.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<RF> coeffs);
    static UPoly constant(const RF& c) { return UPoly({c}); }
    static UPoly x() { return UPoly({RF(0), RF(1)}); }
    /// Reads a K[x] element; throws if f is not polynomial in x.
    static UPoly from_rf(const RF& f, Var x);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const RF& lc() const { return c_.back(); }
    RF coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : RF(); }
    const std::vector<RF>& coeffs() const { return c_; }
    /// Index of the lowest nonzero coefficient (0 for the zero polynomial).
    int valuation() const;

    UPoly operator-() const;
    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const RF& c);
    bool operator==(const UPoly& o) const { return c_ == o.c_; }

    UPoly derivative() const;
    UPoly monic() const;
    RF eval(const RF& v) const;
    /// p(x + c).
    UPoly shift(const RF& c) const;
    /// x^n p(1/x) for n >= degree.
    UPoly reversed(int n) const;
    UPoly mul_xpow(int k) const;
    UPoly div_xpow(int k) const;  // drops the low coefficients

    RF to_rf(Var x) const;
    std::string to_string(Var x) const { return to_rf(x).to_string(); }

private:
    void trim();
    std::vector<RF> c_;
};

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly gcd(UPoly a, UPoly b);  // monic, gcd(0,0) = 0
/// a*s + b*t = g = gcd(a, b) (monic).
void extended_gcd(const UPoly& a, const UPoly& b, UPoly& g, UPoly& s, UPoly& t);
/// Inverse of a modulo m; throws domain error when not coprime.
UPoly inverse_mod(const UPoly& a, const UPoly& m);

/// Numerator and denominator of f as polynomials in x over K (x-free
/// extension square required).
std::pair<UPoly, UPoly> split_rf(const RF& f, Var x);

/// A point of P^1 over K.
struct Point {
    bool infinite = false;
    RF value;

    static Point at(const RF& v) { return {false, v}; }
    static Point infinity() { return {true, RF()}; }
    bool operator==(const Point& o) const { return infinite == o.infinite && (infinite || value == o.value); }
    std::string to_string() const { return infinite ? "infinity" : value.to_string(); }
};

/// Truncated Laurent series sum_k c_k t^k, k = valuation..valuation+size-1,
/// in the local coordinate t = x - value or t = 1/x at infinity.
struct Laurent {
    int valuation = 0;
    std::vector<RF> c;

    RF coeff(int k) const;
    int last() const { return valuation + static_cast<int>(c.size()) - 1; }
    friend Laurent operator*(const Laurent& a, const Laurent& b);
};

/// Expansion of f at pt with all coefficients up to t^order.
Laurent laurent_expand(const RF& f, Var x, const Point& pt, int order);
/// Order of f at pt (positive for zeros, negative for poles); f != 0.
int order_at(const RF& f, Var x, const Point& pt);

/// Sum of h over the roots of G: the trace of multiplication by h on
/// K[x]/(G). G must be squarefree and coprime to the denominator of h.
RF resultant_trace(const UPoly& G, const RF& h, Var x);

}  // namespace gmdet
