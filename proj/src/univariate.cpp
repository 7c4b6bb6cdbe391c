#include "gmdet/univariate.hpp"

#include <algorithm>

#include "gmdet/errors.hpp"

namespace gmdet {

UPoly::UPoly(std::vector<RF> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UPoly UPoly::from_rf(const RF& f, Var x) {
    if (f.d().contains(x)) throw Error(ErrorKind::Precondition, "not polynomial in " + var_name(x) + ": " + f.to_string());
    if (f.ext() && f.ext()->square.contains(x))
        throw Error(ErrorKind::Precondition, "extension square depends on " + var_name(x));
    auto ps = f.p().coeffs(x);
    std::vector<Poly> qs = f.q().is_zero() ? std::vector<Poly>{} : f.q().coeffs(x);
    std::vector<RF> c(std::max(ps.size(), qs.size()));
    for (std::size_t k = 0; k < c.size(); ++k)
        c[k] = RF::make(k < ps.size() ? ps[k] : Poly(), k < qs.size() ? qs[k] : Poly(), f.d(), f.ext());
    return UPoly(std::move(c));
}

std::pair<UPoly, UPoly> split_rf(const RF& f, Var x) {
    RF num = RF::make(f.p(), f.q(), Poly(1), f.ext());
    std::vector<RF> den;
    for (const auto& c : f.d().coeffs(x)) den.emplace_back(c);
    return {UPoly::from_rf(num, x), UPoly(std::move(den))};
}

int UPoly::valuation() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (!c_[k].is_zero()) return static_cast<int>(k);
    return 0;
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<RF> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k < a.c_.size()) c[k] += a.c_[k];
        if (k < b.c_.size()) c[k] += b.c_[k];
    }
    return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<RF> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            if (!b.c_[j].is_zero()) c[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const RF& s) {
    std::vector<RF> c = a.c_;
    for (auto& x : c) x *= s;
    return UPoly(std::move(c));
}

UPoly UPoly::derivative() const {
    std::vector<RF> c;
    for (std::size_t k = 1; k < c_.size(); ++k) c.push_back(c_[k] * RF(static_cast<long>(k)));
    return UPoly(std::move(c));
}

UPoly UPoly::monic() const {
    if (is_zero()) return *this;
    return *this * lc().inverse();
}

RF UPoly::eval(const RF& v) const {
    RF acc;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * v + c_[k];
    return acc;
}

UPoly UPoly::shift(const RF& c) const {
    if (c.is_zero()) return *this;
    UPoly lin({c, RF(1)});
    UPoly acc;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * lin + UPoly::constant(c_[k]);
    return acc;
}

UPoly UPoly::reversed(int n) const {
    std::vector<RF> c(static_cast<std::size_t>(n) + 1);
    for (std::size_t k = 0; k < c_.size(); ++k) c[n - k] = c_[k];
    return UPoly(std::move(c));
}

UPoly UPoly::mul_xpow(int k) const {
    if (is_zero()) return *this;
    std::vector<RF> c(static_cast<std::size_t>(k));
    c.insert(c.end(), c_.begin(), c_.end());
    return UPoly(std::move(c));
}

UPoly UPoly::div_xpow(int k) const {
    if (k >= static_cast<int>(c_.size())) return {};
    return UPoly(std::vector<RF>(c_.begin() + k, c_.end()));
}

RF UPoly::to_rf(Var x) const { return eval(RF::var(x)); }

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw Error(ErrorKind::Domain, "polynomial division by zero");
    std::vector<RF> r = a.coeffs();
    int db = b.degree();
    if (a.degree() < db) return {UPoly(), a};
    std::vector<RF> q(static_cast<std::size_t>(a.degree() - db + 1));
    RF inv = b.lc().inverse();
    for (int k = a.degree(); k >= db; --k) {
        if (r[k].is_zero()) continue;
        RF f = r[k] * inv;
        q[k - db] = f;
        for (int j = 0; j <= db; ++j) r[k - db + j] -= f * b.coeff(j);
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

void extended_gcd(const UPoly& a, const UPoly& b, UPoly& g, UPoly& s, UPoly& t) {
    UPoly r0 = a, r1 = b, s0 = UPoly::constant(1), s1, t0, t1 = UPoly::constant(1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        UPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) {
        g = s = t = UPoly();
        return;
    }
    RF inv = r0.lc().inverse();
    g = r0 * inv;
    s = s0 * inv;
    t = t0 * inv;
}

UPoly inverse_mod(const UPoly& a, const UPoly& m) {
    UPoly g, s, t;
    extended_gcd(a, m, g, s, t);
    if (g.degree() != 0) throw Error(ErrorKind::Domain, "not invertible modulo the given polynomial");
    return divmod(s, m).second;
}

RF Laurent::coeff(int k) const {
    if (k < valuation) return RF();
    if (k > last()) throw Error(ErrorKind::Precondition, "Laurent coefficient beyond truncation order");
    return c[k - valuation];
}

Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    r.valuation = a.valuation + b.valuation;
    std::size_t n = std::min(a.c.size(), b.c.size());
    r.c.assign(n, RF());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

namespace {

// Power series a/b with b(0) != 0, n terms.
std::vector<RF> series_divide(const UPoly& a, const UPoly& b, int n) {
    std::vector<RF> c(static_cast<std::size_t>(std::max(n, 0)));
    if (n <= 0) return c;
    RF inv = b.coeff(0).inverse();
    for (int k = 0; k < n; ++k) {
        RF acc = a.coeff(k);
        for (int j = 1; j <= std::min(k, b.degree()); ++j) acc -= b.coeff(j) * c[k - j];
        c[k] = acc * inv;
    }
    return c;
}

struct LocalPair {
    UPoly num, den;  // both with nonzero constant term
    int valuation;
};

LocalPair localize(const RF& f, Var x, const Point& pt) {
    if (!pt.infinite && pt.value.contains(x))
        throw Error(ErrorKind::UnsupportedPoint, "point depends on the expansion variable");
    auto [N, D] = split_rf(f, x);
    if (N.is_zero()) throw Error(ErrorKind::Precondition, "expansion of zero has no valuation");
    if (pt.infinite) return {N.reversed(N.degree()), D.reversed(D.degree()), D.degree() - N.degree()};
    UPoly n = N.shift(pt.value), d = D.shift(pt.value);
    int vn = n.valuation(), vd = d.valuation();
    return {n.div_xpow(vn), d.div_xpow(vd), vn - vd};
}

}  // namespace

Laurent laurent_expand(const RF& f, Var x, const Point& pt, int order) {
    Laurent out;
    if (f.is_zero()) {
        out.valuation = order + 1;
        return out;
    }
    LocalPair lp = localize(f, x, pt);
    out.valuation = lp.valuation;
    out.c = series_divide(lp.num, lp.den, order - lp.valuation + 1);
    if (out.c.empty()) out.valuation = order + 1;
    return out;
}

int order_at(const RF& f, Var x, const Point& pt) { return localize(f, x, pt).valuation; }

RF resultant_trace(const UPoly& G, const RF& h, Var x) {
    if (G.degree() < 1) return RF();
    if (gcd(G, G.derivative()).degree() > 0)
        throw Error(ErrorKind::DegenerateDivisor, "divisor polynomial is not squarefree: " + G.to_string(x));
    UPoly g = G.monic();
    auto [N, D] = split_rf(h, x);
    if (gcd(D, g).degree() > 0) throw Error(ErrorKind::PoleOnDivisor, "function has a pole on the divisor");
    UPoly r = divmod(N * inverse_mod(D, g), g).second;

    // Tr(x^k) on K[x]/(g) are the power sums of the roots (Newton).
    int n = g.degree();
    std::vector<RF> p(static_cast<std::size_t>(n));
    p[0] = RF(static_cast<long>(n));
    for (int k = 1; k < n; ++k) {
        RF acc = g.coeff(n - k) * RF(static_cast<long>(k));
        for (int i = 1; i < k; ++i) acc += g.coeff(n - i) * p[k - i];
        p[k] = -acc;
    }
    RF tr;
    for (int k = 0; k <= r.degree(); ++k) tr += r.coeff(k) * p[k];
    return tr;
}

}  // namespace gmdet
