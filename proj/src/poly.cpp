#include "gmdet/poly.hpp"

#include <algorithm>
#include <sstream>

#include "gmdet/errors.hpp"

namespace gmdet {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::of(Var v, std::uint32_t e) {
    Monomial m;
    if (e == 0) return m;
    m.e_.assign(v + 1, 0);
    m.e_[v] = e;
    m.deg_ = e;
    return m;
}

void Monomial::trim() {
    while (!e_.empty() && e_.back() == 0) e_.pop_back();
}

bool Monomial::divides(const Monomial& other) const {
    if (e_.size() > other.e_.size()) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > other.e_[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.e_.resize(std::max(e_.size(), o.e_.size()), 0);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += e_[i];
    for (std::size_t i = 0; i < o.e_.size(); ++i) r.e_[i] += o.e_[i];
    r.deg_ = deg_ + o.deg_;
    return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < o.e_.size(); ++i) r.e_[i] -= o.e_[i];
    r.deg_ = deg_ - o.deg_;
    r.trim();
    return r;
}

Monomial Monomial::with_exponent(Var v, std::uint32_t e) const {
    Monomial r = *this;
    if (v >= r.e_.size()) r.e_.resize(v + 1, 0);
    r.deg_ = r.deg_ - r.e_[v] + e;
    r.e_[v] = e;
    r.trim();
    return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t n = std::min(a.e_.size(), b.e_.size());
    r.e_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.e_[i] = std::min(a.e_[i], b.e_[i]);
        r.deg_ += r.e_[i];
    }
    r.trim();
    return r;
}

int compare(const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    std::size_t n = std::max(a.width(), b.width());
    for (std::size_t i = 0; i < n; ++i) {
        auto x = a.exponent(static_cast<Var>(i));
        auto y = b.exponent(static_cast<Var>(i));
        if (x != y) return x < y ? -1 : 1;
    }
    return 0;
}

// -------------------------------------------------------------------- Poly

Poly::Poly(long c) {
    if (c != 0) terms_.push_back({Monomial{}, Rational(c)});
}

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::var(Var v, std::uint32_t e) { return monomial(Monomial::of(v, e), 1); }

Poly Poly::monomial(const Monomial& m, const Rational& c) {
    Poly p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    p.normalize_terms();
    return p;
}

void Poly::normalize_terms() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && out.back().mono == t.mono) {
            out.back().coeff += t.coeff;
        } else {
            if (!out.empty() && out.back().coeff == 0) out.pop_back();
            out.push_back(std::move(t));
        }
    }
    if (!out.empty() && out.back().coeff == 0) out.pop_back();
    terms_ = std::move(out);
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

Rational Poly::constant_value() const {
    if (!is_constant()) throw Error(ErrorKind::Precondition, "polynomial is not constant");
    return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

Rational Poly::constant_term() const {
    if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coeff;
    return 0;
}

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

std::uint32_t Poly::degree(Var v) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
    return d;
}

std::uint32_t Poly::min_degree(Var v) const {
    if (terms_.empty()) return 0;
    std::uint32_t d = UINT32_MAX;
    for (const auto& t : terms_) d = std::min(d, t.mono.exponent(v));
    return d;
}

std::vector<Var> Poly::variables() const {
    std::vector<bool> seen;
    for (const auto& t : terms_) {
        if (seen.size() < t.mono.width()) seen.resize(t.mono.width(), false);
        t.mono.for_each([&](Var v, std::uint32_t) { seen[v] = true; });
    }
    std::vector<Var> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i]) out.push_back(static_cast<Var>(i));
    return out;
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return {};
    Monomial m = terms_.front().mono;
    for (const auto& t : terms_) m = Monomial::gcd(m, t.mono);
    return m;
}

std::vector<Poly> Poly::coeffs(Var v) const {
    std::vector<std::vector<Term>> buckets(degree(v) + 1);
    for (const auto& t : terms_) {
        auto e = t.mono.exponent(v);
        buckets[e].push_back({t.mono.with_exponent(v, 0), t.coeff});
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) {
        Poly p;
        p.terms_ = std::move(b);  // relative order preserved by removing a common variable? not in general
        p.normalize_terms();
        out.push_back(std::move(p));
    }
    return out;
}

Poly Poly::from_coeffs(Var v, const std::vector<Poly>& cs) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        Monomial xk = Monomial::of(v, static_cast<std::uint32_t>(k));
        for (const auto& t : cs[k].terms_) terms.push_back({t.mono * xk, t.coeff});
    }
    return from_terms(std::move(terms));
}

Poly Poly::derivative(Var v) const {
    std::vector<Term> terms;
    for (const auto& t : terms_) {
        auto e = t.mono.exponent(v);
        if (e == 0) continue;
        terms.push_back({t.mono.with_exponent(v, e - 1), t.coeff * e});
    }
    return from_terms(std::move(terms));
}

Poly Poly::substitute(Var v, const Poly& value) const {
    auto cs = coeffs(v);
    Poly acc;
    for (std::size_t k = cs.size(); k-- > 0;) {
        acc = acc * value;
        acc += cs[k];
    }
    return acc;
}

Poly Poly::monic() const {
    if (terms_.empty()) return *this;
    Poly r = *this;
    Rational inv = 1 / lc();
    r *= inv;
    return r;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

namespace {

std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c;
        if (i == a.size()) c = -1;
        else if (j == b.size()) c = 1;
        else c = compare(a[i].mono, b[j].mono);
        if (c > 0) {
            out.push_back(a[i++]);
        } else if (c < 0) {
            out.push_back(b[j++]);
            if (subtract) out.back().coeff = -out.back().coeff;
        } else {
            Rational s = subtract ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
            if (s != 0) out.push_back({a[i].mono, s});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
    terms_ = merge(terms_, o.terms_, false);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    terms_ = merge(terms_, o.terms_, true);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (b.terms_.size() == 1 && b.terms_[0].mono.is_one()) return a * b.terms_[0].coeff;
    if (a.terms_.size() == 1 && a.terms_[0].mono.is_one()) return b * a.terms_[0].coeff;
    std::vector<Term> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) terms.push_back({x.mono * y.mono, x.coeff * y.coeff});
    return Poly::from_terms(std::move(terms));
}

Poly& Poly::operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
}

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coeff *= c;
    return *this;
}

Poly Poly::pow(unsigned e) const {
    Poly result(1), base = *this;
    while (e) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

Poly Poly::mul_monomial(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.mono = t.mono * m;
    return r;
}

Poly Poly::div_monomial(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.mono = t.mono / m;
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].mono == o.terms_[i].mono) || terms_[i].coeff != o.terms_[i].coeff) return false;
    return true;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coeff;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        bool wrote = false;
        if (c != 1 || t.mono.is_one()) {
            os << c.get_str();
            wrote = true;
        }
        t.mono.for_each([&](Var v, std::uint32_t e) {
            if (wrote) os << "*";
            os << var_name(v);
            if (e != 1) os << "^" << e;
            wrote = true;
        });
    }
    return os.str();
}

std::size_t Poly::hash() const {
    std::size_t h = terms_.size();
    for (const auto& t : terms_) {
        h = h * 1000003u ^ t.mono.degree();
        h = h * 1000003u ^ std::hash<std::string>{}(t.coeff.get_str());
    }
    return h;
}

// ---------------------------------------------------------------- division

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error(ErrorKind::MalformedInput, "division by zero polynomial");
    const Term& lt = b.leading();
    Rational inv = 1 / lt.coeff;
    std::vector<Term> q, r;
    Poly p = a;
    while (!p.is_zero()) {
        const Term& t = p.leading();
        if (lt.mono.divides(t.mono)) {
            Monomial m = t.mono / lt.mono;
            Rational c = t.coeff * inv;
            q.push_back({m, c});
            Poly sub = b.mul_monomial(m);
            sub *= c;
            p -= sub;
        } else {
            r.push_back(t);
            Poly head = Poly::monomial(t.mono, t.coeff);
            p -= head;
        }
    }
    return {Poly::from_terms(std::move(q)), Poly::from_terms(std::move(r))};
}

bool try_divide(const Poly& a, const Poly& b, Poly& quotient) {
    if (b.is_zero()) throw Error(ErrorKind::MalformedInput, "division by zero polynomial");
    if (a.is_zero()) {
        quotient = Poly();
        return true;
    }
    const Term& lt = b.leading();
    Rational inv = 1 / lt.coeff;
    std::vector<Term> q;
    Poly p = a;
    while (!p.is_zero()) {
        const Term& t = p.leading();
        if (!lt.mono.divides(t.mono)) return false;
        Monomial m = t.mono / lt.mono;
        Rational c = t.coeff * inv;
        q.push_back({m, c});
        Poly sub = b.mul_monomial(m);
        sub *= c;
        p -= sub;
    }
    quotient = Poly::from_terms(std::move(q));
    return true;
}

Poly divide_exact(const Poly& a, const Poly& b) {
    Poly q;
    if (!try_divide(a, b, q)) throw Error(ErrorKind::Precondition, "inexact polynomial division");
    return q;
}

// --------------------------------------------------------------------- gcd

namespace {

using Coeffs = std::vector<Poly>;

void trim(Coeffs& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Poly content_of(const Coeffs& cs) {
    Poly g;
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_constant()) return Poly(1);
    }
    return g;
}

void divide_all(Coeffs& cs, const Poly& d) {
    if (d.is_constant() && d.constant_value() == 1) return;
    for (auto& c : cs)
        if (!c.is_zero()) c = divide_exact(c, d);
}

// Sparse pseudo-remainder; the result differs from prem by a power of lc(b),
// which the caller removes by taking primitive parts.
Coeffs pseudo_rem(Coeffs a, const Coeffs& b) {
    const Poly& lb = b.back();
    std::size_t db = b.size() - 1;
    while (!a.empty() && a.size() - 1 >= db) {
        std::size_t shift = a.size() - 1 - db;
        Poly la = a.back();
        for (auto& c : a) c *= lb;
        for (std::size_t k = 0; k <= db; ++k) a[k + shift] -= la * b[k];
        trim(a);
    }
    return a;
}

bool all_constant(const Coeffs& cs) {
    return std::all_of(cs.begin(), cs.end(), [](const Poly& p) { return p.is_constant(); });
}

// Euclid over Q for univariate coefficient vectors.
Coeffs field_gcd(Coeffs a, Coeffs b) {
    auto rem = [](Coeffs x, const Coeffs& y) {
        Rational inv = 1 / y.back().constant_value();
        std::size_t dy = y.size() - 1;
        while (!x.empty() && x.size() - 1 >= dy) {
            std::size_t shift = x.size() - 1 - dy;
            Rational f = x.back().constant_value() * inv;
            for (std::size_t k = 0; k <= dy; ++k) x[k + shift] -= y[k] * f;
            trim(x);
        }
        return x;
    };
    while (!b.empty()) {
        Coeffs r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

}  // namespace

Poly content(const Poly& p, Var v) { return content_of(p.coeffs(v)); }

Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly(1);
    if (a == b) return a.monic();

    if (a.is_monomial() || b.is_monomial()) {
        Monomial m = Monomial::gcd(a.monomial_content(), b.monomial_content());
        return Poly::monomial(m, 1);
    }

    // Pull out the common monomial factor first.
    Monomial ma = a.monomial_content(), mb = b.monomial_content();
    Monomial mg = Monomial::gcd(ma, mb);
    if (!ma.is_one() || !mb.is_one()) {
        Poly g = gcd(a.div_monomial(ma), b.div_monomial(mb));
        return g.mul_monomial(mg);
    }

    auto va = a.variables(), vb = b.variables();
    for (Var v : va)
        if (!b.contains(v)) return gcd(content(a, v), b);
    for (Var v : vb)
        if (!a.contains(v)) return gcd(a, content(b, v));

    // Same variable set: main variable = the one of smallest combined degree.
    Var x = va.front();
    std::uint32_t best = UINT32_MAX;
    for (Var v : va) {
        auto d = std::max(a.degree(v), b.degree(v));
        if (d < best) {
            best = d;
            x = v;
        }
    }

    Coeffs A = a.coeffs(x), B = b.coeffs(x);
    if (all_constant(A) && all_constant(B)) {
        Coeffs g = field_gcd(A, B);
        return Poly::from_coeffs(x, g).monic();
    }

    Poly ca = content_of(A), cb = content_of(B);
    divide_all(A, ca);
    divide_all(B, cb);
    Poly gc = gcd(ca, cb);
    if (A.size() < B.size()) std::swap(A, B);
    while (true) {
        Coeffs R = pseudo_rem(A, B);
        if (R.empty()) break;
        if (R.size() == 1) {
            B = Coeffs{Poly(1)};
            break;
        }
        Poly cr = content_of(R);
        divide_all(R, cr);
        A = std::move(B);
        B = std::move(R);
    }
    Poly g = Poly::from_coeffs(x, B) * gc;
    return g.monic();
}

}  // namespace gmdet
