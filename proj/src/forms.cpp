#include "gmdet/forms.hpp"

#include <algorithm>

#include "gmdet/errors.hpp"

namespace gmdet {

// ---------------------------------------------------------------- BaseForm

BaseForm::BaseForm(std::map<Var, RF> coeffs) : c(std::move(coeffs)) {
    for (auto it = c.begin(); it != c.end();) {
        if (it->second.is_zero()) it = c.erase(it);
        else ++it;
    }
}

BaseForm BaseForm::dlog(const RF& f, const std::vector<Var>& vars) {
    RF inv = f.inverse();
    std::map<Var, RF> m;
    for (Var v : vars) m[v] = f.derivative(v) * inv;
    return BaseForm(std::move(m));
}

RF BaseForm::coeff(Var v) const {
    auto it = c.find(v);
    return it == c.end() ? RF() : it->second;
}

BaseForm& BaseForm::operator+=(const BaseForm& o) {
    for (const auto& [v, x] : o.c) {
        RF s = coeff(v) + x;
        if (s.is_zero()) c.erase(v);
        else c[v] = s;
    }
    return *this;
}

BaseForm& BaseForm::operator-=(const BaseForm& o) { return *this += -o; }

BaseForm operator*(const RF& s, BaseForm a) {
    if (s.is_zero()) return {};
    for (auto& [v, x] : a.c) x *= s;
    return a;
}

BaseForm BaseForm::substitute(Var v, const RF& value) const {
    std::map<Var, RF> m;
    for (const auto& [k, x] : c) m[k] = x.substitute(v, value);
    return BaseForm(std::move(m));
}

bool BaseForm::is_closed(const std::vector<Var>& vars) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (coeff(vars[j]).derivative(vars[i]) != coeff(vars[i]).derivative(vars[j])) return false;
    return true;
}

namespace {

std::string term_string(const RF& c, const std::string& atom, bool first) {
    std::string s = c.to_string();
    bool neg = false;
    if (c.is_constant()) {
        neg = c.constant_value() < 0;
        Rational a = neg ? Rational(-c.constant_value()) : c.constant_value();
        s = a == 1 ? atom : a.get_str() + "*" + atom;
    } else {
        if (s.find(" + ") != std::string::npos || s.find(" - ") != std::string::npos) s = "(" + s + ")";
        else if (s[0] == '-') {
            neg = true;
            s = s.substr(1);
        }
        s += "*" + atom;
    }
    if (first) return neg ? "-" + s : s;
    return (neg ? " - " : " + ") + s;
}

std::string form_string(const std::vector<std::pair<Var, RF>>& terms) {
    std::string out;
    for (const auto& [v, x] : terms) {
        if (x.is_zero()) continue;
        out += term_string(x, "d" + var_name(v), out.empty());
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::string BaseForm::to_string() const {
    std::vector<std::pair<Var, RF>> terms(c.begin(), c.end());
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return var_name(a.first) < var_name(b.first); });
    return form_string(terms);
}

// ----------------------------------------------------------- AbsoluteForm1

AbsoluteForm1 AbsoluteForm1::from_entries(const std::vector<std::vector<std::map<Var, RF>>>& entries, Var fiber) {
    std::size_t r = entries.size();
    AbsoluteForm1 a(r);
    for (std::size_t i = 0; i < r; ++i) {
        if (entries[i].size() != r) throw Error(ErrorKind::ShapeMismatch, "connection matrix is not square");
        for (std::size_t j = 0; j < r; ++j)
            for (const auto& [v, x] : entries[i][j]) {
                if (v == fiber) {
                    a.fiber(i, j) += x;
                } else {
                    auto it = a.base.find(v);
                    if (it == a.base.end()) it = a.base.emplace(v, RMatrix(r, r)).first;
                    it->second(i, j) += x;
                }
            }
    }
    for (auto it = a.base.begin(); it != a.base.end();) {
        if (it->second.is_zero()) it = a.base.erase(it);
        else ++it;
    }
    return a;
}

AbsoluteForm1 AbsoluteForm1::scalar(const RF& dz_coeff, const BaseForm& base_part) {
    AbsoluteForm1 a(1);
    a.fiber(0, 0) = dz_coeff;
    for (const auto& [v, x] : base_part.c) {
        RMatrix m(1, 1);
        m(0, 0) = x;
        a.set_base(v, m);
    }
    return a;
}

RMatrix AbsoluteForm1::base_part(Var v) const {
    auto it = base.find(v);
    return it == base.end() ? RMatrix(rank, rank) : it->second;
}

void AbsoluteForm1::set_base(Var v, RMatrix m) {
    if (m.rows() != rank || m.cols() != rank) throw Error(ErrorKind::ShapeMismatch, "base part has wrong shape");
    if (m.is_zero()) base.erase(v);
    else base[v] = std::move(m);
}

bool AbsoluteForm1::is_zero() const { return fiber.is_zero() && base.empty(); }

AbsoluteForm1& AbsoluteForm1::operator+=(const AbsoluteForm1& o) {
    if (rank != o.rank) throw Error(ErrorKind::ShapeMismatch, "form rank mismatch");
    fiber += o.fiber;
    for (const auto& [v, m] : o.base) set_base(v, base_part(v) + m);
    return *this;
}

AbsoluteForm1& AbsoluteForm1::operator-=(const AbsoluteForm1& o) {
    if (rank != o.rank) throw Error(ErrorKind::ShapeMismatch, "form rank mismatch");
    fiber -= o.fiber;
    for (const auto& [v, m] : o.base) set_base(v, base_part(v) - m);
    return *this;
}

AbsoluteForm1 operator*(const RMatrix& m, const AbsoluteForm1& a) {
    AbsoluteForm1 r(m.rows());
    r.fiber = m * a.fiber;
    for (const auto& [v, x] : a.base) r.set_base(v, m * x);
    return r;
}

AbsoluteForm1 operator*(const AbsoluteForm1& a, const RMatrix& m) {
    AbsoluteForm1 r(m.cols());
    r.fiber = a.fiber * m;
    for (const auto& [v, x] : a.base) r.set_base(v, x * m);
    return r;
}

bool AbsoluteForm1::operator==(const AbsoluteForm1& o) const {
    return rank == o.rank && fiber == o.fiber && base == o.base;
}

AbsoluteForm1 AbsoluteForm1::trace() const {
    return scalar(fiber.trace(), [&] {
        std::map<Var, RF> m;
        for (const auto& [v, x] : base) m[v] = x.trace();
        return BaseForm(std::move(m));
    }());
}

RF AbsoluteForm1::scalar_fiber() const {
    if (rank != 1) throw Error(ErrorKind::ShapeMismatch, "expected a scalar form");
    return fiber(0, 0);
}

BaseForm AbsoluteForm1::scalar_base() const {
    if (rank != 1) throw Error(ErrorKind::ShapeMismatch, "expected a scalar form");
    std::map<Var, RF> m;
    for (const auto& [v, x] : base) m[v] = x(0, 0);
    return BaseForm(std::move(m));
}

std::string AbsoluteForm1::entry_string(std::size_t i, std::size_t j, Var fiber_var) const {
    std::vector<std::pair<Var, RF>> terms{{fiber_var, fiber(i, j)}};
    std::vector<std::pair<Var, RF>> rest;
    for (const auto& [v, m] : base) rest.emplace_back(v, m(i, j));
    std::sort(rest.begin(), rest.end(),
              [](const auto& a, const auto& b) { return var_name(a.first) < var_name(b.first); });
    terms.insert(terms.end(), rest.begin(), rest.end());
    return form_string(terms);
}

std::string AbsoluteForm1::to_string(Var fiber_var) const {
    std::string s = "[";
    for (std::size_t i = 0; i < rank; ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < rank; ++j) s += (j ? ", " : "") + entry_string(i, j, fiber_var);
        s += "]";
    }
    return s + "]";
}

// ----------------------------------------------------------- AbsoluteForm2

bool AbsoluteForm2::is_zero() const {
    for (const auto& [v, m] : dz_base)
        if (!m.is_zero()) return false;
    for (const auto& [v, m] : base_base)
        if (!m.is_zero()) return false;
    return true;
}

void AbsoluteForm2::add_dz(Var v, const RMatrix& m) {
    auto it = dz_base.find(v);
    if (it == dz_base.end()) dz_base.emplace(v, m);
    else it->second += m;
}

void AbsoluteForm2::add_pair(Var a, Var b, const RMatrix& m) {
    if (a == b) return;
    if (a < b) {
        auto it = base_base.find({a, b});
        if (it == base_base.end()) base_base.emplace(std::make_pair(a, b), m);
        else it->second += m;
    } else {
        add_pair(b, a, -m);
    }
}

AbsoluteForm2& AbsoluteForm2::operator+=(const AbsoluteForm2& o) {
    if (rank != o.rank) throw Error(ErrorKind::ShapeMismatch, "form rank mismatch");
    for (const auto& [v, m] : o.dz_base) add_dz(v, m);
    for (const auto& [p, m] : o.base_base) add_pair(p.first, p.second, m);
    return *this;
}

// --------------------------------------------------------------- calculus

AbsoluteForm1 exterior_d_scalar(const RF& f, const ScalarTower& tower) {
    std::map<Var, RF> m;
    for (Var v : tower.base_vars) m[v] = f.derivative(v);
    return AbsoluteForm1::scalar(f.derivative(tower.fiber), BaseForm(std::move(m)));
}

AbsoluteForm1 exterior_d(const RMatrix& mat, const ScalarTower& tower) {
    AbsoluteForm1 a(mat.rows());
    a.fiber = mat.map([&](const RF& x) { return x.derivative(tower.fiber); });
    for (Var v : tower.base_vars) a.set_base(v, mat.map([&](const RF& x) { return x.derivative(v); }));
    return a;
}

AbsoluteForm2 exterior_d(const AbsoluteForm1& a, const ScalarTower& tower) {
    AbsoluteForm2 out;
    out.rank = a.rank;
    Var z = tower.fiber;
    for (Var v : tower.base_vars) {
        RMatrix dF = a.fiber.map([&](const RF& x) { return x.derivative(v); });
        RMatrix dC = a.base_part(v).map([&](const RF& x) { return x.derivative(z); });
        out.add_dz(v, dC - dF);
    }
    for (std::size_t i = 0; i < tower.base_vars.size(); ++i)
        for (std::size_t j = i + 1; j < tower.base_vars.size(); ++j) {
            Var vi = tower.base_vars[i], vj = tower.base_vars[j];
            RMatrix c = a.base_part(vj).map([&](const RF& x) { return x.derivative(vi); }) -
                        a.base_part(vi).map([&](const RF& x) { return x.derivative(vj); });
            out.add_pair(vi, vj, c);
        }
    return out;
}

AbsoluteForm2 wedge(const AbsoluteForm1& a, const AbsoluteForm1& b) {
    if (a.rank != b.rank) throw Error(ErrorKind::ShapeMismatch, "wedge of forms with different ranks");
    AbsoluteForm2 out;
    out.rank = a.rank;
    std::vector<Var> keys;
    for (const auto& [v, m] : a.base) keys.push_back(v);
    for (const auto& [v, m] : b.base) keys.push_back(v);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (Var v : keys) out.add_dz(v, a.fiber * b.base_part(v) - a.base_part(v) * b.fiber);
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j) {
            RMatrix c = a.base_part(keys[i]) * b.base_part(keys[j]) - a.base_part(keys[j]) * b.base_part(keys[i]);
            out.add_pair(keys[i], keys[j], c);
        }
    return out;
}

RF residue(const RF& f, Var z, const Point& pt) {
    if (f.is_zero()) return RF();
    if (pt.infinite) return -laurent_expand(f, z, pt, 1).coeff(1);
    return laurent_expand(f, z, pt, -1).coeff(-1);
}

std::map<Var, RMatrix> residue(const AbsoluteForm2& omega, Var z, const Point& pt) {
    std::map<Var, RMatrix> out;
    for (const auto& [v, m] : omega.dz_base) {
        RMatrix r = m.map([&](const RF& x) { return residue(x, z, pt); });
        if (!r.is_zero()) out.emplace(v, std::move(r));
    }
    return out;
}

// ------------------------------------------------------------ dlog_reduce

std::string BaseFormClass::to_string() const { return representative.to_string(); }

std::string BaseFormClass::log_part_string() const {
    std::vector<std::pair<std::string, std::string>> items;
    for (const auto& [f, c] : log_part) items.emplace_back(f.to_string(), c.get_str());
    std::sort(items.begin(), items.end());
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i)
        s += (i ? ", (" : "(") + items[i].first + ", " + items[i].second + ")";
    return s + "]";
}

namespace {

std::vector<Rational> dense(const Poly& p, Var x) {
    std::vector<Rational> c;
    for (const auto& k : p.coeffs(x)) c.push_back(k.constant_value());
    return c;
}

Rational eval_dense(const std::vector<Rational>& c, const Rational& v) {
    Rational acc = 0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * v + c[k];
    return acc;
}

// Positive divisors of n, or nothing when n is too large to factor by trial
// division.
bool divisors(mpz_class n, std::vector<mpz_class>& out) {
    n = abs(n);
    if (n == 0 || n > mpz_class("1000000000000")) return false;
    std::vector<std::pair<mpz_class, unsigned>> pf;
    for (mpz_class d = 2; d * d <= n; ++d) {
        unsigned e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        if (e) pf.emplace_back(d, e);
    }
    if (n > 1) pf.emplace_back(n, 1);
    out = {1};
    for (const auto& [p, e] : pf) {
        std::size_t sz = out.size();
        mpz_class pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] * pk);
        }
    }
    return true;
}

// Splits off the rational roots of a squarefree univariate polynomial.
void split_rational_roots(Poly block, Var x, std::vector<Poly>& out) {
    while (block.degree(x) > 0) {
        if (block.min_degree(x) > 0) {
            out.push_back(Poly::var(x));
            block = divide_exact(block, Poly::var(x));
            continue;
        }
        std::vector<Rational> c = dense(block, x);
        mpz_class l = 1;
        for (const auto& q : c) l = lcm(l, mpz_class(q.get_den()));
        std::vector<mpz_class> ic;
        for (const auto& q : c) ic.emplace_back(mpz_class(q * l));
        if (block.degree(x) == 1) {
            out.push_back(block.monic());
            return;
        }
        std::vector<mpz_class> ps, qs;
        bool found = false;
        if (divisors(ic.front(), ps) && divisors(ic.back(), qs)) {
            for (const auto& p : ps) {
                for (const auto& q : qs) {
                    for (int sgn : {1, -1}) {
                        Rational r(p * sgn, q);
                        r.canonicalize();
                        if (eval_dense(c, r) == 0) {
                            Poly lin = Poly::var(x) - Poly(r);
                            out.push_back(lin);
                            block = divide_exact(block, lin);
                            found = true;
                            break;
                        }
                    }
                    if (found) break;
                }
                if (found) break;
            }
        }
        if (!found) {
            out.push_back(block.monic());
            return;
        }
    }
}

}  // namespace

Poly univariate_part(const Poly& p, Var x) {
    std::map<std::string, std::vector<Term>> groups;
    std::vector<std::string> order;
    for (const auto& t : p.terms()) {
        Monomial rest = t.mono.with_exponent(x, 0);
        std::string key;
        rest.for_each([&](Var v, std::uint32_t e) { key += std::to_string(v) + "^" + std::to_string(e) + ","; });
        groups[key].push_back({Monomial::of(x, t.mono.exponent(x)), t.coeff});
    }
    Poly g;
    for (auto& [k, terms] : groups) {
        g = gcd(g, Poly::from_terms(terms));
        if (g.is_constant()) return Poly(1);
    }
    return g;
}

namespace {

bool try_divide_all(Poly& p, const Poly& f) {
    bool any = false;
    Poly q;
    while (!p.is_constant() && try_divide(p, f, q)) {
        p = std::move(q);
        any = true;
    }
    return any;
}

// Residue of c dx along the irreducible factor P (as polynomial in x over the
// other variables): the class of h mod P with res = h(beta) at each root beta.
UPoly residue_along(const RF& c, const Poly& factor, Var x) {
    auto [num, den] = split_rf(c, x);
    UPoly P = UPoly::from_rf(RF(factor), x);
    UPoly Q = den;
    int k = 0;
    while (true) {
        auto [q, r] = divmod(Q, P);
        if (!r.is_zero()) break;
        Q = std::move(q);
        ++k;
    }
    if (k == 0) return {};
    UPoly dP = P.derivative();
    auto mod = [&](const UPoly& a) { return divmod(a, P).second; };
    // Hermite reduction down to a simple pole along P.
    while (k >= 2) {
        RF km1(static_cast<long>(k - 1));
        UPoly B = mod(-num * inverse_mod(mod(dP * Q * km1), P));
        UPoly t = num - Q * (B.derivative() * P - B * dP * km1);
        auto [qq, rr] = divmod(t, P);
        if (!rr.is_zero()) throw Error(ErrorKind::Precondition, "Hermite step left a remainder");
        num = std::move(qq);
        --k;
    }
    return mod(num * inverse_mod(mod(dP * Q), P));
}

}  // namespace

std::vector<Poly> univariate_factors(const Poly& p, Var x) {
    std::vector<Poly> out;
    if (p.degree(x) == 0) return out;
    // Yun's squarefree decomposition.
    Poly a = p.monic();
    Poly b = a.derivative(x);
    Poly c = gcd(a, b);
    Poly w = divide_exact(a, c);
    while (!c.is_constant()) {
        Poly y = gcd(w, c);
        Poly f = divide_exact(w, y);
        if (!f.is_constant()) split_rational_roots(f, x, out);
        w = y;
        c = divide_exact(c, y);
    }
    if (!w.is_constant()) split_rational_roots(w, x, out);
    return out;
}

BaseFormClass dlog_reduce(const BaseForm& omega, const ScalarTower& tower, const std::vector<Poly>& aux) {
    for (const auto& [v, x] : omega.c) {
        if (!tower.is_base(v)) throw Error(ErrorKind::Precondition, "dlog_reduce expects a base form, got d" + var_name(v));
        if (x.contains(tower.fiber)) throw Error(ErrorKind::Precondition, "dlog_reduce expects fiber-free coefficients");
    }
    if (!omega.is_closed(tower.base_vars)) throw Error(ErrorKind::NotAClass, "form is not closed: " + omega.to_string());

    std::vector<Poly> known = aux;
    if (tower.ext) {
        const Poly& s = tower.ext->square;
        Poly rest = s.div_monomial(s.monomial_content());
        if (!rest.is_constant()) known.push_back(rest);
    }

    std::vector<Poly> factors;
    auto add_factor = [&](const Poly& f) {
        Poly m = f.monic();
        if (m.is_constant()) return;
        if (std::find(factors.begin(), factors.end(), m) == factors.end()) factors.push_back(m);
    };
    for (const auto& [v, x] : omega.c) {
        Poly d = x.d();
        Monomial mc = d.monomial_content();
        mc.for_each([&](Var u, std::uint32_t) { add_factor(Poly::var(u)); });
        d = d.div_monomial(mc);
        for (const auto& k : known)
            if (try_divide_all(d, k)) add_factor(k);
        for (Var u : d.variables()) {
            Poly up = univariate_part(d, u);
            if (up.is_constant()) continue;
            for (const auto& f : univariate_factors(up, u)) {
                try_divide_all(d, f);
                add_factor(f);
            }
        }
        if (!d.is_constant())
            throw Error(ErrorKind::CannotCertify, "unrecognized denominator factor " + d.to_string());
    }

    BaseFormClass out;
    out.representative = omega;
    for (const auto& f : factors) {
        Var x = f.variables().front();
        UPoly h = residue_along(omega.coeff(x), f, x);
        if (h.is_zero()) continue;
        if (h.degree() > 0)
            throw Error(ErrorKind::CannotCertify, "residue along " + f.to_string() + " is not constant");
        RF hc = h.coeff(0);
        for (Var v : tower.base_vars)
            if (hc.contains(v))
                throw Error(ErrorKind::CannotCertify, "residue along " + f.to_string() + " depends on " + var_name(v));
        Rational c = divmod(hc.p(), hc.d()).first.constant_term();
        if (hc.has_w())
            throw Error(ErrorKind::CannotCertify, "irrational residue along " + f.to_string());
        if (c == 0) continue;
        out.representative -= RF(c) * BaseForm::dlog(RF(f), tower.base_vars);
        out.log_part.emplace_back(f, c);
    }
    std::sort(out.log_part.begin(), out.log_part.end(),
              [](const auto& a, const auto& b) { return a.first.to_string() < b.first.to_string(); });
    return out;
}

}  // namespace gmdet
