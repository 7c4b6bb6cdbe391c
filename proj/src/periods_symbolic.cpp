#include <map>

#include "gmdet/connection.hpp"
#include "gmdet/errors.hpp"
#include "gmdet/matrix.hpp"
#include "gmdet/periods.hpp"

namespace gmdet::periods {

namespace {

std::vector<Var> named_vars(const std::string& prefix, int count) {
    std::vector<Var> out;
    for (int k = 1; k <= count; ++k) out.push_back(intern(prefix + std::to_string(k)));
    return out;
}

/// Newton: p_k = sum_{i<k} (-1)^{i-1} s_i p_{k-i} + (-1)^{k-1} k s_k, with
/// s_i = 0 beyond the supplied list.
std::vector<RF> newton_power_sums(const std::vector<RF>& s, int kmax) {
    auto sv = [&](int i) { return i <= static_cast<int>(s.size()) ? s[i - 1] : RF(); };
    std::vector<RF> p(kmax + 1);
    for (int k = 1; k <= kmax; ++k) {
        RF acc = RF(static_cast<long>(k % 2 ? k : -k)) * sv(k);
        for (int i = 1; i < k; ++i) acc += RF(i % 2 ? 1L : -1L) * sv(i) * p[k - i];
        p[k] = acc;
    }
    return p;
}

/// Elementary symmetric functions of the given variables.
std::vector<RF> elementary(const std::vector<Var>& z) {
    std::vector<RF> e(z.size() + 1);
    e[0] = RF(1);
    for (Var v : z) {
        RF x = RF::var(v);
        for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += e[k - 1] * x;
    }
    return e;
}

/// Terms of the numerator of f grouped by total degree in t.
std::map<unsigned, RF> by_degree(const RF& f, const std::vector<Var>& t) {
    if (f.has_w()) throw Error(ErrorKind::NotInScope, "extension element in triangular input");
    for (Var v : t)
        if (f.d().contains(v)) throw Error(ErrorKind::NotInScope, "input is not polynomial in t");
    std::map<unsigned, Poly> parts;
    for (const auto& term : f.p().terms()) {
        unsigned deg = 0;
        for (Var v : t) deg += term.mono.exponent(v);
        parts[deg] += Poly::monomial(term.mono, term.coeff);
    }
    std::map<unsigned, RF> out;
    for (auto& [d, p] : parts) out[d] = RF(p, f.d());
    return out;
}

RF coefficient_of(const RF& f, const std::vector<std::pair<Var, unsigned>>& pattern, const std::vector<Var>& t) {
    Poly acc;
    for (const auto& term : f.p().terms()) {
        bool match = true;
        for (Var v : t) {
            unsigned want = 0;
            for (const auto& [pv, e] : pattern)
                if (pv == v) want += e;
            if (term.mono.exponent(v) != want) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        Monomial m = term.mono;
        for (Var v : t) m = m.with_exponent(v, 0);
        acc += Poly::monomial(m, term.coeff);
    }
    return RF(acc, f.d());
}

}  // namespace

std::vector<Var> coefficient_vars(int m) { return named_vars("a", m - 1); }

SymmetricBridge symmetric_bridge(int m) {
    if (m < 3) throw Error(ErrorKind::MalformedInput, "m must be at least 3");
    int n = m - 2;
    SymmetricBridge b;
    b.m = m;
    b.s = named_vars("s", n);
    std::vector<RF> s;
    for (Var v : b.s) s.push_back(RF::var(v));
    auto p = newton_power_sums(s, m - 1);
    b.power_sums.assign(p.begin() + 1, p.end());
    auto a = coefficient_vars(m);
    for (int k = 1; k <= m - 1; ++k) b.F += RF::var(a[k - 1]) * p[k];

    // Newton check on m-1 variables and on m-2 variables (s_{m-1} = 0).
    auto z = named_vars("z", m - 1);
    bool ok = true;
    for (int vars : {m - 1, n}) {
        std::vector<Var> zs(z.begin(), z.begin() + vars);
        auto e = elementary(zs);
        std::vector<RF> es(e.begin() + 1, e.end());
        auto pk = newton_power_sums(es, m - 1);
        for (int k = 1; k <= m - 1; ++k) {
            RF direct;
            for (Var v : zs) direct += RF::var(v).pow(k);
            ok = ok && pk[k] == direct;
        }
    }
    b.newton_ok = ok;

    std::vector<Var> zs(z.begin(), z.begin() + n);
    auto e = elementary(zs);
    RMatrix J(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J(i, j) = e[i + 1].derivative(zs[j]);
    b.jacobian = J.det();
    b.vandermonde = RF(1);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) b.vandermonde *= RF::var(zs[j]) - RF::var(zs[i]);
    if (b.jacobian == b.vandermonde)
        b.jacobian_sign = 1;
    else if (b.jacobian == -b.vandermonde)
        b.jacobian_sign = -1;
    return b;
}

CriticalExpansion critical_expansion(int m) {
    SymmetricBridge br = symmetric_bridge(m);
    int n = m - 2;
    auto a = coefficient_vars(m);
    CriticalExpansion ce;
    ce.t = named_vars("t", n);
    // f'(z) = sum_{l=0}^{n} (l+1) a_{l+1} z^l; b_k = (-1)^k c_{n-k} / c_n.
    auto c = [&](int l) { return RF(static_cast<long>(l + 1)) * RF::var(a[l]); };
    for (int k = 1; k <= n; ++k) ce.b.push_back(RF(k % 2 ? -1L : 1L) * c(n - k) / c(n));
    std::map<Var, RF> at_b, shifted;
    for (int k = 0; k < n; ++k) {
        at_b[br.s[k]] = ce.b[k];
        shifted[br.s[k]] = ce.b[k] + RF::var(ce.t[k]);
    }
    ce.F_at_b = substitute_all(br.F, at_b);
    ce.G = substitute_all(br.F, shifted) - ce.F_at_b;
    bool grad = true;
    for (int k = 0; k < n; ++k) grad = grad && substitute_all(br.F.derivative(br.s[k]), at_b).is_zero();
    ce.gradient_vanishes = grad;
    return ce;
}

TriangularResult triangular_change_of_variables(const RF& G, const std::vector<Var>& t) {
    const int n = static_cast<int>(t.size());
    auto parts = by_degree(G, t);
    if (parts.count(0) || parts.count(1))
        throw Error(ErrorKind::NotInScope, "G has constant or linear terms");

    TriangularResult r;
    for (Var v : t) r.substitution.push_back(RF::var(v));
    RF cur = G;
    const int max_steps = 4 * n * n + 4;
    for (int step = 0;; ++step) {
        if (step > max_steps) throw Error(ErrorKind::NotInScope, "triangular elimination did not terminate");
        RF H;
        for (const auto& [d, part] : by_degree(cur, t))
            if (d >= 3) H += part;
        if (H.is_zero()) break;
        int i = 0;
        while (i < n && !H.contains(t[i])) ++i;
        int j = n - 1 - i;  // partner of t_{i+1} is t_{n-i} (0-based j)
        if (j <= i) throw Error(ErrorKind::NotInScope, "no partner variable for the cubic remainder");
        if (H.contains(t[j])) throw Error(ErrorKind::NotInScope, "weight bound violated");
        RF c = coefficient_of(cur, {{t[i], 1}, {t[j], 1}}, t);
        if (c.is_zero()) throw Error(ErrorKind::NotInScope, "pairing coefficient vanishes");
        RF Hi = (H - H.substitute(t[i], RF())) / RF::var(t[i]);
        RF shift = Hi / c;
        cur = cur.substitute(t[j], RF::var(t[j]) - shift);
        std::map<Var, RF> back;
        for (int k = 0; k < n; ++k) back[t[k]] = r.substitution[k];
        r.substitution[j] += substitute_all(shift, back);
    }
    r.Q = cur;

    std::map<Var, RF> forward;
    for (int k = 0; k < n; ++k) forward[t[k]] = r.substitution[k];
    r.identity = substitute_all(r.Q, forward) == G;
    bool tri = true;
    for (int k = 0; k < n; ++k) {
        RF B = r.substitution[k] - RF::var(t[k]);
        for (int l = k; l < n; ++l) tri = tri && !B.contains(t[l]);
    }
    r.unit_jacobian = tri;
    RMatrix Hs(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) Hs(k, l) = r.Q.derivative(t[k]).derivative(t[l]);
    r.hessian_det = Hs.det();
    return r;
}

}  // namespace gmdet::periods
