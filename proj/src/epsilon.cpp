#include "gmdet/epsilon.hpp"

#include <algorithm>
#include <random>

#include "gmdet/errors.hpp"

namespace gmdet {

namespace {

RF linear(const ConnectionSpec& spec, const Point& p) { return RF::var(spec.z()) - p.value; }

RF polar_product(const ConnectionSpec& spec) {
    RF prod(1);
    for (const auto& x : spec.D)
        if (!x.point.infinite) prod *= linear(spec, x.point).pow(x.mult);
    return prod;
}

BaseForm trace_residue(const AbsoluteForm2& w, const ConnectionSpec& spec, const Point& pt) {
    BaseForm out;
    for (const auto& [v, m] : residue(w, spec.z(), pt)) {
        RF t = m.trace();
        if (!t.is_zero()) out.c[v] = t;
    }
    return out;
}

bool squarefree(const UPoly& p) { return p.degree() < 1 || gcd(p, p.derivative()).degree() == 0; }

/// Truncated matrix Laurent series in the local coordinate at a point.
struct MSeries {
    int val = 0;
    std::vector<RMatrix> c;  // c[k] is the coefficient of u^{val+k}
    std::size_t n = 1;

    RMatrix at(int k) const {
        int i = k - val;
        return i >= 0 && i < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(i)] : RMatrix(n, n);
    }
};

MSeries expand(const RMatrix& m, Var z, const Point& pt, int val, int order) {
    MSeries s;
    s.n = m.rows();
    s.val = val;
    for (int k = val; k <= order; ++k) s.c.emplace_back(s.n, s.n);
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t j = 0; j < s.n; ++j) {
            if (m(i, j).is_zero()) continue;
            Laurent l = laurent_expand(m(i, j), z, pt, order);
            if (l.valuation < val && !l.c.empty())
                throw Error(ErrorKind::Precondition, "series valuation below the expected bound");
            for (int k = val; k <= order; ++k) s.c[static_cast<std::size_t>(k - val)](i, j) = l.coeff(k);
        }
    return s;
}

MSeries multiply(const MSeries& a, const MSeries& b, int order) {
    MSeries s;
    s.n = a.n;
    s.val = a.val + b.val;
    for (int k = s.val; k <= order; ++k) {
        RMatrix acc(s.n, s.n);
        for (int i = a.val; i <= k - b.val; ++i) {
            RMatrix x = a.at(i);
            if (x.is_zero()) continue;
            RMatrix y = b.at(k - i);
            if (!y.is_zero()) acc += x * y;
        }
        s.c.push_back(std::move(acc));
    }
    return s;
}

int min_valuation(const RMatrix& m, Var z, const Point& pt) {
    int v = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) v = std::min(v, order_at(m(i, j), z, pt));
    return v;
}

/// res_x Tr(dg g^{-1} ^ A) for g regular and invertible at x. Works with
/// truncated series so that only g(x) is inverted exactly.
BaseForm log_trace_residue(const RMatrix& g, const AbsoluteForm1& A, const ConnectionSpec& spec, const Point& pt) {
    const Var z = spec.z();
    const std::size_t r = spec.rank;
    // res at a finite point reads u^{-1}; at infinity res = -[u^1] of the dz coefficient.
    const int target = pt.infinite ? 1 : -1;
    int low = min_valuation(A.fiber, z, pt);
    for (const auto& [v, c] : A.base) low = std::min(low, min_valuation(c, z, pt));
    const int order = target - low;
    if (order < 0) return {};  // everything regular at a finite point

    MSeries gs = expand(g, z, pt, 0, order);
    RMatrix h0 = gs.at(0).inverse();
    MSeries hs;
    hs.n = r;
    hs.c.push_back(h0);
    for (int k = 1; k <= order; ++k) {
        RMatrix acc(r, r);
        for (int j = 1; j <= k; ++j) acc += gs.at(j) * hs.at(k - j);
        hs.c.push_back(-(h0 * acc));
    }

    AbsoluteForm1 dg = exterior_d(g, spec.tower);
    auto coeff_trace = [&](const MSeries& s) {
        RMatrix m = s.at(target);
        RF t = m.trace();
        return pt.infinite ? -t : t;
    };
    MSeries Xz = multiply(expand(dg.fiber, z, pt, 0, order), hs, order);
    MSeries F = expand(A.fiber, z, pt, low, target);
    BaseForm out;
    std::vector<Var> keys;
    for (const auto& [v, m] : A.base) keys.push_back(v);
    for (const auto& [v, m] : dg.base)
        if (!A.base.count(v)) keys.push_back(v);
    for (Var v : keys) {
        RF res;
        if (A.base.count(v)) res += coeff_trace(multiply(Xz, expand(A.base.at(v), z, pt, low, target), target));
        if (dg.base.count(v)) {
            MSeries Xv = multiply(expand(dg.base.at(v), z, pt, 0, order), hs, order);
            res -= coeff_trace(multiply(Xv, F, target));
        }
        if (!res.is_zero()) out.c[v] = res;
    }
    return out;
}

}  // namespace

GlobalSection make_section(const ConnectionSpec& spec, const RF& F) {
    Var z = spec.z();
    if (F.is_zero()) throw Error(ErrorKind::DegenerateSection, "zero section");
    GlobalSection s;
    s.F = F;
    auto [num, den] = split_rf(F * polar_product(spec), z);
    for (const auto& x : spec.D) {
        int o = order_at(F, z, x.point);
        int expected = x.point.infinite ? 2 - x.mult : -x.mult;
        if (o != expected)
            throw Error(ErrorKind::DegenerateSection, "section does not generate omega(D) at " + x.point.to_string());
        if (!x.point.infinite && den.eval(x.point.value).is_zero())
            throw Error(ErrorKind::DegenerateSection, "section has a pole at " + x.point.to_string());
    }
    if (!squarefree(num) || !squarefree(den) || gcd(num, den).degree() > 0)
        throw Error(ErrorKind::DegenerateSection, "divisor of the section is not reduced: G = " + num.to_string(z));
    RF c = den.lc();
    s.G = num * c.inverse();
    s.H = den * c.inverse();
    RF zz = RF::var(z);
    for (const auto& x : spec.D)
        s.units.push_back(x.point.infinite ? -F * zz.pow(2 - x.mult) : F * linear(spec, x.point).pow(x.mult));
    return s;
}

namespace {

RF default_F(const ConnectionSpec& spec) {
    Var z = spec.z();
    RF zz = RF::var(z);
    RF F;
    const DivisorPoint* first = nullptr;
    int simple = 0;
    for (const auto& x : spec.D) {
        if (x.point.infinite) continue;
        F += linear(spec, x.point).pow(-x.mult);
        if (x.mult == 1) ++simple;
        if (!first || (first->mult == 1 && x.mult >= 2)) first = &x;
    }
    int minf = multiplicity(spec.D, Point::infinity());
    if (minf >= 2) {
        F -= zz.pow(minf - 2);
    } else {
        if (!first) throw Error(ErrorKind::DegenerateSection, "omega(D) has no global section");
        // Correct the residue sum at a finite point so that the order at
        // infinity is exactly 2 - m_inf.
        long lambda;
        if (minf == 1)
            lambda = (first->mult >= 2 && simple != 1) ? -1 : 1;
        else
            lambda = -simple;
        F += RF(lambda) * linear(spec, first->point).inverse();
    }
    return F;
}

}  // namespace

GlobalSection build_global_section(const ConnectionSpec& spec) { return make_section(spec, default_F(spec)); }

GlobalSection perturb_section(const ConnectionSpec& spec, const GlobalSection& s, unsigned seed, int attempts) {
    Var z = spec.z();
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coef(-3, 3);
    int deg = 1;
    for (int a = 0; a < attempts; ++a) {
        if (a && a % 8 == 0) ++deg;
        auto random_poly = [&] {
            std::vector<RF> c;
            for (int k = 0; k < deg; ++k) c.emplace_back(static_cast<long>(coef(rng)));
            c.emplace_back(1L);
            return UPoly(c).to_rf(z);
        };
        RF U = random_poly() / random_poly();
        try {
            return make_section(spec, s.F * U);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DegenerateSection) throw;
        }
    }
    throw Error(ErrorKind::DegenerateSection, "no reduced section found after perturbation");
}

BaseForm divisor_pushforward(const GlobalSection& s, const AbsoluteForm1& detform, const ScalarTower& tower) {
    Var z = tower.fiber;
    RF p = detform.scalar_fiber();
    BaseForm q = detform.scalar_base();
    auto along = [&](const UPoly& P) {
        BaseForm out;
        if (P.degree() < 1) return out;
        RF Prf = P.to_rf(z);
        RF dz = Prf.derivative(z);
        for (Var v : tower.base_vars) {
            RF h = q.coeff(v);
            RF dv = Prf.derivative(v);
            if (!dv.is_zero() && !p.is_zero()) h -= p * dv / dz;
            if (h.is_zero()) continue;
            RF tr = resultant_trace(P, h, z);
            if (!tr.is_zero()) out.c[v] = tr;
        }
        return out;
    };
    return along(s.G) - along(s.H);
}

BaseForm local_correction(const ConnectionSpec& spec, std::size_t index, const RF& generator_unit) {
    const auto& x = spec.D.at(index);
    RMatrix g = local_g(spec, x);
    if (!generator_unit.is_one()) g = g * generator_unit.inverse();
    return log_trace_residue(g, spec.A, spec, x.point);
}

BaseForm local_correction_eta(const ConnectionSpec& spec, std::size_t index) {
    const auto& x = spec.D.at(index);
    RMatrix g = local_g(spec, x);
    AbsoluteForm1 eta = spec.A;
    eta.fiber = RMatrix(spec.rank, spec.rank);
    return log_trace_residue(g, eta, spec, x.point);
}

BaseForm unit_adjustment(const ConnectionSpec& spec, std::size_t index, const RF& unit) {
    if (unit.is_constant()) return {};
    AbsoluteForm1 du = exterior_d_scalar(unit, spec.tower);
    RMatrix uinv = RMatrix::scalar(1, unit.inverse());
    return -trace_residue(wedge(du * uinv, spec.A.trace()), spec, spec.D.at(index).point);
}

RhsResult rhs_form(const ConnectionSpec& spec, const GlobalSection& section, const std::vector<RF>& generator_units) {
    RhsResult r;
    r.section = section;
    AbsoluteForm1 tr = spec.A.trace();
    r.pushforward = divisor_pushforward(section, tr, spec.tower);
    r.form = r.pushforward;
    r.corrections.resize(spec.D.size());
    for (std::size_t i = 0; i < spec.D.size(); ++i) {
        RF c = i < generator_units.size() ? generator_units[i] : RF(1);
        r.corrections[i] = local_correction(spec, i, c) + unit_adjustment(spec, i, section.units[i] / c);
    }
    for (const auto& c : r.corrections) r.form -= c;
    r.cls.representative = r.form;
    return r;
}

RhsResult rhs_conjecture(const ConnectionSpec& spec, const GlobalSection& section,
                         const std::vector<RF>& generator_units) {
    RhsResult r = rhs_form(spec, section, generator_units);
    r.cls = dlog_reduce(r.form, spec.tower, spec.aux_factors);
    return r;
}

RhsResult rhs_conjecture(const ConnectionSpec& spec) { return rhs_conjecture(spec, build_global_section(spec)); }

GlobalSection section_with_retry(const ConnectionSpec& spec, unsigned seed) {
    try {
        return build_global_section(spec);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateSection) throw;
    }
    GlobalSection base;
    base.F = default_F(spec);
    return perturb_section(spec, base, seed);
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Verified: return "verified";
        case Verdict::Refuted: return "refuted";
        case Verdict::CannotCertify: return "cannot-certify";
    }
    return "?";
}

VerifyResult verify_conjecture(const ConnectionSpec& spec, std::optional<DzMonomial> eliminate, unsigned seed) {
    if (auto adm = check_admissible(spec); !adm)
        throw Error(ErrorKind::Precondition, "not admissible: " + adm.reason);
    VerifyResult out;
    DeRhamPresentation pres = h1_basis(spec, eliminate);
    out.basis = pres.basis();
    out.lhs_form = -h1_trace(pres);
    GlobalSection section = section_with_retry(spec, seed);
    out.rhs = rhs_form(spec, section);
    out.lhs.representative = out.lhs_form;
    // The individual classes are informational; only the sum decides.
    auto reduce_side = [&](BaseFormClass& cls, const BaseForm& form) {
        try {
            cls = dlog_reduce(form, spec.tower, spec.aux_factors);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::CannotCertify) throw;
            out.sides_reduced = false;
        }
    };
    reduce_side(out.lhs, out.lhs_form);
    reduce_side(out.rhs.cls, out.rhs.form);
    try {
        out.sum = dlog_reduce(out.lhs_form + out.rhs.form, spec.tower, spec.aux_factors);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::CannotCertify) throw;
        out.verdict = Verdict::CannotCertify;
        out.reason = e.what();
        return out;
    }
    out.verdict = out.sum.is_zero() ? Verdict::Verified : Verdict::Refuted;
    if (out.verdict == Verdict::Refuted) out.reason = "lhs + rhs = " + out.sum.to_string();
    return out;
}

}  // namespace gmdet
