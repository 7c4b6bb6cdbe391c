#include "gmdet/connection.hpp"

#include <algorithm>

#include "gmdet/errors.hpp"

namespace gmdet {

int degree(const Divisor& d) {
    int s = 0;
    for (const auto& p : d) s += p.mult;
    return s;
}

int multiplicity(const Divisor& d, const Point& p) {
    for (const auto& x : d)
        if (x.point == p) return x.mult;
    return 0;
}

std::string to_string(const Divisor& d) {
    std::string s;
    for (const auto& x : d) {
        if (!s.empty()) s += " + ";
        s += std::to_string(x.mult) + "*(" + x.point.to_string() + ")";
    }
    return s.empty() ? "0" : s;
}

ConnectionSpec make_spec(const ScalarTower& tower, const AbsoluteForm1& A, std::optional<Divisor> D,
                         const std::vector<Point>& hints) {
    ConnectionSpec s;
    s.tower = tower;
    s.rank = A.rank;
    s.A = A;
    s.D = D ? *D : minimal_divisor(A, tower, hints);
    return s;
}

bool check_integrability(const ConnectionSpec& spec) {
    return (exterior_d(spec.A, spec.tower) + wedge(spec.A, spec.A)).is_zero();
}

int pole_order(const RF& f, Var z, const Point& pt) {
    if (f.is_zero()) return 0;
    return std::max(0, -order_at(f, z, pt));
}

int form_pole_order(const RF& f, Var z, const Point& pt) {
    if (f.is_zero()) return 0;
    int o = order_at(f, z, pt);
    if (pt.infinite) o -= 2;
    return std::max(0, -o);
}

int pole_order(const RMatrix& m, Var z, const Point& pt) {
    int o = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) o = std::max(o, pole_order(m(i, j), z, pt));
    return o;
}

int form_pole_order(const RMatrix& m, Var z, const Point& pt) {
    int o = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) o = std::max(o, form_pole_order(m(i, j), z, pt));
    return o;
}

std::vector<Point> finite_poles(const std::vector<RF>& fs, Var z, const std::vector<Point>& hints) {
    std::vector<Point> out;
    auto add = [&](const Point& p) {
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    };
    for (const auto& f : fs) {
        Poly d = f.d();
        if (!d.contains(z)) continue;
        d = divide_exact(d, content(d, z));
        Poly u = univariate_part(d, z);
        if (!u.is_constant()) {
            for (const auto& fac : univariate_factors(u, z)) {
                if (fac.degree(z) == 1) {
                    add(Point::at(RF(-fac.constant_term()) / RF(fac.lc())));
                } else {
                    throw Error(ErrorKind::UnsupportedPoint, "pole along irreducible " + fac.to_string());
                }
            }
            d = divide_exact(d, u);
        }
        UPoly r = UPoly::from_rf(RF(d), z);
        for (const auto& h : hints) {
            if (h.infinite) continue;
            UPoly lin({-h.value, RF(1)});
            while (r.degree() > 0) {
                auto [q, rem] = divmod(r, lin);
                if (!rem.is_zero()) break;
                r = q;
                add(h);
            }
        }
        if (r.degree() == 1) {
            add(Point::at(-r.coeff(0) / r.coeff(1)));
        } else if (r.degree() > 1) {
            throw Error(ErrorKind::UnsupportedPoint, "pole at roots of " + r.to_string(z) + " is not K-rational");
        }
    }
    return out;
}

namespace {

std::vector<RF> entries(const RMatrix& m) {
    std::vector<RF> out;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) out.push_back(m(i, j));
    return out;
}

std::vector<RF> all_entries(const AbsoluteForm1& A) {
    std::vector<RF> out = entries(A.fiber);
    for (const auto& [v, m] : A.base) {
        auto e = entries(m);
        out.insert(out.end(), e.begin(), e.end());
    }
    return out;
}

}  // namespace

Divisor minimal_divisor(const AbsoluteForm1& A, const ScalarTower& tower, const std::vector<Point>& hints) {
    Var z = tower.fiber;
    Divisor D;
    for (const auto& p : finite_poles(entries(A.fiber), z, hints)) {
        int m = form_pole_order(A.fiber, z, p);
        if (m > 0) D.push_back({p, m});
    }
    int minf = form_pole_order(A.fiber, z, Point::infinity());
    if (minf > 0) D.push_back({Point::infinity(), minf});
    return D;
}

AdmissibilityVerdict check_admissible(const ConnectionSpec& spec) {
    AdmissibilityVerdict v;
    auto fail = [&](std::string reason) {
        v.admissible = false;
        v.reason = std::move(reason);
        return v;
    };
    if (spec.D.empty()) return fail("empty divisor (D must be nonempty)");
    Var z = spec.z();
    std::vector<Point> hints;
    for (const auto& x : spec.D) hints.push_back(x.point);
    for (const auto& p : finite_poles(all_entries(spec.A), z, hints))
        if (multiplicity(spec.D, p) == 0) return fail("pole at " + p.to_string() + " outside the divisor");

    std::vector<DivisorPoint> pts = spec.D;
    if (multiplicity(spec.D, Point::infinity()) == 0) pts.push_back({Point::infinity(), 0});
    for (const auto& x : pts) {
        int fo = form_pole_order(spec.A.fiber, z, x.point);
        if (fo > x.mult)
            return fail("fiber part has pole of order " + std::to_string(fo) + " at " + x.point.to_string() +
                        " exceeding multiplicity " + std::to_string(x.mult));
        int allowed = std::max(x.mult - 1, 0);
        for (const auto& [var, m] : spec.A.base) {
            int bo = pole_order(m, z, x.point);
            if (bo > allowed)
                return fail("base part d" + var_name(var) + " has pole of order " + std::to_string(bo) + " at " +
                            x.point.to_string() + " (allowed " + std::to_string(allowed) +
                            "): base-part pole too deep");
        }
    }
    for (const auto& x : spec.D) {
        if (leading_matrix(spec, x).det().is_zero())
            return fail("leading matrix g at " + x.point.to_string() + " is not invertible");
    }
    return v;
}

RMatrix leading_matrix(const ConnectionSpec& spec, const DivisorPoint& x) {
    Var z = spec.z();
    int m = x.mult;
    return spec.A.fiber.map([&](const RF& f) {
        if (f.is_zero()) return RF();
        if (x.point.infinite) return -laurent_expand(f, z, x.point, 2 - m).coeff(2 - m);
        return laurent_expand(f, z, x.point, -m).coeff(-m);
    });
}

RMatrix local_g(const ConnectionSpec& spec, const DivisorPoint& x) {
    RF zz = RF::var(spec.z());
    if (x.point.infinite) return spec.A.fiber * (-zz.pow(2 - x.mult));
    return spec.A.fiber * (zz - x.point.value).pow(x.mult);
}

bool commutator_regular(const ConnectionSpec& spec, const DivisorPoint& x) {
    RMatrix g = local_g(spec, x);
    for (const auto& [v, c] : spec.A.base)
        if (pole_order(g * c - c * g, spec.z(), x.point) > 0) return false;
    return true;
}

AbsoluteForm1 gauge(const AbsoluteForm1& A, const RMatrix& M, const ScalarTower& tower) {
    if (M.det().is_zero()) throw Error(ErrorKind::SingularMatrix, "gauge matrix is singular");
    RMatrix Minv = M.inverse();
    return Minv * A * M + Minv * exterior_d(M, tower);
}

ConnectionSpec gauge_transform(const ConnectionSpec& spec, const RMatrix& M) {
    ConnectionSpec out = spec;
    out.A = gauge(spec.A, M, spec.tower);
    std::vector<Point> hints;
    for (const auto& x : spec.D) hints.push_back(x.point);
    out.D = minimal_divisor(out.A, out.tower, hints);
    return out;
}

RF substitute_all(const RF& f, const std::map<Var, RF>& subst) {
    std::vector<std::pair<Var, const RF*>> tmp;
    RF g = f;
    std::size_t k = 0;
    for (const auto& [v, val] : subst) {
        if (!g.contains(v)) continue;
        Var t = intern("__subst" + std::to_string(k++));
        g = g.substitute(v, RF::var(t));
        tmp.emplace_back(t, &val);
    }
    for (const auto& [t, val] : tmp) g = g.substitute(t, *val);
    return g;
}

AbsoluteForm1 pullback(const AbsoluteForm1& A, const ScalarTower& old_tower, const ScalarTower& new_tower,
                       const std::map<Var, RF>& subst) {
    AbsoluteForm1 out(A.rank);
    auto value_of = [&](Var v) {
        auto it = subst.find(v);
        return it == subst.end() ? RF::var(v) : it->second;
    };
    auto add_term = [&](const RMatrix& coeff, Var old_var) {
        if (coeff.is_zero()) return;
        RMatrix c = coeff.map([&](const RF& f) { return substitute_all(f, subst); });
        AbsoluteForm1 d = exterior_d_scalar(value_of(old_var), new_tower);
        out.fiber += c * d.fiber(0, 0);
        for (const auto& [v, m] : d.base) out.set_base(v, out.base_part(v) + c * m(0, 0));
    };
    add_term(A.fiber, old_tower.fiber);
    for (const auto& [v, m] : A.base) add_term(m, v);
    return out;
}

ConnectionSpec pullback(const ConnectionSpec& spec, const ScalarTower& new_tower, const std::map<Var, RF>& subst,
                        const std::vector<Point>& hints) {
    ConnectionSpec out;
    out.tower = new_tower;
    out.rank = spec.rank;
    out.A = pullback(spec.A, spec.tower, new_tower, subst);
    out.D = minimal_divisor(out.A, new_tower, hints);
    out.aux_factors = spec.aux_factors;
    return out;
}

}  // namespace gmdet
