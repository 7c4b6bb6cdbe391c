#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gmdet/matrix.hpp"
#include "gmdet/tower.hpp"
#include "gmdet/univariate.hpp"

namespace gmdet {

/// Scalar 1-form sum_v c_v dv on the base (or, with the fiber as a key, on
/// the total space). Zero coefficients are never stored.
struct BaseForm {
    std::map<Var, RF> c;

    BaseForm() = default;
    BaseForm(std::map<Var, RF> coeffs);  // NOLINT

    static BaseForm dlog(const RF& f, const std::vector<Var>& vars);

    RF coeff(Var v) const;
    bool is_zero() const { return c.empty(); }
    BaseForm& operator+=(const BaseForm& o);
    BaseForm& operator-=(const BaseForm& o);
    friend BaseForm operator+(BaseForm a, const BaseForm& b) { return a += b; }
    friend BaseForm operator-(BaseForm a, const BaseForm& b) { return a -= b; }
    friend BaseForm operator*(const RF& s, BaseForm a);
    BaseForm operator-() const { return RF(-1) * *this; }
    bool operator==(const BaseForm& o) const { return c == o.c; }
    bool operator!=(const BaseForm& o) const { return !(*this == o); }

    BaseForm substitute(Var v, const RF& value) const;
    /// d(omega) = 0 as a form in the given variables.
    bool is_closed(const std::vector<Var>& vars) const;
    std::string to_string() const;
};

/// Matrix-valued 1-form F dz + sum_i C_i dtau_i.
struct AbsoluteForm1 {
    std::size_t rank = 1;
    RMatrix fiber;
    std::map<Var, RMatrix> base;

    AbsoluteForm1() : fiber(1, 1) {}
    explicit AbsoluteForm1(std::size_t r) : rank(r), fiber(r, r) {}
    /// Builds from per-entry scalar forms keyed by fiber or base variable.
    static AbsoluteForm1 from_entries(const std::vector<std::vector<std::map<Var, RF>>>& entries, Var fiber);
    static AbsoluteForm1 scalar(const RF& dz_coeff, const BaseForm& base_part);

    RMatrix base_part(Var v) const;
    void set_base(Var v, RMatrix m);
    bool is_zero() const;
    AbsoluteForm1& operator+=(const AbsoluteForm1& o);
    AbsoluteForm1& operator-=(const AbsoluteForm1& o);
    friend AbsoluteForm1 operator+(AbsoluteForm1 a, const AbsoluteForm1& b) { return a += b; }
    friend AbsoluteForm1 operator-(AbsoluteForm1 a, const AbsoluteForm1& b) { return a -= b; }
    friend AbsoluteForm1 operator*(const RMatrix& m, const AbsoluteForm1& a);
    friend AbsoluteForm1 operator*(const AbsoluteForm1& a, const RMatrix& m);
    bool operator==(const AbsoluteForm1& o) const;

    /// Entrywise trace, a rank-1 form.
    AbsoluteForm1 trace() const;
    /// Rank-1 form as (dz coefficient, base part).
    RF scalar_fiber() const;
    BaseForm scalar_base() const;

    template <class F>
    AbsoluteForm1 map(F&& f) const {
        AbsoluteForm1 r(rank);
        r.fiber = fiber.map(f);
        for (const auto& [v, m] : base) r.set_base(v, m.map(f));
        return r;
    }

    std::string entry_string(std::size_t i, std::size_t j, Var fiber_var) const;
    std::string to_string(Var fiber_var) const;
};

/// Matrix-valued 2-form sum_i P_i dz^dtau_i + sum_{i<j} Q_ij dtau_i^dtau_j.
struct AbsoluteForm2 {
    std::size_t rank = 1;
    std::map<Var, RMatrix> dz_base;
    std::map<std::pair<Var, Var>, RMatrix> base_base;

    bool is_zero() const;
    AbsoluteForm2& operator+=(const AbsoluteForm2& o);
    friend AbsoluteForm2 operator+(AbsoluteForm2 a, const AbsoluteForm2& b) { return a += b; }
    void add_dz(Var v, const RMatrix& m);
    void add_pair(Var a, Var b, const RMatrix& m);  // coefficient of da^db, any order
};

AbsoluteForm1 exterior_d_scalar(const RF& f, const ScalarTower& tower);
AbsoluteForm2 exterior_d(const AbsoluteForm1& a, const ScalarTower& tower);
AbsoluteForm2 wedge(const AbsoluteForm1& a, const AbsoluteForm1& b);
/// Matrix exterior derivative dM as a 1-form.
AbsoluteForm1 exterior_d(const RMatrix& m, const ScalarTower& tower);

/// Residue of f(z) dz at pt (finite point or infinity, with dz = -du/u^2).
RF residue(const RF& f, Var z, const Point& pt);
/// res_x(omega): the coefficient matrices of dtau_i after taking residues of
/// P_i dz at pt.
std::map<Var, RMatrix> residue(const AbsoluteForm2& omega, Var z, const Point& pt);

/// Class in Omega^1_K / (Q-span of dlog K^x).
struct BaseFormClass {
    BaseForm representative;
    std::vector<std::pair<Poly, Rational>> log_part;

    bool is_zero() const { return representative.is_zero(); }
    bool operator==(const BaseFormClass& o) const { return representative == o.representative; }
    std::string to_string() const;
    std::string log_part_string() const;
};

/// Reduces a closed base form modulo Q-combinations of dlog of recognized
/// irreducible factors (monomial variables, univariate factors over Q, the
/// extension square and the supplied auxiliary factors).
BaseFormClass dlog_reduce(const BaseForm& omega, const ScalarTower& tower, const std::vector<Poly>& aux = {});

/// Univariate factorization over Q used by dlog_reduce: squarefree blocks
/// split by rational roots; blocks without rational roots are kept whole.
std::vector<Poly> univariate_factors(const Poly& p, Var x);
/// Largest factor of p lying in Q[x] (monic).
Poly univariate_part(const Poly& p, Var x);

}  // namespace gmdet
