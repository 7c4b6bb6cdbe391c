#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmdet/forms.hpp"

namespace gmdet {

struct DivisorPoint {
    Point point;
    int mult = 0;
};
using Divisor = std::vector<DivisorPoint>;

int degree(const Divisor& d);
int multiplicity(const Divisor& d, const Point& p);
std::string to_string(const Divisor& d);

/// Trivial bundle O^r on P^1 over K with nabla = d + A on column vectors.
struct ConnectionSpec {
    ScalarTower tower;
    std::size_t rank = 1;
    AbsoluteForm1 A;
    Divisor D;
    /// Extra irreducible factors dlog_reduce may use for this scenario.
    std::vector<Poly> aux_factors;

    Var z() const { return tower.fiber; }
};

/// Builds a spec; the divisor defaults to minimal_divisor.
ConnectionSpec make_spec(const ScalarTower& tower, const AbsoluteForm1& A, std::optional<Divisor> D = std::nullopt,
                         const std::vector<Point>& hints = {});

bool check_integrability(const ConnectionSpec& spec);

/// Pole order of f at pt as a function (0 when regular).
int pole_order(const RF& f, Var z, const Point& pt);
/// Pole order of the 1-form f dz at pt.
int form_pole_order(const RF& f, Var z, const Point& pt);
int pole_order(const RMatrix& m, Var z, const Point& pt);
int form_pole_order(const RMatrix& m, Var z, const Point& pt);

/// K-rational finite poles (in z) of the given functions; hints are tried for
/// factors of degree > 1 in z. Throws unsupported-point for other poles.
std::vector<Point> finite_poles(const std::vector<RF>& fs, Var z, const std::vector<Point>& hints = {});

Divisor minimal_divisor(const AbsoluteForm1& A, const ScalarTower& tower, const std::vector<Point>& hints = {});

struct AdmissibilityVerdict {
    bool admissible = true;
    std::string reason;
    explicit operator bool() const { return admissible; }
};

AdmissibilityVerdict check_admissible(const ConnectionSpec& spec);

/// Leading coefficient g(x) of the fiber part with respect to the default
/// local generator dz_loc/z_loc^m (du/u^m at infinity).
RMatrix leading_matrix(const ConnectionSpec& spec, const DivisorPoint& x);
/// g as a matrix of functions: A_fiber dz = g * dz_loc / z_loc^m.
RMatrix local_g(const ConnectionSpec& spec, const DivisorPoint& x);

/// [g, C_i] is regular at x for every base direction.
bool commutator_regular(const ConnectionSpec& spec, const DivisorPoint& x);

/// A' = M^{-1} A M + M^{-1} dM. The divisor is recomputed (old points are
/// used as hints).
ConnectionSpec gauge_transform(const ConnectionSpec& spec, const RMatrix& M);
AbsoluteForm1 gauge(const AbsoluteForm1& A, const RMatrix& M, const ScalarTower& tower);

/// Pulls A back along a simultaneous substitution old_var -> expression in
/// the variables of new_tower (variables absent from the map are kept).
AbsoluteForm1 pullback(const AbsoluteForm1& A, const ScalarTower& old_tower, const ScalarTower& new_tower,
                       const std::map<Var, RF>& subst);
ConnectionSpec pullback(const ConnectionSpec& spec, const ScalarTower& new_tower, const std::map<Var, RF>& subst,
                        const std::vector<Point>& hints = {});

/// Simultaneous substitution in a single function.
RF substitute_all(const RF& f, const std::map<Var, RF>& subst);

}  // namespace gmdet
