#pragma once

#include <string>
#include <vector>

#include "gmdet/derham.hpp"

namespace gmdet {

/// Global section s = F dz of omega(D) with (s) = (G) - (H), plus the units
/// relating s to the default local generators: s = u_x * s_x.
struct GlobalSection {
    RF F;
    UPoly G;
    UPoly H{std::vector<RF>{RF(1)}};  // poles away from D (1 for the default section)
    std::vector<RF> units;            // parallel to spec.D
};

/// The section built from the principal parts 1/(z-x)^{m_x} minus the part
/// at infinity (z^{m_inf-2} dz, or a simple pole at a finite point when
/// m_inf <= 1). Throws degenerate-section when G is not squarefree.
GlobalSection build_global_section(const ConnectionSpec& spec);
/// Section from an arbitrary F; validates exact orders along D and that
/// (s) is reduced.
GlobalSection make_section(const ConnectionSpec& spec, const RF& F);
/// s multiplied by a random unit R1/R2 (monic, equal degree, small integer
/// coefficients) until the divisor is reduced.
GlobalSection perturb_section(const ConnectionSpec& spec, const GlobalSection& s, unsigned seed, int attempts = 64);
/// build_global_section, falling back to perturb_section on degenerate-section.
GlobalSection section_with_retry(const ConnectionSpec& spec, unsigned seed);

/// sum_i Tr_{(G)}(q_i - p dG/dtau_i / dG/dz) dtau_i for detform = p dz + sum q_i dtau_i,
/// minus the same trace over (H).
BaseForm divisor_pushforward(const GlobalSection& s, const AbsoluteForm1& detform, const ScalarTower& tower);

/// res_x Tr(dg g^{-1} ^ A) for the local generator c * s_x at D[index]
/// (s_x the default generator, c a unit at x).
BaseForm local_correction(const ConnectionSpec& spec, std::size_t index, const RF& generator_unit = RF(1));
/// res_x Tr(dg g^{-1} ^ eta), eta = A minus its fiber part.
BaseForm local_correction_eta(const ConnectionSpec& spec, std::size_t index);
/// -res_x(du/u ^ Tr A): the change of local generator by the unit u.
BaseForm unit_adjustment(const ConnectionSpec& spec, std::size_t index, const RF& unit);

struct RhsResult {
    GlobalSection section;
    BaseForm pushforward;
    std::vector<BaseForm> corrections;  // per point of D, unit-adjusted
    BaseForm form;                      // pushforward - sum corrections
    BaseFormClass cls;
};

/// pushforward - sum of corrections without reducing to a class
/// (cls.representative holds the raw form).
RhsResult rhs_form(const ConnectionSpec& spec, const GlobalSection& section, const std::vector<RF>& generator_units = {});
RhsResult rhs_conjecture(const ConnectionSpec& spec);
/// generator_units[i] rescales the local generator at D[i]; the unit
/// adjustment then relates the rescaled generator to the section.
RhsResult rhs_conjecture(const ConnectionSpec& spec, const GlobalSection& section,
                         const std::vector<RF>& generator_units = {});

enum class Verdict { Verified, Refuted, CannotCertify };
const char* to_string(Verdict v);

struct VerifyResult {
    Verdict verdict = Verdict::CannotCertify;
    std::string reason;
    BaseForm lhs_form;  // -Tr GM
    BaseFormClass lhs;
    RhsResult rhs;
    BaseFormClass sum;
    /// False when lhs or rhs alone could not be reduced (their classes then
    /// hold the raw forms); the verdict only needs the sum.
    bool sides_reduced = true;
    std::vector<BasisElement> basis;
};

/// gm_determinant + rhs_conjecture is the zero class. Non-admissible input
/// raises a precondition error; cannot-certify from dlog_reduce is reported
/// as a verdict.
VerifyResult verify_conjecture(const ConnectionSpec& spec, std::optional<DzMonomial> eliminate = std::nullopt,
                               unsigned seed = 1);

}  // namespace gmdet
