#pragma once

#include <string>
#include <vector>

#include "gmdet/epsilon.hpp"

namespace gmdet {

/// One comparison against a golden value. `diff` lists per-differential
/// mismatches ("dv: expected X, got Y") when the check fails.
struct PipelineCheck {
    std::string stage;
    std::string name;
    bool ok = false;
    std::string expected;
    std::string actual;
    std::vector<std::string> diff;
};

/// The Kloosterman computation with alpha, beta kept symbolic throughout:
///   stage0  rank-1 determinants of L1, L2, their product and the 1/2 twist
///   stage1  GM matrix of the fiber connection in t over Q(alpha,beta)(a,b,v)
///   stage2  pullback v = z^(-2) over K(w), w^2 = ab
///   stage3  gauge by M to A_new, its trace and class
///   stage4  local data, section, corrections and both sides on A_new
struct KloostermanResult {
    std::vector<PipelineCheck> checks;
    ConnectionSpec stage1;  // fiber t, base a, b, v
    AbsoluteForm1 gm;       // stage-1 GM matrix on (dt, dt/t)
    ConnectionSpec stage2;
    ConnectionSpec stage3;  // A_new
    VerifyResult verify;    // on A_new

    bool all_checks_pass() const;
    std::vector<const PipelineCheck*> failures() const;
};

KloostermanResult kloosterman_pipeline();

/// Throws precondition unless alpha, beta and alpha - beta are non-integers.
void check_kloosterman_parameters(const Rational& alpha, const Rational& beta);

/// Substitutes alpha, beta by the given rationals.
BaseForm specialize_parameters(const BaseForm& f, const Rational& alpha, const Rational& beta);

}  // namespace gmdet
