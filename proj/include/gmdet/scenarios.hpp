#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmdet/connection.hpp"
#include "gmdet/fourier.hpp"

namespace gmdet {

using Report = nlohmann::ordered_json;

/// Bumped whenever a field changes meaning or disappears.
inline constexpr int kReportVersion = 1;

enum ExitCode : int { Verified = 0, InputError = 1, Refuted = 2, CannotCertifyExit = 3 };

struct ScenarioOptions {
    unsigned seed = 1;     // section perturbation for degenerate cases
    bool timings = false;  // timings make reports non-reproducible, so they are opt-in
};

struct ScenarioOutcome {
    Report report;
    int exit_code = InputError;
};

/// Report skeleton: {"format": "gmdet-report", "version", "scenario", "inputs"}.
Report report_header(const std::string& scenario, const nlohmann::json& inputs);
/// Report for an input error (exit code 1).
ScenarioOutcome error_outcome(const std::string& scenario, const nlohmann::json& inputs, const std::exception& e);

/// Validation, H^1, GM determinant, epsilon side and verdict for a spec.
ScenarioOutcome run_check(const ConnectionSpec& spec, const nlohmann::json& inputs, const ScenarioOptions& opt = {});
/// run_check on the Fourier spec plus the exact closed-form comparison.
ScenarioOutcome run_fourier(const FourierData& data, const nlohmann::json& inputs, const ScenarioOptions& opt = {});
/// The symbolic pipeline; alpha, beta are validated and used only to
/// specialize the final classes.
ScenarioOutcome run_kloosterman(const Rational& alpha, const Rational& beta, const ScenarioOptions& opt = {});

struct PeriodsOptions {
    std::vector<std::string> coeffs;  // a_1 .. a_{m-1} as complex literals
    double tol = 1e-10;
    int draws = 0;
    std::optional<unsigned> seed;  // required when draws > 0
    bool timings = false;
};

/// Period matrix, stationary-phase ratio, constancy over draws, direct
/// integral cross-check (m <= 4) and the exact symbolic checks (m <= 6).
ScenarioOutcome run_periods(const PeriodsOptions& opt);

/// Parses "p/q", "p" or a decimal into an exact rational.
Rational parse_rational(const std::string& text);

}  // namespace gmdet
