#include "gmdet/scenarios.hpp"

#include <chrono>
#include <cmath>

#include "gmdet/epsilon.hpp"
#include "gmdet/errors.hpp"
#include "gmdet/expr.hpp"
#include "gmdet/kloosterman.hpp"
#include "gmdet/periods.hpp"

namespace gmdet {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Report class_json(const BaseFormClass& c) {
    Report r;
    r["class"] = c.to_string();
    r["log_part"] = c.log_part_string();
    return r;
}

Report side_json(const BaseForm& form, const BaseFormClass& cls, bool reduced) {
    Report r;
    r["form"] = form.to_string();
    if (reduced) {
        r["class"] = cls.to_string();
        r["log_part"] = cls.log_part_string();
    } else {
        r["class"] = nullptr;
    }
    return r;
}

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Verified: return Verified;
        case Verdict::Refuted: return Refuted;
        case Verdict::CannotCertify: return CannotCertifyExit;
    }
    return InputError;
}

Report tower_json(const ScalarTower& t) {
    Report r;
    std::vector<std::string> base, params;
    for (Var v : t.base_vars) base.push_back(var_name(v));
    for (Var v : t.params) params.push_back(var_name(v));
    r["base_vars"] = base;
    r["params"] = params;
    r["fiber"] = var_name(t.fiber);
    if (t.ext) r["extension"] = {{"gen", var_name(t.ext->gen)}, {"square", t.ext->square.to_string()}};
    return r;
}

/// Verification part shared by check and fourier.
void fill_verification(Report& rep, const ConnectionSpec& spec, const VerifyResult& v) {
    rep["h1_dimension"] = v.basis.size();
    rep["lhs"] = side_json(v.lhs_form, v.lhs, v.sides_reduced);
    rep["rhs"] = side_json(v.rhs.form, v.rhs.cls, v.sides_reduced);
    if (v.verdict == Verdict::CannotCertify)
        rep["sum"] = nullptr;
    else
        rep["sum"] = class_json(v.sum);
    rep["verdict"] = to_string(v.verdict);
    rep["reason"] = v.reason;
    Report corr = Report::array();
    for (std::size_t i = 0; i < spec.D.size() && i < v.rhs.corrections.size(); ++i)
        corr.push_back({{"point", spec.D[i].point.to_string()},
                        {"mult", spec.D[i].mult},
                        {"correction", v.rhs.corrections[i].to_string()}});
    rep["per_point_corrections"] = corr;
    rep["pushforward"] = v.rhs.pushforward.to_string();
    rep["section"] = v.rhs.section.F.to_string();
    rep["section_G"] = v.rhs.section.G.to_string(spec.z());
    rep["section_H"] = v.rhs.section.H.to_string(spec.z());
}

Report spec_json(const ConnectionSpec& spec) {
    Report r;
    r["tower"] = tower_json(spec.tower);
    r["rank"] = spec.rank;
    r["matrix"] = spec.A.to_string(spec.z());
    r["divisor"] = to_string(spec.D);
    return r;
}

/// Verifies after the admissibility and integrability preconditions.
VerifyResult checked_verify(const ConnectionSpec& spec, const ScenarioOptions& opt) {
    if (!check_integrability(spec)) throw Error(ErrorKind::Precondition, "connection is not integrable");
    if (auto adm = check_admissible(spec); !adm) throw Error(ErrorKind::Precondition, "not_admissible: " + adm.reason);
    return verify_conjecture(spec, std::nullopt, opt.seed);
}

}  // namespace

Report report_header(const std::string& scenario, const nlohmann::json& inputs) {
    Report r;
    r["format"] = "gmdet-report";
    r["version"] = kReportVersion;
    r["scenario"] = scenario;
    r["inputs"] = inputs;
    return r;
}

ScenarioOutcome error_outcome(const std::string& scenario, const nlohmann::json& inputs, const std::exception& e) {
    ScenarioOutcome out;
    out.report = report_header(scenario, inputs);
    std::string kind = "error";
    if (const auto* ge = dynamic_cast<const Error*>(&e)) kind = to_string(ge->kind());
    out.report["error"] = {{"kind", kind}, {"message", e.what()}};
    out.report["exit_code"] = InputError;
    out.exit_code = InputError;
    return out;
}

ScenarioOutcome run_check(const ConnectionSpec& spec, const nlohmann::json& inputs, const ScenarioOptions& opt) {
    ScenarioOutcome out;
    auto t0 = Clock::now();
    out.report = report_header("check", inputs);
    out.report["spec"] = spec_json(spec);
    VerifyResult v = checked_verify(spec, opt);
    fill_verification(out.report, spec, v);
    out.exit_code = exit_for(v.verdict);
    out.report["exit_code"] = out.exit_code;
    if (opt.timings) out.report["timings_ms"] = {{"total", ms_since(t0)}};
    return out;
}

ScenarioOutcome run_fourier(const FourierData& data, const nlohmann::json& inputs, const ScenarioOptions& opt) {
    ScenarioOutcome out;
    auto t0 = Clock::now();
    out.report = report_header("fourier", inputs);
    ConnectionSpec spec = fourier_spec(data);
    out.report["spec"] = spec_json(spec);
    out.report["m_inf"] = data.m_inf() <= 1 ? std::string("<=1") : std::to_string(data.m_inf());
    VerifyResult v = checked_verify(spec, opt);
    fill_verification(out.report, spec, v);
    BaseForm closed = fourier_closed_form(data);
    bool match = closed == v.lhs_form;
    out.report["closed_form"] = closed.to_string();
    out.report["closed_form_matches"] = match;
    out.exit_code = exit_for(v.verdict);
    if (!match && out.exit_code == Verified) out.exit_code = Refuted;
    out.report["exit_code"] = out.exit_code;
    if (opt.timings) out.report["timings_ms"] = {{"total", ms_since(t0)}};
    return out;
}

ScenarioOutcome run_kloosterman(const Rational& alpha, const Rational& beta, const ScenarioOptions& opt) {
    check_kloosterman_parameters(alpha, beta);
    ScenarioOutcome out;
    auto t0 = Clock::now();
    out.report = report_header("kloosterman", {{"alpha", alpha.get_str()}, {"beta", beta.get_str()}});
    KloostermanResult k = kloosterman_pipeline();

    Report checks = Report::array();
    for (const auto& c : k.checks) {
        Report j;
        j["stage"] = c.stage;
        j["name"] = c.name;
        j["ok"] = c.ok;
        j["expected"] = c.expected;
        j["actual"] = c.actual;
        if (!c.diff.empty()) j["diff"] = c.diff;
        checks.push_back(std::move(j));
    }
    out.report["checks"] = checks;
    out.report["checks_passed"] = k.all_checks_pass();
    out.report["spec"] = spec_json(k.stage3);
    fill_verification(out.report, k.stage3, k.verify);

    // Specialization happens only here, after the symbolic comparison.
    const ScalarTower& T = k.stage3.tower;
    BaseForm lhs = specialize_parameters(k.verify.lhs.representative, alpha, beta);
    BaseForm rhs = specialize_parameters(k.verify.rhs.cls.representative, alpha, beta);
    Report spec;
    spec["lhs"] = lhs.to_string();
    spec["rhs"] = rhs.to_string();
    spec["rhs_class"] = class_json(dlog_reduce(rhs, T));
    out.report["specialized"] = spec;

    out.exit_code = exit_for(k.verify.verdict);
    if (!k.all_checks_pass() && out.exit_code == Verified) out.exit_code = Refuted;
    out.report["exit_code"] = out.exit_code;
    if (opt.timings) out.report["timings_ms"] = {{"total", ms_since(t0)}};
    return out;
}

// ------------------------------------------------------------------ periods

namespace {

using periods::cplx;

Report cjson(cplx z) { return Report::array({z.real(), z.imag()}); }

cplx to_complex(const RF& x) {
    if (!x.d().is_constant() || !x.p().is_constant() || !x.q().is_constant())
        throw Error(ErrorKind::Domain, "not a Gaussian rational: " + x.to_string());
    double d = Rational(x.d().constant_term()).get_d();
    return {Rational(x.p().constant_term()).get_d() / d, Rational(x.q().constant_term()).get_d() / d};
}

Report symbolic_checks(int m) {
    Report r;
    auto br = periods::symmetric_bridge(m);
    r["newton_identities"] = br.newton_ok;
    r["jacobian_sign"] = br.jacobian_sign;
    auto ce = periods::critical_expansion(m);
    r["gradient_vanishes"] = ce.gradient_vanishes;
    auto tri = periods::triangular_change_of_variables(ce.G, ce.t);
    r["triangular_identity"] = tri.identity;
    r["unit_jacobian"] = tri.unit_jacobian;
    auto a = periods::coefficient_vars(m);
    RF scale = (RF(static_cast<long>(m - 1)) * RF::var(a.back())).pow(m - 2);
    RF ratio = tri.hessian_det / scale;
    r["hessian_ratio"] = ratio.to_string();
    r["hessian_ratio_rational"] = ratio.is_constant() && !ratio.is_zero();
    r["pass"] = br.newton_ok && br.jacobian_sign != 0 && ce.gradient_vanishes && tri.identity && tri.unit_jacobian &&
                ratio.is_constant() && !ratio.is_zero();
    return r;
}

}  // namespace

ScenarioOutcome run_periods(const PeriodsOptions& opt) {
    if (opt.draws < 0) throw Error(ErrorKind::MalformedInput, "--draws must be non-negative");
    if (opt.draws > 0 && !opt.seed) throw Error(ErrorKind::MalformedInput, "--seed is required when --draws > 0");
    if (!(opt.tol > 0)) throw Error(ErrorKind::MalformedInput, "--tol must be positive");
    auto t0 = Clock::now();
    nlohmann::json inputs = {{"coeffs", opt.coeffs}, {"tol", opt.tol}, {"draws", opt.draws}};
    if (opt.seed) inputs["seed"] = *opt.seed;

    std::vector<cplx> coeffs;
    std::vector<RF> exact;
    bool gaussian = true;
    for (const auto& c : opt.coeffs) {
        coeffs.push_back(periods::parse_complex(c));
        try {
            exact.push_back(periods::parse_gaussian_rational(c));
        } catch (const Error&) {
            gaussian = false;
        }
    }
    periods::ExpPolynomial f = periods::ExpPolynomial::make(coeffs);
    const int m = f.m();

    ScenarioOutcome out;
    out.report = report_header("periods", inputs);
    Report& rep = out.report;
    rep["m"] = m;
    rep["rays"] = periods::rays(f);

    periods::PeriodResult pr = periods::compute_periods(f, opt.tol);
    Report P = Report::array(), E = Report::array();
    for (Eigen::Index i = 0; i < pr.matrix.P.rows(); ++i) {
        Report row = Report::array(), erow = Report::array();
        for (Eigen::Index j = 0; j < pr.matrix.P.cols(); ++j) {
            row.push_back(cjson(pr.matrix.P(i, j)));
            erow.push_back(pr.matrix.error(i, j));
        }
        P.push_back(row);
        E.push_back(erow);
    }
    rep["period_matrix"] = P;
    rep["period_error"] = E;
    rep["extended_precision"] = pr.matrix.extended;
    rep["det"] = cjson(pr.det);
    Report cv = Report::array();
    for (cplx v : pr.critical_values) cv.push_back(cjson(v));
    rep["critical_values"] = cv;
    rep["stationary_phase_value"] = cjson(pr.closed_form);
    rep["ratio"] = cjson(pr.ratio);
    rep["ratio_abs"] = std::abs(pr.ratio);
    rep["likely_rational"] = {{"re", periods::likely_rational(pr.ratio.real())},
                              {"im", periods::likely_rational(pr.ratio.imag())}};
    bool pass = true;

    if (m == 3) {
        cplx a1 = f.a[0], a2 = f.a[1];
        double oracle = std::abs(std::exp(-a1 * a1 / (4.0 * a2))) * std::sqrt(M_PI / std::abs(a2));
        double rel = std::abs(std::abs(pr.det) - oracle) / oracle;
        rep["gaussian_oracle"] = {{"abs_det", std::abs(pr.det)}, {"oracle", oracle}, {"relative_error", rel}};
        pass = pass && rel < 1e-8;
    }
    if (gaussian) {
        cplx sym = to_complex(periods::exact_critical_sum(exact));
        cplx num = 0;
        for (cplx b : periods::critical_points(f)) num += f.eval(b);
        double diff = std::abs(sym - num) / std::max(1.0, std::abs(sym));
        rep["critical_sum"] = {{"exact", periods::exact_critical_sum(exact).to_string()},
                               {"numeric", cjson(num)},
                               {"relative_difference", diff}};
        pass = pass && diff < 1e-12;
    }
    if (m <= 4) {
        cplx direct = periods::direct_multiple_integral(f, opt.tol);
        double rel = std::abs(direct - pr.det) / std::abs(pr.det);
        rep["direct_integral"] = {{"value", cjson(direct)}, {"relative_difference", rel}};
        pass = pass && rel < 1e-5;
    }
    if (opt.draws > 0) {
        auto cr = periods::ratio_constancy(f, opt.draws, *opt.seed, opt.tol);
        Report ratios = Report::array();
        for (cplx q : cr.ratios) ratios.push_back(cjson(q));
        bool ok = cr.max_relative_deviation < 1e-6;
        rep["constancy"] = {{"ratios", ratios}, {"max_relative_deviation", cr.max_relative_deviation}, {"pass", ok}};
        pass = pass && ok;
    }
    if (m <= 6) {
        Report sym = symbolic_checks(m);
        pass = pass && sym["pass"].get<bool>();
        rep["symbolic"] = sym;
    }
    rep["pass"] = pass;
    out.exit_code = pass ? Verified : Refuted;
    rep["exit_code"] = out.exit_code;
    if (opt.timings) rep["timings_ms"] = {{"total", ms_since(t0)}};
    return out;
}

Rational parse_rational(const std::string& text) {
    RF v = parse_rf(text, free_context());
    if (!v.is_constant()) throw Error(ErrorKind::MalformedInput, "expected a rational number, got " + text);
    return v.constant_value();
}

}  // namespace gmdet
