#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gmdet/errors.hpp"
#include "gmdet/ingest.hpp"
#include "gmdet/scenarios.hpp"

using namespace gmdet;

namespace {

struct Common {
    std::string report_path;
    bool json = false;
    bool timings = false;
    unsigned seed = 1;
};

void add_common(CLI::App* sub, Common& c, bool with_seed) {
    sub->add_option("--report", c.report_path, "Write the JSON report to this file");
    sub->add_flag("--json", c.json, "Print the JSON report to stdout instead of the summary");
    sub->add_flag("--timings", c.timings, "Include wall-clock timings in the report");
    if (with_seed) sub->add_option("--seed", c.seed, "Seed for section perturbation in degenerate cases");
}

std::string field(const Report& r, const char* key) {
    if (!r.contains(key) || r[key].is_null()) return "-";
    return r[key].is_string() ? r[key].get<std::string>() : r[key].dump();
}

void print_verification(const Report& r, std::ostream& os) {
    os << "h1 dimension: " << field(r, "h1_dimension") << '\n';
    os << "lhs: " << field(r["lhs"], "form") << '\n';
    if (r["lhs"].contains("class") && !r["lhs"]["class"].is_null())
        os << "lhs class: " << field(r["lhs"], "class") << "  log part " << field(r["lhs"], "log_part") << '\n';
    os << "rhs: " << field(r["rhs"], "form") << '\n';
    if (r["rhs"].contains("class") && !r["rhs"]["class"].is_null())
        os << "rhs class: " << field(r["rhs"], "class") << "  log part " << field(r["rhs"], "log_part") << '\n';
    for (const auto& c : r["per_point_corrections"])
        os << "correction at " << c["point"].get<std::string>() << ": " << c["correction"].get<std::string>() << '\n';
    os << "verdict: " << field(r, "verdict");
    if (r.contains("reason") && !r["reason"].get<std::string>().empty()) os << " (" << r["reason"].get<std::string>() << ")";
    os << '\n';
}

std::string cstr(const Report& z) {
    std::ostringstream os;
    os << std::setprecision(12) << z[0].get<double>() << (z[1].get<double>() < 0 ? " - " : " + ")
       << std::abs(z[1].get<double>()) << "i";
    return os.str();
}

void print_summary(const Report& r, std::ostream& os) {
    const std::string sc = r["scenario"];
    if (r.contains("error")) {
        os << "error: " << r["error"]["message"].get<std::string>() << '\n';
        return;
    }
    if (sc == "check" || sc == "fourier") {
        print_verification(r, os);
        if (sc == "fourier")
            os << "closed form: " << field(r, "closed_form") << "  match " << field(r, "closed_form_matches") << '\n';
    } else if (sc == "kloosterman") {
        for (const auto& c : r["checks"]) {
            os << (c["ok"].get<bool>() ? "ok   " : "FAIL ") << "stage " << field(c, "stage") << " "
               << c["name"].get<std::string>() << '\n';
            if (!c["ok"].get<bool>() && c.contains("diff")) os << "     " << c["diff"].get<std::string>() << '\n';
        }
        print_verification(r, os);
        os << "specialized lhs: " << field(r["specialized"], "lhs") << '\n';
        os << "specialized rhs: " << field(r["specialized"], "rhs") << '\n';
    } else if (sc == "periods") {
        os << "m = " << r["m"].get<int>() << '\n';
        os << "period matrix (entry  |  error):\n";
        for (std::size_t i = 0; i < r["period_matrix"].size(); ++i) {
            for (std::size_t j = 0; j < r["period_matrix"][i].size(); ++j)
                os << "  " << std::setw(40) << std::left << cstr(r["period_matrix"][i][j]) << std::right
                   << std::setprecision(2) << std::scientific << r["period_error"][i][j].get<double>()
                   << std::defaultfloat;
            os << '\n';
        }
        os << "det P: " << cstr(r["det"]) << '\n';
        os << "stationary phase: " << cstr(r["stationary_phase_value"]) << '\n';
        os << "ratio: " << cstr(r["ratio"]) << "  (re ~ " << field(r["likely_rational"], "re") << ", im ~ "
           << field(r["likely_rational"], "im") << ")\n";
        if (r.contains("gaussian_oracle"))
            os << "gaussian oracle relative error: " << r["gaussian_oracle"]["relative_error"].get<double>() << '\n';
        if (r.contains("critical_sum"))
            os << "critical sum: " << r["critical_sum"]["exact"].get<std::string>() << "  relative difference "
               << r["critical_sum"]["relative_difference"].get<double>() << '\n';
        if (r.contains("direct_integral"))
            os << "direct integral relative difference: "
               << r["direct_integral"]["relative_difference"].get<double>() << '\n';
        if (r.contains("constancy"))
            os << "ratio deviation over draws: " << r["constancy"]["max_relative_deviation"].get<double>() << '\n';
        if (r.contains("symbolic")) os << "symbolic checks: " << (r["symbolic"]["pass"].get<bool>() ? "ok" : "FAIL") << '\n';
        os << "result: " << (r["pass"].get<bool>() ? "pass" : "FAIL") << '\n';
    }
}

int finish(const ScenarioOutcome& out, const Common& c) {
    if (!c.report_path.empty()) {
        std::ofstream f(c.report_path);
        if (!f) {
            std::cerr << "cannot write " << c.report_path << '\n';
            return InputError;
        }
        f << out.report.dump(2) << '\n';
    }
    if (c.json)
        std::cout << out.report.dump(2) << '\n';
    else
        print_summary(out.report, out.exit_code == InputError ? std::cerr : std::cout);
    return out.exit_code;
}

template <class F>
int guarded(const std::string& scenario, const nlohmann::json& inputs, const Common& c, F&& run) {
    ScenarioOutcome out;
    try {
        out = run();
    } catch (const std::exception& e) {
        out = error_outcome(scenario, inputs, e);
    }
    return finish(out, c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gauss-Manin determinants and epsilon-connection checks"};
    app.require_subcommand(1);

    Common common;
    std::string spec_file, fourier_file, alpha_text, beta_text;

    auto* check = app.add_subcommand("check", "Verify the determinant conjecture for a connection spec");
    check->add_option("spec", spec_file, "Connection spec (JSON)")->required();
    add_common(check, common, true);

    auto* fourier = app.add_subcommand("fourier", "Fourier transform instance with closed-form comparison");
    fourier->add_option("psi", fourier_file, "Fourier data (JSON)")->required();
    add_common(fourier, common, true);

    auto* kl = app.add_subcommand("kloosterman", "Kloosterman pipeline with symbolic parameters");
    kl->add_option("--alpha", alpha_text, "Rational parameter, e.g. 1/3")->required();
    kl->add_option("--beta", beta_text, "Rational parameter, e.g. 1/5")->required();
    add_common(kl, common, false);

    PeriodsOptions popt;
    std::optional<unsigned> pseed;
    auto* per = app.add_subcommand("periods", "Period matrix of exp(f) and the stationary-phase ratio");
    per->add_option("--coeffs", popt.coeffs, "a_1,...,a_{m-1} as complex literals re+im*i")
        ->required()
        ->delimiter(',');
    per->add_option("--tol", popt.tol, "Quadrature tolerance")->capture_default_str();
    per->add_option("--draws", popt.draws, "Number of random draws for the constancy test")->capture_default_str();
    per->add_option("--seed", pseed, "RNG seed, required with --draws");
    add_common(per, common, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : InputError;
    }

    ScenarioOptions opt{common.seed, common.timings};

    if (*check) {
        nlohmann::json inputs = {{"spec", spec_file}};
        return guarded("check", inputs, common, [&] {
            ConnectionSpec spec = load_spec(read_json_file(spec_file));
            return run_check(spec, inputs, opt);
        });
    }
    if (*fourier) {
        nlohmann::json inputs = {{"psi", fourier_file}};
        return guarded("fourier", inputs, common, [&] {
            FourierData d = load_fourier(read_json_file(fourier_file));
            return run_fourier(d, inputs, opt);
        });
    }
    if (*kl) {
        nlohmann::json inputs = {{"alpha", alpha_text}, {"beta", beta_text}};
        return guarded("kloosterman", inputs, common, [&] {
            return run_kloosterman(parse_rational(alpha_text), parse_rational(beta_text), opt);
        });
    }
    popt.seed = pseed;
    popt.timings = common.timings;
    nlohmann::json inputs = {{"coeffs", popt.coeffs}};
    return guarded("periods", inputs, common, [&] { return run_periods(popt); });
}
