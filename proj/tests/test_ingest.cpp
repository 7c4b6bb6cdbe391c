#include <doctest.h>

#include <string>

#include "gmdet/errors.hpp"
#include "gmdet/ingest.hpp"
#include "gmdet/scenarios.hpp"

using namespace gmdet;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(GMDET_TEST_DATA) + "/" + name; }

/// Message of the malformed-input error thrown by f, or "" when nothing is thrown.
template <class F>
std::string malformed(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedInput);
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("JSON syntax errors carry line and column") {
    std::string msg = malformed([] { parse_json_text("{\n  \"rank\": 1,\n  \"matrix\": [[\"dz\"]\n}", "in.json"); });
    CHECK(contains(msg, "in.json:4:1: invalid JSON"));
    msg = malformed([] { parse_json_text("{\"rank\": 1,,}", "x"); });
    CHECK(contains(msg, "x:1:12:"));
    CHECK(contains(malformed([] { read_json_file(data("malformed.json")); }), "malformed.json:5:1"));
    CHECK(contains(malformed([] { read_json_file(data("nope.json")); }), "cannot open"));
}

TEST_CASE("spec field errors name the JSON pointer") {
    auto spec_error = [](const char* text) { return malformed([&] { load_spec(json::parse(text)); }); };
    CHECK(contains(spec_error(R"({"rank": 1, "matrix": [["dz"]]})"), "/base_vars: missing required field"));
    CHECK(contains(spec_error(R"({"base_vars": ["t"], "rank": 0, "matrix": []})"), "/rank: expected a positive integer"));
    CHECK(contains(spec_error(R"({"base_vars": ["t"], "rank": 2, "matrix": [["dz", 0]]})"), "at /matrix: expected 2 rows"));
    CHECK(contains(spec_error(R"({"base_vars": ["t"], "rank": 2, "matrix": [["dz", 0], ["dz"]]})"),
                   "at /matrix/1: expected 2 entries"));
    CHECK(contains(spec_error(R"({"base_vars": ["t"], "rank": 2, "matrix": [["dz", "dz/(z-"], [0, "dz"]]})"),
                   "at /matrix/0/1:"));
    CHECK(contains(spec_error(R"({"base_vars": ["t"], "rank": 1, "matrix": [[1.5]]})"),
                   "at /matrix/0/0: expected a string or an integer"));
    CHECK(contains(spec_error(R"({"base_vars": ["t"], "rank": 1, "matrix": [["dz/z"]],
                                  "divisor": [{"point": "0", "mult": 0}]})"),
                   "at /divisor/0/mult"));
    CHECK(contains(spec_error(R"({"base_vars": ["t"], "rank": 1, "matrix": [["dz/z"]],
                                  "divisor": [{"point": "z", "mult": 1}]})"),
                   "at /divisor/0/point: point must not involve the fiber"));
    CHECK(contains(spec_error(R"({"base_vars": ["t"], "rank": 1, "matrix": [["dz/z"]],
                                  "divisor": [{"point": "0", "mult": 1}, {"point": "0", "mult": 2}]})"),
                   "at /divisor/1/point: repeated point"));
}

TEST_CASE("fourier field errors name the JSON pointer") {
    auto fourier_error = [](const char* text) { return malformed([&] { load_fourier(json::parse(text)); }); };
    CHECK(contains(fourier_error(R"({"rank": 1})"), "/poles: missing required field"));
    CHECK(contains(fourier_error(R"({"rank": 1, "poles": [{"point": "t", "g": [[[1]]]}]})"),
                   "at /poles/0/point: expected a rational number"));
    CHECK(contains(fourier_error(R"({"rank": 2, "poles": [{"point": "0", "g": [[[1]]]}]})"),
                   "at /poles/0/g/0: expected 2 rows"));
    CHECK(contains(fourier_error(R"({"rank": 1, "poles": [{"point": "0", "g": [[["x"]]]}]})"),
                   "at /poles/0/g/0/0/0"));
    CHECK(contains(fourier_error(R"({"rank": 1, "poles": [{"point": "0", "g": []}]})"),
                   "at /poles/0/g: expected a nonempty array"));
}

TEST_CASE("loaders accept the example files") {
    ConnectionSpec spec = load_spec(read_json_file(data("fourier_rank1.json")));
    CHECK(spec.rank == 1);
    CHECK(to_string(spec.D) == "1*(1) + 2*(infinity)");

    FourierData d = load_fourier(read_json_file(data("fourier_rank2_minf2.json")));
    CHECK(d.rank == 2);
    CHECK(d.poles.size() == 2);
    CHECK(d.m_inf() == 2);

    ConnectionSpec e = load_spec(read_json_file(data("empty_divisor.json")));
    CHECK(e.D.empty());
}

TEST_CASE("scenario exit codes") {
    ScenarioOutcome ok = run_check(load_spec(read_json_file(data("fourier_rank1.json"))), {});
    CHECK(ok.exit_code == Verified);
    CHECK(ok.report["verdict"] == "verified");

    auto failing = [](const std::string& file) {
        try {
            return run_check(load_spec(read_json_file(data(file))), {});
        } catch (const std::exception& e) {
            return error_outcome("check", {{"spec", file}}, e);
        }
    };
    ScenarioOutcome na = failing("not_admissible.json");
    CHECK(na.exit_code == InputError);
    CHECK(contains(na.report["error"]["message"].get<std::string>(), "not_admissible"));
    CHECK(na.report["error"]["kind"] == "precondition");
    CHECK(failing("empty_divisor.json").exit_code == InputError);

    PeriodsOptions degenerate;
    degenerate.coeffs = {"1", "0"};
    CHECK_THROWS_AS(run_periods(degenerate), Error);

    PeriodsOptions unseeded;
    unseeded.coeffs = {"1", "0", "1"};
    unseeded.draws = 2;
    CHECK(contains(malformed([&] { run_periods(unseeded); }), "--seed is required"));

    PeriodsOptions bad_tol;
    bad_tol.coeffs = {"0", "1"};
    bad_tol.tol = 0;
    CHECK_THROWS_AS(run_periods(bad_tol), Error);

    CHECK_THROWS_AS(run_kloosterman(parse_rational("2"), parse_rational("1/5")), Error);
    CHECK_THROWS_AS(run_kloosterman(parse_rational("1/3"), parse_rational("4/3")), Error);
}

TEST_CASE("parse_rational") {
    CHECK(parse_rational("1/3") == Rational(1, 3));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK_THROWS_AS(parse_rational("t"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
}

TEST_CASE("reports are deterministic and versioned") {
    FourierData d = load_fourier(read_json_file(data("fourier_rank2_minf2.json")));
    json inputs = {{"psi", "fourier_rank2_minf2.json"}};
    Report a = run_fourier(d, inputs).report, b = run_fourier(d, inputs).report;
    CHECK(a.dump() == b.dump());
    CHECK(a["format"] == "gmdet-report");
    CHECK(a["version"] == kReportVersion);
    CHECK(a["closed_form_matches"] == true);
    CHECK_FALSE(a.contains("timings_ms"));

    ScenarioOptions timed;
    timed.timings = true;
    CHECK(run_fourier(d, inputs, timed).report.contains("timings_ms"));
}
