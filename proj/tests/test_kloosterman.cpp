#include <doctest.h>

#include "gmdet/derham.hpp"
#include "gmdet/errors.hpp"
#include "gmdet/golden.hpp"
#include "gmdet/kloosterman.hpp"
#include "support.hpp"

using namespace gmdet;
using gmdet::testing::base_form;

namespace {

const KloostermanResult& pipeline() {
    static const KloostermanResult r = kloosterman_pipeline();
    return r;
}

}  // namespace

TEST_CASE("golden file parser") {
    GoldenFile f("demo", "# comment\nx := a+b\ny = 2*x # trailing\n\nz = x^2/x\n");
    REQUIRE(f.entries().size() == 2);
    CHECK(f.at("y").text == "2*(a+b)");
    CHECK(f.at("y").line == 3);
    CHECK(f.at("z").text == "(a+b)^2/(a+b)");
    CHECK(f.contains("z"));
    CHECK_FALSE(f.contains("x"));
    CHECK_THROWS_AS(f.at("missing"), Error);
}

TEST_CASE("golden macros respect word boundaries") {
    GoldenFile f("demo", "a := 2\nv = a*ab + a\n");
    CHECK(f.at("v").text == "(2)*ab + (2)");
}

TEST_CASE("golden parser errors name the file and line") {
    try {
        GoldenFile("bad", "x = 1\nx = 2\n");
        FAIL("expected malformed-input");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedInput);
        CHECK(std::string(e.what()).find("bad.golden:2") != std::string::npos);
    }
    CHECK_THROWS_AS(GoldenFile("bad", "no separator here\n"), Error);
    CHECK_THROWS_AS(golden("no_such_stage"), Error);
}

TEST_CASE("all golden files are embedded and parse") {
    for (const char* name : {"stage0", "stage1", "stage2", "stage3", "stage4"}) {
        CHECK(embedded_golden_files().count(name) == 1);
        CHECK_FALSE(golden(name).entries().empty());
    }
}

TEST_CASE("Kloosterman pipeline matches every golden value") {
    const auto& r = pipeline();
    for (const auto* f : r.failures()) {
        std::string diff;
        for (const auto& d : f->diff) diff += "\n  " + d;
        FAIL_CHECK(f->stage << " " << f->name << ": expected " << f->expected << ", got " << f->actual << diff);
    }
    CHECK(r.all_checks_pass());
    CHECK(r.checks.size() > 40);
}

TEST_CASE("Kloosterman final classes, independent of the golden files") {
    const auto& r = pipeline();
    const ScalarTower& T = r.stage3.tower;
    CHECK(r.verify.verdict == Verdict::Verified);
    CHECK(r.verify.lhs.representative == base_form("2*alpha*da/a + 2*beta*db/b", T));
    CHECK(r.verify.rhs.cls.representative == base_form("-2*alpha*da/a - 2*beta*db/b", T));
    CHECK(to_string(r.stage3.D) == "2*(0) + 1*(infinity)");
    CHECK(check_admissible(r.stage3));
    CHECK(check_integrability(r.stage3));
    // correction at 0 is (alpha + beta)(da/a + db/b) modulo dlog
    std::size_t zero = r.stage3.D[0].point.infinite ? 1 : 0;
    BaseForm expected = base_form("(alpha+beta)*(da/a + db/b)", T);
    CHECK(dlog_reduce(r.verify.rhs.corrections[zero] - expected, T).is_zero());
}

TEST_CASE("Kloosterman stage one has rank two cohomology") {
    const auto& r = pipeline();
    CHECK(h0_flat_sections(r.stage1) == 0);
    CHECK(r.gm.rank == 2);
}

TEST_CASE("Kloosterman parameters") {
    CHECK_NOTHROW(check_kloosterman_parameters(Rational(1, 3), Rational(1, 5)));
    CHECK_THROWS_AS(check_kloosterman_parameters(Rational(1), Rational(1, 5)), Error);
    CHECK_THROWS_AS(check_kloosterman_parameters(Rational(1, 3), Rational(-2)), Error);
    CHECK_THROWS_AS(check_kloosterman_parameters(Rational(4, 3), Rational(1, 3)), Error);

    auto T = ScalarTower::make({"a", "b"}, {"alpha", "beta"});
    BaseForm f = specialize_parameters(base_form("-2*alpha*da/a - 2*beta*db/b", T), Rational(1, 3), Rational(1, 5));
    CHECK(f == base_form("-2/3*da/a - 2/5*db/b", T));
    BaseFormClass c = dlog_reduce(f, T);
    CHECK(c.is_zero());
    CHECK(c.log_part_string() == "[(a, -2/3), (b, -2/5)]");
}
