#include "gmdet/kloosterman.hpp"

#include "gmdet/errors.hpp"
#include "gmdet/expr.hpp"
#include "gmdet/golden.hpp"

namespace gmdet {

namespace {

const Rational kHalf(1, 2);

BaseForm entry_form(const AbsoluteForm1& A, std::size_t i, std::size_t j, Var fiber) {
    std::map<Var, RF> m;
    if (!A.fiber(i, j).is_zero()) m[fiber] = A.fiber(i, j);
    for (const auto& [v, M] : A.base)
        if (!M(i, j).is_zero()) m[v] = M(i, j);
    return BaseForm(m);
}

std::string slot(const std::string& name, std::size_t i, std::size_t j) {
    return name + "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
}

AbsoluteForm1 shift_parameters(const AbsoluteForm1& A, const std::vector<Var>& params, const Rational& by) {
    return A.map([&](const RF& f) {
        RF g = f;
        for (Var p : params) g = g.substitute(p, RF::var(p) + RF(by));
        return g;
    });
}

class Recorder {
public:
    explicit Recorder(std::vector<PipelineCheck>& out) : out_(out) {}

    void stage(std::string s) { stage_ = std::move(s); }

    void form(const std::string& name, const BaseForm& expected, const BaseForm& actual) {
        PipelineCheck c = make(name, expected == actual, expected.to_string(), actual.to_string());
        if (!c.ok) {
            std::map<Var, bool> keys;
            for (const auto& [v, x] : expected.c) keys[v] = true;
            for (const auto& [v, x] : actual.c) keys[v] = true;
            for (const auto& [v, unused] : keys) {
                RF e = expected.coeff(v), a = actual.coeff(v);
                if (e != a)
                    c.diff.push_back("d" + var_name(v) + ": expected " + e.to_string() + ", got " + a.to_string());
            }
        }
        out_.push_back(std::move(c));
    }

    void function(const std::string& name, const RF& expected, const RF& actual) {
        out_.push_back(make(name, expected == actual, expected.to_string(), actual.to_string()));
    }

    void flag(const std::string& name, bool ok, const std::string& expected, const std::string& actual) {
        out_.push_back(make(name, ok, expected, actual));
    }

private:
    PipelineCheck make(const std::string& name, bool ok, std::string e, std::string a) {
        PipelineCheck c;
        c.stage = stage_;
        c.name = name;
        c.ok = ok;
        c.expected = std::move(e);
        c.actual = std::move(a);
        return c;
    }

    std::vector<PipelineCheck>& out_;
    std::string stage_;
};

struct Golden {
    GoldenFile file;
    ParseContext ctx;

    Golden(const std::string& name, const ScalarTower& tower) : file(golden(name)), ctx(tower_context(tower)) {}

    BaseForm form(const std::string& key) const { return BaseForm(parse_form(file.at(key).text, ctx)); }
    RF function(const std::string& key) const { return parse_rf(file.at(key).text, ctx); }
};

/// h1_trace of a rank-1 block on the basis dt (the dt/t block is eliminated).
BaseForm rank1_trace(const AbsoluteForm1& A, const ScalarTower& tower) {
    ConnectionSpec spec = make_spec(tower, A);
    return h1_trace(h1_basis(spec, DzMonomial{0, 1}));
}

AbsoluteForm1 scalar_form(const std::map<Var, RF>& entry, Var fiber) {
    return AbsoluteForm1::from_entries({{entry}}, fiber);
}

}  // namespace

bool KloostermanResult::all_checks_pass() const { return failures().empty(); }

std::vector<const PipelineCheck*> KloostermanResult::failures() const {
    std::vector<const PipelineCheck*> out;
    for (const auto& c : checks)
        if (!c.ok) out.push_back(&c);
    return out;
}

void check_kloosterman_parameters(const Rational& alpha, const Rational& beta) {
    auto integral = [](const Rational& q) { return q.get_den() == 1; };
    if (integral(alpha)) throw Error(ErrorKind::Precondition, "alpha must not be an integer");
    if (integral(beta)) throw Error(ErrorKind::Precondition, "beta must not be an integer");
    if (integral(Rational(alpha - beta))) throw Error(ErrorKind::Precondition, "alpha - beta must not be an integer");
}

BaseForm specialize_parameters(const BaseForm& f, const Rational& alpha, const Rational& beta) {
    return f.substitute(intern("alpha"), RF(alpha)).substitute(intern("beta"), RF(beta));
}

KloostermanResult kloosterman_pipeline() {
    KloostermanResult res;
    Recorder rec(res.checks);
    const Var alpha = intern("alpha"), beta = intern("beta");

    // ---- stage 0: rank-1 blocks
    rec.stage("stage0");
    {
        ScalarTower T1 = ScalarTower::make({"a"}, {"alpha"}, "t");
        ScalarTower T2 = ScalarTower::make({"b"}, {"beta"}, "t");
        ScalarTower Tp = ScalarTower::make({"a", "b"}, {"alpha", "beta"}, "t");
        Golden g1("stage0", T1), g2("stage0", T2), gp("stage0", Tp);
        AbsoluteForm1 L1 = scalar_form(parse_form(g1.file.at("L1").text, g1.ctx), T1.fiber);
        AbsoluteForm1 L2 = scalar_form(parse_form(g2.file.at("L2").text, g2.ctx), T2.fiber);
        BaseForm d1 = rank1_trace(L1, T1), d2 = rank1_trace(L2, T2);
        rec.form("det_L1_exact", g1.form("det_L1_exact"), d1);
        rec.form("det_L1", dlog_reduce(g1.form("det_L1"), T1).representative, dlog_reduce(d1, T1).representative);
        rec.form("det_L2_exact", g2.form("det_L2_exact"), d2);
        rec.form("det_L2", dlog_reduce(g2.form("det_L2"), T2).representative, dlog_reduce(d2, T2).representative);
        rec.form("det_product", dlog_reduce(gp.form("det_product"), Tp).representative,
                 dlog_reduce(d1 + d2, Tp).representative);

        BaseForm s1 = rank1_trace(shift_parameters(L1, {alpha}, -kHalf), T1);
        BaseForm s2 = rank1_trace(shift_parameters(L2, {beta}, -kHalf), T2);
        BaseForm delta = (s1 + s2) - (d1 + d2);
        rec.form("twist_delta", gp.form("twist_delta"), delta);
        ScalarTower Tw = Tp;
        Tw.ext = make_extension("w", (RF::var("a") * RF::var("b")).p());
        RF w = RF::generator(Tw.ext);
        rec.form("twist_delta = dlog w", BaseForm::dlog(w, Tw.base_vars), delta);
        BaseFormClass cls = dlog_reduce(delta, Tw);
        rec.flag("twist_delta is dlog-trivial", cls.is_zero(), "0", cls.to_string());
    }

    // ---- stage 1: GM matrix over the v-line
    rec.stage("stage1");
    ScalarTower T = ScalarTower::make({"a", "b", "v"}, {"alpha", "beta"}, "t");
    Golden g1("stage1", T);
    {
        AbsoluteForm1 A = scalar_form(parse_form(g1.file.at("connection").text, g1.ctx), T.fiber);
        // The dt-part has order 2 at both 0 and infinity.
        Divisor D{{Point::at(RF(0)), 2}, {Point::infinity(), 2}};
        res.stage1 = make_spec(T, A, D);
        auto adm = check_admissible(res.stage1);
        rec.flag("admissible", static_cast<bool>(adm), "admissible", adm ? "admissible" : adm.reason);
        DeRhamPresentation pres = h1_basis(res.stage1, DzMonomial{0, 2});
        RF t = RF::var(T.fiber);
        bool basis_ok = pres.dimension() == 2 && pres.basis_function(0) == std::vector<RF>{RF(1)} &&
                        pres.basis_function(1) == std::vector<RF>{t.inverse()};
        std::string basis;
        for (std::size_t k = 0; k < pres.dimension(); ++k) basis += (k ? ", " : "") + pres.basis_string(k);
        rec.flag("basis", basis_ok, "dt, dt/t", basis);
        res.gm = gauss_manin_matrix(pres);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                rec.form(slot("A", i, j), g1.form(slot("A", i, j)), entry_form(res.gm, i, j, T.fiber));

        ConnectionSpec shifted = make_spec(T, shift_parameters(A, {alpha, beta}, -kHalf), D);
        AbsoluteForm1 gm_shifted = gauss_manin_matrix(h1_basis(shifted, DzMonomial{0, 2}));
        BaseForm delta = entry_form(gm_shifted.trace(), 0, 0, T.fiber) - entry_form(res.gm.trace(), 0, 0, T.fiber);
        rec.form("twist_trace_delta", g1.form("twist_trace_delta"), delta);
        AbsoluteForm1 twisted = res.gm;
        RMatrix half = RMatrix::scalar(2, RF(-kHalf) / RF::var("v"));
        twisted.set_base(intern("v"), twisted.base_part(intern("v")) + half);
        rec.flag("shifted GM = GM - dv/(2v)", gm_shifted == twisted, twisted.to_string(T.fiber),
                 gm_shifted.to_string(T.fiber));
    }

    // ---- stage 2: pullback v = z^(-2) over K(w)
    rec.stage("stage2");
    ScalarTower T2 = ScalarTower::make({"a", "b"}, {"alpha", "beta"}, "z");
    T2.ext = make_extension("w", (RF::var("a") * RF::var("b")).p());
    Golden g2("stage2", T2);
    {
        ConnectionSpec E;
        E.tower = T;
        E.rank = 2;
        E.A = res.gm;
        std::map<Var, RF> sub{{intern("v"), RF::var(T2.fiber).pow(-2)}};
        res.stage2 = pullback(E, T2, sub, {Point::at(RF(0))});
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                rec.form(slot("A", i, j), g2.form(slot("A", i, j)), entry_form(res.stage2.A, i, j, T2.fiber));
    }

    // ---- stage 3: gauge to A_new
    rec.stage("stage3");
    Golden g3("stage3", T2);
    const Var z = T2.fiber;
    {
        RMatrix M(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) M(i, j) = g3.function(slot("M", i, j));
        res.stage3 = gauge_transform(res.stage2, M);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                rec.form(slot("A_new", i, j), g3.form(slot("A_new", i, j)), entry_form(res.stage3.A, i, j, z));
        BaseForm tr = entry_form(res.stage3.A.trace(), 0, 0, z);
        rec.form("trace", g3.form("trace"), tr);
        ScalarTower total = ScalarTower::make({"a", "b", "z"}, {"alpha", "beta"}, "fiber_unused");
        rec.form("trace_class", dlog_reduce(g3.form("trace_class"), total).representative,
                 dlog_reduce(tr, total).representative);
        rec.form("variant.A_new[2,2].delta", g3.form("variant.A_new[2,2].delta"),
                 g3.form("variant.A_new[2,2]") - entry_form(res.stage3.A, 1, 1, z));
        rec.form("variant.trace.delta", g3.form("variant.trace.delta"), g3.form("variant.trace") - tr);
        rec.flag("divisor", to_string(res.stage3.D) == "2*(0) + 1*(infinity)", "2*(0) + 1*(infinity)",
                 to_string(res.stage3.D));
        auto adm = check_admissible(res.stage3);
        rec.flag("admissible", static_cast<bool>(adm), "admissible", adm ? "admissible" : adm.reason);
        rec.flag("integrable", check_integrability(res.stage3), "true",
                 check_integrability(res.stage3) ? "true" : "false");
    }

    // ---- stage 4: local data and the determinant formula on A_new
    rec.stage("stage4");
    Golden g4("stage4", T2);
    {
        const ConnectionSpec& S = res.stage3;
        const DivisorPoint& at0 = S.D.at(0);
        const DivisorPoint& atinf = S.D.at(1);
        RMatrix g0 = local_g(S, at0);
        RMatrix ginf = -leading_matrix(S, atinf);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                RF expected = g4.function(slot("g0", i, j));
                RF d = g0(i, j) - expected;
                bool ok = d.is_zero() || order_at(d, z, at0.point) >= 2;
                rec.flag(slot("g0", i, j) + " mod z^2", ok, expected.to_string(), g0(i, j).to_string());
                rec.function(slot("g_inf", i, j), g4.function(slot("g_inf", i, j)), ginf(i, j));
                std::map<Var, RF> eta;
                for (const auto& [v, m] : S.A.base) {
                    RF c = laurent_expand(m(i, j), z, at0.point, -1).coeff(-1);
                    if (!c.is_zero()) eta[v] = c;
                }
                rec.form(slot("eta0", i, j), g4.form(slot("eta0", i, j)), BaseForm(eta));
            }
        rec.flag("g0(0) invertible", !g0.map([&](const RF& f) { return f.substitute(z, RF()); }).det().is_zero(),
                 "true", "");
        rec.flag("g_inf invertible", !ginf.det().is_zero(), "true", "");

        GlobalSection sec = build_global_section(S);
        rec.function("section", g4.function("section"), sec.F);
        rec.function("section_G", g4.function("section_G"), sec.G.monic().to_rf(z));
        RhsResult rhs = rhs_conjecture(S, sec);
        rec.form("pushforward", g4.form("pushforward"), rhs.pushforward);
        rec.form("pushforward_class", dlog_reduce(g4.form("pushforward_class"), T2).representative,
                 dlog_reduce(rhs.pushforward, T2).representative);
        rec.form("correction_0", g4.form("correction_0"), rhs.corrections.at(0));
        rec.form("correction_0 (eta only)", g4.form("correction_0"), local_correction_eta(S, 0));
        rec.form("correction_0_class", dlog_reduce(g4.form("correction_0_class"), T2).representative,
                 dlog_reduce(rhs.corrections.at(0), T2).representative);
        rec.form("correction_inf", g4.form("correction_inf"), rhs.corrections.at(1));
        rec.form("rhs", g4.form("rhs"), rhs.form);
        rec.form("rhs_class", dlog_reduce(g4.form("rhs_class"), T2).representative, rhs.cls.representative);
        rec.function("variant.g0[2,2].delta", g4.function("variant.g0[2,2].delta"),
                     g4.function("variant.g0[2,2]") - g0(1, 1));
        rec.function("variant.g_inf[2,2].delta", g4.function("variant.g_inf[2,2].delta"),
                     g4.function("variant.g_inf[2,2]") - ginf(1, 1));
        rec.form("variant.correction_0.delta", g4.form("variant.correction_0.delta"),
                 g4.form("variant.correction_0") - rhs.corrections.at(0));

        res.verify = verify_conjecture(S);
        rec.flag("verdict", res.verify.verdict == Verdict::Verified, "verified", to_string(res.verify.verdict));
        rec.form("lhs_class", dlog_reduce(g4.form("lhs_class"), T2).representative, res.verify.lhs.representative);
    }
    return res;
}

}  // namespace gmdet
