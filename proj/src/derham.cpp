#include "gmdet/derham.hpp"

#include <exception>

#include "gmdet/errors.hpp"

namespace gmdet {

DeRhamPresentation::DeRhamPresentation(ConnectionSpec spec, std::optional<DzMonomial> eliminate)
    : DeRhamPresentation(std::move(spec), eliminate, true) {}

DeRhamPresentation::DeRhamPresentation(ConnectionSpec spec, std::optional<DzMonomial> eliminate, bool build_basis)
    : spec_(std::move(spec)) {
    if (spec_.D.empty()) throw Error(ErrorKind::Precondition, "empty divisor");
    for (const auto& x : spec_.D) {
        if (x.point.infinite) m_inf_ = x.mult;
        else finite_.push_back(x);
    }
    // Monomials ordered from infinity inwards.
    for (int k = m_inf_ - 2; k >= 0; --k) monos_.push_back({-1, k});
    int maxm = 0;
    for (const auto& x : finite_) maxm = std::max(maxm, x.mult);
    for (int i = 1; i <= maxm; ++i)
        for (std::size_t p = 0; p < finite_.size(); ++p)
            if (finite_[p].mult >= i) monos_.push_back({static_cast<int>(p), i});
    if (m_inf_ == 0) {
        for (std::size_t k = 0; k < monos_.size(); ++k)
            if (monos_[k] == DzMonomial{0, 1}) dropped_ = static_cast<int>(k);
    }

    std::size_t r = spec_.rank;
    relations_ = RMatrix(monos_.size() * r, r);
    for (std::size_t j = 0; j < r; ++j) {
        std::vector<RF> col(r);
        for (std::size_t i = 0; i < r; ++i) col[i] = spec_.A.fiber(i, j);
        auto c = monomial_coordinates(col);
        for (std::size_t k = 0; k < c.size(); ++k) relations_(k, j) = c[k];
    }
    if (!build_basis) return;

    auto block_of = [&](std::size_t mu) { return relations_.block(mu * r, 0, r, r); };
    bool found = false;
    if (eliminate) {
        for (std::size_t k = 0; k < monos_.size(); ++k) {
            if (!(monos_[k] == *eliminate) || static_cast<int>(k) == dropped_) continue;
            if (block_of(k).det().is_zero())
                throw Error(ErrorKind::Precondition, "requested elimination block is singular");
            elim_ = k;
            found = true;
        }
        if (!found) throw Error(ErrorKind::Precondition, "requested elimination monomial is not in the space");
    } else {
        for (std::size_t k = 0; k < monos_.size() && !found; ++k) {
            if (static_cast<int>(k) == dropped_) continue;
            if (!block_of(k).det().is_zero()) {
                elim_ = k;
                found = true;
            }
        }
        if (!found) throw Error(ErrorKind::Precondition, "no monomial block of the relations is invertible");
    }
    elim_inverse_ = block_of(elim_).inverse();
    for (std::size_t k = 0; k < monos_.size(); ++k) {
        if (k == elim_ || static_cast<int>(k) == dropped_) continue;
        for (std::size_t j = 0; j < r; ++j) basis_.push_back({monos_[k], j});
    }
}

RF DeRhamPresentation::monomial_function(const DzMonomial& m) const {
    RF z = RF::var(spec_.z());
    if (m.point < 0) return z.pow(m.power);
    RF f = (z - finite_[m.point].point.value).pow(-m.power);
    if (m_inf_ == 0 && m.power == 1 && m.point != 0) f -= (z - finite_[0].point.value).inverse();
    return f;
}

std::vector<RF> DeRhamPresentation::basis_function(std::size_t k) const {
    std::vector<RF> v(spec_.rank);
    v[basis_[k].j] = monomial_function(basis_[k].mono);
    return v;
}

std::string DeRhamPresentation::basis_string(std::size_t k) const {
    const auto& b = basis_[k];
    RF z = RF::var(spec_.z());
    RF mu = b.mono.point < 0 ? z.pow(b.mono.power) : (z - finite_[b.mono.point].point.value).pow(-b.mono.power);
    std::string e = "e" + std::to_string(b.j + 1) + "*";
    std::string dz = "d" + var_name(spec_.z());
    return mu.is_one() ? e + dz : e + "(" + mu.to_string() + ")*" + dz;
}

std::vector<RF> DeRhamPresentation::monomial_coordinates(const std::vector<RF>& v) const {
    std::size_t r = spec_.rank;
    Var z = spec_.z();
    std::vector<RF> out(monos_.size() * r);
    auto index_of = [&](const DzMonomial& m) {
        for (std::size_t k = 0; k < monos_.size(); ++k)
            if (monos_[k] == m) return k;
        throw Error(ErrorKind::Precondition, "monomial outside the space");
    };
    for (std::size_t i = 0; i < r; ++i) {
        if (v[i].is_zero()) continue;
        for (std::size_t p = 0; p < finite_.size(); ++p) {
            int m = finite_[p].mult;
            Laurent L = laurent_expand(v[i], z, finite_[p].point, -1);
            if (L.valuation < -m) throw Error(ErrorKind::Precondition, "pole exceeds the divisor");
            for (int k = 1; k <= m; ++k) out[index_of({static_cast<int>(p), k}) * r + i] = L.coeff(-k);
        }
        int top = m_inf_ - 2;
        if (order_at(v[i], z, Point::infinity()) < -top)
            throw Error(ErrorKind::Precondition, "pole at infinity exceeds the divisor");
        if (top >= 0) {
            Laurent L = laurent_expand(v[i], z, Point::infinity(), 0);
            for (int k = 0; k <= top; ++k) out[index_of({-1, k}) * r + i] = L.coeff(-k);
        }
    }
    return out;
}

std::vector<RF> DeRhamPresentation::project(const std::vector<RF>& w) const {
    std::size_t r = spec_.rank;
    RMatrix we(r, 1);
    for (std::size_t i = 0; i < r; ++i) we(i, 0) = w[elim_ * r + i];
    RMatrix y = elim_inverse_ * we;
    std::vector<RF> out;
    out.reserve(basis_.size());
    for (std::size_t k = 0; k < monos_.size(); ++k) {
        if (k == elim_ || static_cast<int>(k) == dropped_) continue;
        for (std::size_t i = 0; i < r; ++i) {
            RF c = w[k * r + i];
            for (std::size_t j = 0; j < r; ++j)
                if (!y(j, 0).is_zero()) c -= relations_(k * r + i, j) * y(j, 0);
            out.push_back(c);
        }
    }
    return out;
}

std::vector<RF> DeRhamPresentation::kill_excess_poles(std::vector<RF> v) const {
    std::size_t r = spec_.rank;
    Var z = spec_.z();
    RF zz = RF::var(z);
    const RMatrix& F = spec_.A.fiber;

    std::vector<DivisorPoint> pts = spec_.D;
    if (m_inf_ == 0) pts.push_back({Point::infinity(), 0});
    std::vector<RMatrix> lead;
    for (const auto& x : pts) lead.push_back(x.mult > 0 ? leading_matrix(spec_, x) : RMatrix(r, r));

    while (true) {
        int best = -1, best_excess = 0, best_order = 0;
        for (std::size_t p = 0; p < pts.size(); ++p) {
            int o = 0;
            for (const auto& f : v)
                o = std::max(o, pts[p].point.infinite ? form_pole_order(f, z, pts[p].point)
                                                      : pole_order(f, z, pts[p].point));
            int e = o - pts[p].mult;
            if (e > best_excess) {
                best = static_cast<int>(p);
                best_excess = e;
                best_order = o;
            }
        }
        if (best < 0) return v;

        const DivisorPoint& x = pts[best];
        int m = x.mult, o = best_order;
        RMatrix c(r, 1);
        RMatrix L;
        RF h, dh;  // nabla(h y) = (dh + h F) y dz
        if (!x.point.infinite) {
            for (std::size_t i = 0; i < r; ++i)
                c(i, 0) = v[i].is_zero() ? RF() : laurent_expand(v[i], z, x.point, -o).coeff(-o);
            int k = o - m;
            L = m >= 2 ? lead[best] : lead[best] - RMatrix::scalar(r, RF(static_cast<long>(k)));
            RF zeta = zz - x.point.value;
            h = zeta.pow(-k);
            dh = RF(static_cast<long>(-k)) * zeta.pow(-k - 1);
        } else {
            for (std::size_t i = 0; i < r; ++i)
                c(i, 0) = v[i].is_zero() ? RF() : laurent_expand(v[i], z, x.point, 2 - o).coeff(2 - o);
            int k = m >= 2 ? o - m : o - 1;
            if (m == 0 && k == 0) throw Error(ErrorKind::Domain, "residue at infinity outside the divisor");
            RF kk(static_cast<long>(k));
            if (m >= 2) L = lead[best] * RF(-1);
            else if (m == 1) L = RMatrix::scalar(r, kk) - lead[best];
            else L = RMatrix::scalar(r, kk);
            h = zz.pow(k);
            dh = k == 0 ? RF() : kk * zz.pow(k - 1);
        }
        RMatrix y;
        try {
            y = L.solve(c);
        } catch (const Error&) {
            throw Error(ErrorKind::Domain, "leading block singular at " + x.point.to_string() + " (resonance)");
        }
        for (std::size_t i = 0; i < r; ++i) {
            RF acc = dh * y(i, 0);
            for (std::size_t j = 0; j < r; ++j)
                if (!F(i, j).is_zero() && !y(j, 0).is_zero()) acc += h * F(i, j) * y(j, 0);
            v[i] -= acc;
        }
    }
}

std::vector<RF> DeRhamPresentation::reduce(const std::vector<RF>& v) const {
    if (v.size() != spec_.rank) throw Error(ErrorKind::ShapeMismatch, "vector has wrong rank");
    std::vector<Point> hints;
    for (const auto& x : spec_.D) hints.push_back(x.point);
    for (const auto& p : finite_poles(v, spec_.z(), hints))
        if (multiplicity(spec_.D, p) == 0) throw Error(ErrorKind::Domain, "pole at " + p.to_string() + " off the divisor");
    return project(monomial_coordinates(kill_excess_poles(v)));
}

std::size_t h0_flat_sections(const ConnectionSpec& spec) {
    DeRhamPresentation p(spec, std::nullopt, false);
    return spec.rank - p.relations_.rank();
}

DeRhamPresentation h1_basis(const ConnectionSpec& spec, std::optional<DzMonomial> eliminate) {
    auto verdict = check_admissible(spec);
    if (!verdict) throw Error(ErrorKind::Precondition, "not admissible: " + verdict.reason);
    if (h0_flat_sections(spec) != 0) throw Error(ErrorKind::Precondition, "connection has flat sections");
    return DeRhamPresentation(spec, eliminate);
}

namespace {

struct GmTask {
    std::size_t column;
    Var var;
};

std::vector<GmTask> gm_tasks(const DeRhamPresentation& pres) {
    std::vector<GmTask> tasks;
    for (std::size_t k = 0; k < pres.dimension(); ++k)
        for (Var v : pres.spec().tower.base_vars) tasks.push_back({k, v});
    return tasks;
}

std::vector<RF> gm_column(const DeRhamPresentation& pres, const GmTask& t) {
    const auto& spec = pres.spec();
    std::vector<RF> v = pres.basis_function(t.column);
    RMatrix C = spec.A.base_part(t.var);
    std::vector<RF> w(spec.rank);
    for (std::size_t i = 0; i < spec.rank; ++i) {
        w[i] = v[i].derivative(t.var);
        for (std::size_t j = 0; j < spec.rank; ++j)
            if (!C(i, j).is_zero() && !v[j].is_zero()) w[i] += C(i, j) * v[j];
    }
    return pres.reduce(w);
}

AbsoluteForm1 assemble(const DeRhamPresentation& pres, const std::vector<GmTask>& tasks,
                       const std::vector<std::vector<RF>>& cols) {
    std::size_t n = pres.dimension();
    AbsoluteForm1 out(n);
    std::map<Var, RMatrix> mats;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        auto it = mats.find(tasks[t].var);
        if (it == mats.end()) it = mats.emplace(tasks[t].var, RMatrix(n, n)).first;
        for (std::size_t i = 0; i < n; ++i) it->second(i, tasks[t].column) = cols[t][i];
    }
    for (auto& [v, m] : mats) out.set_base(v, std::move(m));
    return out;
}

}  // namespace

AbsoluteForm1 gauss_manin_matrix_serial(const DeRhamPresentation& pres) {
    auto tasks = gm_tasks(pres);
    std::vector<std::vector<RF>> cols(tasks.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) cols[t] = gm_column(pres, tasks[t]);
    return assemble(pres, tasks, cols);
}

AbsoluteForm1 gauss_manin_matrix(const DeRhamPresentation& pres) {
    auto tasks = gm_tasks(pres);
    std::vector<std::vector<RF>> cols(tasks.size());
    std::exception_ptr error;
    const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (long t = 0; t < n; ++t) {
        try {
            cols[t] = gm_column(pres, tasks[t]);
        } catch (...) {
#pragma omp critical(gm_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return assemble(pres, tasks, cols);
}

BaseForm h1_trace(const DeRhamPresentation& pres) {
    AbsoluteForm1 gm = gauss_manin_matrix(pres);
    std::map<Var, RF> m;
    for (const auto& [v, mat] : gm.base) m[v] = mat.trace();
    return BaseForm(std::move(m));
}

BaseFormClass h1_determinant(const DeRhamPresentation& pres) {
    return dlog_reduce(h1_trace(pres), pres.spec().tower, pres.spec().aux_factors);
}

BaseFormClass gm_determinant(const DeRhamPresentation& pres) {
    return dlog_reduce(-h1_trace(pres), pres.spec().tower, pres.spec().aux_factors);
}

}  // namespace gmdet
