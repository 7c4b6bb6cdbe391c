#pragma once

#include <random>
#include <string>
#include <vector>

#include "gmdet/connection.hpp"
#include "gmdet/expr.hpp"

namespace gmdet::testing {

inline RF rf(const std::string& text) { return parse_rf(text, free_context()); }
inline RF rf(const std::string& text, const ScalarTower& T) { return parse_rf(text, tower_context(T)); }

inline BaseForm base_form(const std::string& text, const ScalarTower& T) {
    return BaseForm(parse_form(text, tower_context(T)));
}

inline AbsoluteForm1 matrix_form(const std::vector<std::vector<std::string>>& rows, const ScalarTower& T) {
    ParseContext ctx = tower_context(T);
    std::vector<std::vector<std::map<Var, RF>>> e;
    for (const auto& row : rows) {
        e.emplace_back();
        for (const auto& s : row) e.back().push_back(s == "0" ? std::map<Var, RF>{} : parse_form(s, ctx));
    }
    return AbsoluteForm1::from_entries(e, T.fiber);
}

inline RMatrix rmatrix(const std::vector<std::vector<std::string>>& rows, const ScalarTower& T) {
    RMatrix m(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rf(rows[i][j], T);
    return m;
}

/// Polynomial with integer coefficients in [-h, h] and total degree <= deg.
inline RF random_poly(std::mt19937& rng, const std::vector<Var>& vars, int deg, int h = 3) {
    std::uniform_int_distribution<int> coef(-h, h);
    std::uniform_int_distribution<int> terms(1, 4);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(vars.size()) - 1);
    std::uniform_int_distribution<int> d(0, deg);
    RF p;
    int n = terms(rng);
    for (int k = 0; k < n; ++k) {
        RF mono(coef(rng));
        int e = d(rng);
        for (int i = 0; i < e; ++i) mono *= RF::var(vars[pick(rng)]);
        p += mono;
    }
    return p;
}

inline RF random_rf(std::mt19937& rng, const std::vector<Var>& vars, int deg) {
    RF den;
    while (den.is_zero()) den = random_poly(rng, vars, deg);
    return random_poly(rng, vars, deg) / den;
}

/// z-free gauge L * U * diag(c_i t^{e_i}) with unitriangular L, U whose
/// off-diagonal entries are small polynomials in t.
inline RMatrix random_base_gauge(std::mt19937& rng, std::size_t r, Var t) {
    std::uniform_int_distribution<int> e(-2, 2), pw(0, 1), c(1, 3);
    RF tt = RF::var(t);
    RMatrix L = RMatrix::identity(r), U = RMatrix::identity(r), S(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            L(i, j) = RF(e(rng)) + RF(e(rng)) * tt;
            U(j, i) = RF(e(rng));
        }
        S(i, i) = RF(c(rng)) * tt.pow(pw(rng));
    }
    return L * U * S;
}

}  // namespace gmdet::testing
