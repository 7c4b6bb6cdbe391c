#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "gmdet/tower.hpp"

namespace gmdet {

/// Name resolution for the expression grammar. `lookup` returns the value of
/// a symbol or nothing when the name is unknown. `differentials` lists the
/// variables v for which `dv` is a differential atom, in output order.
struct ParseContext {
    std::function<std::optional<RF>(std::string_view)> lookup;
    std::vector<Var> differentials;
};

/// Context for a tower: fiber, base variables, params and the extension
/// generator resolve to themselves; differentials are fiber then base vars.
ParseContext tower_context(const ScalarTower& tower);
/// Every identifier resolves to a fresh variable of that name.
ParseContext free_context();

RF parse_rf(std::string_view text, const ParseContext& ctx);
/// A linear combination sum_v c_v dv; keys are the differential variables.
std::map<Var, RF> parse_form(std::string_view text, const ParseContext& ctx);

/// d(f) = sum over ctx.differentials of (df/dv) dv.
std::map<Var, RF> total_differential(const RF& f, const std::vector<Var>& vars);

}  // namespace gmdet
