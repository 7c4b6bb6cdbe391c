#pragma once

#include <string>
#include <vector>

#include "gmdet/ratfunc.hpp"

namespace gmdet {

/// The coefficient field K = Q(params)(base_vars), optionally extended by a
/// square root, together with the name of the fiber coordinate.
/// Base variables are the directions of differentiation; params are symbolic
/// constants (zero differential).
struct ScalarTower {
    std::vector<Var> base_vars;
    std::vector<Var> params;
    ExtPtr ext;
    Var fiber = intern("z");

    static ScalarTower make(const std::vector<std::string>& base, const std::vector<std::string>& params = {},
                            const std::string& fiber = "z");

    bool is_base(Var v) const;
    bool is_param(Var v) const;
    /// Throws malformed-input when f mentions a variable outside the tower.
    void check_member(const RationalFunction& f) const;
};

}  // namespace gmdet
