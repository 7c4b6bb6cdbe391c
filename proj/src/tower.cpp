#include "gmdet/tower.hpp"

#include <algorithm>
#include <set>

#include "gmdet/errors.hpp"

namespace gmdet {

ScalarTower ScalarTower::make(const std::vector<std::string>& base, const std::vector<std::string>& params,
                              const std::string& fiber) {
    ScalarTower t;
    t.fiber = intern(fiber);
    std::set<std::string> seen;
    auto add = [&](const std::string& name, std::vector<Var>& into) {
        if (name == fiber) throw Error(ErrorKind::MalformedInput, "variable name '" + name + "' is reserved");
        if (!seen.insert(name).second) throw Error(ErrorKind::MalformedInput, "duplicate variable '" + name + "'");
        into.push_back(intern(name));
    };
    for (const auto& n : base) add(n, t.base_vars);
    for (const auto& n : params) add(n, t.params);
    return t;
}

bool ScalarTower::is_base(Var v) const {
    return std::find(base_vars.begin(), base_vars.end(), v) != base_vars.end();
}

bool ScalarTower::is_param(Var v) const { return std::find(params.begin(), params.end(), v) != params.end(); }

void ScalarTower::check_member(const RationalFunction& f) const {
    auto check = [&](const Poly& p) {
        for (Var v : p.variables())
            if (v != fiber && !is_base(v) && !is_param(v))
                throw Error(ErrorKind::MalformedInput, "undeclared variable '" + var_name(v) + "'");
    };
    check(f.p());
    check(f.q());
    check(f.d());
    if (f.has_w() && (!ext || f.ext()->gen != ext->gen))
        throw Error(ErrorKind::MalformedInput, "extension generator used without declaration");
}

}  // namespace gmdet
