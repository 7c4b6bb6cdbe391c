#include "gmdet/symbols.hpp"

#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace gmdet {

namespace {

struct Registry {
    std::mutex mu;
    std::unordered_map<std::string, Var> ids;
    std::deque<std::string> names;  // deque keeps references stable
};

Registry& registry() {
    static Registry r;
    return r;
}

}  // namespace

Var intern(std::string_view name) {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    auto it = r.ids.find(std::string(name));
    if (it != r.ids.end()) return it->second;
    Var id = static_cast<Var>(r.names.size());
    r.names.emplace_back(name);
    r.ids.emplace(std::string(name), id);
    return id;
}

const std::string& var_name(Var v) {
    auto& r = registry();
    std::lock_guard lock(r.mu);
    if (v >= r.names.size()) throw std::out_of_range("unknown variable id");
    return r.names[v];
}

}  // namespace gmdet
