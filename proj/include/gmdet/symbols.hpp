#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gmdet {

/// Interned variable handle. Ids are assigned in first-use order and are
/// stable for the lifetime of the process.
using Var = std::uint32_t;

Var intern(std::string_view name);
const std::string& var_name(Var v);

}  // namespace gmdet
