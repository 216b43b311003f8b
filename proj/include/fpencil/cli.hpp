#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fpencil::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Runs one CLI invocation. Returns 0 on success with the payload on `out`,
/// 2 on usage errors (message on `err`), 1 on computation errors (structured
/// {"error_kind", "detail"} JSON on `err`). Nothing but the declared payload
/// is ever written to `out`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fpencil::cli
