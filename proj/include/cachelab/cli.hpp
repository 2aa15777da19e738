#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cachelab {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation. `args` excludes the program name. Data goes to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

// Resolves one --capacities token against trace length n: an integer, or
// "log" / "sqrt". Returns 0 for an unknown token.
std::size_t resolve_capacity(const std::string& token, std::size_t n);

}  // namespace cachelab
