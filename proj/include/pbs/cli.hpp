#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pbs {

// Exit codes of the pbs command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitEnvironment = 4;

// Entry point of the pbs command; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbs
