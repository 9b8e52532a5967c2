#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ipthunt {

// Exit codes of cli_main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one subcommand: hunt, classify, extract-contacts, infiltrate, tg-fetch,
// train, eval, report or probe-exposure. Results go to `out`, progress lines
// and errors to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ipthunt
