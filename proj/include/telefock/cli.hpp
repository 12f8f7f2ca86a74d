#ifndef TELEFOCK_CLI_HPP
#define TELEFOCK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace telefock {

/// Environment variable naming the directory that relative output paths resolve against.
inline constexpr const char* kOutDirEnv = "TELEFOCK_OUT_DIR";

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2 };

/// Entry point behind the `telefock` binary. `args` excludes the program name.
/// Subcommands: fringe, visibility-sweep, bell-stats, simulate-counts, fit.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace telefock

#endif  // TELEFOCK_CLI_HPP
