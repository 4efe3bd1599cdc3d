#pragma once

namespace jumpmc::cli {

// Full tool entry point: subcommand dispatch, flag handling, output writing.
// Returns the process exit status (0 success, 1 failure, 2 usage).
int run_cli(int argc, const char* const* argv);

}  // namespace jumpmc::cli
