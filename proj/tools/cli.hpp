#pragma once

namespace cliqueloop::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitParams = 2;
inline constexpr int kExitRejected = 3;

int run(int argc, char** argv);

}  // namespace cliqueloop::cli
