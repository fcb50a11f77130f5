#pragma once

// Entry point of the qkin command-line tool, callable in-process by tests.
// Exit codes: 0 success, 1 a checked property failed (ledger, norm, axioms),
// 2 invalid input or configuration.
namespace qkin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;

int run_cli(int argc, char** argv);

}  // namespace qkin::cli
