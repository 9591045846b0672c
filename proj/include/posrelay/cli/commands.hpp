#pragma once

// pos-relay front end. Exit codes: 0 success, 1 relay rejection (or a failed
// scenario check), 2 malformed input or usage.

#include <ostream>

namespace posrelay::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitUsage = 2;

/// Seed override read before any --seed flag is honored.
inline constexpr const char* kSeedEnvVar = "POS_RELAY_SEED";

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace posrelay::cli
