#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "smqs/protocol.hpp"

namespace smqs::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitIoError = 3;

/// Parses `--secrets`: participants separated by ';' or '/', digits by ','.
/// With m == 1 a single comma list of n digits gives one digit per participant
/// ("4,5,6"). Throws protocol::InvalidConfig.
std::vector<protocol::SecretString> parse_secrets(const std::string& text, int n, int m);

/// Entry point of the `smqs` tool.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace smqs::harness
