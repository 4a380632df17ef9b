#pragma once

#include <ostream>

namespace expi::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kPrecisionError = 3;
inline constexpr int kNetworkError = 4;

/// Entry point of the expi tool, writing to the given streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace expi::cli
