#pragma once

#include <cstdint>
#include <iosfwd>

namespace anglelab::cli {

// Used when --seed is not given.
inline constexpr std::uint64_t kDefaultSeed = 1729;

// Runs the command line. Results go to `out` as a single JSON object; errors
// and usage go to `err`. Returns 0 on success, 2 on invalid input, 1 on
// runtime failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace anglelab::cli
