#pragma once

#include <iosfwd>

namespace gradflux {

/// Entry point of the gradflux tool. Returns 0 on success, 1 on a usage or
/// input error, 2 when a computation fails (or misses its target in strict
/// mode).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gradflux
