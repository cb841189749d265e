#pragma once

#include <ostream>

namespace liftkit::cli {

/// Exit codes: 0 success, 1 a method failed or refuted, 2 bad input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace liftkit::cli
