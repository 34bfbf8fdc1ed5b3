#pragma once

#include <ostream>

namespace critsob::cli {

/// Full command line entry point. Exit codes: 0 success, 1 acceptance
/// failure, 2 usage or configuration error, 3 partial computational failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace critsob::cli
