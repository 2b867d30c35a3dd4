#pragma once

#include <iosfwd>

namespace embsvm::cli {

/// Runs the embsvm command line. Returns 0 on success, 1 on a validation
/// error (bad arguments or inconsistent inputs) and 2 on an I/O or file
/// format error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace embsvm::cli
