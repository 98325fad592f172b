// Single entry point: all computations and verifications behind one binary
// with reproducible JSON output.  Exit codes: 0 all checks pass, 1 a check
// failed, 2 usage error.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace flagblocks::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flagblocks::cli
