#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace binmorph::cli {

/// Exit codes: 0 success, 1 I/O or validation failure, 2 usage error.
int run(int argc, char** argv);

/// Same as the argv form; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace binmorph::cli
