#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lpflow {

/// Command-line front end. args excludes the program name. Reports go to
/// `out` as JSON, diagnostics to `err`.
/// Exit codes: 0 success, 1 a checked inequality or bracket failed (or the
/// solver hit its CFL guard), 2 usage error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace lpflow
