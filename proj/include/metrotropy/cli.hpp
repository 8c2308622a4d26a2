#ifndef METROTROPY_CLI_HPP
#define METROTROPY_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace metrotropy {

/// Runs the command-line front end on the given argument list (without the
/// program name). Writes results to `out` and diagnostics to `err`; returns
/// the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace metrotropy

#endif
