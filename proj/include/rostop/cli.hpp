#ifndef ROSTOP_CLI_HPP
#define ROSTOP_CLI_HPP

#include <iosfwd>

namespace rostop {

/// Entry point behind the `rostop` executable. Returns the process exit code:
/// 0 on success, 2 when a solver refuses the request, 1 for every other error.
/// Errors go to `err` as one line "error[<kind>]: <message>".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rostop

#endif  // ROSTOP_CLI_HPP
