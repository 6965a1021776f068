#ifndef DECLUTTER_TOOLS_CLI_HPP
#define DECLUTTER_TOOLS_CLI_HPP

#include <iosfwd>

namespace declutter::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_assertion = 2,
};

/**
 * Runs the command-line tool with the given arguments (argv[0] is the program name).
 * Normal output goes to `out`, diagnostics to `err`.
 */
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}

#endif
