#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cldiv {

/// Stable exit codes of the command-line front end.
enum ExitCode : int {
    exit_ok = 0,
    exit_negative = 1,  // valid input, negative answer (not special, unsatisfiable, ...)
    exit_usage = 2,     // bad flags or input outside the domain
    exit_budget = 3     // a cap or budget would be exceeded
};

/*
 * Runs one subcommand.  args excludes the program name.  Reports go to
 * `out` (or the --out file), diagnostics to `err`.
 */
int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err);

/// Parses "1000", "10^6" or "1e6".
unsigned long long parse_count(std::string const & s);

}  // namespace cldiv
