#pragma once

#include <iosfwd>

namespace ccn {

/// Fast self-test of the library invariants (the `check` subcommand). Prints
/// one PASS/FAIL line per check and returns the number of failures.
int run_invariant_checks(std::ostream& out);

}  // namespace ccn
