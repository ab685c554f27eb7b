// Acceptance gate: nine end-to-end checks over the exact tables, the
// construction geometry, and the seeded numerical pipelines.  Every check
// re-derives its expected values from scratch (closed forms retyped, brute
// oracles, independent windows) so that a regression anywhere in the
// library trips at least one line here.

#pragma once

#include <iosfwd>

namespace fdecay {

// Runs all checks in order, printing one [PASS]/[FAIL] line per check to
// out, each with its runtime against the pinned budget.  Returns the
// number of failed checks (0 = the gate is green).
int run_acceptance_checks(std::ostream& out);

}  // namespace fdecay
