// Command-line front end: subcommand dispatch over the exact tables and the
// seeded numerical pipelines, with reproducible file emission.
//
// Exit status contract: 0 on success, 1 when a run-level verification or
// estimator fails (phase escape, balance violation, precision refusal,
// insufficient fit data), 2 on configuration errors (unparsable flags,
// out-of-domain parameters), which are reported on the error stream naming
// the offending field.  Identical arguments produce byte-identical output;
// every seeded subcommand records its seed in the emitted metadata.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdecay/rational.hpp"

namespace fdecay {

// R grids: comma-separated entries, each a single value or a geometric
// from:to:ratio range (endpoints included, ratio > 1).  Numbers are plain
// decimals or base^exp powers, so "2^20:2^30:2^2" is {2^20, 2^22, .., 2^30}.
std::vector<double> parse_r_grid(const std::string& text);

// Alpha grids: comma-separated entries, each an exact "p/q" rational or an
// additive from:to:step range with both endpoints included, so
// "3/2:3:1/8" is {3/2, 13/8, .., 3}.
std::vector<Rational> parse_alpha_grid(const std::string& text);

// Lattice-norm lists for sphere runs: comma-separated positive integers or
// from:to[:step] ranges, so "1:3" is {1, 2, 3}.
std::vector<int64_t> parse_n_list(const std::string& text);

// Parses args (program name excluded), dispatches the subcommand, and
// writes results to out and diagnostics to err.  Returns the exit status.
int cli_main(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fdecay
