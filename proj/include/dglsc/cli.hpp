// Command-line driver behind the `dglsc` binary.
//
// Subcommands
//   parse <file> [--as term|game|formula|sequent]       re-print the input
//   eval --model M --formula F [--at "x=1,y=2"]         truth set / value
//   regions --model M --game G [--angel X] [--demon Y]
//           [--player angel|demon|both] [--zero-sum]    winning regions
//   transform --op systematize|complementarize|goals-to-tests --in TEXT
//   check --proof P [--model M]                         proof checking
//   lemmas --id ID --seeds LO..HI --space SPEC [--serial]
//
// Sets print as a hex bitmask first; --pretty appends one state per line.
// Exit codes: 0 success, 1 rejected proof / failing lemma seeds, 2
// malformed input or environment. DGLSC_FIXPOINT_BUDGET overrides the
// repetition iteration cap for eval/regions/check.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dglsc {

// argv-style entry point (argv[0] is the program name).
int cliMain(int argc, const char* const* argv);

// Testable entry point: `args` excludes the program name; output and
// diagnostics go to the supplied streams.
int cliMain(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace dglsc
