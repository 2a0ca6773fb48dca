#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace qsv {

// ============================================================================
// Experiment front end shared by the CLI binary and the tests: a fully
// validated configuration in, a table or verdict out.
// ============================================================================

struct ExperimentConfig {
  std::string command;            // gap | verify | sweep | hist | complexity | ghz-check
  std::string target = "ghz";     // ghz | haar | random-stabilizer | path to a JSON file
  int n = 3;                      // qubit count (ghz-check: largest n in the table)
  std::string protocol = "dpso";  // plm | sop | dpso
  int level = 1;                  // protocol level (complexity: largest level in the table)
  std::string scheme = "naive";   // naive | classes | lp | grid | ascent
  double epsilon = 0.1;
  double delta = 0.1;
  double chi = 0.0;              // type-II budget; 0 means "use delta"
  std::string trials = "auto";   // "auto" or a positive integer
  long long samples = 100;       // sweep / hist sample count
  int bins = 20;                 // hist bin count over [0, 1]
  double nu = 0.0;               // complexity: supplied gap (0 = compute from the target)
  std::string device = "exact";  // exact | worst:<eps> | depol:<p> | path to a JSON file
  std::uint64_t seed = 1;
  std::string out;               // output path ("" = stdout)
  std::string format = "csv";    // csv | json
  int threads = 0;               // worker count (0 = hardware concurrency)
};

// Runs one command.  Exit codes: 0 = success (verify: accept), 1 = verify
// reject or a failed ghz-check table, 2 = error (reported on `err`).
// Output is byte-identical for identical (config, seed) at any thread count.
int run_command(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qsv
