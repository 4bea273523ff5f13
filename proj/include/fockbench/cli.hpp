#pragma once

// Command-line front end.
//
//   fockbench run [FILE] [--experiment NAME] [--backend numeric|symbolic|both]
//                 [--cutoff N] [--tol X] [--format table|json] [--all-inputs]
//   fockbench list-experiments
//   fockbench check
//
// FOCKBENCH_CUTOFF sets the default cutoff; --cutoff wins over it.

#include <iosfwd>
#include <string>
#include <vector>

#include "fockbench/backends.hpp"

namespace fockbench {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int evaluation_error = 1;
inline constexpr int parse_error = 2;
inline constexpr int comparison_failed = 3;
inline constexpr int usage_error = 4;  // bad flags, unreadable file, unknown experiment
inline constexpr int check_failed = 5;
}  // namespace exit_code

enum class Backend { numeric, symbolic, both };
enum class OutputFormat { table, json };

struct RunConfig {
  std::string input_path;
  std::string experiment;
  Backend backend = Backend::both;
  int cutoff = 0;  // 0: keep the circuit's own cutoff
  double tolerance = 1e-9;
  OutputFormat format = OutputFormat::table;
  bool all_inputs = false;
};

/// JSON report with a fixed key order and 15 significant digits.
/// `comparison` may be null.
std::string report_json(const MeasurementReport& report, const ComparisonReport* comparison);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_list_experiments(std::ostream& out);
int cmd_check(std::ostream& out);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fockbench
