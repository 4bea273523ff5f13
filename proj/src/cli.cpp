#include "fockbench/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "fockbench/checks.hpp"
#include "fockbench/dsl.hpp"
#include "fockbench/experiments.hpp"

namespace fockbench {

namespace {

std::string number(double x) {
  if (x == 0.0) {
    x = 0.0;  // no negative zero
  }
  return fmt::format("{:.15g}", x);
}

std::string occ_json(const OccupationVector& occ) { return fmt::format("[{}]", fmt::join(occ.counts, ",")); }

struct Evaluated {
  MeasurementReport report;
  std::optional<ComparisonReport> comparison;
};

Evaluated evaluate(const Circuit& circuit, Backend backend, double tol, std::ostream& err) {
  Evaluated out;
  switch (backend) {
    case Backend::numeric: {
      auto evolution = evolve_numeric(circuit);
      for (const auto& w : evolution.warnings) {
        err << "warning: " << w << '\n';
      }
      out.report = measure(evolution.state, circuit.measured_modes());
      break;
    }
    case Backend::symbolic:
      out.report = measure(evolve_symbolic(circuit), circuit.measured_modes());
      break;
    case Backend::both: {
      auto cmp = compare_backends(circuit, tol);
      for (const auto& w : cmp.warnings) {
        err << "warning: " << w << '\n';
      }
      out.report = cmp.numeric;
      out.comparison = std::move(cmp);
      break;
    }
  }
  return out;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::numeric:
      return "numeric";
    case Backend::symbolic:
      return "symbolic";
    case Backend::both:
      return "both";
  }
  return "?";
}

void print_table(std::ostream& out, const std::string& label, const Circuit& circuit, Backend backend,
                 const Evaluated& result) {
  const auto& sys = circuit.system();
  out << fmt::format("circuit   {} ({} boson, {} fermion modes, cutoff {})\n", label, sys.boson_modes(),
                     sys.fermion_modes(), sys.cutoff());
  out << fmt::format("backend   {}\n", backend_name(backend));
  out << fmt::format("norm      {:.15f}\n\n", result.report.norm);
  out << "mode      <N>\n";
  for (const auto& [mode, value] : result.report.expectations) {
    out << fmt::format("{:<9} {:.15f}\n", fmt::format("N{}", mode + 1), value);
  }
  std::vector<std::size_t> one_based;
  for (std::size_t m : result.report.modes) {
    one_based.push_back(m + 1);
  }
  out << fmt::format("\noutcome over modes ({})   probability\n", fmt::join(one_based, ","));
  for (const auto& [occ, p] : result.report.distribution) {
    out << fmt::format("{:<24} {:.15f}\n", to_string(occ), p);
  }
  if (result.comparison) {
    out << fmt::format("\ncomparison: max deviation {:.3e} (tolerance {:.3e}): {}\n", result.comparison->max_deviation,
                       result.comparison->tolerance, result.comparison->pass ? "pass" : "fail");
  }
}

std::optional<Circuit> load_circuit(const RunConfig& config, std::string& label, std::ostream& err, int& code) {
  const bool from_file = !config.input_path.empty();
  if (from_file == !config.experiment.empty()) {
    err << "error: give exactly one of FILE or --experiment\n";
    code = exit_code::usage_error;
    return std::nullopt;
  }
  if (!from_file) {
    try {
      label = "experiment " + config.experiment;
      return build_experiment(config.experiment, config.cutoff > 0 ? config.cutoff : kDefaultCutoff);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      code = exit_code::usage_error;
      return std::nullopt;
    }
  }
  std::ifstream in(config.input_path);
  if (!in) {
    err << "error: cannot read " << config.input_path << '\n';
    code = exit_code::usage_error;
    return std::nullopt;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  label = config.input_path;
  try {
    Circuit c = parse_circuit(buffer.str());
    return config.cutoff > 0 ? c.with_cutoff(config.cutoff) : c;
  } catch (const ParseError& e) {
    err << fmt::format("{}:{}:{}: error: {}\n", config.input_path, e.line(), e.column(), e.detail());
    code = exit_code::parse_error;
    return std::nullopt;
  }
}

int run_truth_table(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.experiment.starts_with("cnot_dualrail")) {
    err << "error: --all-inputs is only meaningful for cnot_dualrail\n";
    return exit_code::usage_error;
  }
  const int cutoff = config.cutoff > 0 ? config.cutoff : kDefaultCutoff;
  bool all_good = true;
  std::vector<std::string> rows;
  if (config.format == OutputFormat::table) {
    out << "control target  expected output   fidelity numeric    fidelity symbolic   comparison\n";
  }
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const Circuit circuit = cnot_dualrail(c, t, cutoff);
      const OccupationVector expected = dual_rail_pattern(c, c ^ t);
      auto fidelity = [&expected](const MeasurementReport& r) {
        auto it = r.distribution.find(expected);
        return it == r.distribution.end() ? 0.0 : it->second;
      };
      std::optional<double> fn;
      std::optional<double> fs;
      std::optional<ComparisonReport> cmp;
      if (config.backend == Backend::both) {
        cmp = compare_backends(circuit, config.tolerance);
        fn = fidelity(cmp->numeric);
        fs = fidelity(cmp->symbolic);
        all_good = all_good && cmp->pass;
      } else if (config.backend == Backend::numeric) {
        fn = fidelity(measure(evolve_numeric(circuit).state, circuit.measured_modes()));
      } else {
        fs = fidelity(measure(evolve_symbolic(circuit), circuit.measured_modes()));
      }
      for (const auto& f : {fn, fs}) {
        all_good = all_good && (!f || *f >= 1.0 - config.tolerance);
      }
      if (config.format == OutputFormat::table) {
        auto cell = [](const std::optional<double>& f) { return f ? fmt::format("{:.15f}", *f) : std::string("-"); };
        out << fmt::format("{:<7} {:<7} {:<17} {:<19} {:<19} {}\n", c, t, to_string(expected), cell(fn), cell(fs),
                           cmp ? (cmp->pass ? "pass" : "fail") : "-");
      } else {
        std::string row = fmt::format("{{\"control\": {}, \"target\": {}, \"expected\": {}", c, t, occ_json(expected));
        if (fn) {
          row += fmt::format(", \"fidelity_numeric\": {}", number(*fn));
        }
        if (fs) {
          row += fmt::format(", \"fidelity_symbolic\": {}", number(*fs));
        }
        if (cmp) {
          row += fmt::format(", \"max_deviation\": {}", number(cmp->max_deviation));
        }
        rows.push_back(row + "}");
      }
    }
  }
  if (config.format == OutputFormat::json) {
    out << fmt::format("{{\"truth_table\": [{}], \"verdict\": \"{}\"}}\n", fmt::join(rows, ", "),
                       all_good ? "pass" : "fail");
  }
  return all_good ? exit_code::ok : exit_code::comparison_failed;
}

}  // namespace

std::string report_json(const MeasurementReport& report, const ComparisonReport* comparison) {
  std::vector<std::string> expectations;
  for (const auto& [mode, value] : report.expectations) {
    expectations.push_back(fmt::format("\"N{}\": {}", mode + 1, number(value)));
  }
  std::vector<std::string> distribution;
  for (const auto& [occ, p] : report.distribution) {
    distribution.push_back(fmt::format("{{\"occ\": {}, \"prob\": {}}}", occ_json(occ), number(p)));
  }
  std::string json = fmt::format("{{\"norm\": {}, \"expectations\": {{{}}}, \"distribution\": [{}]", number(report.norm),
                                 fmt::join(expectations, ", "), fmt::join(distribution, ", "));
  if (comparison != nullptr) {
    json += fmt::format(", \"comparison\": {{\"max_deviation\": {}, \"verdict\": \"{}\"}}",
                        number(comparison->max_deviation), comparison->pass ? "pass" : "fail");
  }
  return json + "}";
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!(config.tolerance > 0.0)) {
    err << "error: --tol must be positive\n";
    return exit_code::usage_error;
  }
  if (config.all_inputs) {
    if (!config.input_path.empty()) {
      err << "error: --all-inputs needs --experiment cnot_dualrail\n";
      return exit_code::usage_error;
    }
    try {
      return run_truth_table(config, out, err);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return exit_code::evaluation_error;
    }
  }

  std::string label;
  int code = exit_code::ok;
  auto circuit = load_circuit(config, label, err, code);
  if (!circuit) {
    return code;
  }
  Evaluated result;
  try {
    result = evaluate(*circuit, config.backend, config.tolerance, err);
  } catch (const std::exception& e) {
    err << "error: evaluation failed: " << e.what() << '\n';
    return exit_code::evaluation_error;
  }
  if (config.format == OutputFormat::json) {
    out << report_json(result.report, result.comparison ? &*result.comparison : nullptr) << '\n';
  } else {
    print_table(out, label, *circuit, config.backend, result);
  }
  if (result.comparison && !result.comparison->pass) {
    return exit_code::comparison_failed;
  }
  return exit_code::ok;
}

int cmd_list_experiments(std::ostream& out) {
  for (const auto& info : list_experiments()) {
    out << info.name << " — " << info.description << '\n';
  }
  return exit_code::ok;
}

int cmd_check(std::ostream& out) {
  bool all = true;
  for (const auto& r : run_invariant_suite()) {
    out << fmt::format("[{}] {}{}\n", r.pass ? "PASS" : "FAIL", r.name, r.detail.empty() ? "" : " (" + r.detail + ")");
    all = all && r.pass;
  }
  return all ? exit_code::ok : exit_code::check_failed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-quantization circuit simulator with numeric and algebraic backends", "fockbench"};
  app.require_subcommand(1);

  RunConfig config;
  auto* run = app.add_subcommand("run", "Evaluate a circuit file or a built-in experiment");
  run->add_option("file", config.input_path, "Circuit description file");
  run->add_option("--experiment", config.experiment, "Built-in experiment, e.g. cnot_dualrail(1,0)");
  const std::map<std::string, Backend> backends = {
      {"numeric", Backend::numeric}, {"symbolic", Backend::symbolic}, {"both", Backend::both}};
  run->add_option("--backend", config.backend, "numeric, symbolic or both")
      ->transform(CLI::CheckedTransformer(backends, CLI::ignore_case));
  run->add_option("--cutoff", config.cutoff, "Maximum occupation per bosonic mode")
      ->envname("FOCKBENCH_CUTOFF")
      ->check(CLI::Range(1, 64));
  run->add_option("--tol", config.tolerance, "Comparison tolerance")->check(CLI::PositiveNumber);
  const std::map<std::string, OutputFormat> formats = {{"table", OutputFormat::table}, {"json", OutputFormat::json}};
  run->add_option("--format", config.format, "table or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  run->add_flag("--all-inputs", config.all_inputs, "Run the CNOT on all four logical inputs");

  auto* list = app.add_subcommand("list-experiments", "List built-in experiments");
  auto* check = app.add_subcommand("check", "Run the invariant self-test");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage_error;
  }

  if (run->parsed()) {
    return cmd_run(config, out, err);
  }
  if (list->parsed()) {
    return cmd_list_experiments(out);
  }
  if (check->parsed()) {
    return cmd_check(out);
  }
  return exit_code::usage_error;
}

}  // namespace fockbench
