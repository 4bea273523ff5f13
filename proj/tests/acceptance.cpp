// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "fockbench/backends.hpp"
#include "fockbench/cli.hpp"
#include "fockbench/dsl.hpp"
#include "fockbench/experiments.hpp"
#include "fockbench/random.hpp"
#include "oracles.hpp"

using namespace fockbench;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double prob(const MeasurementReport& r, const OccupationVector& occ) {
  const auto it = r.distribution.find(occ);
  return it == r.distribution.end() ? 0.0 : it->second;
}

// Largest probability difference between two reports over the union of outcomes.
double distribution_gap(const MeasurementReport& a, const MeasurementReport& b) {
  double gap = 0.0;
  for (const auto& [occ, p] : a.distribution) {
    gap = std::max(gap, std::abs(p - prob(b, occ)));
  }
  for (const auto& [occ, p] : b.distribution) {
    gap = std::max(gap, std::abs(p - prob(a, occ)));
  }
  return gap;
}

MeasurementReport numeric_report(const Circuit& c) { return measure(evolve_numeric(c).state, c.measured_modes()); }

Outcome single_photon() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_prob = 0.0;
  double worst_dev = 0.0;
  for (auto v : {BeamSplitter::Variant::symmetric, BeamSplitter::Variant::antisymmetric}) {
    const auto r = compare_backends(single_photon_bs(v, 6), 1e-12);
    worst_dev = std::max(worst_dev, r.max_deviation);
    for (const auto* m : {&r.numeric, &r.symbolic}) {
      worst_prob = std::max(worst_prob, std::abs(prob(*m, OccupationVector{1, 0}) - 0.5));
      worst_prob = std::max(worst_prob, std::abs(prob(*m, OccupationVector{0, 1}) - 0.5));
    }
  }
  const double t = seconds_since(t0);
  return {worst_prob < 1e-12 && worst_dev < 1e-12 && t < 0.1,
          fmt::format("max |P-0.5| {:.2e}, max deviation {:.2e}, runtime {:.4f} s", worst_prob, worst_dev, t)};
}

Outcome heisenberg() {
  double worst = std::max(heisenberg_residual(BeamSplitter{{0, 1}, BeamSplitter::Variant::symmetric, 0.0}, 6),
                          heisenberg_residual(BeamSplitter{{0, 1}, BeamSplitter::Variant::antisymmetric, 0.0}, 6));
  std::mt19937_64 rng(20);
  for (int i = 0; i < 20; ++i) {
    const QuadraticCustom q{{0, 1}, generator_from_unitary(random_unitary(rng, 2))};
    worst = std::max(worst, heisenberg_residual(q, 6));
  }
  return {worst < 1e-10, fmt::format("max residual {:.2e} over B1, B2 and 20 random unitaries", worst)};
}

Outcome commutator_identity() {
  const std::vector<cplx> pool{0.0, 1.0, -1.0, {0, 1}, {0, -1}, 0.5, -2.0, {1.5, 0.25}, {-0.125, 3}};
  std::mt19937_64 rng(30);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<std::size_t> size(1, 4);
  int failures = 0;
  int checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Species s = trial % 2 == 0 ? Species::boson : Species::fermion;
    const std::size_t n = size(rng);
    Eigen::MatrixXcd c(n, n);
    LadderPolynomial k;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        c(i, j) = pool[pick(rng)];
        k += LadderPolynomial::product(c(i, j), {create(i, s), annihilate(j, s)});
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      LadderPolynomial expected;
      for (std::size_t i = 0; i < n; ++i) {
        expected += LadderPolynomial::product(c(i, j), {create(i, s)});
      }
      ++checks;
      failures += commutator(k, create(j, s)) == expected ? 0 : 1;
    }
  }
  return {failures == 0, fmt::format("{} of {} exact equalities failed, 25 bosonic and 25 fermionic matrices", failures,
                                     checks)};
}

Outcome hardy() {
  double certain = 1.0;
  double worst = 0.0;
  const OccupationVector photon{1, 0, 0};
  {
    const auto r = compare_backends(hardy_vertex(pi / 2), 1e-10);
    certain = std::min(prob(r.numeric, photon), prob(r.symbolic, photon));
  }
  for (double theta : {pi / 6, pi / 4, pi / 3}) {
    const auto r = compare_backends(hardy_vertex(theta), 1e-10);
    const double expected = std::pow(std::sin(theta), 2);
    worst = std::max({worst, std::abs(prob(r.numeric, photon) - expected), std::abs(prob(r.symbolic, photon) - expected)});
  }
  return {certain >= 1 - 1e-10 && worst < 1e-10,
          fmt::format("P(photon) at pi/2 = {:.15f}, max |P - sin^2| {:.2e}", certain, worst)};
}

Outcome cnot() {
  double fidelity = 1.0;
  for (int ctl : {0, 1}) {
    for (int tgt : {0, 1}) {
      const auto c = cnot_dualrail(ctl, tgt, 6);
      const auto expected = dual_rail_pattern(ctl, ctl ^ tgt);
      fidelity = std::min(fidelity, prob(numeric_report(c), expected));
      fidelity = std::min(fidelity, prob(measure(evolve_symbolic(c), c.measured_modes()), expected));
    }
  }
  return {fidelity >= 1 - 1e-10, fmt::format("min fidelity {:.15f} over 4 inputs and 2 backends", fidelity)};
}

std::vector<Circuit> random_suite() {
  std::mt19937_64 rng(60);
  std::vector<Circuit> suite;
  for (int i = 0; i < 100; ++i) {
    suite.push_back(random_circuit(rng, {4, 3, 6, 6}));
  }
  return suite;
}

Outcome equivalence(const std::vector<Circuit>& suite) {
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  double worst = 0.0;
  for (const auto& c : suite) {
    const auto r = compare_backends(c, 1e-9);
    failures += r.pass ? 0 : 1;
    worst = std::max(worst, r.max_deviation);
  }
  const double t = seconds_since(t0);
  return {failures == 0 && t < 60.0,
          fmt::format("{} of 100 failed, max deviation {:.2e}, runtime {:.2f} s", failures, worst, t)};
}

Outcome algebra_oracle() {
  std::mt19937_64 rng(70);
  std::uniform_int_distribution<std::size_t> modes(1, 3);
  constexpr int kCutoff = 8;
  constexpr int kFactors = 6;
  double worst_matrix = 0.0;
  double worst_vacuum = 0.0;
  int count = 0;
  while (count < 1000) {
    const std::size_t m = modes(rng);
    const std::size_t fermions = std::uniform_int_distribution<std::size_t>(0, m)(rng);
    const ModeSystem sys(m - fermions, fermions, kCutoff);
    const oracle::SparseSymbols symbols(sys);
    const auto safe = oracle::safe_columns(sys, kFactors);
    std::vector<bool> vacuum(sys.basis_size(), false);
    vacuum[0] = true;
    for (int k = 0; k < 50; ++k, ++count) {
      const auto p = random_polynomial(rng, sys, kFactors);
      const auto lhs = symbols.apply(p, safe);
      const auto rhs = symbols.apply(normal_order(p), safe);
      worst_matrix = std::max(worst_matrix, lhs.size() ? (lhs - rhs).cwiseAbs().maxCoeff() : 0.0);
      worst_vacuum = std::max(worst_vacuum, std::abs(vacuum_expectation(p) - symbols.apply(p, vacuum)(0, 0)));
    }
  }
  return {worst_matrix < 1e-12 && worst_vacuum < 1e-12,
          fmt::format("1000 polynomials: max matrix deviation {:.2e}, max vacuum deviation {:.2e}", worst_matrix,
                      worst_vacuum)};
}

Outcome truncation(const std::vector<Circuit>& suite) {
  std::vector<Circuit> circuits;
  circuits.push_back(single_photon_bs(BeamSplitter::Variant::symmetric, 6));
  circuits.push_back(single_photon_bs(BeamSplitter::Variant::antisymmetric, 6));
  for (int ctl : {0, 1}) {
    for (int tgt : {0, 1}) {
      circuits.push_back(cnot_dualrail(ctl, tgt, 6));
    }
  }
  circuits.insert(circuits.end(), suite.begin(), suite.end());
  double worst = 0.0;
  for (const auto& c : circuits) {
    worst = std::max(worst, distribution_gap(numeric_report(c), numeric_report(c.with_cutoff(12))));
  }
  return {worst <= 1e-12, fmt::format("max probability change {:.2e} over {} circuits", worst, circuits.size())};
}

Outcome entropy() {
  const ModeSystem sys(2, 0, 6);
  FockVector bell(sys);
  bell.add(OccupationVector{1, 0}, 1.0 / std::sqrt(2.0));
  bell.add(OccupationVector{0, 1}, 1.0 / std::sqrt(2.0));
  const std::vector<std::size_t> left{0};
  const double s_bell = mode_bipartition_entropy(bell, left);
  const double s_prod = mode_bipartition_entropy(basis_state(sys, OccupationVector{1, 0}), left);
  const double gap = std::max(std::abs(s_bell - std::numbers::ln2), std::abs(s_prod));
  return {gap < 1e-12, fmt::format("S(split) - ln2 = {:.2e}, S(product) = {:.2e}", s_bell - std::numbers::ln2, s_prod)};
}

struct Malformed {
  std::size_t line;
  std::string text;
};

Outcome parser() {
  int round_trip_failures = 0;
  std::vector<Circuit> builtins;
  for (const auto& info : list_experiments()) {
    builtins.push_back(build_experiment(info.name));
  }
  for (int ctl : {0, 1}) {
    for (int tgt : {0, 1}) {
      builtins.push_back(cnot_dualrail(ctl, tgt));
    }
  }
  for (double theta : {pi / 6, pi / 4, pi / 3}) {
    builtins.push_back(hardy_vertex(theta));
  }
  for (const auto& c : builtins) {
    round_trip_failures += equivalent(parse_circuit(render(c)), c) ? 0 : 1;
  }

  const std::string sys2 = "system bosons=2 cutoff=3\n";
  const std::string qed = "system bosons=1 fermions=2 cutoff=3\n";
  const std::vector<Malformed> cases{
      {1, "bs 1 2 sym\n"},
      {2, sys2 + "system bosons=3 cutoff=3\n"},
      {2, sys2 + "teleport 1 2\n"},
      {2, sys2 + "bs 1 3 sym\n"},
      {2, sys2 + "bs 1 1 sym\n"},
      {2, sys2 + "bs 1 2 wide\n"},
      {3, sys2 + "input create 1\nphase 1 pie\n"},
      {2, qed + "bs 1 2 sym\n"},
      {2, qed + "vertex 2 1 3 theta=1\n"},
      {2, qed + "vertex 1 2 3\n"},
      {2, sys2 + "input superpose 0:1\n"},
      {1, "system bosons=2 cutoff=0\n"},
      {1, "system bosons=x cutoff=3\n"},
      {2, qed + "input create 2 2\n"},
      {3, sys2 + "input create 1\nmeasure 1 1\n"},
      {4, sys2 + "input create 1\n# comment\nkerr 1\n"},
      {3, sys2 + "input create 1\ninput create 2\n"},
      {2, sys2 + "input superpose 1:1 ; 2\n"},
      {5, sys2 + "\n\n\nkerr 1 2 strength=abc\n"},
      {2, sys2 + "input create 0\n"},
  };
  int malformed_failures = 0;
  const auto dir = std::filesystem::temp_directory_path();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto path = (dir / fmt::format("fockbench_malformed_{}.fck", i)).string();
    std::ofstream(path) << cases[i].text;
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli({"run", path}, out, err);
    const bool located = err.str().find(fmt::format("{}:{}:", path, cases[i].line)) != std::string::npos;
    if (code != exit_code::parse_error || !located) {
      ++malformed_failures;
      std::cerr << "  malformed case " << i << ": exit " << code << ", " << err.str();
    }
    std::filesystem::remove(path);
  }
  return {round_trip_failures == 0 && malformed_failures == 0 && cases.size() == 20,
          fmt::format("{} of {} round trips failed, {} of {} malformed programs misreported", round_trip_failures,
                      builtins.size(), malformed_failures, cases.size())};
}

}  // namespace

int main() {
  const auto suite = random_suite();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"single-photon beam splitter", single_photon},
      {"Heisenberg mode relation", heisenberg},
      {"commutator identity", commutator_identity},
      {"annihilation vertex", hardy},
      {"dual-rail CNOT truth table", cnot},
      {"backend equivalence on random circuits", [&] { return equivalence(suite); }},
      {"normal ordering vs matrix oracle", algebra_oracle},
      {"truncation exactness", [&] { return truncation(suite); }},
      {"mode-bipartition entropy", entropy},
      {"parser round trip and rejection", parser},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    failed += o.pass ? 0 : 1;
    std::cout << fmt::format("[{}] criterion {:>2}: {} ({})", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                             o.detail)
              << std::endl;
  }
  std::cout << fmt::format("{} of {} criteria passed", criteria.size() - static_cast<std::size_t>(failed),
                           criteria.size())
            << std::endl;
  return failed == 0 ? 0 : 1;
}
