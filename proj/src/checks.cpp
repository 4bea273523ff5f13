#include "fockbench/checks.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "fockbench/backends.hpp"
#include "fockbench/dsl.hpp"
#include "fockbench/experiments.hpp"
#include "fockbench/random.hpp"

namespace fockbench {

namespace {

double max_abs(const SparseOperator& op) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < op.matrix().outerSize(); ++k) {
    for (SparseOperator::Matrix::InnerIterator it(op.matrix(), k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

CheckResult check_car() {
  const ModeSystem system(1, 3, 2);
  double worst = 0.0;
  for (std::size_t i = 1; i < 4; ++i) {
    for (std::size_t j = 1; j < 4; ++j) {
      const auto bi = annihilation_op(system, i);
      const auto bj_dag = creation_op(system, j);
      auto anti = bi * bj_dag + bj_dag * bi;
      if (i == j) {
        anti = anti - identity_op(system);
      }
      worst = std::max(worst, max_abs(anti));
      const auto bj = annihilation_op(system, j);
      worst = std::max(worst, max_abs(bi * bj + bj * bi));
    }
  }
  return {"CAR holds exactly on a 3-fermion system", worst == 0.0, fmt::format("max residual {:.3e}", worst)};
}

CheckResult check_commutator_identity(std::mt19937_64& rng) {
  bool ok = true;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    const Species s = trial % 2 == 0 ? Species::boson : Species::fermion;
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    std::uniform_int_distribution<int> small(-4, 4);
    Eigen::MatrixXcd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    LadderPolynomial k;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const cplx v{small(rng) / 4.0, small(rng) / 4.0};
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        k.add_term({create(i, s), annihilate(j, s)}, v);
      }
    }
    for (std::size_t j = 0; j < n && ok; ++j) {
      LadderPolynomial expected;
      for (std::size_t i = 0; i < n; ++i) {
        expected.add_term({create(i, s)}, c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      }
      ok = commutator(k, create(j, s)) == expected;
    }
  }
  return {"[K, a_j^+] = sum_i c_ij a_i^+ for bosons and fermions", ok, "20 random coefficient matrices"};
}

CheckResult check_normal_order(std::mt19937_64& rng) {
  const ModeSystem system(2, 1, 8);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const LadderPolynomial p = random_polynomial(rng, system, 6);
    const Eigen::MatrixXcd raw = to_sparse_operator(p, system).to_dense();
    const Eigen::MatrixXcd ordered = to_sparse_operator(normal_order(p), system).to_dense();
    // Columns where no product in p can push a mode past the cutoff.
    for (std::size_t col = 0; col < system.basis_size(); ++col) {
      const auto occ = system.occupation_at(col);
      bool exact = true;
      for (const auto& [factors, c] : p.terms()) {
        for (const auto& [mode, count] : creation_counts(factors)) {
          exact = exact && (!system.is_boson(mode) || occ[mode] + count <= system.cutoff());
        }
      }
      if (exact) {
        const auto j = static_cast<Eigen::Index>(col);
        worst = std::max(worst, (raw.col(j) - ordered.col(j)).cwiseAbs().maxCoeff());
      }
    }
    worst = std::max(worst, std::abs(vacuum_expectation(p) - raw(0, 0)));
  }
  return {"normal ordering agrees with the matrix representation", worst < 1e-12,
          fmt::format("max deviation {:.3e} over 100 polynomials", worst)};
}

CheckResult check_heisenberg() {
  double worst = 0.0;
  for (auto v : {BeamSplitter::Variant::symmetric, BeamSplitter::Variant::antisymmetric}) {
    worst = std::max(worst, heisenberg_residual(BeamSplitter{{0, 1}, v}));
  }
  return {"S^+ a S = B a for B1 and B2 at cutoff 6", worst < 1e-10, fmt::format("max residual {:.3e}", worst)};
}

CheckResult check_builtins() {
  std::vector<Circuit> circuits = {single_photon_bs(BeamSplitter::Variant::symmetric),
                                   single_photon_bs(BeamSplitter::Variant::antisymmetric)};
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      circuits.push_back(cnot_dualrail(c, t));
    }
  }
  for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3, std::numbers::pi / 2}) {
    circuits.push_back(hardy_vertex(theta));
  }
  double worst = 0.0;
  bool ok = true;
  for (const auto& circuit : circuits) {
    const auto report = compare_backends(circuit, 1e-9);
    worst = std::max(worst, report.max_deviation);
    ok = ok && report.pass;
  }
  return {"backends agree on every built-in experiment", ok, fmt::format("max deviation {:.3e}", worst)};
}

CheckResult check_random_circuits(std::mt19937_64& rng) {
  double worst = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const auto report = compare_backends(random_circuit(rng), 1e-9);
    worst = std::max(worst, report.max_deviation);
    ok = ok && report.pass;
  }
  return {"backends agree on 20 random circuits", ok, fmt::format("max deviation {:.3e}", worst)};
}

CheckResult check_truth_table() {
  double worst = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      const auto circuit = cnot_dualrail(c, t);
      const auto report = measure(evolve_numeric(circuit).state, circuit.measured_modes());
      auto it = report.distribution.find(dual_rail_pattern(c, c ^ t));
      const double p = it == report.distribution.end() ? 0.0 : it->second;
      worst = std::max(worst, 1.0 - p);
    }
  }
  return {"dual-rail CNOT truth table", worst < 1e-10, fmt::format("max infidelity {:.3e}", worst)};
}

CheckResult check_roundtrip() {
  bool ok = true;
  for (const auto& info : list_experiments()) {
    const Circuit c = build_experiment(info.name);
    ok = ok && equivalent(c, parse_circuit(render(c)));
  }
  return {"built-in experiments survive render/parse", ok, ""};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> results;
  const std::vector<std::function<CheckResult()>> checks = {
      check_car,
      [&rng] { return check_commutator_identity(rng); },
      [&rng] { return check_normal_order(rng); },
      check_heisenberg,
      check_builtins,
      [&rng] { return check_random_circuits(rng); },
      check_truth_table,
      check_roundtrip,
  };
  for (const auto& check : checks) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({"(check raised)", false, e.what()});
    }
  }
  return results;
}

}  // namespace fockbench
