#include "fockbench/backends.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "fockbench/expm.hpp"

namespace fockbench {

namespace {

constexpr double kProbabilityFloor = 1e-15;

// Creation/annihilation matrices built once per (mode, dagger).
class LadderCache {
 public:
  explicit LadderCache(const ModeSystem& system) : system_(system) {}

  const SparseOperator& get(const LadderSymbol& s) {
    system_.check_mode(s.mode);
    if (system_.species(s.mode) != s.species) {
      throw std::invalid_argument(fmt::format("symbol {} has the wrong species for mode {}", to_string(s), s.mode + 1));
    }
    auto key = std::make_pair(s.mode, s.dagger);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, s.dagger ? creation_op(system_, s.mode) : annihilation_op(system_, s.mode)).first;
    }
    return it->second;
  }

 private:
  const ModeSystem& system_;
  std::map<std::pair<std::size_t, bool>, SparseOperator> cache_;
};

void check_basis(const ModeSystem& system, const NumericOptions& options) {
  std::size_t size = 0;
  try {
    size = system.basis_size();
  } catch (const std::overflow_error&) {
    throw EvaluationError("basis size overflows");
  }
  if (size > options.max_basis_size) {
    throw EvaluationError(
        fmt::format("basis size {} exceeds the configured cap of {}", size, options.max_basis_size));
  }
}

}  // namespace

SparseOperator to_sparse_operator(const LadderPolynomial& p, const ModeSystem& system) {
  LadderCache cache(system);
  SparseOperator::Matrix sum(static_cast<Eigen::Index>(system.basis_size()),
                             static_cast<Eigen::Index>(system.basis_size()));
  for (const auto& [factors, c] : p.terms()) {
    SparseOperator term = identity_op(system);
    for (const auto& s : factors) {
      term = term * cache.get(s);
    }
    sum += c * term.matrix();
  }
  return {system, std::move(sum)};
}

FockVector ket_to_fock(const KetExpression& ket, const ModeSystem& system) {
  LadderCache cache(system);
  FockVector out(system);
  const FockVector vac = vacuum_state(system);
  for (const auto& [factors, c] : ket.polynomial().terms()) {
    FockVector v = vac;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      v = apply(cache.get(*it), v);
    }
    v *= c;
    out = out + v;
  }
  return out;
}

NumericEvolution evolve_numeric(const Circuit& circuit, const NumericOptions& options) {
  const ModeSystem& system = circuit.system();
  check_basis(system, options);

  NumericEvolution result{ket_to_fock(circuit.input(), system), {}};
  int photon_bound = circuit.max_input_bosons();
  if (!circuit.conserves_boson_number()) {
    photon_bound += static_cast<int>(system.fermion_modes() / 2);
  }
  if (photon_bound > system.cutoff()) {
    result.warnings.push_back(fmt::format(
        "truncation: up to {} bosons may occupy one mode but the cutoff is {}", photon_bound, system.cutoff()));
  }

  const double input_norm = result.state.norm();
  for (const auto& e : circuit.elements()) {
    const SparseOperator k = to_sparse_operator(element_generator(e, system), system);
    result.state = expm_apply(k, result.state);
  }
  const double drift = std::abs(result.state.norm() - input_norm);
  if (drift > 1e-10) {
    result.warnings.push_back(fmt::format("norm drifted by {:.3e} during evolution", drift));
  }
  return result;
}

KetExpression evolve_symbolic(const Circuit& circuit, const SeriesOptions& options) {
  const ModeSystem& system = circuit.system();
  KetExpression state = circuit.input();
  for (const auto& e : circuit.elements()) {
    if (const auto* ps = std::get_if<PhaseShifter>(&e)) {
      NumberPhases phases;
      phases.single[ps->mode] = ps->phase;
      state = apply_number_diagonal(phases, state);
    } else if (const auto* k = std::get_if<KerrMedium>(&e)) {
      NumberPhases phases;
      phases.pair[{k->modes[0], k->modes[1]}] = k->strength;
      state = apply_number_diagonal(phases, state);
    } else if (std::holds_alternative<AnnihilationVertex>(e)) {
      state = apply_exponential_series(element_generator(e, system), state, options);
    } else {
      const auto modes = element_modes(e);
      state = substitute_modes(state, mode_matrix(e), modes, system.species(modes.front()));
    }
    state.prune(kPruneThreshold);
  }
  return state;
}

// ---------------------------------------------------------------------------

namespace {

void require_normalized(double norm_squared) {
  if (std::abs(norm_squared - 1.0) > 1e-9) {
    throw std::invalid_argument(fmt::format("measurement requires a normalized state (norm^2 = {:.12g})", norm_squared));
  }
}

}  // namespace

MeasurementReport measure(const FockVector& state, std::span<const std::size_t> modes) {
  for (std::size_t m : modes) {
    state.system().check_mode(m);
  }
  MeasurementReport report;
  report.modes.assign(modes.begin(), modes.end());
  const double n2 = state.norm_squared();
  require_normalized(n2);
  report.norm = std::sqrt(n2);
  for (std::size_t m : modes) {
    report.expectations[m] = 0.0;
  }
  std::map<OccupationVector, double> dist;
  for (const auto& [occ, amp] : state.amplitudes()) {
    const double p = std::norm(amp);
    OccupationVector key;
    for (std::size_t m : modes) {
      key.counts.push_back(occ[m]);
      report.expectations[m] += p * occ[m];
    }
    dist[key] += p;
  }
  for (const auto& [key, p] : dist) {
    if (p >= kProbabilityFloor) {
      report.distribution.emplace(key, p);
    }
  }
  return report;
}

MeasurementReport measure(const KetExpression& state, std::span<const std::size_t> modes) {
  MeasurementReport report;
  report.modes.assign(modes.begin(), modes.end());
  const double n2 = state.norm_squared();
  require_normalized(n2);
  report.norm = std::sqrt(n2);

  // Species of each mode as it appears in the ket, and the occupations that
  // N_k can take on it (the eigenvalues on its creation monomials).
  std::map<std::size_t, Species> species;
  std::map<std::size_t, std::set<int>> spectrum;
  std::set<OccupationVector> candidates;
  for (const auto& [factors, c] : state.polynomial().terms()) {
    const auto counts = creation_counts(factors);
    for (const auto& s : factors) {
      species[s.mode] = s.species;
    }
    OccupationVector key;
    for (std::size_t m : modes) {
      auto it = counts.find(m);
      const int n = it == counts.end() ? 0 : it->second;
      key.counts.push_back(n);
      spectrum[m].insert(n);
    }
    candidates.insert(key);
  }

  auto number = [&species](std::size_t m) {
    const Species s = species.at(m);
    return LadderPolynomial::product(1.0, {create(m, s), annihilate(m, s)});
  };

  for (std::size_t m : modes) {
    report.expectations[m] =
        species.contains(m) ? inner_product(state, apply_operator(number(m), state)).real() : 0.0;
  }

  for (const auto& outcome : candidates) {
    KetExpression projected = state;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const std::size_t m = modes[i];
      if (!species.contains(m)) {
        continue;
      }
      const int target = outcome[i];
      for (int other : spectrum[m]) {
        if (other == target) {
          continue;
        }
        // (N_k - other) / (target - other)
        LadderPolynomial factor = number(m) - LadderPolynomial(cplx(other));
        factor *= 1.0 / (target - other);
        projected = apply_operator(factor, projected);
      }
    }
    const double p = projected.norm_squared();
    if (p >= kProbabilityFloor) {
      report.distribution.emplace(outcome, p);
    }
  }
  return report;
}

ComparisonReport compare_backends(const Circuit& circuit, double tol, const NumericOptions& options) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("comparison tolerance must be positive");
  }
  const auto& modes = circuit.measured_modes();
  auto symbolic = std::async(std::launch::async, [&circuit, &modes] {
    return measure(evolve_symbolic(circuit), modes);
  });
  NumericEvolution numeric = evolve_numeric(circuit, options);

  ComparisonReport report;
  report.numeric = measure(numeric.state, modes);
  report.symbolic = symbolic.get();
  report.warnings = std::move(numeric.warnings);
  report.tolerance = tol;

  auto record = [&report](std::string quantity, double a, double b) {
    const double d = std::abs(a - b);
    report.max_deviation = std::max(report.max_deviation, d);
    report.deviations.push_back({std::move(quantity), a, b, d});
  };
  for (std::size_t m : modes) {
    record(fmt::format("N{}", m + 1), report.numeric.expectations.at(m), report.symbolic.expectations.at(m));
  }
  std::set<OccupationVector> outcomes;
  for (const auto& [occ, p] : report.numeric.distribution) {
    outcomes.insert(occ);
  }
  for (const auto& [occ, p] : report.symbolic.distribution) {
    outcomes.insert(occ);
  }
  for (const auto& occ : outcomes) {
    auto lookup = [&occ](const MeasurementReport& r) {
      auto it = r.distribution.find(occ);
      return it == r.distribution.end() ? 0.0 : it->second;
    };
    record(fmt::format("P{}", to_string(occ)), lookup(report.numeric), lookup(report.symbolic));
  }
  report.pass = report.max_deviation < tol;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

struct LocalElement {
  ModeSystem system;
  CircuitElement element;
};

// The element re-expressed on a system made of just its own modes.
LocalElement localize(const CircuitElement& e, int cutoff) {
  return std::visit(
      [cutoff](const auto& x) -> LocalElement {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          T y = x;
          y.modes = {0, 1};
          return {ModeSystem(2, 0, cutoff), y};
        } else if constexpr (std::is_same_v<T, PhaseShifter>) {
          T y = x;
          y.mode = 0;
          return {ModeSystem(1, 0, cutoff), y};
        } else if constexpr (std::is_same_v<T, KerrMedium>) {
          T y = x;
          y.modes = {0, 1};
          return {ModeSystem(2, 0, cutoff), y};
        } else if constexpr (std::is_same_v<T, AnnihilationVertex>) {
          return {ModeSystem(1, 2, cutoff), AnnihilationVertex{0, 1, 2, x.theta}};
        } else {
          T y = x;
          for (std::size_t i = 0; i < y.modes.size(); ++i) {
            y.modes[i] = i;
          }
          // Custom generators are assumed bosonic here.
          return {ModeSystem(y.modes.size(), 0, cutoff), y};
        }
      },
      e);
}

// Columns on which the truncated evolution coincides with the exact one:
// the largest single-mode boson count reachable from the column stays
// within the cutoff.
std::vector<Eigen::Index> exact_columns(const LocalElement& local) {
  const ModeSystem& sys = local.system;
  const bool vertex = std::holds_alternative<AnnihilationVertex>(local.element);
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < sys.basis_size(); ++i) {
    const OccupationVector occ = sys.occupation_at(i);
    int reach = 0;
    if (vertex) {
      reach = occ[0] + std::min(occ[1], occ[2]);
    } else {
      for (std::size_t m = 0; m < sys.boson_modes(); ++m) {
        reach += occ[m];
      }
    }
    if (reach <= sys.cutoff()) {
      cols.push_back(static_cast<Eigen::Index>(i));
    }
  }
  return cols;
}

Eigen::MatrixXcd evolution_matrix(const LocalElement& local) {
  return expm(to_sparse_operator(element_generator(local.element, local.system), local.system).to_dense());
}

}  // namespace

double heisenberg_residual(const CircuitElement& element, int cutoff) {
  if (!is_linear(element)) {
    throw std::invalid_argument("heisenberg_residual requires a linear element");
  }
  const LocalElement local = localize(element, cutoff);
  const Eigen::MatrixXcd s = evolution_matrix(local);
  const Eigen::MatrixXcd b = mode_matrix(local.element);
  const auto cols = exact_columns(local);
  const std::size_t n = local.system.mode_count();

  std::vector<Eigen::MatrixXcd> lowering;
  for (std::size_t k = 0; k < n; ++k) {
    lowering.push_back(annihilation_op(local.system, k).to_dense());
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::MatrixXcd diff = s.adjoint() * lowering[j] * s;
    for (std::size_t k = 0; k < n; ++k) {
      diff -= b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * lowering[k];
    }
    Eigen::MatrixXcd restricted(diff.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      restricted.col(static_cast<Eigen::Index>(c)) = diff.col(cols[c]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(restricted);
    worst = std::max(worst, svd.singularValues()(0));
  }
  return worst;
}

double unitarity_residual(const CircuitElement& element, int cutoff) {
  const LocalElement local = localize(element, cutoff);
  const Eigen::MatrixXcd s = evolution_matrix(local);
  const Eigen::MatrixXcd gram = s.adjoint() * s - Eigen::MatrixXcd::Identity(s.rows(), s.cols());
  double worst = 0.0;
  for (Eigen::Index c : exact_columns(local)) {
    worst = std::max(worst, gram.col(c).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace fockbench
