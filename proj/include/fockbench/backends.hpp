#pragma once

// Two independent circuit evaluators and the comparator between them.
//
// The numeric backend works in the truncated Fock basis and exponentiates
// the sparse matrix of each element generator. The symbolic backend never
// builds a basis: linear elements act by substituting creation operators,
// number-diagonal elements by phases read off the creation monomials, and
// the annihilation vertex by a reduced exponential series.

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fockbench/algebra.hpp"
#include "fockbench/circuit.hpp"
#include "fockbench/fock.hpp"

namespace fockbench {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NumericOptions {
  std::size_t max_basis_size = std::size_t{1} << 22;
};

struct NumericEvolution {
  FockVector state;
  std::vector<std::string> warnings;
};

/// Sparse matrix of a polynomial on the truncated basis of `system`.
SparseOperator to_sparse_operator(const LadderPolynomial& p, const ModeSystem& system);

/// Basis representation of a ket (creation monomials applied to the vacuum).
FockVector ket_to_fock(const KetExpression& ket, const ModeSystem& system);

/// Applies exp(K_matrix) element by element. Attaches a warning when the
/// boson number can exceed the cutoff or the norm drifts by more than 1e-10.
/// Throws EvaluationError when the basis exceeds options.max_basis_size.
NumericEvolution evolve_numeric(const Circuit& circuit, const NumericOptions& options = {});

KetExpression evolve_symbolic(const Circuit& circuit, const SeriesOptions& options = {});

struct MeasurementReport {
  std::vector<std::size_t> modes;
  double norm = 0.0;
  std::map<std::size_t, double> expectations;            // <N_k>
  std::map<OccupationVector, double> distribution;       // restricted to `modes`
};

/// Joint number statistics over `modes` from a basis state.
MeasurementReport measure(const FockVector& state, std::span<const std::size_t> modes);

/// Same statistics for a ket, from vacuum expectations of number-operator
/// insertions. Outcome probabilities use polynomial projectors in N_k.
MeasurementReport measure(const KetExpression& state, std::span<const std::size_t> modes);

struct Deviation {
  std::string quantity;
  double numeric = 0.0;
  double symbolic = 0.0;
  double deviation = 0.0;
};

struct ComparisonReport {
  MeasurementReport numeric;
  MeasurementReport symbolic;
  std::vector<Deviation> deviations;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<std::string> warnings;
};

/// Runs both backends concurrently and compares every expectation and joint
/// probability by absolute difference.
ComparisonReport compare_backends(const Circuit& circuit, double tol, const NumericOptions& options = {});

/// max_j || S^+ a_j S - sum_k B_jk a_k || (operator 2-norm) for a linear
/// element on its own modes at `cutoff`, restricted to basis columns whose
/// total occupation is at most the cutoff (the rest are truncation-exempt).
double heisenberg_residual(const CircuitElement& element, int cutoff = kDefaultCutoff);

/// max |(S^+ S - I)_ij| over the same columns.
double unitarity_residual(const CircuitElement& element, int cutoff = kDefaultCutoff);

}  // namespace fockbench
