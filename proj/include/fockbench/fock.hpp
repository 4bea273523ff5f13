#pragma once

// Truncated occupation-number (Fock) basis over a finite list of bosonic and
// fermionic modes, sparse states, and ladder operators as explicit matrices.

#include <compare>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace fockbench {

using cplx = std::complex<double>;

/// Amplitudes with magnitude below this are dropped from sparse states.
inline constexpr double kPruneThreshold = 1e-14;
inline constexpr int kDefaultCutoff = 6;

enum class Species { boson, fermion };

/// Per-mode particle counts, one entry per mode of the owning ModeSystem.
struct OccupationVector {
  std::vector<int> counts;

  OccupationVector() = default;
  explicit OccupationVector(std::vector<int> c) : counts(std::move(c)) {}
  OccupationVector(std::initializer_list<int> c) : counts(c) {}

  std::size_t size() const { return counts.size(); }
  int operator[](std::size_t mode) const { return counts[mode]; }
  int& operator[](std::size_t mode) { return counts[mode]; }
  int total() const;

  auto operator<=>(const OccupationVector&) const = default;
  bool operator==(const OccupationVector&) const = default;
};

std::string to_string(const OccupationVector& occ);

/// Mode list plus bosonic cutoff. Modes are indexed from 0, bosons first.
///
/// Basis enumeration is lexicographic in the occupation vector with mode 0
/// most significant: index = sum_k n_k * stride_k where stride_k is the
/// product of the dimensions of modes k+1..M-1. Bosonic modes have dimension
/// cutoff+1, fermionic modes dimension 2.
class ModeSystem {
 public:
  ModeSystem(std::size_t boson_modes, std::size_t fermion_modes, int cutoff = kDefaultCutoff);

  std::size_t boson_modes() const { return boson_modes_; }
  std::size_t fermion_modes() const { return fermion_modes_; }
  std::size_t mode_count() const { return boson_modes_ + fermion_modes_; }
  int cutoff() const { return cutoff_; }

  Species species(std::size_t mode) const;
  bool is_boson(std::size_t mode) const { return mode < boson_modes_; }
  int mode_dimension(std::size_t mode) const;

  /// Throws std::overflow_error when the product does not fit in size_t.
  std::size_t basis_size() const;
  std::size_t index_of(const OccupationVector& occ) const;
  OccupationVector occupation_at(std::size_t index) const;

  /// Throws std::invalid_argument if `occ` is not a label of this system.
  void validate(const OccupationVector& occ) const;
  void check_mode(std::size_t mode) const;

  ModeSystem with_cutoff(int cutoff) const { return {boson_modes_, fermion_modes_, cutoff}; }

  bool operator==(const ModeSystem&) const = default;

 private:
  std::size_t boson_modes_;
  std::size_t fermion_modes_;
  int cutoff_;
};

/// Sparse complex superposition over occupation vectors.
class FockVector {
 public:
  using Map = std::map<OccupationVector, cplx>;

  explicit FockVector(ModeSystem system) : system_(std::move(system)) {}

  const ModeSystem& system() const { return system_; }
  const Map& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }
  bool empty() const { return amplitudes_.empty(); }

  cplx amplitude(const OccupationVector& occ) const;
  /// Adds `value` to the amplitude of `occ`; entries that fall below the
  /// pruning threshold are erased.
  void add(const OccupationVector& occ, cplx value);

  double norm_squared() const;
  double norm() const;
  FockVector normalized() const;
  bool is_normalized(double tol = 1e-12) const;

  FockVector& operator*=(cplx s);
  friend FockVector operator+(FockVector lhs, const FockVector& rhs);
  friend FockVector operator*(cplx s, FockVector v) { return v *= s; }

  /// Dense coefficient vector in basis enumeration order.
  Eigen::VectorXcd to_dense() const;
  static FockVector from_dense(const ModeSystem& system, const Eigen::VectorXcd& v);

 private:
  ModeSystem system_;
  Map amplitudes_;
};

/// Sparse complex matrix over the enumerated basis of a ModeSystem.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

  SparseOperator(ModeSystem system, Matrix matrix);

  const ModeSystem& system() const { return system_; }
  const Matrix& matrix() const { return matrix_; }

  SparseOperator adjoint() const;
  Eigen::MatrixXcd to_dense() const { return Eigen::MatrixXcd(matrix_); }

  friend SparseOperator operator*(const SparseOperator& lhs, const SparseOperator& rhs);
  friend SparseOperator operator+(const SparseOperator& lhs, const SparseOperator& rhs);
  friend SparseOperator operator-(const SparseOperator& lhs, const SparseOperator& rhs);
  friend SparseOperator operator*(cplx s, const SparseOperator& op);

 private:
  ModeSystem system_;
  Matrix matrix_;
};

FockVector vacuum_state(const ModeSystem& system);
FockVector basis_state(const ModeSystem& system, const OccupationVector& occ);

SparseOperator identity_op(const ModeSystem& system);
SparseOperator zero_op(const ModeSystem& system);
/// Bosonic: sqrt(n+1) from n to n+1, with the transition out of n == cutoff
/// dropped. Fermionic: Jordan-Wigner sign (-1)^(occupied fermionic modes
/// with a smaller index).
SparseOperator creation_op(const ModeSystem& system, std::size_t mode);
SparseOperator annihilation_op(const ModeSystem& system, std::size_t mode);
SparseOperator number_op(const ModeSystem& system, std::size_t mode);

FockVector apply(const SparseOperator& op, const FockVector& state);
cplx inner_product(const FockVector& left, const FockVector& right);

/// Von Neumann entropy (nats) of the reduced state on `left_modes`.
double mode_bipartition_entropy(const FockVector& state, std::span<const std::size_t> left_modes);

}  // namespace fockbench
