#pragma once

// Representation-free calculus of ladder-operator polynomials. Bosons obey
// CCR, fermions obey CAR, and operators of different species commute. No
// basis or cutoff is involved anywhere in this module.

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fockbench/fock.hpp"

namespace fockbench {

struct LadderSymbol {
  std::size_t mode = 0;
  Species species = Species::boson;
  bool dagger = false;

  auto operator<=>(const LadderSymbol&) const = default;
  bool operator==(const LadderSymbol&) const = default;

  LadderSymbol adjoint() const { return {mode, species, !dagger}; }
};

inline LadderSymbol create(std::size_t mode, Species s = Species::boson) { return {mode, s, true}; }
inline LadderSymbol annihilate(std::size_t mode, Species s = Species::boson) { return {mode, s, false}; }

using FactorSequence = std::vector<LadderSymbol>;

struct LadderMonomial {
  cplx coefficient{1.0, 0.0};
  FactorSequence factors;
};

/// Complex-weighted sum of ordered products of ladder symbols. Terms with an
/// identical factor sequence are merged; exact zeros are never stored.
class LadderPolynomial {
 public:
  using Map = std::map<FactorSequence, cplx>;

  LadderPolynomial() = default;
  LadderPolynomial(cplx constant);  // NOLINT(google-explicit-constructor)
  LadderPolynomial(LadderSymbol symbol);  // NOLINT(google-explicit-constructor)
  LadderPolynomial(const LadderMonomial& monomial);  // NOLINT(google-explicit-constructor)

  static LadderPolynomial product(cplx coefficient, FactorSequence factors);

  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::vector<LadderMonomial> monomials() const;
  cplx coefficient(const FactorSequence& factors) const;

  void add_term(const FactorSequence& factors, cplx coefficient);
  /// Drops terms with |coefficient| < threshold.
  LadderPolynomial& prune(double threshold);

  /// Formal adjoint: reverses each factor sequence and flips every dagger.
  LadderPolynomial adjoint() const;

  LadderPolynomial& operator+=(const LadderPolynomial& rhs);
  LadderPolynomial& operator-=(const LadderPolynomial& rhs);
  LadderPolynomial& operator*=(cplx s);

  friend LadderPolynomial operator+(LadderPolynomial lhs, const LadderPolynomial& rhs) { return lhs += rhs; }
  friend LadderPolynomial operator-(LadderPolynomial lhs, const LadderPolynomial& rhs) { return lhs -= rhs; }
  friend LadderPolynomial operator*(cplx s, LadderPolynomial p) { return p *= s; }
  friend LadderPolynomial operator*(LadderPolynomial p, cplx s) { return p *= s; }

  bool operator==(const LadderPolynomial&) const = default;

 private:
  Map terms_;
};

/// Concatenating product; no reordering.
LadderPolynomial multiply(const LadderPolynomial& p, const LadderPolynomial& q);
inline LadderPolynomial operator*(const LadderPolynomial& p, const LadderPolynomial& q) { return multiply(p, q); }

/// Canonical form: bosons before fermions; within each species daggered
/// symbols precede undaggered ones and each block is sorted by mode.
/// Fermionic swaps flip the sign, and b b^+ on one mode contributes the
/// contraction term as does a a^+ for bosons.
LadderPolynomial normal_order(const LadderPolynomial& p);

/// normal_order(pq - qp).
LadderPolynomial commutator(const LadderPolynomial& p, const LadderPolynomial& q);

/// Coefficient of the empty monomial of normal_order(p), i.e. <0|p|0>.
cplx vacuum_expectation(const LadderPolynomial& p);

/// Per-mode creation counts of a product (annihilators are ignored).
std::map<std::size_t, int> creation_counts(const FactorSequence& factors);

/// A polynomial applied to the vacuum, reduced so only creation symbols
/// remain (normal ordered).
class KetExpression {
 public:
  KetExpression() = default;

  /// Normal orders p and drops every term that annihilates the vacuum.
  static KetExpression from_polynomial(const LadderPolynomial& p);
  static KetExpression vacuum() { return from_polynomial(LadderPolynomial(1.0)); }

  const LadderPolynomial& polynomial() const { return poly_; }
  std::size_t size() const { return poly_.size(); }

  double norm_squared() const;
  KetExpression normalized() const;
  KetExpression& prune(double threshold);

  KetExpression& operator+=(const KetExpression& rhs);
  KetExpression& operator*=(cplx s);
  friend KetExpression operator+(KetExpression lhs, const KetExpression& rhs) { return lhs += rhs; }
  friend KetExpression operator*(cplx s, KetExpression k) { return k *= s; }

  bool operator==(const KetExpression&) const = default;

 private:
  explicit KetExpression(LadderPolynomial p) : poly_(std::move(p)) {}
  LadderPolynomial poly_;
};

/// <left|right> computed as vacuum_expectation(left^+ right).
cplx inner_product(const KetExpression& left, const KetExpression& right);

/// op |ket>, reduced against the vacuum.
KetExpression apply_operator(const LadderPolynomial& op, const KetExpression& ket);

/// Applies a linear mode transformation B acting on `modes`.
///
/// Each creation symbol of mode modes[k] is replaced by
/// sum_j B(j, k) a^+_{modes[j]}, i.e. column k of B. With S = e^K and
/// K = sum c_ij a_i^+ a_j, S a_k^+ S^+ = sum_j (e^c)_{jk} a_j^+ and
/// S^+ a_j S = sum_k (e^c)_{jk} a_k, so B = e^c gives S|psi>. This placement
/// is pinned by the cross-backend tests.
KetExpression substitute_modes(const KetExpression& ket, const Eigen::MatrixXcd& b,
                               std::span<const std::size_t> modes, Species species = Species::boson);

struct SeriesOptions {
  double tolerance = 1e-14;
  int max_iterations = 200;
};

class SeriesDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// sum_m K^m/m! |state>, stopping once a term's norm is below tolerance and
/// the partial-sum norm has stopped changing. Throws SeriesDivergence after
/// max_iterations.
KetExpression apply_exponential_series(const LadderPolynomial& generator, const KetExpression& state,
                                       const SeriesOptions& options = {});

/// Phases for operators diagonal in the number basis:
/// exp(i * (sum_k single[k] n_k + sum_{k,l} pair[k,l] n_k n_l)).
struct NumberPhases {
  std::map<std::size_t, double> single;
  std::map<std::pair<std::size_t, std::size_t>, double> pair;
};

KetExpression apply_number_diagonal(const NumberPhases& phases, const KetExpression& state);

std::string to_string(const LadderSymbol& s);
std::string to_string(const LadderPolynomial& p);

}  // namespace fockbench
