#pragma once

// Matrix exponentials by scaling and squaring with a truncated Taylor series.

#include <Eigen/Dense>

#include "fockbench/fock.hpp"

namespace fockbench {

/// Target bound on the Taylor remainder of each scaled step.
inline constexpr double kTaylorRemainder = 1e-14;
/// Scaled 1-norm at or below which the Taylor series is applied directly.
inline constexpr double kScaledNorm = 0.5;

/// Smallest degree m with x^(m+1)/(m+1)! * 1/(1 - x/(m+2)) < tol.
int taylor_degree(double scaled_norm, double tol = kTaylorRemainder);

/// Dense exp(a): scale by 2^-s until the 1-norm is <= kScaledNorm, sum the
/// Taylor series, then square s times.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// exp(k) applied to `state`. The computation is restricted to the subspace
/// reachable from the support of `state` under k, which is invariant, so the
/// result is the same as with the full matrix. The step count is chosen from
/// the 1-norm of that restricted block.
FockVector expm_apply(const SparseOperator& k, const FockVector& state);

}  // namespace fockbench
