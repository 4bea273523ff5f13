#pragma once

// Random generators for property checks: circuits of linear-optical and
// Kerr elements, ladder polynomials, and unitary mode matrices.

#include <cstddef>
#include <random>

#include <Eigen/Dense>

#include "fockbench/algebra.hpp"
#include "fockbench/circuit.hpp"

namespace fockbench {

struct RandomCircuitSpec {
  std::size_t max_modes = 4;
  int max_photons = 3;
  std::size_t max_elements = 6;
  int cutoff = kDefaultCutoff;
};

/// 2..max_modes boson modes, an input superposition of up to three photon
/// patterns with at most max_photons photons each, and up to max_elements
/// elements drawn from beam splitters, phase shifters and Kerr media.
Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitSpec& spec = {});

/// Up to `max_terms` monomials of up to `max_factors` symbols over the modes
/// of `system`, with coefficients of the form (p + q i)/4 for small integers.
LadderPolynomial random_polynomial(std::mt19937_64& rng, const ModeSystem& system, std::size_t max_factors,
                                   std::size_t max_terms = 3);

/// Haar-random unitary via QR of a complex Gaussian matrix.
Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index n);

}  // namespace fockbench
