#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fockbench/algebra.hpp"
#include "fockbench/fock.hpp"

namespace fockbench {

/// Two-mode linear element. Mode matrices:
///   symmetric      (1/sqrt2) [[1, i], [i, 1]]
///   antisymmetric  (1/sqrt2) [[1, -1], [1, 1]]
///   angle t        [[cos t, -sin t], [sin t, cos t]]
struct BeamSplitter {
  enum class Variant { symmetric, antisymmetric, angle };
  std::array<std::size_t, 2> modes{};
  Variant variant = Variant::symmetric;
  double angle = 0.0;  // only for Variant::angle
};

/// exp(i * phase * n).
struct PhaseShifter {
  std::size_t mode = 0;
  double phase = 0.0;
};

/// exp(i * strength * n_1 n_2).
struct KerrMedium {
  std::array<std::size_t, 2> modes{};
  double strength = std::numbers::pi;
};

/// exp(theta (a^+ b d + a b^+ d^+)) with a the photon, b the electron and d
/// the positron. sin(theta) is the annihilation amplitude.
struct AnnihilationVertex {
  std::size_t photon_mode = 0;
  std::size_t electron_mode = 0;
  std::size_t positron_mode = 0;
  double theta = 0.0;
};

/// exp(sum_ij c_ij a_i^+ a_j) over `modes`; c must be anti-Hermitian. Not
/// expressible in the circuit text format.
struct QuadraticCustom {
  std::vector<std::size_t> modes;
  Eigen::MatrixXcd coefficients;
};

using CircuitElement = std::variant<BeamSplitter, PhaseShifter, KerrMedium, AnnihilationVertex, QuadraticCustom>;

bool is_linear(const CircuitElement& e);
std::vector<std::size_t> element_modes(const CircuitElement& e);
std::string describe(const CircuitElement& e);

/// Throws std::invalid_argument if the element references invalid or
/// repeated modes, the wrong species, or a non-anti-Hermitian generator.
void validate_element(const ModeSystem& system, const CircuitElement& e);

/// Single-particle mode matrix of a linear element. Throws
/// std::invalid_argument for Kerr media and annihilation vertices.
Eigen::MatrixXcd mode_matrix(const CircuitElement& e);

/// K with exp(K) the element's evolution operator.
LadderPolynomial element_generator(const CircuitElement& e, const ModeSystem& system);

/// Principal logarithm of a unitary matrix: anti-Hermitian c with
/// exp(c) == b. An eigenvalue at -1 takes the branch log(-1) = +i pi.
Eigen::MatrixXcd generator_from_unitary(const Eigen::MatrixXcd& b);

/// A validated circuit. The input ket is normalized and all modes are valid.
class Circuit {
 public:
  Circuit(ModeSystem system, std::vector<CircuitElement> elements, KetExpression input,
          std::vector<std::size_t> measured_modes);

  const ModeSystem& system() const { return system_; }
  const std::vector<CircuitElement>& elements() const { return elements_; }
  const KetExpression& input() const { return input_; }
  const std::vector<std::size_t>& measured_modes() const { return measured_; }

  /// Same circuit over a different cutoff.
  Circuit with_cutoff(int cutoff) const;
  /// True when no element changes the total boson number.
  bool conserves_boson_number() const;
  /// Largest total boson count among the input's terms.
  int max_input_bosons() const;

 private:
  ModeSystem system_;
  std::vector<CircuitElement> elements_;
  KetExpression input_;
  std::vector<std::size_t> measured_;
};

/// Loose structural equality: same system, measured modes, element kinds and
/// modes; angles and input coefficients within `tol`.
bool equivalent(const Circuit& a, const Circuit& b, double tol = 1e-12);

}  // namespace fockbench
