#include "fockbench/random.hpp"

#include <numbers>

namespace fockbench {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

}  // namespace

Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitSpec& spec) {
  const std::size_t modes = pick(rng, 2, spec.max_modes);
  ModeSystem system(modes, 0, spec.cutoff);

  LadderPolynomial input;
  const std::size_t patterns = pick(rng, 1, 3);
  for (std::size_t p = 0; p < patterns; ++p) {
    const auto photons = pick(rng, 1, static_cast<std::size_t>(spec.max_photons));
    FactorSequence f;
    for (std::size_t k = 0; k < photons; ++k) {
      f.push_back(create(pick(rng, 0, modes - 1)));
    }
    input += LadderPolynomial::product(cplx{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}, f);
  }
  KetExpression ket = KetExpression::from_polynomial(input);
  if (ket.norm_squared() < 1e-6) {
    ket = KetExpression::from_polynomial(create(0));
  }

  std::vector<CircuitElement> elements;
  const std::size_t count = pick(rng, 1, spec.max_elements);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t m1 = pick(rng, 0, modes - 1);
    std::size_t m2 = pick(rng, 0, modes - 2);
    if (m2 >= m1) {
      ++m2;
    }
    switch (pick(rng, 0, 4)) {
      case 0:
        elements.emplace_back(BeamSplitter{{m1, m2}, BeamSplitter::Variant::symmetric});
        break;
      case 1:
        elements.emplace_back(BeamSplitter{{m1, m2}, BeamSplitter::Variant::antisymmetric});
        break;
      case 2:
        elements.emplace_back(
            BeamSplitter{{m1, m2}, BeamSplitter::Variant::angle, uniform(rng, -std::numbers::pi, std::numbers::pi)});
        break;
      case 3:
        elements.emplace_back(PhaseShifter{m1, uniform(rng, -std::numbers::pi, std::numbers::pi)});
        break;
      default:
        elements.emplace_back(KerrMedium{{m1, m2}, uniform(rng, -std::numbers::pi, std::numbers::pi)});
        break;
    }
  }
  std::vector<std::size_t> measured;
  for (std::size_t m = 0; m < modes; ++m) {
    measured.push_back(m);
  }
  return {system, std::move(elements), ket.normalized(), measured};
}

LadderPolynomial random_polynomial(std::mt19937_64& rng, const ModeSystem& system, std::size_t max_factors,
                                   std::size_t max_terms) {
  LadderPolynomial p;
  const std::size_t terms = pick(rng, 1, max_terms);
  for (std::size_t t = 0; t < terms; ++t) {
    const std::size_t length = pick(rng, 0, max_factors);
    FactorSequence f;
    for (std::size_t k = 0; k < length; ++k) {
      const std::size_t m = pick(rng, 0, system.mode_count() - 1);
      f.push_back({m, system.species(m), pick(rng, 0, 1) == 1});
    }
    const auto re = static_cast<double>(static_cast<int>(pick(rng, 0, 8)) - 4);
    const auto im = static_cast<double>(static_cast<int>(pick(rng, 0, 8)) - 4);
    p.add_term(f, cplx{re, im} / 4.0);
  }
  return p;
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      z(i, j) = cplx{gauss(rng), gauss(rng)};
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

}  // namespace fockbench
