#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "fockbench/circuit.hpp"
#include "fockbench/experiments.hpp"
#include "fockbench/random.hpp"
#include "oracles.hpp"

using namespace fockbench;
using std::numbers::pi;

namespace {

constexpr auto F = Species::fermion;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const cplx I{0.0, 1.0};

double dist(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<CircuitElement> linear_elements() {
  return {BeamSplitter{{0, 1}, BeamSplitter::Variant::symmetric, 0.0},
          BeamSplitter{{0, 1}, BeamSplitter::Variant::antisymmetric, 0.0},
          BeamSplitter{{0, 1}, BeamSplitter::Variant::angle, 0.0},
          BeamSplitter{{0, 1}, BeamSplitter::Variant::angle, -pi / 4},
          BeamSplitter{{0, 1}, BeamSplitter::Variant::angle, 2.9},
          PhaseShifter{0, pi},
          PhaseShifter{0, 0.7}};
}

}  // namespace

TEST_CASE("mode matrices") {
  Eigen::MatrixXcd b1(2, 2);
  b1 << 1.0, I, I, 1.0;
  b1 *= kInvSqrt2;
  Eigen::MatrixXcd b2(2, 2);
  b2 << 1.0, -1.0, 1.0, 1.0;
  b2 *= kInvSqrt2;
  CHECK(dist(mode_matrix(BeamSplitter{{0, 1}, BeamSplitter::Variant::symmetric, 0.0}), b1) < 1e-15);
  CHECK(dist(mode_matrix(BeamSplitter{{0, 1}, BeamSplitter::Variant::antisymmetric, 0.0}), b2) < 1e-15);
  CHECK(dist(mode_matrix(BeamSplitter{{0, 1}, BeamSplitter::Variant::angle, 0.0}), Eigen::MatrixXcd::Identity(2, 2)) ==
        0.0);
  const auto ps = mode_matrix(PhaseShifter{3, 0.4});
  REQUIRE(ps.rows() == 1);
  CHECK(std::abs(ps(0, 0) - std::polar(1.0, 0.4)) < 1e-15);

  for (const auto& e : linear_elements()) {
    const auto m = mode_matrix(e);
    CHECK(dist(m.adjoint() * m, Eigen::MatrixXcd::Identity(m.rows(), m.cols())) < 1e-15);
  }
  CHECK_THROWS_AS(mode_matrix(KerrMedium{{0, 1}, pi}), std::invalid_argument);
  CHECK_THROWS_AS(mode_matrix(AnnihilationVertex{0, 1, 2, 0.1}), std::invalid_argument);
}

TEST_CASE("element generators") {
  const ModeSystem two(2, 0);
  const auto sym = element_generator(BeamSplitter{{0, 1}, BeamSplitter::Variant::symmetric, 0.0}, two);
  REQUIRE(sym.size() == 2);
  for (const auto& [factors, c] : sym.terms()) {
    CHECK(std::abs(c - I * pi / 4.0) < 1e-16);
  }
  CHECK(sym.coefficient({create(0), annihilate(1)}) == sym.coefficient({create(1), annihilate(0)}));

  const ModeSystem four(4, 0);
  const auto kerr = element_generator(KerrMedium{{0, 2}, pi}, four);
  CHECK(kerr == LadderPolynomial::product(I * pi, {create(0), annihilate(0), create(2), annihilate(2)}));

  const auto phase = element_generator(PhaseShifter{3, pi}, four);
  CHECK(phase == LadderPolynomial::product(I * pi, {create(3), annihilate(3)}));

  const ModeSystem qed(1, 2);
  const auto vertex = element_generator(AnnihilationVertex{0, 1, 2, pi / 2}, qed);
  const auto expected = LadderPolynomial::product(pi / 2, {create(0), annihilate(1, F), annihilate(2, F)}) +
                        LadderPolynomial::product(pi / 2, {annihilate(0), create(1, F), create(2, F)});
  CHECK(normal_order(vertex) == normal_order(expected));

  Eigen::MatrixXcd c(2, 2);
  c << 0.0, 1.0, -1.0, I;
  const auto custom = element_generator(QuadraticCustom{{0, 1}, c}, two);
  CHECK(custom.coefficient({create(0), annihilate(1)}) == cplx{1.0, 0.0});
  CHECK(custom.coefficient({create(1), annihilate(0)}) == cplx{-1.0, 0.0});
  CHECK(custom.coefficient({create(1), annihilate(1)}) == I);
}

TEST_CASE("antisymmetric splitter uses the logarithm of its mode matrix") {
  const ModeSystem two(2, 0);
  const BeamSplitter asym{{0, 1}, BeamSplitter::Variant::antisymmetric, 0.0};
  const auto c = generator_from_unitary(mode_matrix(asym));
  Eigen::MatrixXcd rotation(2, 2);
  rotation << 0.0, -pi / 4, pi / 4, 0.0;
  CHECK(dist(c, rotation) < 1e-12);
  const auto k = element_generator(asym, two);
  CHECK(std::abs(k.coefficient({create(1), annihilate(0)}) - pi / 4) < 1e-15);
  CHECK(std::abs(k.coefficient({create(0), annihilate(1)}) + pi / 4) < 1e-15);
}

TEST_CASE("generator_from_unitary") {
  CHECK(generator_from_unitary(Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);

  const auto b1 = mode_matrix(BeamSplitter{{0, 1}, BeamSplitter::Variant::symmetric, 0.0});
  const auto c1 = generator_from_unitary(b1);
  CHECK(dist(oracle::expm_pade(c1), b1) < 1e-10);
  Eigen::MatrixXcd x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  CHECK(dist(c1, (I * pi / 4.0) * x) < 1e-12);

  // eigenvalue -1 takes log(-1) = +i pi
  const auto minus = generator_from_unitary(-Eigen::MatrixXcd::Identity(2, 2));
  CHECK(dist(minus, I * pi * Eigen::MatrixXcd::Identity(2, 2)) < 1e-12);
  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Identity(2, 2);
  mixed(1, 1) = -1.0;
  const auto cm = generator_from_unitary(mixed);
  CHECK(std::abs(cm(1, 1) - I * pi) < 1e-12);
  CHECK(std::abs(cm(0, 0)) < 1e-12);

  CHECK_THROWS_AS(generator_from_unitary(2.0 * Eigen::MatrixXcd::Identity(2, 2)), std::invalid_argument);
  CHECK_THROWS_AS(generator_from_unitary(Eigen::MatrixXcd(2, 3)), std::invalid_argument);
}

TEST_CASE("logarithm round trip (property)") {
  for (const auto& e : linear_elements()) {
    const auto m = mode_matrix(e);
    const auto c = generator_from_unitary(m);
    CHECK(dist(oracle::expm_pade(c), m) < 1e-10);
    CHECK(dist(c.adjoint(), -c) < 1e-12);
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = random_unitary(rng, 1 + trial % 4);
    CHECK(dist(oracle::expm_pade(generator_from_unitary(u)), u) < 1e-10);
  }
}

TEST_CASE("generators are anti-Hermitian (property)") {
  const ModeSystem sys(4, 2);
  std::mt19937_64 rng(11);
  std::vector<CircuitElement> elements = linear_elements();
  elements.emplace_back(KerrMedium{{0, 2}, pi});
  elements.emplace_back(KerrMedium{{1, 3}, 0.3});
  elements.emplace_back(AnnihilationVertex{0, 4, 5, 0.8});
  elements.emplace_back(QuadraticCustom{{0, 1, 2}, generator_from_unitary(random_unitary(rng, 3))});
  Eigen::MatrixXcd fc(2, 2);
  fc << I, 0.5, -0.5, 0.0;
  elements.emplace_back(QuadraticCustom{{4, 5}, fc});
  for (const auto& e : elements) {
    const auto k = element_generator(e, sys);
    CHECK(normal_order(k + k.adjoint()).prune(1e-15).is_zero());
  }
}

TEST_CASE("element validation") {
  const ModeSystem sys(2, 2);
  CHECK_THROWS_AS(validate_element(sys, BeamSplitter{{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_element(sys, BeamSplitter{{0, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_element(sys, PhaseShifter{7, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(validate_element(sys, AnnihilationVertex{2, 0, 3, 0.1}), std::invalid_argument);
  Eigen::MatrixXcd hermitian = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(validate_element(sys, QuadraticCustom{{0, 1}, hermitian}), std::invalid_argument);
  CHECK_NOTHROW(validate_element(sys, AnnihilationVertex{0, 2, 3, 0.1}));
}

TEST_CASE("circuit construction") {
  const ModeSystem sys(2, 0, 4);
  const auto input = KetExpression::from_polynomial(LadderPolynomial(create(0)));
  CHECK_THROWS_AS(Circuit(sys, {}, 2.0 * input, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Circuit(sys, {}, input, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Circuit(sys, {BeamSplitter{{0, 5}}}, input, {0}), std::invalid_argument);
  const Circuit ok(sys, {KerrMedium{{0, 1}, pi}}, input, {0, 1});
  CHECK(ok.conserves_boson_number());
  CHECK(ok.max_input_bosons() == 1);
  CHECK(ok.with_cutoff(9).system().cutoff() == 9);
}

TEST_CASE("built-in experiments") {
  const auto sym = build_experiment("single_photon_bs_sym");
  CHECK(sym.system().mode_count() == 2);
  CHECK(sym.input().polynomial() == LadderPolynomial(create(0)));
  REQUIRE(sym.elements().size() == 1);
  CHECK(std::get<BeamSplitter>(sym.elements()[0]).variant == BeamSplitter::Variant::symmetric);
  CHECK(sym.measured_modes() == std::vector<std::size_t>{0, 1});

  const auto asym = build_experiment("single_photon_bs_asym");
  CHECK(std::get<BeamSplitter>(asym.elements()[0]).variant == BeamSplitter::Variant::antisymmetric);

  const auto cnot = build_experiment("cnot_dualrail(1,0)");
  CHECK(cnot.system().boson_modes() == 4);
  CHECK(cnot.input().polynomial() == LadderPolynomial::product(1.0, {create(1), create(2)}));
  CHECK(dual_rail_pattern(1, 0) == OccupationVector{0, 1, 1, 0});
  CHECK(dual_rail_pattern(0, 1) == OccupationVector{1, 0, 0, 1});
  CHECK(equivalent(build_experiment("cnot_dualrail"), cnot_dualrail(0, 0)));

  const auto hardy = build_experiment("hardy_vertex(pi/2)");
  CHECK(hardy.system().boson_modes() == 1);
  CHECK(hardy.system().fermion_modes() == 2);
  CHECK(hardy.input().polynomial() == LadderPolynomial::product(1.0, {create(1, F), create(2, F)}));
  REQUIRE(hardy.elements().size() == 1);
  CHECK(std::abs(std::get<AnnihilationVertex>(hardy.elements()[0]).theta - pi / 2) < 1e-15);
  CHECK(hardy.measured_modes() == std::vector<std::size_t>{0, 1, 2});
  CHECK(equivalent(build_experiment("hardy_vertex"), hardy));
  CHECK(std::abs(std::get<AnnihilationVertex>(build_experiment("hardy_vertex(0.25)").elements()[0]).theta - 0.25) <
        1e-15);

  CHECK_THROWS_AS(build_experiment("teleport"), std::invalid_argument);
  CHECK_THROWS_AS(build_experiment("cnot_dualrail(2,0)"), std::invalid_argument);
  CHECK(list_experiments().size() >= 4);
}
