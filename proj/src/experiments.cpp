#include "fockbench/experiments.hpp"

#include <numbers>
#include <regex>
#include <stdexcept>

#include <fmt/format.h>

#include "fockbench/dsl.hpp"

namespace fockbench {

const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> experiments = {
      {"single_photon_bs_sym", "single photon through the symmetric beam splitter B1"},
      {"single_photon_bs_asym", "single photon through the antisymmetric beam splitter B2"},
      {"cnot_dualrail", "dual-rail CNOT from beam splitters, a Kerr medium and a phase shifter"},
      {"hardy_vertex", "electron-positron annihilation vertex, default theta = pi/2"},
  };
  return experiments;
}

Circuit single_photon_bs(BeamSplitter::Variant variant, int cutoff) {
  ModeSystem system(2, 0, cutoff);
  auto input = KetExpression::from_polynomial(create(0));
  return {system, {BeamSplitter{{0, 1}, variant}}, input, {0, 1}};
}

OccupationVector dual_rail_pattern(int control, int target) {
  OccupationVector occ{0, 0, 0, 0};
  occ[control == 0 ? 0 : 1] = 1;
  occ[target == 0 ? 2 : 3] = 1;
  return occ;
}

Circuit cnot_dualrail(int control, int target, int cutoff) {
  if ((control != 0 && control != 1) || (target != 0 && target != 1)) {
    throw std::invalid_argument("cnot_dualrail inputs must be 0 or 1");
  }
  ModeSystem system(4, 0, cutoff);
  const std::size_t control_rail = control == 0 ? 0 : 1;
  const std::size_t target_rail = target == 0 ? 2 : 3;
  auto input = KetExpression::from_polynomial(LadderPolynomial::product(1.0, {create(control_rail), create(target_rail)}));

  // Target Mach-Zehnder: two 50:50 splitters with generator
  // (pi/4)(a3^+ a4 - a4^+ a3). The Kerr phase on (1,3) fires only for a
  // control photon in rail 1 and turns the interferometer from a swap into
  // the identity. The closing phase shifter on rail 4 makes the flip branch
  // an exact X.
  const BeamSplitter splitter{{2, 3}, BeamSplitter::Variant::angle, -std::numbers::pi / 4.0};
  std::vector<CircuitElement> elements = {
      splitter,
      KerrMedium{{0, 2}, std::numbers::pi},
      splitter,
      PhaseShifter{3, std::numbers::pi},
  };
  return {system, std::move(elements), input, {0, 1, 2, 3}};
}

Circuit hardy_vertex(double theta, int cutoff) {
  ModeSystem system(1, 2, cutoff);
  auto input = KetExpression::from_polynomial(
      LadderPolynomial::product(1.0, {create(1, Species::fermion), create(2, Species::fermion)}));
  return {system, {AnnihilationVertex{0, 1, 2, theta}}, input, {0, 1, 2}};
}

Circuit build_experiment(std::string_view name, int cutoff) {
  if (name == "single_photon_bs_sym") {
    return single_photon_bs(BeamSplitter::Variant::symmetric, cutoff);
  }
  if (name == "single_photon_bs_asym") {
    return single_photon_bs(BeamSplitter::Variant::antisymmetric, cutoff);
  }
  static const std::regex cnot(R"(^cnot_dualrail(?:\(\s*([01])\s*,\s*([01])\s*\))?$)");
  static const std::regex hardy(R"(^hardy_vertex(?:\(\s*([^)\s]+)\s*\))?$)");
  const std::string text(name);
  std::smatch m;
  if (std::regex_match(text, m, cnot)) {
    return m[1].matched ? cnot_dualrail(std::stoi(m[1].str()), std::stoi(m[2].str()), cutoff)
                        : cnot_dualrail(0, 0, cutoff);
  }
  if (std::regex_match(text, m, hardy)) {
    return hardy_vertex(m[1].matched ? parse_angle(m[1].str()) : std::numbers::pi / 2.0, cutoff);
  }
  throw std::invalid_argument(fmt::format("unknown experiment '{}'", name));
}

}  // namespace fockbench
