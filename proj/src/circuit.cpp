#include "fockbench/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "fockbench/expm.hpp"

namespace fockbench {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr cplx kI{0.0, 1.0};

LadderPolynomial hop(std::size_t to, std::size_t from, cplx c) {
  return LadderPolynomial::product(c, {create(to), annihilate(from)});
}

}  // namespace

bool is_linear(const CircuitElement& e) {
  return std::holds_alternative<BeamSplitter>(e) || std::holds_alternative<PhaseShifter>(e) ||
         std::holds_alternative<QuadraticCustom>(e);
}

std::vector<std::size_t> element_modes(const CircuitElement& e) {
  return std::visit(
      overloaded{
          [](const BeamSplitter& bs) { return std::vector<std::size_t>{bs.modes[0], bs.modes[1]}; },
          [](const PhaseShifter& ps) { return std::vector<std::size_t>{ps.mode}; },
          [](const KerrMedium& k) { return std::vector<std::size_t>{k.modes[0], k.modes[1]}; },
          [](const AnnihilationVertex& v) {
            return std::vector<std::size_t>{v.photon_mode, v.electron_mode, v.positron_mode};
          },
          [](const QuadraticCustom& q) { return q.modes; },
      },
      e);
}

std::string describe(const CircuitElement& e) {
  return std::visit(
      overloaded{
          [](const BeamSplitter& bs) {
            const char* kind = bs.variant == BeamSplitter::Variant::symmetric       ? "sym"
                               : bs.variant == BeamSplitter::Variant::antisymmetric ? "asym"
                                                                                    : "angle";
            return bs.variant == BeamSplitter::Variant::angle
                       ? fmt::format("bs {} {} angle={:.6g}", bs.modes[0] + 1, bs.modes[1] + 1, bs.angle)
                       : fmt::format("bs {} {} {}", bs.modes[0] + 1, bs.modes[1] + 1, kind);
          },
          [](const PhaseShifter& ps) { return fmt::format("phase {} {:.6g}", ps.mode + 1, ps.phase); },
          [](const KerrMedium& k) {
            return fmt::format("kerr {} {} strength={:.6g}", k.modes[0] + 1, k.modes[1] + 1, k.strength);
          },
          [](const AnnihilationVertex& v) {
            return fmt::format("vertex {} {} {} theta={:.6g}", v.photon_mode + 1, v.electron_mode + 1,
                               v.positron_mode + 1, v.theta);
          },
          [](const QuadraticCustom& q) { return fmt::format("quadratic on {} modes", q.modes.size()); },
      },
      e);
}

void validate_element(const ModeSystem& system, const CircuitElement& e) {
  const auto modes = element_modes(e);
  std::set<std::size_t> distinct;
  for (std::size_t m : modes) {
    system.check_mode(m);
    if (!distinct.insert(m).second) {
      throw std::invalid_argument(fmt::format("{}: mode {} used twice", describe(e), m + 1));
    }
  }
  if (const auto* v = std::get_if<AnnihilationVertex>(&e)) {
    if (!system.is_boson(v->photon_mode)) {
      throw std::invalid_argument(fmt::format("vertex photon mode {} is not bosonic", v->photon_mode + 1));
    }
    if (system.is_boson(v->electron_mode) || system.is_boson(v->positron_mode)) {
      throw std::invalid_argument("vertex electron and positron modes must be fermionic");
    }
    return;
  }
  if (const auto* q = std::get_if<QuadraticCustom>(&e)) {
    const auto n = static_cast<Eigen::Index>(q->modes.size());
    if (q->coefficients.rows() != n || q->coefficients.cols() != n) {
      throw std::invalid_argument("quadratic generator size does not match its mode list");
    }
    if ((q->coefficients + q->coefficients.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("quadratic generator is not anti-Hermitian");
    }
    const Species s = system.species(q->modes.front());
    for (std::size_t m : q->modes) {
      if (system.species(m) != s) {
        throw std::invalid_argument("quadratic generator mixes species");
      }
    }
    return;
  }
  for (std::size_t m : modes) {
    if (!system.is_boson(m)) {
      throw std::invalid_argument(fmt::format("{}: mode {} is fermionic", describe(e), m + 1));
    }
  }
}

Eigen::MatrixXcd mode_matrix(const CircuitElement& e) {
  return std::visit(
      overloaded{
          [](const BeamSplitter& bs) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd b(2, 2);
            switch (bs.variant) {
              case BeamSplitter::Variant::symmetric:
                b << kInvSqrt2, kI * kInvSqrt2, kI * kInvSqrt2, kInvSqrt2;
                break;
              case BeamSplitter::Variant::antisymmetric:
                b << kInvSqrt2, -kInvSqrt2, kInvSqrt2, kInvSqrt2;
                break;
              case BeamSplitter::Variant::angle:
                b << std::cos(bs.angle), -std::sin(bs.angle), std::sin(bs.angle), std::cos(bs.angle);
                break;
            }
            return b;
          },
          [](const PhaseShifter& ps) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd b(1, 1);
            b(0, 0) = std::polar(1.0, ps.phase);
            return b;
          },
          [](const QuadraticCustom& q) -> Eigen::MatrixXcd { return expm(q.coefficients); },
          [](const auto& other) -> Eigen::MatrixXcd {
            throw std::invalid_argument(
                fmt::format("{} is nonlinear in the number basis and has no mode matrix", describe(other)));
          },
      },
      e);
}

LadderPolynomial element_generator(const CircuitElement& e, const ModeSystem& system) {
  validate_element(system, e);
  return std::visit(
      overloaded{
          [](const BeamSplitter& bs) {
            const auto [m1, m2] = bs.modes;
            if (bs.variant == BeamSplitter::Variant::symmetric) {
              const cplx c = kI * (std::numbers::pi / 4.0);
              return hop(m1, m2, c) + hop(m2, m1, c);
            }
            // Rotation by t: c_21 = t, c_12 = -t. The antisymmetric splitter
            // is the rotation by pi/4.
            const double t = bs.variant == BeamSplitter::Variant::antisymmetric ? std::numbers::pi / 4.0 : bs.angle;
            return hop(m2, m1, t) + hop(m1, m2, -t);
          },
          [](const PhaseShifter& ps) { return hop(ps.mode, ps.mode, kI * ps.phase); },
          [](const KerrMedium& k) {
            return LadderPolynomial::product(
                kI * k.strength,
                {create(k.modes[0]), annihilate(k.modes[0]), create(k.modes[1]), annihilate(k.modes[1])});
          },
          [](const AnnihilationVertex& v) {
            const auto a = v.photon_mode;
            const auto b = v.electron_mode;
            const auto d = v.positron_mode;
            constexpr Species f = Species::fermion;
            return LadderPolynomial::product(v.theta, {create(a), annihilate(b, f), annihilate(d, f)}) +
                   LadderPolynomial::product(v.theta, {annihilate(a), create(b, f), create(d, f)});
          },
          [&system](const QuadraticCustom& q) {
            const Species s = system.species(q.modes.front());
            LadderPolynomial k;
            for (std::size_t i = 0; i < q.modes.size(); ++i) {
              for (std::size_t j = 0; j < q.modes.size(); ++j) {
                k.add_term({create(q.modes[i], s), annihilate(q.modes[j], s)},
                           q.coefficients(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
              }
            }
            return k;
          },
      },
      e);
}

Eigen::MatrixXcd generator_from_unitary(const Eigen::MatrixXcd& b) {
  if (b.rows() != b.cols() || b.rows() == 0) {
    throw std::invalid_argument("generator_from_unitary requires a nonempty square matrix");
  }
  const auto n = b.rows();
  const double residual = (b.adjoint() * b - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(residual < 1e-12)) {
    throw std::invalid_argument(fmt::format("matrix is not unitary (residual {:.3e})", residual));
  }
  // A unitary matrix is normal, so its Schur form is diagonal.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(b);
  const Eigen::MatrixXcd& u = schur.matrixU();
  Eigen::VectorXcd logs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double angle = std::arg(schur.matrixT()(i, i));
    if (angle <= -std::numbers::pi + 1e-12) {
      angle += 2.0 * std::numbers::pi;
    }
    logs(i) = cplx{0.0, angle};
  }
  Eigen::MatrixXcd c = u * logs.asDiagonal() * u.adjoint();
  c = 0.5 * (c - c.adjoint()).eval();
  const double check = (expm(c) - b).cwiseAbs().maxCoeff();
  if (!(check < 1e-10)) {
    throw std::runtime_error(fmt::format("matrix logarithm failed re-exponentiation check ({:.3e})", check));
  }
  return c;
}

// ---------------------------------------------------------------------------

Circuit::Circuit(ModeSystem system, std::vector<CircuitElement> elements, KetExpression input,
                 std::vector<std::size_t> measured_modes)
    : system_(std::move(system)),
      elements_(std::move(elements)),
      input_(std::move(input)),
      measured_(std::move(measured_modes)) {
  for (const auto& e : elements_) {
    validate_element(system_, e);
  }
  for (const auto& [factors, c] : input_.polynomial().terms()) {
    for (const auto& s : factors) {
      system_.check_mode(s.mode);
      if (system_.species(s.mode) != s.species) {
        throw std::invalid_argument(fmt::format("input symbol {} has the wrong species", to_string(s)));
      }
    }
  }
  if (std::abs(input_.norm_squared() - 1.0) > 1e-10) {
    throw std::invalid_argument("circuit input must be normalized");
  }
  std::set<std::size_t> seen;
  for (std::size_t m : measured_) {
    system_.check_mode(m);
    if (!seen.insert(m).second) {
      throw std::invalid_argument(fmt::format("mode {} measured twice", m + 1));
    }
  }
}

Circuit Circuit::with_cutoff(int cutoff) const {
  return {system_.with_cutoff(cutoff), elements_, input_, measured_};
}

bool Circuit::conserves_boson_number() const {
  return std::none_of(elements_.begin(), elements_.end(),
                      [](const CircuitElement& e) { return std::holds_alternative<AnnihilationVertex>(e); });
}

int Circuit::max_input_bosons() const {
  int best = 0;
  for (const auto& [factors, c] : input_.polynomial().terms()) {
    const auto n = std::count_if(factors.begin(), factors.end(),
                                 [](const LadderSymbol& s) { return s.species == Species::boson; });
    best = std::max(best, static_cast<int>(n));
  }
  return best;
}

namespace {

bool same_element(const CircuitElement& a, const CircuitElement& b, double tol) {
  if (a.index() != b.index() || element_modes(a) != element_modes(b)) {
    return false;
  }
  auto close = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  return std::visit(
      overloaded{
          [&](const BeamSplitter& x) {
            const auto& y = std::get<BeamSplitter>(b);
            return x.variant == y.variant && (x.variant != BeamSplitter::Variant::angle || close(x.angle, y.angle));
          },
          [&](const PhaseShifter& x) { return close(x.phase, std::get<PhaseShifter>(b).phase); },
          [&](const KerrMedium& x) { return close(x.strength, std::get<KerrMedium>(b).strength); },
          [&](const AnnihilationVertex& x) { return close(x.theta, std::get<AnnihilationVertex>(b).theta); },
          [&](const QuadraticCustom& x) {
            return (x.coefficients - std::get<QuadraticCustom>(b).coefficients).cwiseAbs().maxCoeff() <= tol;
          },
      },
      a);
}

}  // namespace

bool equivalent(const Circuit& a, const Circuit& b, double tol) {
  if (!(a.system() == b.system()) || a.measured_modes() != b.measured_modes() ||
      a.elements().size() != b.elements().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.elements().size(); ++i) {
    if (!same_element(a.elements()[i], b.elements()[i], tol)) {
      return false;
    }
  }
  LadderPolynomial diff = a.input().polynomial() - b.input().polynomial();
  for (const auto& [factors, c] : diff.terms()) {
    if (std::abs(c) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace fockbench
