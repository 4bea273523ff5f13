#include "fockbench/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <fmt/ranges.h>

namespace fockbench {

int OccupationVector::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

std::string to_string(const OccupationVector& occ) { return fmt::format("({})", fmt::join(occ.counts, ",")); }

ModeSystem::ModeSystem(std::size_t boson_modes, std::size_t fermion_modes, int cutoff)
    : boson_modes_(boson_modes), fermion_modes_(fermion_modes), cutoff_(cutoff) {
  if (boson_modes + fermion_modes == 0) {
    throw std::invalid_argument("mode system needs at least one mode");
  }
  if (cutoff < 1) {
    throw std::invalid_argument(fmt::format("cutoff must be >= 1, got {}", cutoff));
  }
}

Species ModeSystem::species(std::size_t mode) const {
  check_mode(mode);
  return is_boson(mode) ? Species::boson : Species::fermion;
}

int ModeSystem::mode_dimension(std::size_t mode) const { return is_boson(mode) ? cutoff_ + 1 : 2; }

std::size_t ModeSystem::basis_size() const {
  std::size_t size = 1;
  for (std::size_t m = 0; m < mode_count(); ++m) {
    const auto dim = static_cast<std::size_t>(mode_dimension(m));
    if (size > std::numeric_limits<std::size_t>::max() / dim) {
      throw std::overflow_error("basis size overflows size_t");
    }
    size *= dim;
  }
  return size;
}

void ModeSystem::check_mode(std::size_t mode) const {
  if (mode >= mode_count()) {
    throw std::invalid_argument(fmt::format("mode {} out of range (system has {} modes)", mode, mode_count()));
  }
}

void ModeSystem::validate(const OccupationVector& occ) const {
  if (occ.size() != mode_count()) {
    throw std::invalid_argument(
        fmt::format("occupation vector has {} entries, system has {} modes", occ.size(), mode_count()));
  }
  for (std::size_t m = 0; m < occ.size(); ++m) {
    if (occ[m] < 0 || occ[m] >= mode_dimension(m)) {
      throw std::invalid_argument(fmt::format("occupation {} of mode {} outside [0, {}]", occ[m], m,
                                              mode_dimension(m) - 1));
    }
  }
}

std::size_t ModeSystem::index_of(const OccupationVector& occ) const {
  std::size_t index = 0;
  for (std::size_t m = 0; m < mode_count(); ++m) {
    index = index * static_cast<std::size_t>(mode_dimension(m)) + static_cast<std::size_t>(occ[m]);
  }
  return index;
}

OccupationVector ModeSystem::occupation_at(std::size_t index) const {
  OccupationVector occ(std::vector<int>(mode_count(), 0));
  for (std::size_t m = mode_count(); m-- > 0;) {
    const auto dim = static_cast<std::size_t>(mode_dimension(m));
    occ[m] = static_cast<int>(index % dim);
    index /= dim;
  }
  return occ;
}

// ---------------------------------------------------------------------------

cplx FockVector::amplitude(const OccupationVector& occ) const {
  auto it = amplitudes_.find(occ);
  return it == amplitudes_.end() ? cplx{} : it->second;
}

void FockVector::add(const OccupationVector& occ, cplx value) {
  auto [it, inserted] = amplitudes_.try_emplace(occ, value);
  if (!inserted) {
    it->second += value;
  }
  if (std::abs(it->second) < kPruneThreshold) {
    amplitudes_.erase(it);
  }
}

double FockVector::norm_squared() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : amplitudes_) {
    sum += std::norm(amp);
  }
  return sum;
}

double FockVector::norm() const { return std::sqrt(norm_squared()); }

FockVector FockVector::normalized() const {
  const double n = norm();
  if (n == 0.0) {
    throw std::invalid_argument("cannot normalize the zero vector");
  }
  FockVector out = *this;
  out *= 1.0 / n;
  return out;
}

bool FockVector::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) < tol; }

FockVector& FockVector::operator*=(cplx s) {
  for (auto it = amplitudes_.begin(); it != amplitudes_.end();) {
    it->second *= s;
    if (std::abs(it->second) < kPruneThreshold) {
      it = amplitudes_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

FockVector operator+(FockVector lhs, const FockVector& rhs) {
  if (!(lhs.system() == rhs.system())) {
    throw std::invalid_argument("adding states of different mode systems");
  }
  for (const auto& [occ, amp] : rhs.amplitudes()) {
    lhs.add(occ, amp);
  }
  return lhs;
}

Eigen::VectorXcd FockVector::to_dense() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(system_.basis_size()));
  for (const auto& [occ, amp] : amplitudes_) {
    v(static_cast<Eigen::Index>(system_.index_of(occ))) = amp;
  }
  return v;
}

FockVector FockVector::from_dense(const ModeSystem& system, const Eigen::VectorXcd& v) {
  if (static_cast<std::size_t>(v.size()) != system.basis_size()) {
    throw std::invalid_argument("dense vector size does not match basis size");
  }
  FockVector out(system);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= kPruneThreshold) {
      out.amplitudes_.emplace(system.occupation_at(static_cast<std::size_t>(i)), v(i));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(ModeSystem system, Matrix matrix)
    : system_(std::move(system)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(system_.basis_size());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument(
        fmt::format("operator is {}x{}, basis size is {}", matrix_.rows(), matrix_.cols(), n));
  }
  matrix_.prune(cplx{0.0, 0.0}, 0.0);
  matrix_.makeCompressed();
}

SparseOperator SparseOperator::adjoint() const { return {system_, Matrix(matrix_.adjoint())}; }

namespace {

void require_same_system(const ModeSystem& a, const ModeSystem& b) {
  if (!(a == b)) {
    throw std::invalid_argument("operands belong to different mode systems");
  }
}

}  // namespace

SparseOperator operator*(const SparseOperator& lhs, const SparseOperator& rhs) {
  require_same_system(lhs.system(), rhs.system());
  return {lhs.system(), SparseOperator::Matrix(lhs.matrix() * rhs.matrix())};
}

SparseOperator operator+(const SparseOperator& lhs, const SparseOperator& rhs) {
  require_same_system(lhs.system(), rhs.system());
  return {lhs.system(), SparseOperator::Matrix(lhs.matrix() + rhs.matrix())};
}

SparseOperator operator-(const SparseOperator& lhs, const SparseOperator& rhs) {
  require_same_system(lhs.system(), rhs.system());
  return {lhs.system(), SparseOperator::Matrix(lhs.matrix() - rhs.matrix())};
}

SparseOperator operator*(cplx s, const SparseOperator& op) {
  return {op.system(), SparseOperator::Matrix(s * op.matrix())};
}

// ---------------------------------------------------------------------------

FockVector vacuum_state(const ModeSystem& system) {
  return basis_state(system, OccupationVector(std::vector<int>(system.mode_count(), 0)));
}

FockVector basis_state(const ModeSystem& system, const OccupationVector& occ) {
  system.validate(occ);
  FockVector out(system);
  out.add(occ, 1.0);
  return out;
}

SparseOperator identity_op(const ModeSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.basis_size());
  SparseOperator::Matrix m(n, n);
  m.setIdentity();
  return {system, std::move(m)};
}

SparseOperator zero_op(const ModeSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.basis_size());
  return {system, SparseOperator::Matrix(n, n)};
}

SparseOperator creation_op(const ModeSystem& system, std::size_t mode) {
  system.check_mode(mode);
  const std::size_t n = system.basis_size();
  std::vector<Eigen::Triplet<cplx>> entries;
  entries.reserve(n);
  for (std::size_t col = 0; col < n; ++col) {
    OccupationVector occ = system.occupation_at(col);
    const int k = occ[mode];
    if (k + 1 >= system.mode_dimension(mode)) {
      continue;  // truncated (boson at cutoff) or Pauli-blocked (fermion)
    }
    double value = std::sqrt(static_cast<double>(k + 1));
    if (!system.is_boson(mode)) {
      int parity = 0;
      for (std::size_t m = system.boson_modes(); m < mode; ++m) {
        parity += occ[m];
      }
      value = (parity % 2 == 0) ? 1.0 : -1.0;
    }
    occ[mode] = k + 1;
    entries.emplace_back(static_cast<Eigen::Index>(system.index_of(occ)), static_cast<Eigen::Index>(col), value);
  }
  SparseOperator::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(entries.begin(), entries.end());
  return {system, std::move(m)};
}

SparseOperator annihilation_op(const ModeSystem& system, std::size_t mode) {
  return creation_op(system, mode).adjoint();
}

SparseOperator number_op(const ModeSystem& system, std::size_t mode) {
  system.check_mode(mode);
  const std::size_t n = system.basis_size();
  std::vector<Eigen::Triplet<cplx>> entries;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = system.occupation_at(i)[mode];
    if (k != 0) {
      entries.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), static_cast<double>(k));
    }
  }
  SparseOperator::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(entries.begin(), entries.end());
  return {system, std::move(m)};
}

FockVector apply(const SparseOperator& op, const FockVector& state) {
  require_same_system(op.system(), state.system());
  const ModeSystem& system = op.system();
  const auto& m = op.matrix();
  FockVector out(system);
  for (const auto& [occ, amp] : state.amplitudes()) {
    const auto col = static_cast<Eigen::Index>(system.index_of(occ));
    for (SparseOperator::Matrix::InnerIterator it(m, col); it; ++it) {
      out.add(system.occupation_at(static_cast<std::size_t>(it.row())), it.value() * amp);
    }
  }
  return out;
}

cplx inner_product(const FockVector& left, const FockVector& right) {
  require_same_system(left.system(), right.system());
  cplx sum{};
  for (const auto& [occ, amp] : left.amplitudes()) {
    sum += std::conj(amp) * right.amplitude(occ);
  }
  return sum;
}

double mode_bipartition_entropy(const FockVector& state, std::span<const std::size_t> left_modes) {
  const ModeSystem& system = state.system();
  std::vector<bool> in_left(system.mode_count(), false);
  for (std::size_t m : left_modes) {
    system.check_mode(m);
    in_left[m] = true;
  }
  const auto left_count = static_cast<std::size_t>(std::count(in_left.begin(), in_left.end(), true));
  if (left_count == 0 || left_count == system.mode_count()) {
    throw std::invalid_argument("bipartition must be a proper nonempty subset of modes");
  }
  if (!state.is_normalized(1e-10)) {
    throw std::invalid_argument("entropy requires a normalized state");
  }

  // Schmidt decomposition over the labels that actually occur.
  std::map<std::vector<int>, Eigen::Index> left_labels;
  std::map<std::vector<int>, Eigen::Index> right_labels;
  std::vector<std::tuple<Eigen::Index, Eigen::Index, cplx>> entries;
  for (const auto& [occ, amp] : state.amplitudes()) {
    std::vector<int> l;
    std::vector<int> r;
    for (std::size_t m = 0; m < occ.size(); ++m) {
      (in_left[m] ? l : r).push_back(occ[m]);
    }
    auto li = left_labels.try_emplace(std::move(l), static_cast<Eigen::Index>(left_labels.size())).first->second;
    auto ri = right_labels.try_emplace(std::move(r), static_cast<Eigen::Index>(right_labels.size())).first->second;
    entries.emplace_back(li, ri, amp);
  }
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(left_labels.size()),
                                                static_cast<Eigen::Index>(right_labels.size()));
  for (const auto& [li, ri, amp] : entries) {
    psi(li, ri) = amp;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(psi);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()(i) * svd.singularValues()(i);
    if (p > 1e-300) {
      entropy -= p * std::log(p);
    }
  }
  return std::max(entropy, 0.0);
}

}  // namespace fockbench
