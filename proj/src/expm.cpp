#include "fockbench/expm.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace fockbench {

int taylor_degree(double scaled_norm, double tol) {
  if (scaled_norm <= 0.0) {
    return 0;
  }
  double term = scaled_norm;  // x^(m+1)/(m+1)! for m = 0
  for (int m = 0; m < 100; ++m) {
    const double tail = term / (1.0 - scaled_norm / (m + 2));
    if (scaled_norm < m + 2 && tail < tol) {
      return m;
    }
    term *= scaled_norm / (m + 2);
  }
  throw std::invalid_argument("scaled norm too large for Taylor degree selection");
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("expm requires a square matrix");
  }
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > kScaledNorm) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kScaledNorm)));
  }
  const Eigen::MatrixXcd x = a / std::ldexp(1.0, squarings);
  const int degree = taylor_degree(norm1 / std::ldexp(1.0, squarings));

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd term = result;
  for (int j = 1; j <= degree; ++j) {
    term = (x * term) / static_cast<double>(j);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) {
    result = result * result;
  }
  return result;
}

FockVector expm_apply(const SparseOperator& k, const FockVector& state) {
  const ModeSystem& system = k.system();
  if (!(system == state.system())) {
    throw std::invalid_argument("expm_apply: operator and state belong to different mode systems");
  }
  const auto& m = k.matrix();

  // Closure of the support under the sparsity pattern of k.
  std::vector<Eigen::Index> reachable;
  std::unordered_map<Eigen::Index, Eigen::Index> local;
  std::deque<Eigen::Index> queue;
  for (const auto& [occ, amp] : state.amplitudes()) {
    const auto idx = static_cast<Eigen::Index>(system.index_of(occ));
    if (local.emplace(idx, static_cast<Eigen::Index>(reachable.size())).second) {
      reachable.push_back(idx);
      queue.push_back(idx);
    }
  }
  while (!queue.empty()) {
    const Eigen::Index col = queue.front();
    queue.pop_front();
    for (SparseOperator::Matrix::InnerIterator it(m, col); it; ++it) {
      if (local.emplace(it.row(), static_cast<Eigen::Index>(reachable.size())).second) {
        reachable.push_back(it.row());
        queue.push_back(it.row());
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(reachable.size());
  std::vector<Eigen::Triplet<cplx>> entries;
  Eigen::VectorXd column_sums = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (SparseOperator::Matrix::InnerIterator it(m, reachable[static_cast<std::size_t>(j)]); it; ++it) {
      entries.emplace_back(local.at(it.row()), j, it.value());
      column_sums(j) += std::abs(it.value());
    }
  }
  Eigen::SparseMatrix<cplx> block(n, n);
  block.setFromTriplets(entries.begin(), entries.end());

  Eigen::VectorXcd v(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    v(j) = state.amplitude(system.occupation_at(static_cast<std::size_t>(reachable[static_cast<std::size_t>(j)])));
  }

  const double norm1 = n > 0 ? column_sums.maxCoeff() : 0.0;
  const int steps = norm1 > kScaledNorm ? static_cast<int>(std::ceil(norm1 / kScaledNorm)) : 1;
  const int degree = taylor_degree(norm1 / steps);
  const Eigen::SparseMatrix<cplx> x = block / static_cast<double>(steps);
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = v;
    for (int j = 1; j <= degree; ++j) {
      term = (x * term) / static_cast<double>(j);
      v += term;
    }
  }

  FockVector out(system);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.add(system.occupation_at(static_cast<std::size_t>(reachable[static_cast<std::size_t>(j)])), v(j));
  }
  return out;
}

}  // namespace fockbench
