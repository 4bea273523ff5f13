#include "fockbench/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

namespace fockbench {

LadderPolynomial::LadderPolynomial(cplx constant) { add_term({}, constant); }

LadderPolynomial::LadderPolynomial(LadderSymbol symbol) { add_term({symbol}, 1.0); }

LadderPolynomial::LadderPolynomial(const LadderMonomial& monomial) {
  add_term(monomial.factors, monomial.coefficient);
}

LadderPolynomial LadderPolynomial::product(cplx coefficient, FactorSequence factors) {
  LadderPolynomial p;
  p.add_term(factors, coefficient);
  return p;
}

std::vector<LadderMonomial> LadderPolynomial::monomials() const {
  std::vector<LadderMonomial> out;
  out.reserve(terms_.size());
  for (const auto& [factors, c] : terms_) {
    out.push_back({c, factors});
  }
  return out;
}

cplx LadderPolynomial::coefficient(const FactorSequence& factors) const {
  auto it = terms_.find(factors);
  return it == terms_.end() ? cplx{} : it->second;
}

void LadderPolynomial::add_term(const FactorSequence& factors, cplx coefficient) {
  if (coefficient == cplx{}) {
    return;
  }
  auto [it, inserted] = terms_.try_emplace(factors, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == cplx{}) {
      terms_.erase(it);
    }
  }
}

LadderPolynomial& LadderPolynomial::prune(double threshold) {
  std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
  return *this;
}

LadderPolynomial LadderPolynomial::adjoint() const {
  LadderPolynomial out;
  for (const auto& [factors, c] : terms_) {
    FactorSequence adj;
    adj.reserve(factors.size());
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      adj.push_back(it->adjoint());
    }
    out.add_term(adj, std::conj(c));
  }
  return out;
}

LadderPolynomial& LadderPolynomial::operator+=(const LadderPolynomial& rhs) {
  for (const auto& [factors, c] : rhs.terms_) {
    add_term(factors, c);
  }
  return *this;
}

LadderPolynomial& LadderPolynomial::operator-=(const LadderPolynomial& rhs) {
  for (const auto& [factors, c] : rhs.terms_) {
    add_term(factors, -c);
  }
  return *this;
}

LadderPolynomial& LadderPolynomial::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    it = (it->second == cplx{}) ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

LadderPolynomial multiply(const LadderPolynomial& p, const LadderPolynomial& q) {
  LadderPolynomial out;
  for (const auto& [pf, pc] : p.terms()) {
    for (const auto& [qf, qc] : q.terms()) {
      FactorSequence f = pf;
      f.insert(f.end(), qf.begin(), qf.end());
      out.add_term(f, pc * qc);
    }
  }
  return out;
}

namespace {

auto canonical_key(const LadderSymbol& s) {
  return std::make_tuple(s.species == Species::fermion, !s.dagger, s.mode);
}

bool has_adjacent_fermion_repeat(const FactorSequence& f) {
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    if (f[i].species == Species::fermion && f[i] == f[i + 1]) {
      return true;
    }
  }
  return false;
}

// Bubble the monomial into canonical order. Each swap of a non-commuting
// pair x y (x an annihilator, y the matching creator) spawns the contraction
// term, which is pushed back onto the worklist.
void normal_order_into(LadderPolynomial& out, cplx coefficient, FactorSequence factors) {
  std::vector<std::pair<cplx, FactorSequence>> work;
  work.emplace_back(coefficient, std::move(factors));
  while (!work.empty()) {
    auto [c, f] = std::move(work.back());
    work.pop_back();
    bool zero = false;
    bool sorted = false;
    while (!sorted) {
      if (has_adjacent_fermion_repeat(f)) {
        zero = true;
        break;
      }
      sorted = true;
      for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        const LadderSymbol x = f[i];
        const LadderSymbol y = f[i + 1];
        if (!(canonical_key(y) < canonical_key(x))) {
          continue;
        }
        sorted = false;
        if (x.species == y.species) {
          if (x.mode == y.mode && !x.dagger && y.dagger) {
            FactorSequence contracted;
            contracted.reserve(f.size() - 2);
            contracted.insert(contracted.end(), f.begin(), f.begin() + static_cast<std::ptrdiff_t>(i));
            contracted.insert(contracted.end(), f.begin() + static_cast<std::ptrdiff_t>(i) + 2, f.end());
            work.emplace_back(c, std::move(contracted));
          }
          if (x.species == Species::fermion) {
            c = -c;
          }
        }
        std::swap(f[i], f[i + 1]);
        break;
      }
    }
    if (!zero) {
      out.add_term(f, c);
    }
  }
}

}  // namespace

LadderPolynomial normal_order(const LadderPolynomial& p) {
  LadderPolynomial out;
  for (const auto& [factors, c] : p.terms()) {
    normal_order_into(out, c, factors);
  }
  return out;
}

LadderPolynomial commutator(const LadderPolynomial& p, const LadderPolynomial& q) {
  return normal_order(multiply(p, q) - multiply(q, p));
}

cplx vacuum_expectation(const LadderPolynomial& p) { return normal_order(p).coefficient({}); }

std::map<std::size_t, int> creation_counts(const FactorSequence& factors) {
  std::map<std::size_t, int> counts;
  for (const auto& s : factors) {
    if (s.dagger) {
      ++counts[s.mode];
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------

namespace {

bool is_creation_only(const FactorSequence& f) {
  return std::all_of(f.begin(), f.end(), [](const LadderSymbol& s) { return s.dagger; });
}

}  // namespace

KetExpression KetExpression::from_polynomial(const LadderPolynomial& p) {
  LadderPolynomial ordered = normal_order(p);
  LadderPolynomial reduced;
  for (const auto& [factors, c] : ordered.terms()) {
    if (is_creation_only(factors)) {
      reduced.add_term(factors, c);
    }
  }
  return KetExpression(std::move(reduced));
}

double KetExpression::norm_squared() const { return inner_product(*this, *this).real(); }

KetExpression KetExpression::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) {
    throw std::invalid_argument("cannot normalize a ket with zero norm");
  }
  KetExpression out = *this;
  out *= 1.0 / std::sqrt(n2);
  return out;
}

KetExpression& KetExpression::prune(double threshold) {
  poly_.prune(threshold);
  return *this;
}

KetExpression& KetExpression::operator+=(const KetExpression& rhs) {
  poly_ += rhs.poly_;
  return *this;
}

KetExpression& KetExpression::operator*=(cplx s) {
  poly_ *= s;
  return *this;
}

cplx inner_product(const KetExpression& left, const KetExpression& right) {
  // Kets in canonical form with different creation counts are orthogonal;
  // skipping those pairs avoids normal ordering products that vanish anyway.
  cplx sum{};
  for (const auto& [lf, lc] : left.polynomial().terms()) {
    const auto lcounts = creation_counts(lf);
    for (const auto& [rf, rc] : right.polynomial().terms()) {
      if (creation_counts(rf) != lcounts) {
        continue;
      }
      const LadderPolynomial bra = LadderPolynomial::product(1.0, lf).adjoint();
      sum += std::conj(lc) * rc * vacuum_expectation(multiply(bra, LadderPolynomial::product(1.0, rf)));
    }
  }
  return sum;
}

KetExpression apply_operator(const LadderPolynomial& op, const KetExpression& ket) {
  return KetExpression::from_polynomial(multiply(op, ket.polynomial()));
}

KetExpression substitute_modes(const KetExpression& ket, const Eigen::MatrixXcd& b,
                               std::span<const std::size_t> modes, Species species) {
  const auto n = static_cast<Eigen::Index>(modes.size());
  if (b.rows() != n || b.cols() != n) {
    throw std::invalid_argument(fmt::format("mode matrix is {}x{} for {} modes", b.rows(), b.cols(), n));
  }
  const double residual = (b.adjoint() * b - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(residual < 1e-12)) {
    throw std::invalid_argument(fmt::format("mode matrix is not unitary (residual {:.3e})", residual));
  }

  std::map<std::size_t, LadderPolynomial> images;
  for (Eigen::Index k = 0; k < n; ++k) {
    LadderPolynomial image;
    for (Eigen::Index j = 0; j < n; ++j) {
      image.add_term({create(modes[static_cast<std::size_t>(j)], species)}, b(j, k));
    }
    images.emplace(modes[static_cast<std::size_t>(k)], std::move(image));
  }

  LadderPolynomial result;
  for (const auto& [factors, c] : ket.polynomial().terms()) {
    LadderPolynomial term(c);
    for (const auto& s : factors) {
      auto it = images.find(s.mode);
      term = multiply(term, (it != images.end() && s.species == species) ? it->second : LadderPolynomial(s));
    }
    result += term;
  }
  return KetExpression::from_polynomial(result);
}

KetExpression apply_exponential_series(const LadderPolynomial& generator, const KetExpression& state,
                                       const SeriesOptions& options) {
  if (!(options.tolerance > 0.0)) {
    throw std::invalid_argument("series tolerance must be positive");
  }
  KetExpression sum = state;
  KetExpression term = state;
  double previous_norm = std::sqrt(sum.norm_squared());
  for (int m = 1; m <= options.max_iterations; ++m) {
    term = apply_operator(generator, term);
    term *= 1.0 / m;
    sum += term;
    const double term_norm = std::sqrt(std::max(term.norm_squared(), 0.0));
    const double sum_norm = std::sqrt(std::max(sum.norm_squared(), 0.0));
    if (term_norm < options.tolerance && std::abs(sum_norm - previous_norm) < options.tolerance) {
      return sum;
    }
    previous_norm = sum_norm;
  }
  throw SeriesDivergence(
      fmt::format("exponential series did not converge within {} iterations", options.max_iterations));
}

KetExpression apply_number_diagonal(const NumberPhases& phases, const KetExpression& state) {
  LadderPolynomial out;
  for (const auto& [factors, c] : state.polynomial().terms()) {
    const auto counts = creation_counts(factors);
    auto n = [&counts](std::size_t mode) {
      auto it = counts.find(mode);
      return it == counts.end() ? 0.0 : static_cast<double>(it->second);
    };
    double angle = 0.0;
    for (const auto& [mode, phi] : phases.single) {
      angle += phi * n(mode);
    }
    for (const auto& [modes, chi] : phases.pair) {
      angle += chi * n(modes.first) * n(modes.second);
    }
    out.add_term(factors, c * std::polar(1.0, angle));
  }
  return KetExpression::from_polynomial(out);
}

std::string to_string(const LadderSymbol& s) {
  return fmt::format("{}{}{}", s.species == Species::boson ? 'a' : 'b', s.mode + 1, s.dagger ? "^+" : "");
}

std::string to_string(const LadderPolynomial& p) {
  if (p.is_zero()) {
    return "0";
  }
  std::string out;
  for (const auto& [factors, c] : p.terms()) {
    if (!out.empty()) {
      out += " + ";
    }
    out += fmt::format("({:.6g}{:+.6g}i)", c.real(), c.imag());
    for (const auto& s : factors) {
      out += ' ';
      out += to_string(s);
    }
  }
  return out;
}

}  // namespace fockbench
