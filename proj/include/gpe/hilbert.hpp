// Copyright 2026 The gpe Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Tensor products of truncated Fock spaces and two-level spaces, with a
// dense operator algebra on them.
//
// Basis ordering: factor 0 is the slowest-varying index of the composite
// basis, so the composite index of (n_0, n_1, ..., n_k) is
// n_0 * stride_0 + n_1 * stride_1 + ... with stride_k = 1.
// Two-level convention: index 0 = |g>, index 1 = |e>, sigma_z|e> = +|e>.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gpe/error.hpp"

namespace gpe {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-9;

enum class FactorKind { Boson, TwoLevel };

struct Factor {
  FactorKind kind = FactorKind::TwoLevel;
  Index dim = 2;

  static Factor boson(Index cutoff) { return {FactorKind::Boson, cutoff}; }
  static Factor two_level() { return {FactorKind::TwoLevel, 2}; }

  bool is_boson() const { return kind == FactorKind::Boson; }
  friend bool operator==(const Factor&, const Factor&) = default;
};

class SpaceDescriptor {
 public:
  SpaceDescriptor() = default;
  explicit SpaceDescriptor(std::vector<Factor> factors) : factors_(std::move(factors)) {
    detail::require(!factors_.empty(), "space needs at least one factor");
    total_dim_ = 1;
    for (const auto& f : factors_) {
      if (f.is_boson()) {
        detail::require(f.dim >= 2, "boson cutoff must be >= 2, got " + std::to_string(f.dim));
      } else {
        detail::require(f.dim == 2, "two-level factor must have dimension 2");
      }
      total_dim_ *= f.dim;
    }
  }

  static SpaceDescriptor boson(Index cutoff) { return SpaceDescriptor({Factor::boson(cutoff)}); }
  static SpaceDescriptor two_level() { return SpaceDescriptor({Factor::two_level()}); }

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t factor_count() const { return factors_.size(); }
  Index total_dim() const { return total_dim_; }

  const Factor& factor(std::size_t index) const {
    detail::require(index < factors_.size(), "factor index " + std::to_string(index) +
                                                 " out of range for " + describe());
    return factors_[index];
  }

  // Distance in the composite index between neighbouring levels of a factor.
  Index stride(std::size_t index) const {
    factor(index);
    Index s = 1;
    for (std::size_t k = index + 1; k < factors_.size(); ++k) s *= factors_[k].dim;
    return s;
  }

  // Level of `factor_index` encoded in the composite basis index.
  Index level(Index composite, std::size_t factor_index) const {
    return (composite / stride(factor_index)) % factor(factor_index).dim;
  }

  Index composite_index(const std::vector<Index>& levels) const {
    detail::require(levels.size() == factors_.size(), "level list does not match factor count");
    Index idx = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      detail::require(levels[k] >= 0 && levels[k] < factors_[k].dim,
                      "level " + std::to_string(levels[k]) + " out of range for factor " +
                          std::to_string(k));
      idx = idx * factors_[k].dim + levels[k];
    }
    return idx;
  }

  std::string describe() const {
    std::string out;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      if (k) out += " x ";
      out += factors_[k].is_boson() ? "Boson(" + std::to_string(factors_[k].dim) + ")" : "TwoLevel";
    }
    return out;
  }

  friend SpaceDescriptor operator*(const SpaceDescriptor& a, const SpaceDescriptor& b) {
    auto f = a.factors_;
    f.insert(f.end(), b.factors_.begin(), b.factors_.end());
    return SpaceDescriptor(std::move(f));
  }

  friend bool operator==(const SpaceDescriptor& a, const SpaceDescriptor& b) {
    return a.factors_ == b.factors_;
  }

 private:
  std::vector<Factor> factors_;
  Index total_dim_ = 0;
};

inline double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

class Operator {
 public:
  Operator(SpaceDescriptor space, Matrix matrix, bool hermitian_hint = false)
      : space_(std::move(space)), matrix_(std::move(matrix)), hermitian_(hermitian_hint) {
    const Index n = space_.total_dim();
    detail::require(matrix_.rows() == n && matrix_.cols() == n,
                    "operator matrix is " + std::to_string(matrix_.rows()) + "x" +
                        std::to_string(matrix_.cols()) + ", space " + space_.describe() +
                        " needs " + std::to_string(n));
    if (hermitian_) {
      const double defect = hermiticity_defect(matrix_);
      detail::require(defect <= kHermitianTol,
                      "operator flagged hermitian has max|M - M^dag| = " + detail::num(defect));
    }
  }

  const SpaceDescriptor& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  bool hermitian_hint() const { return hermitian_; }
  Index dim() const { return space_.total_dim(); }

  bool is_hermitian(double tol = kHermitianTol) const { return hermiticity_defect(matrix_) <= tol; }

  Operator adjoint() const { return {space_, matrix_.adjoint(), hermitian_}; }

  Vector apply(const Vector& v) const {
    detail::require(v.size() == dim(), "vector length does not match operator space");
    return matrix_ * v;
  }

  Operator& operator+=(const Operator& o) {
    check_same_space(o);
    matrix_ += o.matrix_;
    hermitian_ = hermitian_ && o.hermitian_;
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    check_same_space(o);
    matrix_ -= o.matrix_;
    hermitian_ = hermitian_ && o.hermitian_;
    return *this;
  }
  Operator& operator*=(double s) {
    matrix_ *= s;
    return *this;
  }
  Operator& operator*=(Complex s) {
    matrix_ *= s;
    hermitian_ = hermitian_ && s.imag() == 0.0;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(double s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, double s) { return a *= s; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }

  // Composition (matrix product). Products of hermitian operators are not
  // hermitian in general, so the hint is dropped.
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.check_same_space(b);
    return {a.space_, a.matrix_ * b.matrix_, false};
  }

 private:
  void check_same_space(const Operator& o) const {
    detail::require(space_ == o.space_,
                    "space mismatch: " + space_.describe() + " vs " + o.space_.describe());
  }

  SpaceDescriptor space_;
  Matrix matrix_;
  bool hermitian_;
};

inline Operator compose(const Operator& a, const Operator& b) { return a * b; }

inline Operator commutator(const Operator& a, const Operator& b) {
  return {a.space(), (a * b).matrix() - (b * a).matrix(), false};
}

// Kronecker product; factor order of the result is a's factors then b's.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Operator tensor(const Operator& a, const Operator& b) {
  return {a.space() * b.space(), kron(a.matrix(), b.matrix()),
          a.hermitian_hint() && b.hermitian_hint()};
}

class StateVector {
 public:
  StateVector(SpaceDescriptor space, Vector amplitudes, double norm_tol = kNormTol)
      : space_(std::move(space)), amps_(std::move(amplitudes)) {
    detail::require(amps_.size() == space_.total_dim(),
                    "state has " + std::to_string(amps_.size()) + " amplitudes, space " +
                        space_.describe() + " needs " + std::to_string(space_.total_dim()));
    const double drift = std::abs(amps_.norm() - 1.0);
    detail::require(drift <= norm_tol, "state norm deviates from 1 by " + detail::num(drift));
  }

  // Rescales to unit norm; fails on the zero vector.
  static StateVector normalized(SpaceDescriptor space, Vector amplitudes) {
    const double n = amplitudes.norm();
    detail::require(n > 0.0 && std::isfinite(n), "cannot normalize a zero or non-finite vector");
    amplitudes /= n;
    return {std::move(space), std::move(amplitudes)};
  }

  static StateVector basis(SpaceDescriptor space, const std::vector<Index>& levels) {
    Vector v = Vector::Zero(space.total_dim());
    v(space.composite_index(levels)) = 1.0;
    return {std::move(space), std::move(v)};
  }

  const SpaceDescriptor& space() const { return space_; }
  const Vector& amplitudes() const { return amps_; }
  Index dim() const { return amps_.size(); }
  double norm() const { return amps_.norm(); }

  // Probability that `factor_index` is found in `level`.
  double marginal_population(std::size_t factor_index, Index level) const {
    const auto& f = space_.factor(factor_index);
    detail::require(level >= 0 && level < f.dim, "level out of range for factor");
    double p = 0.0;
    for (Index i = 0; i < amps_.size(); ++i)
      if (space_.level(i, factor_index) == level) p += std::norm(amps_(i));
    return p;
  }

  // Unnormalized projection of the state onto `level` of one factor.
  Vector project(std::size_t factor_index, Index level) const {
    space_.factor(factor_index);
    Vector out = amps_;
    for (Index i = 0; i < out.size(); ++i)
      if (space_.level(i, factor_index) != level) out(i) = 0.0;
    return out;
  }

 private:
  SpaceDescriptor space_;
  Vector amps_;
};

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  return {a.space() * b.space(), kron(a.amplitudes(), b.amplitudes())};
}

// Embeds a single-factor matrix as I (x) ... (x) local (x) ... (x) I.
inline Matrix embed(const SpaceDescriptor& space, std::size_t factor_index, const Matrix& local) {
  const auto& f = space.factor(factor_index);
  detail::require(local.rows() == f.dim && local.cols() == f.dim,
                  "local operator size does not match factor dimension");
  const Index outer = space.total_dim() / (f.dim * space.stride(factor_index));
  const Index inner = space.stride(factor_index);
  return kron(kron(Matrix::Identity(outer, outer), local), Matrix::Identity(inner, inner));
}

namespace detail {

inline void require_boson(const SpaceDescriptor& space, std::size_t factor_index) {
  require(space.factor(factor_index).is_boson(),
          "factor " + std::to_string(factor_index) + " of " + space.describe() + " is not a boson");
}

inline void require_two_level(const SpaceDescriptor& space, std::size_t factor_index) {
  require(!space.factor(factor_index).is_boson(),
          "factor " + std::to_string(factor_index) + " of " + space.describe() +
              " is not a two-level system");
}

}  // namespace detail

// Lowering operator with <n-1|a|n> = sqrt(n).
inline Operator annihilation(const SpaceDescriptor& space, std::size_t factor_index) {
  detail::require_boson(space, factor_index);
  const Index d = space.factor(factor_index).dim;
  Matrix a = Matrix::Zero(d, d);
  for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {space, embed(space, factor_index, a)};
}

// Hard truncation: creation on the top level gives the zero vector.
inline Operator creation(const SpaceDescriptor& space, std::size_t factor_index) {
  return annihilation(space, factor_index).adjoint();
}

inline Operator number(const SpaceDescriptor& space, std::size_t factor_index) {
  detail::require_boson(space, factor_index);
  const Index d = space.factor(factor_index).dim;
  Matrix n = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return {space, embed(space, factor_index, n), true};
}

inline Operator identity(const SpaceDescriptor& space) {
  return {space, Matrix::Identity(space.total_dim(), space.total_dim()), true};
}

enum class Pauli { X, Y, Z, Plus, Minus };

inline Matrix pauli_matrix(Pauli which) {
  const Complex i{0.0, 1.0};
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case Pauli::X: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case Pauli::Y: m(0, 1) = i; m(1, 0) = -i; break;
    case Pauli::Z: m(0, 0) = -1.0; m(1, 1) = 1.0; break;
    case Pauli::Plus: m(1, 0) = 1.0; break;   // |e><g|
    case Pauli::Minus: m(0, 1) = 1.0; break;  // |g><e|
  }
  return m;
}

inline Operator pauli(const SpaceDescriptor& space, std::size_t factor_index, Pauli which) {
  detail::require_two_level(space, factor_index);
  const bool herm = which == Pauli::X || which == Pauli::Y || which == Pauli::Z;
  return {space, embed(space, factor_index, pauli_matrix(which)), herm};
}

// Poisson probability mass sum_{n >= first} e^{-mean} mean^n / n!, summed
// term by term in log space so that tiny tails are not lost to cancellation.
inline double poisson_tail(double mean, Index first) {
  detail::require(mean >= 0.0 && std::isfinite(mean), "poisson mean must be finite and >= 0");
  if (first <= 0) return 1.0;
  if (mean == 0.0) return 0.0;
  const double log_mean = std::log(mean);
  double sum = 0.0;
  for (Index n = first;; ++n) {
    const double nd = static_cast<double>(n);
    const double term = std::exp(-mean + nd * log_mean - std::lgamma(nd + 1.0));
    sum += term;
    if (nd > mean && term <= 1e-17 * sum) break;
    if (n - first > 100000) break;
  }
  return std::min(sum, 1.0);
}

struct CoherentSpec {
  Complex alpha{0.0, 0.0};
  double tail_tolerance = 1e-12;

  void validate() const {
    detail::require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()),
                    "coherent amplitude must be finite");
    detail::require(tail_tolerance > 0.0 && tail_tolerance < 1.0,
                    "coherent tail tolerance must lie in (0, 1)");
  }
};

// Smallest cutoff whose discarded Poisson tail is within tolerance.
inline Index minimal_cutoff(const CoherentSpec& spec) {
  spec.validate();
  const double mean = std::norm(spec.alpha);
  Index d = 2;
  while (poisson_tail(mean, d) > spec.tail_tolerance) ++d;
  return d;
}

// Coherent amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!) on one factor of
// dimension `dim`, renormalized. Fails loudly when the discarded tail mass
// exceeds the tolerance instead of truncating silently.
inline Vector coherent_amplitudes(Index dim, const CoherentSpec& spec) {
  spec.validate();
  detail::require(dim >= 2, "boson cutoff must be >= 2");
  const double mean = std::norm(spec.alpha);
  const double tail = poisson_tail(mean, dim);
  if (tail > spec.tail_tolerance) {
    throw DomainError("coherent state |alpha|=" + detail::num(std::abs(spec.alpha)) +
                      " loses tail mass " + detail::num(tail) + " above cutoff " +
                      std::to_string(dim) + " (tolerance " + detail::num(spec.tail_tolerance) +
                      ")");
  }
  Vector c = Vector::Zero(dim);
  if (mean == 0.0) {
    c(0) = 1.0;
    return c;
  }
  const double r = std::abs(spec.alpha);
  const double phase = std::arg(spec.alpha);
  for (Index n = 0; n < dim; ++n) {
    const double nd = static_cast<double>(n);
    const double mag = std::exp(-0.5 * mean + nd * std::log(r) - 0.5 * std::lgamma(nd + 1.0));
    c(n) = std::polar(mag, nd * phase);
  }
  return c / c.norm();
}

// Product state with `levels[k]` on every factor, except `factor_index`
// which carries `local` amplitudes.
inline StateVector product_state(const SpaceDescriptor& space, std::size_t factor_index,
                                 const Vector& local, std::vector<Index> levels = {}) {
  if (levels.empty()) levels.assign(space.factor_count(), 0);
  detail::require(levels.size() == space.factor_count(), "level list does not match factor count");
  Vector out = Vector::Ones(1);
  for (std::size_t k = 0; k < space.factor_count(); ++k) {
    const Index d = space.factor(k).dim;
    Vector f;
    if (k == factor_index) {
      detail::require(local.size() == d, "local amplitude vector has wrong length");
      f = local;
    } else {
      detail::require(levels[k] >= 0 && levels[k] < d, "level out of range");
      f = Vector::Zero(d);
      f(levels[k]) = 1.0;
    }
    out = kron(out, f);
  }
  return StateVector::normalized(space, std::move(out));
}

// Coherent state on one boson factor; every other factor is in its ground level.
inline StateVector coherent_state(const SpaceDescriptor& space, std::size_t factor_index,
                                  const CoherentSpec& spec) {
  detail::require_boson(space, factor_index);
  return product_state(space, factor_index,
                       coherent_amplitudes(space.factor(factor_index).dim, spec));
}

inline StateVector fock_state(const SpaceDescriptor& space, std::size_t factor_index, Index n) {
  detail::require_boson(space, factor_index);
  std::vector<Index> levels(space.factor_count(), 0);
  levels[factor_index] = n;
  return StateVector::basis(space, levels);
}

inline Complex expectation(const Operator& op, const StateVector& psi) {
  detail::require(op.space() == psi.space(), "space mismatch: operator on " +
                                                 op.space().describe() + ", state on " +
                                                 psi.space().describe());
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

inline double variance(const Operator& op, const StateVector& psi) {
  detail::require(op.hermitian_hint(), "variance requires a hermitian operator");
  detail::require(op.space() == psi.space(), "space mismatch in variance");
  const Vector applied = op.matrix() * psi.amplitudes();
  const double mean = psi.amplitudes().dot(applied).real();
  const double second = applied.squaredNorm();
  return std::max(0.0, second - mean * mean);
}

}  // namespace gpe
