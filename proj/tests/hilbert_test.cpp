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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gpe/hilbert.hpp"

namespace {

using namespace gpe;

Matrix random_hermitian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
  return 0.5 * (m + m.adjoint());
}

Vector random_unit(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(d(rng), d(rng));
  return v / v.norm();
}

TEST(SpaceDescriptor, DimensionsAndStrides) {
  const auto s = SpaceDescriptor::boson(4) * SpaceDescriptor::two_level();
  EXPECT_EQ(s.total_dim(), 8);
  EXPECT_EQ(s.factor_count(), 2u);
  EXPECT_EQ(s.stride(0), 2);
  EXPECT_EQ(s.stride(1), 1);
  EXPECT_EQ(s.composite_index({3, 1}), 7);
  EXPECT_EQ(s.level(7, 0), 3);
  EXPECT_EQ(s.level(7, 1), 1);
  EXPECT_EQ(s.describe(), "Boson(4) x TwoLevel");
}

TEST(SpaceDescriptor, RejectsInvalidFactors) {
  EXPECT_THROW(SpaceDescriptor::boson(1), DomainError);
  EXPECT_THROW(SpaceDescriptor(std::vector<Factor>{}), DomainError);
  const auto s = SpaceDescriptor::boson(3);
  EXPECT_THROW(s.factor(1), DomainError);
  EXPECT_THROW(s.composite_index({3}), DomainError);
}

TEST(Operator, RejectsWrongShapeAndFalseHermitianHint) {
  const auto s = SpaceDescriptor::boson(3);
  EXPECT_THROW(Operator(s, Matrix::Zero(2, 2)), DomainError);
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = 1.0;
  EXPECT_THROW(Operator(s, m, true), DomainError);
  EXPECT_NO_THROW(Operator(s, m, false));
}

TEST(Operator, SpaceMismatchThrows) {
  const Operator a = number(SpaceDescriptor::boson(3), 0);
  const Operator b = number(SpaceDescriptor::boson(4), 0);
  EXPECT_THROW(a + b, DomainError);
  EXPECT_THROW(a * b, DomainError);
}

TEST(Operator, HermitianHintPropagation) {
  const auto s = SpaceDescriptor::boson(3);
  const Operator n = number(s, 0);
  EXPECT_TRUE((2.0 * n).hermitian_hint());
  EXPECT_TRUE((n + n).hermitian_hint());
  EXPECT_FALSE((Complex(0, 1) * n).hermitian_hint());
  EXPECT_FALSE((n * n).hermitian_hint());
  EXPECT_TRUE((n * n).is_hermitian());
}

TEST(Ladder, MatrixElementsAndHardTruncation) {
  const auto s = SpaceDescriptor::boson(5);
  const Operator a = annihilation(s, 0);
  const Operator ad = creation(s, 0);
  for (Index n = 1; n < 5; ++n) EXPECT_DOUBLE_EQ(a.matrix()(n - 1, n).real(), std::sqrt(double(n)));
  // a^dag on the top level gives zero.
  const Vector top = fock_state(s, 0, 4).amplitudes();
  EXPECT_EQ(ad.apply(top).norm(), 0.0);
  // [a, a^dag] = 1 except on the top level, where it is -(dim-1).
  const Matrix c = commutator(a, ad).matrix();
  for (Index n = 0; n < 4; ++n) EXPECT_NEAR(c(n, n).real(), 1.0, 1e-15);
  EXPECT_NEAR(c(4, 4).real(), -4.0, 1e-15);
  EXPECT_TRUE(number(s, 0).matrix().isApprox((ad * a).matrix()));
}

TEST(Pauli, AlgebraAndConventions) {
  const auto s = SpaceDescriptor::two_level();
  const Operator x = pauli(s, 0, Pauli::X), y = pauli(s, 0, Pauli::Y), z = pauli(s, 0, Pauli::Z);
  // Basis index 0 is the ground level with sigma_z eigenvalue -1.
  EXPECT_EQ(z.matrix()(0, 0), Complex(-1.0, 0.0));
  EXPECT_EQ(z.matrix()(1, 1), Complex(1.0, 0.0));
  // sigma_+ raises |g> to |e>.
  const Vector up = pauli(s, 0, Pauli::Plus).apply(StateVector::basis(s, {0}).amplitudes());
  EXPECT_EQ(up(1), Complex(1.0, 0.0));
  // [sigma_x, sigma_y] = 2 i sigma_z in this convention.
  EXPECT_TRUE(commutator(x, y).matrix().isApprox(Complex(0, 2) * z.matrix()));
  EXPECT_TRUE((x * x).matrix().isApprox(Matrix::Identity(2, 2)));
  EXPECT_TRUE((pauli(s, 0, Pauli::Plus) + pauli(s, 0, Pauli::Minus)).matrix().isApprox(x.matrix()));
  EXPECT_THROW(pauli(SpaceDescriptor::boson(3), 0, Pauli::X), DomainError);
}

TEST(Tensor, KronOrderingFirstFactorSlowest) {
  const auto s = SpaceDescriptor::boson(3) * SpaceDescriptor::two_level();
  const Operator n_field = number(s, 0);
  const StateVector psi = StateVector::basis(s, {2, 1});
  EXPECT_EQ(psi.amplitudes()(5), Complex(1.0, 0.0));
  EXPECT_NEAR(expectation(n_field, psi).real(), 2.0, 1e-15);
  const Operator local_n = number(SpaceDescriptor::boson(3), 0);
  const Operator local_i = identity(SpaceDescriptor::two_level());
  EXPECT_TRUE(tensor(local_n, local_i).matrix().isApprox(n_field.matrix()));
  EXPECT_EQ(tensor(local_n, local_i).space(), s);
}

TEST(StateVector, NormCheckedOnConstruction) {
  const auto s = SpaceDescriptor::boson(2);
  Vector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(StateVector(s, v), DomainError);
  EXPECT_NEAR(StateVector::normalized(s, v).norm(), 1.0, 1e-15);
  EXPECT_THROW(StateVector::normalized(s, Vector::Zero(2)), DomainError);
}

TEST(StateVector, MarginalsAndProjection) {
  const auto s = SpaceDescriptor::boson(3) * SpaceDescriptor::two_level();
  Vector v = Vector::Zero(6);
  v(s.composite_index({0, 1})) = std::sqrt(0.25);
  v(s.composite_index({1, 0})) = std::sqrt(0.75);
  const StateVector psi(s, v);
  EXPECT_NEAR(psi.marginal_population(1, 1), 0.25, 1e-15);
  EXPECT_NEAR(psi.marginal_population(0, 1), 0.75, 1e-15);
  EXPECT_NEAR(psi.project(1, 1).squaredNorm(), 0.25, 1e-15);
}

TEST(Coherent, PoissonTailAndCutoff) {
  EXPECT_DOUBLE_EQ(poisson_tail(3.0, 0), 1.0);
  EXPECT_NEAR(poisson_tail(1.0, 1), 1.0 - std::exp(-1.0), 1e-15);
  const CoherentSpec spec{Complex(2.0, 0.0), 1e-12};
  const Index d = minimal_cutoff(spec);
  EXPECT_LE(poisson_tail(4.0, d), 1e-12);
  EXPECT_GT(poisson_tail(4.0, d - 1), 1e-12);
}

TEST(Coherent, FailsLoudlyInsteadOfTruncating) {
  EXPECT_THROW(coherent_amplitudes(10, {Complex(5.0, 0.0), 1e-12}), DomainError);
  EXPECT_NO_THROW(coherent_amplitudes(30, {Complex(2.0, 0.0), 1e-12}));
}

TEST(Coherent, MomentsMatchPoisson) {
  const auto s = SpaceDescriptor::boson(40);
  const Complex alpha(1.5, -0.7);
  const StateVector psi = coherent_state(s, 0, {alpha});
  EXPECT_NEAR(expectation(number(s, 0), psi).real(), std::norm(alpha), 1e-12);
  EXPECT_NEAR(variance(number(s, 0), psi), std::norm(alpha), 1e-10);
  const Complex a_mean = expectation(annihilation(s, 0), psi);
  EXPECT_NEAR(std::abs(a_mean - alpha), 0.0, 1e-12);
}

TEST(Expectation, VarianceRequiresHermitian) {
  const auto s = SpaceDescriptor::boson(3);
  const StateVector psi = fock_state(s, 0, 1);
  EXPECT_THROW(variance(annihilation(s, 0), psi), DomainError);
  EXPECT_EQ(variance(number(s, 0), psi), 0.0);
}

// Property tests over random hermitian matrices, fixed seed.
TEST(Properties, ExpectationOfHermitianIsReal) {
  std::mt19937_64 rng(20260101);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = SpaceDescriptor::boson(3) * SpaceDescriptor::two_level();
    const Operator h(s, random_hermitian(6, rng), true);
    const StateVector psi(s, random_unit(6, rng));
    EXPECT_LT(std::abs(expectation(h, psi).imag()), 1e-12);
    EXPECT_GE(variance(h, psi), 0.0);
  }
}

TEST(Properties, CommutatorIsAntiHermitianForHermitianPairs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = SpaceDescriptor::boson(4);
    const Operator a(s, random_hermitian(4, rng), true), b(s, random_hermitian(4, rng), true);
    const Matrix c = commutator(a, b).matrix();
    EXPECT_LT((c + c.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Properties, KronIsMixedProductCompatible) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_hermitian(3, rng), b = random_hermitian(2, rng);
    const Matrix c = random_hermitian(3, rng), d = random_hermitian(2, rng);
    EXPECT_TRUE((kron(a, b) * kron(c, d)).isApprox(kron(Matrix(a * c), Matrix(b * d)), 1e-12));
  }
}

}  // namespace
