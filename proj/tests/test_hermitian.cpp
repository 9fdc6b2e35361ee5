// Copyright 2026 The povmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "povmsim/errors.hpp"
#include "povmsim/hermitian.hpp"

using namespace povmsim;

namespace {

const Complex I(0, 1);

// Textbook Gell-Mann matrices, written out entry by entry.
std::vector<ComplexMatrix> textbook_gell_mann() {
  std::vector<ComplexMatrix> g(8, ComplexMatrix::Zero(3, 3));
  g[0](0, 1) = 1;
  g[0](1, 0) = 1;
  g[1](0, 1) = -I;
  g[1](1, 0) = I;
  g[2](0, 0) = 1;
  g[2](1, 1) = -1;
  g[3](0, 2) = 1;
  g[3](2, 0) = 1;
  g[4](0, 2) = -I;
  g[4](2, 0) = I;
  g[5](1, 2) = 1;
  g[5](2, 1) = 1;
  g[6](1, 2) = -I;
  g[6](2, 1) = I;
  const double s = 1.0 / std::sqrt(3.0);
  g[7](0, 0) = s;
  g[7](1, 1) = s;
  g[7](2, 2) = -2 * s;
  return g;
}

HermitianOperator random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return HermitianOperator::hermitian_part(m);
}

}  // namespace

TEST_CASE("pauli basis matches the Pauli matrices") {
  const auto& b = generalized_pauli_basis(2);
  REQUIRE(b.size() == 3);
  ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -I, I, 0;
  z << 1, 0, 0, -1;
  CHECK((b[0].matrix() - x).norm() < 1e-15);
  CHECK((b[1].matrix() - y).norm() < 1e-15);
  CHECK((b[2].matrix() - z).norm() < 1e-15);
}

TEST_CASE("d = 3 basis matches the textbook Gell-Mann matrices") {
  const auto& b = generalized_pauli_basis(3);
  const auto g = textbook_gell_mann();
  REQUIRE(b.size() == 8);
  for (int k = 0; k < 8; ++k) CHECK((b[static_cast<std::size_t>(k)].matrix() - g[static_cast<std::size_t>(k)]).norm() < 1e-14);
}

TEST_CASE("basis is orthogonal with Tr(l_i l_j) = 2 delta_ij") {
  for (int d : {2, 3, 4, 5}) {
    const auto& b = generalized_pauli_basis(d);
    REQUIRE(static_cast<int>(b.size()) == d * d - 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(std::abs(b[i].trace()) < 1e-14);
      for (std::size_t j = 0; j < b.size(); ++j) {
        const Complex tr = (b[i].matrix() * b[j].matrix()).trace();
        CHECK(std::abs(tr - Complex(i == j ? 2.0 : 0.0)) < 1e-13);
      }
    }
  }
}

TEST_CASE("Bloch coefficients agree with direct trace products") {
  std::mt19937_64 rng(7);
  const auto g = textbook_gell_mann();
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = random_hermitian(3, rng);
    const auto bd = to_bloch(h);
    CHECK(std::abs(bd.identity_coeff - h.matrix().trace().real() / 3.0) < 1e-13);
    for (int k = 0; k < 8; ++k) {
      const double expected = 0.5 * (h.matrix() * g[static_cast<std::size_t>(k)]).trace().real();
      CHECK(std::abs(bd.vector[k] - expected) < 1e-12);
    }
    CHECK(from_bloch(bd.identity_coeff, bd.vector, 3).max_abs_diff(h) < 1e-12);
  }
}

TEST_CASE("from_bloch rejects a vector of the wrong length") {
  CHECK_THROWS_AS(from_bloch(0.5, RealVector::Zero(3), 3), DimensionMismatch);
  CHECK_THROWS_AS(from_bloch(0.5, RealVector::Zero(8), 2), DimensionMismatch);
}

TEST_CASE("eigenvalues agree with a general complex eigensolver") {
  std::mt19937_64 rng(11);
  for (int d : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto h = random_hermitian(d, rng);
      const auto ours = eigenvalues(h);
      Eigen::ComplexEigenSolver<ComplexMatrix> ces(h.matrix());
      std::vector<double> ref;
      for (int i = 0; i < d; ++i) ref.push_back(ces.eigenvalues()[i].real());
      std::sort(ref.begin(), ref.end());
      REQUIRE(static_cast<int>(ours.size()) == d);
      for (int i = 0; i < d; ++i) CHECK(std::abs(ours[static_cast<std::size_t>(i)] - ref[static_cast<std::size_t>(i)]) < 1e-10);
      CHECK(std::abs(min_eigenvalue(h) - ref.front()) < 1e-10);
    }
  }
}

TEST_CASE("jacobi eigenvalues of a known symmetric matrix") {
  RealMatrix a(3, 3);
  a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const auto ev = jacobi_eigenvalues(a);
  CHECK(ev[0] == doctest::Approx(2 - std::sqrt(2.0)).epsilon(1e-13));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(ev[2] == doctest::Approx(2 + std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("real embedding doubles the spectrum") {
  std::mt19937_64 rng(3);
  const auto h = random_hermitian(3, rng);
  const auto ev = jacobi_eigenvalues(embed_real(h));
  const auto e = eigenvalues(h);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(ev[2 * i] - e[static_cast<std::size_t>(i)]) < 1e-10);
    CHECK(std::abs(ev[2 * i + 1] - e[static_cast<std::size_t>(i)]) < 1e-10);
  }
}

TEST_CASE("antipodal operator flips the Bloch vector") {
  RealVector v(3);
  v << 0.1, -0.2, 0.3;
  const auto h = from_bloch(0.4, v, 2);
  const auto a = to_bloch(antipodal(h));
  CHECK(a.identity_coeff == doctest::Approx(0.4));
  CHECK((a.vector + v).norm() < 1e-14);
  CHECK(antipodal(antipodal(h)).max_abs_diff(h) < 1e-15);
}

TEST_CASE("constructor rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 1, 1, 0, 1;
  CHECK_THROWS_AS(HermitianOperator{m}, InvalidArgument);
  CHECK_NOTHROW(HermitianOperator::hermitian_part(m));
}

TEST_CASE("is_psd and projector") {
  ComplexVector psi(2);
  psi << 1, I;
  const auto p = HermitianOperator::projector(psi / std::sqrt(2.0));
  CHECK(is_psd(p, 1e-12));
  CHECK(p.trace() == doctest::Approx(1.0));
  CHECK(!is_psd(-1.0 * p, 1e-12));
}

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(3));
  CHECK_THROWS(DensityMatrix(HermitianOperator::identity(2)));
  ComplexMatrix m(2, 2);
  m << 1.2, 0, 0, -0.2;
  CHECK_THROWS(DensityMatrix(HermitianOperator(m)));
}
