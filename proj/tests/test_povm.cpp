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

#include "povmsim/errors.hpp"
#include "povmsim/named.hpp"
#include "povmsim/povm.hpp"

using namespace povmsim;

namespace {

HermitianOperator qubit(double a, double x, double y, double z) {
  RealVector v(3);
  v << x, y, z;
  return from_bloch(a, v, 2);
}

HermitianOperator sum_of(const std::vector<HermitianOperator>& ops) {
  HermitianOperator s = HermitianOperator::zero(ops.front().dim());
  for (const auto& o : ops) s += o;
  return s;
}

RealMatrix random_stochastic(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealMatrix q(rows, cols);
  for (int c = 0; c < cols; ++c) {
    double s = 0;
    for (int r = 0; r < rows; ++r) s += (q(r, c) = u(rng));
    q.col(c) /= s;
  }
  return q;
}

}  // namespace

TEST_CASE("povm validation reports the offending effect") {
  try {
    Povm({qubit(0.5, 0, 0, 0.7), qubit(0.5, 0, 0, -0.7)});
    FAIL("expected NotPositive");
  } catch (const NotPositive& e) {
    CHECK(e.index() == 0);
    CHECK(e.min_eigenvalue() == doctest::Approx(-0.2));
  }
  CHECK_THROWS_AS(Povm({qubit(0.5, 0, 0, 0.1), qubit(0.4, 0, 0, -0.1)}), InvalidArgument);
  CHECK_THROWS_AS(Povm({HermitianOperator::identity(2), HermitianOperator::zero(3)}), DimensionMismatch);
}

TEST_CASE("depolarizing map: endpoints and Bloch scaling") {
  const Povm t = named::tetrahedral();
  const Povm zero = depolarize(t, 0.0);
  for (int i = 0; i < 4; ++i) CHECK(zero[i].max_abs_diff(0.25 * HermitianOperator::identity(2)) < 1e-15);
  CHECK(depolarize(t, 1.0).max_abs_diff(t) < 1e-15);
  const auto b = to_bloch(depolarize(t, 0.3)[1]);
  CHECK((b.vector - 0.3 * to_bloch(t[1]).vector).norm() < 1e-14);
  CHECK(b.identity_coeff == doctest::Approx(0.25));
  CHECK_THROWS_AS(depolarize(t, 1.5), InvalidArgument);
  CHECK_THROWS_AS(depolarize(t, -0.1), InvalidArgument);
}

TEST_CASE("depolarized POVM materializes lazily") {
  const DepolarisedPovm d{named::pauli_x(), 0.5};
  CHECK(d.materialize().max_abs_diff(depolarize(named::pauli_x(), 0.5)) < 1e-15);
}

TEST_CASE("marginal of joint_from_single equals post-processing") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Povm b = random_povm(3, 4, rng);
    std::vector<PostProcessingMap> qs;
    qs.emplace_back(random_stochastic(2, 4, rng));
    qs.emplace_back(random_stochastic(3, 4, rng));
    const JointMeasurement j = joint_from_single(b, qs);
    CHECK(j.shape() == std::vector<int>{2, 3});
    for (int l = 0; l < 2; ++l) CHECK(marginal(j, l).max_abs_diff(post_process(b, qs[static_cast<std::size_t>(l)])) < 1e-12);
  }
}

TEST_CASE("joint measurement indexing is row-major") {
  const JointMeasurement j = joint_from_single(named::pauli_z(), std::vector<PostProcessingMap>{
                                                                     PostProcessingMap::identity(2),
                                                                     PostProcessingMap::constant({0.25, 0.75}, 2)});
  const std::vector<int> tup{1, 0};
  CHECK(j.flat_index(tup) == 2);
  CHECK(j.tuple(3) == std::vector<int>{1, 1});
  CHECK(j.effect(tup).max_abs_diff(0.25 * named::pauli_z()[1]) < 1e-15);
  CHECK_THROWS_AS(marginal(j, 2), InvalidArgument);
}

TEST_CASE("post-processing maps must be column stochastic") {
  RealMatrix q(2, 2);
  q << 0.5, 0.2, 0.4, 0.8;
  CHECK_THROWS_AS(PostProcessingMap{q}, InvalidArgument);
  q << 0.5, -0.2, 0.5, 1.2;
  CHECK_THROWS_AS(PostProcessingMap{q}, InvalidArgument);
  const auto det = PostProcessingMap::deterministic({1, 1, 0}, 2);
  CHECK(det(1, 0) == 1.0);
  CHECK(det(0, 2) == 1.0);
  const Povm coarse = post_process(named::trine(), det);
  CHECK(coarse.outcomes() == 2);
  CHECK(coarse[1].max_abs_diff(named::trine()[0] + named::trine()[1]) < 1e-15);
}

TEST_CASE("mixing POVMs") {
  const std::vector<Povm> ps{named::pauli_x(), named::pauli_z()};
  const Povm m = mix(ps, PreProcessing({0.25, 0.75}));
  CHECK(m[0].max_abs_diff(0.25 * named::pauli_x()[0] + 0.75 * named::pauli_z()[0]) < 1e-15);
  CHECK_THROWS_AS(PreProcessing({0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(mix(ps, PreProcessing({1.0})), DimensionMismatch);
}

TEST_CASE("born rule probabilities") {
  ComplexVector up(2);
  up << 1, 0;
  const auto rho = DensityMatrix::pure(up);
  const auto p = born(named::pauli_z(), rho);
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.0));
  const auto q = born(named::pauli_x(), rho);
  CHECK(q[0] == doctest::Approx(0.5));
}

TEST_CASE("antipodal POVM of a qubit POVM") {
  const Povm t = named::tetrahedral();
  const Povm a = antipodal_povm(t);
  for (int i = 0; i < 4; ++i) {
    CHECK((to_bloch(a[i]).vector + to_bloch(t[i]).vector).norm() < 1e-14);
    CHECK(a[i].trace() == doctest::Approx(t[i].trace()));
  }
  CHECK(is_unbiased_dichotomic(named::pauli_y()));
  CHECK(!is_unbiased_dichotomic(named::trine()));
}

TEST_CASE("antipodal POVM can fail for d = 3") {
  ComplexVector e0 = ComplexVector::Zero(3);
  e0[0] = 1;
  const auto p0 = HermitianOperator::projector(e0);
  const Povm p({p0, HermitianOperator::identity(3) - p0});
  CHECK_THROWS_AS(antipodal_povm(p), NotPositive);
}

TEST_CASE("random POVMs and unitaries are valid") {
  std::mt19937_64 rng(9);
  for (int d : {2, 3, 4}) {
    const Povm p = random_povm(d, 5, rng);
    CHECK(sum_of(p.effects()).max_abs_diff(HermitianOperator::identity(d)) < 1e-12);
    for (const auto& e : p.effects()) CHECK(min_eigenvalue(e) > -1e-12);
    const ComplexMatrix u = random_unitary(d, rng);
    CHECK((u * u.adjoint() - ComplexMatrix::Identity(d, d)).norm() < 1e-12);
    CHECK(p.conjugated(u).outcomes() == 5);
  }
}

TEST_CASE("named measurements") {
  for (const auto& p : {named::pauli_x(), named::pauli_y(), named::pauli_z(), named::sigma(), named::tetrahedral(),
                        named::trine()}) {
    CHECK(sum_of(p.effects()).max_abs_diff(HermitianOperator::identity(2)) < 1e-14);
  }
  const auto s = to_bloch(named::sigma()[0]).vector;
  CHECK(s[0] == doctest::Approx(0.5 / std::sqrt(3.0)));
  const auto t = named::trine();
  for (int i = 0; i < 3; ++i) {
    CHECK(t[i].trace() == doctest::Approx(2.0 / 3.0));
    for (int j = i + 1; j < 3; ++j) {
      const auto a = to_bloch(t[i]).vector.normalized();
      const auto b = to_bloch(t[j]).vector.normalized();
      CHECK(a.dot(b) == doctest::Approx(-0.5));
    }
  }
  CHECK(named::xyz_sigma_set().size() == 4);
  CHECK(named::parse("paper-set-A").size() == 4);
  CHECK(named::parse("direction:0,1,0")[0].max_abs_diff(named::pauli_y()) < 1e-15);
  CHECK(named::parse("trivial:0.2,0.8")[0].outcomes() == 2);
  CHECK_THROWS_AS(named::parse("direction:1,1,0"), InvalidArgument);
  CHECK_THROWS_AS(named::parse("nonsense"), InvalidArgument);
  CHECK_THROWS_AS(named::parse("tetra:1"), InvalidArgument);
}
