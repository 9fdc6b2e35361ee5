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
#include "povmsim/sdp.hpp"

using namespace povmsim;
using namespace povmsim::sdp;

namespace {

struct Completion {
  int n;
  std::vector<std::tuple<int, int, double>> entries;  // i <= j
};

Problem completion_problem(const Completion& c) {
  Problem p;
  const auto x = p.add_block(c.n);
  for (const auto& [i, j, v] : c.entries) {
    LinearExpr e;
    e.add(x, i, j, 1.0);
    p.add_constraint(e, v);
  }
  return p;
}

RealMatrix psd_projection(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
}

// Alternating projections between the PSD cone and the affine set of
// matrices with the prescribed entries. Returns the final distance between
// the two sets' iterates.
double alternating_projection_gap(const Completion& c, int iterations) {
  RealMatrix x = RealMatrix::Identity(c.n, c.n);
  double gap = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const RealMatrix p = psd_projection(x);
    x = p;
    for (const auto& [i, j, v] : c.entries) {
      x(i, j) = v;
      x(j, i) = v;
    }
    gap = (x - p).norm();
    if (gap < 1e-12) break;
  }
  return gap;
}

Completion random_feasible(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0, 1);
  RealMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  RealMatrix m = a * a.transpose() / n + 0.05 * RealMatrix::Identity(n, n);
  std::bernoulli_distribution keep(0.5);
  Completion c{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (i == j || keep(rng)) c.entries.emplace_back(i, j, m(i, j));
  return c;
}

Completion cycle_infeasible(double value) {
  return {4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}, {0, 1, value}, {1, 2, value}, {2, 3, value}, {0, 3, -value}}};
}

}  // namespace

TEST_CASE("maximal off-diagonal entry with unit diagonal") {
  Problem p;
  const auto x = p.add_block(2);
  LinearExpr a, b, obj;
  a.add(x, 0, 0, 1);
  b.add(x, 1, 1, 1);
  obj.add(x, 0, 1, 1);
  p.add_constraint(a, 1);
  p.add_constraint(b, 1);
  p.set_objective(obj);
  const auto s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(s.objective - s.dual_objective) < 1e-6);
  CHECK(s.primal_residual < 1e-8);
}

TEST_CASE("largest shift keeping C - t I PSD is the smallest eigenvalue") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 1);
  for (int n : {2, 3, 5}) {
    RealMatrix c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) c(i, j) = c(j, i) = g(rng);
    Problem p;
    const auto x = p.add_block(n);
    const auto t = p.add_scalar();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        LinearExpr e;
        e.add(x, i, j, 1.0);
        if (i == j) e.add(t, 1.0);
        p.add_constraint(e, c(i, j));
      }
    LinearExpr obj;
    obj.add(t, 1.0);
    p.set_objective(obj);
    const auto s = solve(p);
    REQUIRE(s.status == Status::Optimal);
    const double lmin = Eigen::SelfAdjointEigenSolver<RealMatrix>(c).eigenvalues()[0];
    CHECK(std::abs(s.value(t) - lmin) < 1e-6);
  }
}

TEST_CASE("PSD completion agrees with alternating projections") {
  std::mt19937_64 rng(2024);
  int feasible = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const Completion c = random_feasible(3 + trial % 3, rng);
    const double gap = alternating_projection_gap(c, 20000);
    const auto s = feasibility(completion_problem(c));
    const bool oracle_feasible = gap < 1e-6;
    CHECK((s.status == Status::Optimal) == oracle_feasible);
    if (s.status == Status::Optimal) {
      ++feasible;
      CHECK(s.primal_residual < 1e-6);
      CHECK(Eigen::SelfAdjointEigenSolver<RealMatrix>(s.blocks[0]).eigenvalues()[0] > -1e-6);
    }
  }
  CHECK(feasible == 12);
  std::uniform_real_distribution<double> u(0.8, 0.99);
  for (int trial = 0; trial < 6; ++trial) {
    const Completion c = cycle_infeasible(u(rng));
    CHECK(alternating_projection_gap(c, 20000) > 1e-6);
    const Problem p = completion_problem(c);
    const auto s = feasibility(p);
    REQUIRE(s.status == Status::Infeasible);
    const auto f = check_farkas(p, s.duals);
    CHECK(f.max_block_eigenvalue <= 1e-7);
    CHECK(f.max_scalar_violation <= 1e-7);
    CHECK(f.margin > 0);
  }
}

TEST_CASE("plain solve reports infeasibility with a valid ray") {
  Problem p;
  const auto x = p.add_block(2);
  LinearExpr a, b, obj;
  a.add(x, 0, 0, 1);
  b.add(x, 0, 1, 1);
  obj.add(x, 1, 1, -1);
  p.add_constraint(a, 1);
  p.add_constraint(b, 2);
  p.set_objective(obj);
  LinearExpr c;
  c.add(x, 1, 1, 1);
  p.add_constraint(c, 1);
  const auto s = solve(p);
  REQUIRE(s.status == Status::Infeasible);
  const auto f = check_farkas(p, s.duals);
  CHECK(f.max_block_eigenvalue <= 1e-7);
  CHECK(f.max_scalar_violation <= 1e-7);
  CHECK(f.margin > 0);
}

TEST_CASE("unbounded objective") {
  Problem p;
  const auto x = p.add_block(2);
  LinearExpr a, obj;
  a.add(x, 0, 0, 1);
  p.add_constraint(a, 1);
  obj.add(x, 1, 1, 1);
  p.set_objective(obj);
  CHECK(solve(p).status == Status::Unbounded);
}

TEST_CASE("redundant and inconsistent duplicate constraints") {
  Problem p;
  const auto x = p.add_block(2);
  LinearExpr a, obj;
  a.add(x, 0, 0, 1);
  p.add_constraint(a, 1);
  p.add_constraint(a, 1);
  LinearExpr b;
  b.add(x, 1, 1, 2);
  p.add_constraint(b, 2);
  obj.add(x, 0, 1, 1);
  p.set_objective(obj);
  const auto s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(1.0).epsilon(1e-7));

  Problem q;
  const auto y = q.add_block(2);
  LinearExpr e;
  e.add(y, 0, 0, 1);
  q.add_constraint(e, 1);
  q.add_constraint(e, 2);
  const auto r = solve(q);
  REQUIRE(r.status == Status::Infeasible);
  const auto f = check_farkas(q, r.duals);
  CHECK(f.max_block_eigenvalue <= 1e-9);
  CHECK(f.max_scalar_violation <= 1e-9);
  CHECK(f.margin > 0);
}

TEST_CASE("scalar bounds of every kind") {
  Problem p;
  const auto lo = p.add_scalar(1.0, std::nullopt);
  const auto hi = p.add_scalar(std::nullopt, 2.0);
  const auto box = p.add_scalar(-1.0, 3.0);
  const auto free = p.add_scalar();
  LinearExpr e;
  e.add(lo, 1).add(hi, 1).add(box, 1).add(free, 1);
  p.add_constraint(e, 0.0);
  LinearExpr pin;
  pin.add(free, 1);
  p.add_constraint(pin, -10.0);
  LinearExpr obj;
  obj.add(box, 1).add(lo, -1);
  p.set_objective(obj);
  const auto s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value(box) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(s.value(hi) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(s.value(lo) == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(s.value(free) == doctest::Approx(-10.0).epsilon(1e-6));
  CHECK(s.objective == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("Hermitian variables respect complex constraints") {
  Problem p;
  HermitianBlock h(p, 2);
  for (int j = 0; j < 2; ++j) {
    LinearExpr e;
    h.add_real(e, j, j, 1.0);
    p.add_constraint(e, 1.0);
  }
  LinearExpr im;
  h.add_imag(im, 0, 1, 1.0);
  p.add_constraint(im, 0.5);
  LinearExpr obj;
  h.add_real(obj, 0, 1, 1.0);
  p.set_objective(obj);
  const auto s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(std::sqrt(0.75)).epsilon(1e-6));
  const auto v = h.value(s);
  CHECK(v(0, 1).imag() == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(min_eigenvalue(v) > -1e-7);
}

TEST_CASE("Hermitian equality emits d^2 real rows") {
  Problem p;
  HermitianBlock a(p, 3);
  HermitianEquality eq(3);
  eq.add(a, 1.0);
  eq.emit(p, HermitianOperator::identity(3));
  CHECK(p.constraints().size() == 9);
  const auto s = feasibility(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(a.value(s).max_abs_diff(HermitianOperator::identity(3)) < 1e-7);
}

TEST_CASE("malformed problems and size guard") {
  Problem empty;
  empty.add_block(2);
  CHECK_THROWS_AS(solve(empty), MalformedProblem);
  Problem bad;
  const auto x = bad.add_block(2);
  LinearExpr e;
  e.add(x, 0, 5, 1.0);
  bad.add_constraint(e, 1.0);
  CHECK_THROWS_AS(solve(bad), MalformedProblem);
  Problem big;
  const auto y = big.add_block(400);
  LinearExpr f;
  f.add(y, 0, 0, 1.0);
  big.add_constraint(f, 1.0);
  Settings small;
  small.max_dimension = 1000;
  CHECK_THROWS_AS(solve(big, small), SizeGuardExceeded);
}

TEST_CASE("iteration cap yields NumericalLimit") {
  Problem p;
  const auto x = p.add_block(3);
  LinearExpr a, obj;
  a.add_trace(x, 3, 1.0);
  p.add_constraint(a, 1.0);
  obj.add(x, 0, 1, 1.0);
  p.set_objective(obj);
  Settings s;
  s.max_iterations = 1;
  CHECK(solve(p, s).status == Status::NumericalLimit);
  CHECK(solve(p).objective == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("problem dump is JSON") {
  Problem p;
  const auto x = p.add_block(2);
  LinearExpr a;
  a.add(x, 0, 1, 2.0);
  p.add_constraint(a, 1.0);
  const auto text = p.dump_json();
  CHECK(text.find("\"constraints\"") != std::string::npos);
}
