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
#include "povmsim/oracle.hpp"

using namespace povmsim;
using namespace povmsim::oracle;

namespace {

// Exact joint measurement of two commuting POVMs: products of the z projectors.
SimulationCertificate commuting_certificate() {
  const Povm z = named::pauli_z();
  std::vector<HermitianOperator> effects;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) effects.push_back(a == b ? z[a] : HermitianOperator::zero(2));
  SimulationCertificate cert;
  cert.kind = CertificateKind::Joint;
  cert.visibility = 1.0;
  cert.joint = JointMeasurement({2, 2}, effects);
  return cert;
}

SimulationCertificate trivial_certificate(const Povm& target) {
  SimulationCertificate cert;
  cert.kind = CertificateKind::KOutcome;
  cert.k = 1;
  cert.visibility = 0.0;
  const int n = target.outcomes();
  for (int i = 0; i < n; ++i) {
    std::vector<HermitianOperator> e(static_cast<std::size_t>(n), HermitianOperator::zero(target.dim()));
    e[static_cast<std::size_t>(i)] = HermitianOperator::identity(target.dim());
    cert.components.push_back({{i}, target[i].trace() / target.dim(), Povm(e)});
  }
  return cert;
}

}  // namespace

TEST_CASE("exact certificate passes") {
  const std::vector<Povm> targets{named::pauli_z(), named::pauli_z()};
  const auto r = verify_certificate(targets, commuting_certificate(), 1e-9);
  CHECK(r.passed);
  CHECK(r.max_error < 1e-12);
  CHECK(r.errors.size() == 4);
  const auto s = statistics_check(targets, commuting_certificate(), 100, 1e-10, 5);
  CHECK(s.passed);
  CHECK(s.max_error < 1e-10);
}

TEST_CASE("perturbed certificate fails") {
  const Povm z = named::pauli_z();
  auto cert = commuting_certificate();
  auto effects = cert.joint->effects();
  effects[0] *= 1.0 - 1e-3;
  effects[1] += 1e-3 * z[0];
  cert.joint = JointMeasurement({2, 2}, effects);
  const auto r = verify_certificate({z, z}, cert, 1e-7);
  CHECK(!r.passed);
  CHECK(r.max_error > 5e-4);
  CHECK(!r.notes.empty());
}

TEST_CASE("shape mismatch is reported") {
  CHECK_THROWS_AS(verify_certificate({named::pauli_z()}, commuting_certificate(), 1e-7), DimensionMismatch);
  CHECK_THROWS_AS(verify_certificate({named::pauli_z(), named::trine()}, commuting_certificate(), 1e-7),
                  DimensionMismatch);
}

TEST_CASE("zero-visibility certificate gives state independent statistics") {
  const Povm t = named::tetrahedral();
  const auto cert = trivial_certificate(t);
  CHECK(verify_certificate({t}, cert, 1e-12).passed);
  std::mt19937_64 rng(3);
  for (int s = 0; s < 10; ++s) {
    const auto p = protocol_statistics({t}, cert, 0, random_pure_state(2, rng));
    for (double x : p) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("weights and supports are checked") {
  const Povm t = named::trine();
  auto cert = trivial_certificate(t);
  cert.components[0].weight += 0.1;
  CHECK(!verify_certificate({t}, cert, 1e-7).passed);
  auto wide = trivial_certificate(t);
  wide.components[0].support = {1};
  CHECK(!verify_certificate({t}, wide, 1e-7).passed);
}

TEST_CASE("random states are valid") {
  std::mt19937_64 rng(1);
  for (int d : {2, 3}) {
    const auto pure = random_pure_state(d, rng);
    CHECK(pure.op().trace() == doctest::Approx(1.0));
    const auto mixed = random_mixed_state(d, rng);
    CHECK(min_eigenvalue(mixed.op()) > -1e-12);
  }
}

TEST_CASE("solver certificates pass the statistics check") {
  const Povm t = named::tetrahedral();
  const auto r = k_outcome_robustness(t, 3);
  const auto s = statistics_check({t}, r.certificate, 1000, 1e-7, 17);
  CHECK(s.passed);
  CHECK(s.errors.size() == 1000);
}

TEST_CASE("grid oracle on commuting and orthogonal pairs") {
  const auto commuting = qubit_pair_jm_grid(named::pauli_z(), named::trivial({0.4, 0.6}), 10);
  CHECK(commuting.t_lower == 1.0);
  const auto xz = qubit_pair_jm_grid(named::pauli_x(), named::pauli_z(), 50);
  CHECK(xz.t_lower >= 0.705);
  CHECK(xz.t_lower <= 1.0 / std::sqrt(2.0) + 1e-9);
  REQUIRE(xz.certificate);
  CHECK(verify_certificate({named::pauli_x(), named::pauli_z()}, *xz.certificate, 1e-9).passed);
  const auto sx = qubit_pair_jm_grid(named::sigma(), named::pauli_x(), 50);
  CHECK(sx.t_lower >= 0.74);
  CHECK_THROWS_AS(qubit_pair_jm_grid(named::pauli_x(), named::pauli_z(), 1), InvalidArgument);
  CHECK_THROWS_AS(qubit_pair_jm_grid(named::trine(), named::pauli_z(), 10), InvalidArgument);
}

TEST_CASE("grid oracle brackets the SDP value for unbiased pairs") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 4; ++trial) {
    const Eigen::Vector3d u = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    const Eigen::Vector3d v = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    const Povm a = named::direction(u);
    const Povm b = named::direction(v);
    const double t = jm_robustness({a, b}).t_star;
    const double lower = qubit_pair_jm_grid(a, b, 100).t_lower;
    CHECK(lower <= t + 1e-7);
    CHECK(lower >= t - 0.01);
  }
}

TEST_CASE("monotonicity under random processing") {
  MonotonicityOptions opt;
  opt.trials = 5;
  opt.seed = 42;
  const auto r = monotonicity_check({named::pauli_x(), named::pauli_z()}, opt);
  CHECK(r.passed);
  CHECK(r.errors.size() == 5);
}

TEST_CASE("random processing is reproducible") {
  std::mt19937_64 a(5), b(5);
  const auto set = named::xyz_sigma_set();
  const auto ra = random_processing(set, a);
  const auto rb = random_processing(set, b);
  const auto pa = process_set(set, ra.pre, ra.post);
  const auto pb = process_set(set, rb.pre, rb.post);
  REQUIRE(pa.size() == pb.size());
  for (std::size_t k = 0; k < pa.size(); ++k) CHECK(pa[k].max_abs_diff(pb[k]) == 0.0);
}
