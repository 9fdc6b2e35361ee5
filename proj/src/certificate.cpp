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

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "povmsim/errors.hpp"
#include "povmsim/simulability.hpp"
#include "povmsim_internal.hpp"

namespace povmsim {

namespace internal {

HermitianOperator clip_psd(const HermitianOperator& h) {
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  const RealVector vals = es.eigenvalues().cwiseMax(0.0);
  return HermitianOperator::hermitian_part(es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint());
}

void normalize_to_identity(std::vector<HermitianOperator>& ops) {
  if (ops.empty()) return;
  const int d = ops.front().dim();
  HermitianOperator sum = HermitianOperator::zero(d);
  for (auto& op : ops) {
    op = clip_psd(op);
    sum += op;
  }
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sum.matrix());
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw SolverFailure("effects do not sum to an invertible operator");
  const RealVector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  const ComplexMatrix w = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
  for (auto& op : ops) op = HermitianOperator::hermitian_part(w * op.matrix() * w);
}

}  // namespace internal

JointMeasurement certificate_to_joint_table(const SimulationCertificate& cert, const Povm& target) {
  if (cert.kind != CertificateKind::KOutcome) throw InvalidArgument("joint table needs a k-outcome certificate");
  const int n = target.outcomes();
  const int d = target.dim();
  const auto subsets = k_subsets(n, cert.k);
  const int cols = static_cast<int>(subsets.size());
  std::vector<HermitianOperator> effects(static_cast<std::size_t>(n * cols), HermitianOperator::zero(d));
  for (const auto& comp : cert.components) {
    if (comp.povm.outcomes() != n || comp.povm.dim() != d) throw DimensionMismatch("component does not match target");
    const auto it = std::find(subsets.begin(), subsets.end(), comp.support);
    if (it == subsets.end()) throw InvalidArgument("component support is not a k-subset");
    const int j = static_cast<int>(it - subsets.begin());
    for (int i = 0; i < n; ++i) effects[static_cast<std::size_t>(i * cols + j)] += comp.weight * comp.povm[i];
  }
  return JointMeasurement({n, cols}, std::move(effects));
}

SimulationCertificate joint_table_to_certificate(const JointMeasurement& table, int k, double visibility) {
  if (table.arity() != 2) throw InvalidArgument("joint table must have two indices");
  const int n = table.shape()[0];
  const int cols = table.shape()[1];
  const int d = table.dim();
  const auto subsets = k_subsets(n, k);
  if (static_cast<int>(subsets.size()) != cols) throw DimensionMismatch("table width does not match C(n, k)");
  SimulationCertificate cert;
  cert.kind = CertificateKind::KOutcome;
  cert.visibility = visibility;
  cert.k = k;
  for (int j = 0; j < cols; ++j) {
    std::vector<HermitianOperator> column;
    double trace = 0.0;
    for (int i = 0; i < n; ++i) {
      column.push_back(table.effect_at(i * cols + j));
      trace += column.back().trace();
    }
    const double weight = trace / d;
    if (weight < internal::kDropWeight) continue;
    for (int i = 0; i < n; ++i) {
      const bool inside = std::find(subsets[static_cast<std::size_t>(j)].begin(),
                                    subsets[static_cast<std::size_t>(j)].end(),
                                    i) != subsets[static_cast<std::size_t>(j)].end();
      if (!inside && column[static_cast<std::size_t>(i)].max_abs() > 1e-9) {
        throw InvalidArgument("table column has a non-null entry outside its support");
      }
      column[static_cast<std::size_t>(i)] *= 1.0 / weight;
    }
    cert.components.push_back({subsets[static_cast<std::size_t>(j)], weight, Povm(std::move(column))});
  }
  return cert;
}

namespace {

// A qubit POVM with (I + u.sigma)/2 at outcome a and (I - u.sigma)/2 at outcome b.
Povm projective_pair(int n, int a, int b, const RealVector& unit) {
  std::vector<HermitianOperator> effects(static_cast<std::size_t>(n), HermitianOperator::zero(2));
  effects[static_cast<std::size_t>(a)] = from_bloch(0.5, 0.5 * unit, 2);
  effects[static_cast<std::size_t>(b)] = from_bloch(0.5, -0.5 * unit, 2);
  return Povm(std::move(effects));
}

}  // namespace

SimulationCertificate extract_projective_decomposition(const Povm& target, const JointMeasurement& m,
                                                       double visibility) {
  constexpr double kTol = 1e-7;
  if (target.dim() != 2) throw InvalidArgument("projective decomposition is implemented for qubits only");
  const int n = target.outcomes();
  if (m.arity() != 2 || m.shape()[0] != n || m.shape()[1] != n) {
    throw DimensionMismatch("joint measurement must be an n x n table");
  }
  const Povm partner = antipodal_povm(target);
  if (marginal(m, 0).max_abs_diff(target) > kTol || marginal(m, 1).max_abs_diff(partner) > kTol) {
    throw InvalidArgument("joint measurement marginals do not match the POVM and its antipodal POVM");
  }
  auto n_op = [&](int a, int b) {
    return 0.5 * (m.effect_at(a * n + b) + antipodal(m.effect_at(b * n + a)));
  };

  SimulationCertificate cert;
  cert.kind = CertificateKind::ProjectiveDecomposition;
  cert.visibility = visibility;
  std::vector<double> trivial(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < n; ++a) {
    trivial[static_cast<std::size_t>(a)] += n_op(a, a).trace() / 2.0;
    for (int b = a + 1; b < n; ++b) {
      const HermitianOperator nab = n_op(a, b);
      const HermitianOperator nba = n_op(b, a);
      const auto sum = to_bloch(nab + nba);
      if (sum.vector.norm() > kTol) throw InvalidArgument("symmetrized pair does not sum to a multiple of the identity");
      const double w = sum.identity_coeff;
      if (w < internal::kDropWeight) continue;
      const RealVector u = (to_bloch(nab).vector - to_bloch(nba).vector) / (2.0 * w);
      const double len = std::min(u.norm(), 0.5);
      const double proj = 2.0 * len * w;
      if (proj >= internal::kDropWeight) cert.projective.push_back({proj, projective_pair(n, a, b, u / u.norm())});
      trivial[static_cast<std::size_t>(a)] += 0.5 * (w - proj);
      trivial[static_cast<std::size_t>(b)] += 0.5 * (w - proj);
    }
  }
  double total_trivial = 0.0;
  for (double p : trivial) total_trivial += p;
  double total = total_trivial;
  for (const auto& c : cert.projective) total += c.weight;
  for (auto& c : cert.projective) c.weight /= total;
  if (total_trivial >= internal::kDropWeight) {
    std::vector<double> probs;
    for (double p : trivial) probs.push_back(p / total_trivial);
    std::vector<HermitianOperator> effects;
    for (double p : probs) effects.push_back(p * HermitianOperator::identity(2));
    cert.trivial = WeightedPovm{total_trivial / total, Povm(std::move(effects))};
  }
  return cert;
}

AntipodalTable antipodal_joint_table(const Povm& target, const SimulationCertificate& cert) {
  if (cert.kind != CertificateKind::KOutcome || cert.k != 2) {
    throw InvalidArgument("antipodal table needs a k-outcome certificate with k = 2");
  }
  const int n = target.outcomes();
  const int d = target.dim();
  std::vector<HermitianOperator> table(static_cast<std::size_t>(n * n), HermitianOperator::zero(d));
  std::vector<HermitianOperator> partner(static_cast<std::size_t>(n), HermitianOperator::zero(d));
  for (const auto& comp : cert.components) {
    if (comp.support.size() != 2) throw InvalidArgument("component is not dichotomic");
    const int a = comp.support[0];
    const int b = comp.support[1];
    const HermitianOperator ea = comp.weight * comp.povm[a];
    const HermitianOperator eb = comp.weight * comp.povm[b];
    table[static_cast<std::size_t>(a * n + b)] += ea;
    table[static_cast<std::size_t>(b * n + a)] += eb;
    partner[static_cast<std::size_t>(b)] += ea;
    partner[static_cast<std::size_t>(a)] += eb;
  }
  return {Povm(std::move(partner)), JointMeasurement({n, n}, std::move(table))};
}

std::vector<Povm> process_set(const std::vector<Povm>& targets, const std::vector<PreProcessing>& pre,
                              const std::vector<std::vector<PostProcessingMap>>& post) {
  if (pre.size() != post.size()) throw DimensionMismatch("pre- and post-processing lists differ in length");
  std::vector<Povm> out;
  for (std::size_t k = 0; k < pre.size(); ++k) {
    if (pre[k].size() != static_cast<int>(targets.size()) || post[k].size() != targets.size()) {
      throw DimensionMismatch("processing " + std::to_string(k) + " does not match the number of targets");
    }
    std::vector<Povm> relabeled;
    for (std::size_t l = 0; l < targets.size(); ++l) relabeled.push_back(post_process(targets[l], post[k][l]));
    out.push_back(mix(relabeled, pre[k]));
  }
  return out;
}

JointMeasurement collapse_shared_preprocessing(const SimulationCertificate& cert) {
  if (cert.kind != CertificateKind::FixedAssignment) throw InvalidArgument("need a fixed-assignment certificate");
  const auto& rows = cert.assignment.weights;
  if (rows.empty()) throw InvalidArgument("assignment has no targets");
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (std::abs(row[j] - rows.front()[j]) > kValidationTolerance) {
        throw InvalidArgument("targets do not share the same pre-processing");
      }
    }
  }
  std::vector<HermitianOperator> effects;
  std::vector<int> shape;
  for (const auto& sim : cert.simulators) {
    if (sim.targets.size() != rows.size()) throw InvalidArgument("simulator does not serve every target");
    const double p = rows.front().at(static_cast<std::size_t>(sim.simulator));
    if (effects.empty()) {
      shape = sim.joint.shape();
      effects.assign(sim.joint.effects().size(), HermitianOperator::zero(sim.joint.dim()));
    }
    for (std::size_t a = 0; a < effects.size(); ++a) effects[a] += p * sim.joint.effect_at(static_cast<int>(a));
  }
  return JointMeasurement(shape, std::move(effects));
}

}  // namespace povmsim
