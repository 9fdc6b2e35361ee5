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

#include "povmsim/povm.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "povmsim/errors.hpp"

namespace povmsim {

namespace {

void check_probability_vector(std::span<const double> w, const char* what) {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= -kValidationTolerance)) throw InvalidArgument(std::string(what) + " has a negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kValidationTolerance) {
    throw InvalidArgument(std::string(what) + " does not sum to one (sum = " + std::to_string(sum) + ")");
  }
}

void validate_effects(const std::vector<HermitianOperator>& effects, const char* what) {
  if (effects.empty()) throw InvalidArgument(std::string(what) + " needs at least one effect");
  const int d = effects.front().dim();
  HermitianOperator total = HermitianOperator::zero(d);
  for (std::size_t i = 0; i < effects.size(); ++i) {
    if (effects[i].dim() != d) throw DimensionMismatch(std::string(what) + " effects have different dimensions");
    const double lo = min_eigenvalue(effects[i]);
    if (lo < -kValidationTolerance) throw NotPositive(static_cast<int>(i), lo);
    total += effects[i];
  }
  const double dev = total.max_abs_diff(HermitianOperator::identity(d));
  if (dev > kValidationTolerance) {
    throw InvalidArgument(std::string(what) + " effects do not sum to the identity (deviation " +
                          std::to_string(dev) + ")");
  }
}

}  // namespace

Povm::Povm(std::vector<HermitianOperator> effects) : effects_(std::move(effects)) {
  validate_effects(effects_, "POVM");
}

double Povm::max_abs_diff(const Povm& other) const {
  if (other.outcomes() != outcomes()) throw DimensionMismatch("comparing POVMs with different outcome counts");
  double worst = 0.0;
  for (int i = 0; i < outcomes(); ++i) worst = std::max(worst, (*this)[i].max_abs_diff(other[i]));
  return worst;
}

Povm Povm::conjugated(const ComplexMatrix& unitary) const {
  std::vector<HermitianOperator> out;
  out.reserve(effects_.size());
  for (const auto& e : effects_) out.push_back(e.conjugated(unitary));
  return Povm(std::move(out));
}

PostProcessingMap::PostProcessingMap(RealMatrix q) : q_(std::move(q)) {
  if (q_.rows() < 1 || q_.cols() < 1) throw InvalidArgument("post-processing map must be non-empty");
  for (Eigen::Index c = 0; c < q_.cols(); ++c) {
    std::vector<double> column(q_.col(c).data(), q_.col(c).data() + q_.rows());
    check_probability_vector(column, "post-processing column");
  }
}

PostProcessingMap PostProcessingMap::identity(int n) { return PostProcessingMap(RealMatrix::Identity(n, n)); }

PostProcessingMap PostProcessingMap::deterministic(const std::vector<int>& relabel, int n_out) {
  RealMatrix q = RealMatrix::Zero(n_out, static_cast<Eigen::Index>(relabel.size()));
  for (std::size_t i = 0; i < relabel.size(); ++i) {
    if (relabel[i] < 0 || relabel[i] >= n_out) throw InvalidArgument("relabelling target out of range");
    q(relabel[i], static_cast<Eigen::Index>(i)) = 1.0;
  }
  return PostProcessingMap(std::move(q));
}

PostProcessingMap PostProcessingMap::constant(const std::vector<double>& distribution, int n_in) {
  RealMatrix q(static_cast<Eigen::Index>(distribution.size()), n_in);
  for (int c = 0; c < n_in; ++c)
    for (std::size_t r = 0; r < distribution.size(); ++r) q(static_cast<Eigen::Index>(r), c) = distribution[r];
  return PostProcessingMap(std::move(q));
}

PreProcessing::PreProcessing(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("pre-processing needs at least one weight");
  check_probability_vector(weights_, "pre-processing");
}

JointMeasurement::JointMeasurement(std::vector<int> shape, std::vector<HermitianOperator> effects)
    : shape_(std::move(shape)), effects_(std::move(effects)) {
  if (shape_.empty()) throw InvalidArgument("joint measurement needs at least one index");
  long long count = 1;
  for (int n : shape_) {
    if (n < 1) throw InvalidArgument("joint measurement outcome counts must be positive");
    count *= n;
  }
  if (count != static_cast<long long>(effects_.size())) {
    throw DimensionMismatch("joint measurement has " + std::to_string(effects_.size()) + " effects, shape needs " +
                            std::to_string(count));
  }
  validate_effects(effects_, "joint measurement");
}

int JointMeasurement::flat_index(std::span<const int> tuple) const {
  if (static_cast<int>(tuple.size()) != arity()) throw DimensionMismatch("outcome tuple has the wrong length");
  int flat = 0;
  for (std::size_t l = 0; l < tuple.size(); ++l) {
    if (tuple[l] < 0 || tuple[l] >= shape_[l]) throw InvalidArgument("outcome index out of range");
    flat = flat * shape_[l] + tuple[l];
  }
  return flat;
}

std::vector<int> JointMeasurement::tuple(int flat) const {
  std::vector<int> out(shape_.size());
  for (int l = arity() - 1; l >= 0; --l) {
    out[static_cast<std::size_t>(l)] = flat % shape_[static_cast<std::size_t>(l)];
    flat /= shape_[static_cast<std::size_t>(l)];
  }
  return out;
}

const HermitianOperator& JointMeasurement::effect(std::span<const int> tuple) const {
  return effects_[static_cast<std::size_t>(flat_index(tuple))];
}

Povm DepolarisedPovm::materialize() const { return depolarize(base, visibility); }

HermitianOperator depolarize(const HermitianOperator& effect, double t) {
  const int d = effect.dim();
  return t * effect + ((1.0 - t) * effect.trace() / d) * HermitianOperator::identity(d);
}

Povm depolarize(const Povm& p, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("visibility must lie in [0, 1], got " + std::to_string(t));
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>(p.outcomes()));
  for (const auto& e : p.effects()) out.push_back(depolarize(e, t));
  return Povm(std::move(out));
}

Povm post_process(const Povm& p, const PostProcessingMap& q) {
  if (q.inputs() != p.outcomes()) {
    throw DimensionMismatch("post-processing expects " + std::to_string(q.inputs()) + " outcomes, POVM has " +
                            std::to_string(p.outcomes()));
  }
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>(q.outputs()));
  for (int i = 0; i < q.outputs(); ++i) {
    HermitianOperator e = HermitianOperator::zero(p.dim());
    for (int j = 0; j < q.inputs(); ++j) {
      if (q(i, j) != 0.0) e += q(i, j) * p[j];
    }
    out.push_back(std::move(e));
  }
  return Povm(std::move(out));
}

Povm mix(std::span<const Povm> povms, const PreProcessing& p) {
  if (povms.empty()) throw InvalidArgument("mix needs at least one POVM");
  if (static_cast<int>(povms.size()) != p.size()) throw DimensionMismatch("mixing weights do not match POVM count");
  const int d = povms.front().dim();
  const int n = povms.front().outcomes();
  for (const auto& b : povms) {
    if (b.dim() != d || b.outcomes() != n) throw DimensionMismatch("mixed POVMs must share dimension and outcomes");
  }
  std::vector<HermitianOperator> out(static_cast<std::size_t>(n), HermitianOperator::zero(d));
  for (std::size_t j = 0; j < povms.size(); ++j) {
    const double w = p[static_cast<int>(j)];
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] += w * povms[j][i];
  }
  return Povm(std::move(out));
}

Povm marginal(const JointMeasurement& m, int target) {
  if (target < 0 || target >= m.arity()) {
    throw InvalidArgument("marginal index " + std::to_string(target) + " out of range for arity " +
                          std::to_string(m.arity()));
  }
  const int n = m.shape()[static_cast<std::size_t>(target)];
  std::vector<HermitianOperator> out(static_cast<std::size_t>(n), HermitianOperator::zero(m.dim()));
  for (int f = 0; f < m.size(); ++f) {
    const auto t = m.tuple(f);
    out[static_cast<std::size_t>(t[static_cast<std::size_t>(target)])] += m.effect_at(f);
  }
  return Povm(std::move(out));
}

JointMeasurement joint_from_single(const Povm& b, std::span<const PostProcessingMap> qs) {
  if (qs.empty()) throw InvalidArgument("joint_from_single needs at least one post-processing");
  std::vector<int> shape;
  for (const auto& q : qs) {
    if (q.inputs() != b.outcomes()) throw DimensionMismatch("post-processing input count does not match POVM");
    shape.push_back(q.outputs());
  }
  int total = 1;
  for (int n : shape) total *= n;
  std::vector<HermitianOperator> effects;
  effects.reserve(static_cast<std::size_t>(total));
  std::vector<int> tuple(shape.size(), 0);
  for (int f = 0; f < total; ++f) {
    HermitianOperator e = HermitianOperator::zero(b.dim());
    for (int i = 0; i < b.outcomes(); ++i) {
      double w = 1.0;
      for (std::size_t l = 0; l < qs.size(); ++l) w *= qs[l](tuple[l], i);
      if (w != 0.0) e += w * b[i];
    }
    effects.push_back(std::move(e));
    for (int l = static_cast<int>(shape.size()) - 1; l >= 0; --l) {
      if (++tuple[static_cast<std::size_t>(l)] < shape[static_cast<std::size_t>(l)]) break;
      tuple[static_cast<std::size_t>(l)] = 0;
    }
  }
  return JointMeasurement(std::move(shape), std::move(effects));
}

std::vector<double> born(const Povm& p, const DensityMatrix& rho) {
  if (rho.dim() != p.dim()) throw DimensionMismatch("state and POVM dimensions differ");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(p.outcomes()));
  for (const auto& e : p.effects()) out.push_back(e.inner(rho.op()));
  return out;
}

Povm antipodal_povm(const Povm& p) {
  std::vector<HermitianOperator> out;
  out.reserve(static_cast<std::size_t>(p.outcomes()));
  for (int i = 0; i < p.outcomes(); ++i) {
    HermitianOperator a = antipodal(p[i]);
    const double lo = min_eigenvalue(a);
    if (lo < -kValidationTolerance) throw NotPositive(i, lo);
    out.push_back(std::move(a));
  }
  return Povm(std::move(out));
}

bool is_unbiased_dichotomic(const Povm& p) {
  if (p.outcomes() != 2) return false;
  for (const auto& e : p.effects()) {
    if (std::abs(e.trace() / e.dim() - 0.5) > kValidationTolerance) return false;
  }
  return true;
}

namespace {

ComplexMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

}  // namespace

Povm random_povm(int dim, int outcomes, std::mt19937_64& rng) {
  if (outcomes < 1) throw InvalidArgument("random POVM needs at least one outcome");
  std::vector<ComplexMatrix> w;
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < outcomes; ++i) {
    const ComplexMatrix g = ginibre(dim, dim, rng);
    w.push_back(g * g.adjoint());
    total += w.back();
  }
  const Eigen::LLT<ComplexMatrix> llt(total);
  const ComplexMatrix l_inv = llt.matrixL().solve(ComplexMatrix::Identity(dim, dim));
  std::vector<HermitianOperator> effects;
  for (const auto& wi : w) effects.push_back(HermitianOperator::hermitian_part(l_inv * wi * l_inv.adjoint()));
  return Povm(std::move(effects));
}

ComplexMatrix random_unitary(int dim, std::mt19937_64& rng) {
  const ComplexMatrix g = ginibre(dim, dim, rng);
  const Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
  }
  return q;
}

}  // namespace povmsim
