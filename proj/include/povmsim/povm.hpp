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

#pragma once

#include <random>
#include <span>
#include <vector>

#include "povmsim/hermitian.hpp"

namespace povmsim {

/// Tolerance used when validating measurement objects (PSD and normalization).
inline constexpr double kValidationTolerance = 1e-9;

/// Ordered tuple of PSD effects summing to the identity. Null effects are allowed.
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> effects);

  int dim() const { return effects_.front().dim(); }
  int outcomes() const { return static_cast<int>(effects_.size()); }
  const HermitianOperator& operator[](int i) const { return effects_.at(static_cast<std::size_t>(i)); }
  const std::vector<HermitianOperator>& effects() const { return effects_; }

  /// Largest entrywise deviation between corresponding effects.
  double max_abs_diff(const Povm& other) const;
  Povm conjugated(const ComplexMatrix& unitary) const;

 private:
  std::vector<HermitianOperator> effects_;
};

/// Column-stochastic matrix q(i | i'), n_out rows by n_in columns.
class PostProcessingMap {
 public:
  explicit PostProcessingMap(RealMatrix q);

  static PostProcessingMap identity(int n);
  /// Outcome i' is relabelled to relabel[i'] (an index below n_out).
  static PostProcessingMap deterministic(const std::vector<int>& relabel, int n_out);
  /// Ignores the input outcome and samples from `distribution`.
  static PostProcessingMap constant(const std::vector<double>& distribution, int n_in);

  int outputs() const { return static_cast<int>(q_.rows()); }
  int inputs() const { return static_cast<int>(q_.cols()); }
  double operator()(int out, int in) const { return q_(out, in); }
  const RealMatrix& matrix() const { return q_; }

 private:
  RealMatrix q_;
};

/// Probability distribution over simulator indices.
class PreProcessing {
 public:
  explicit PreProcessing(std::vector<double> weights);

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int j) const { return weights_.at(static_cast<std::size_t>(j)); }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

/// Effects M_{a_1...a_m} indexed by outcome tuples, stored row-major (last index fastest).
class JointMeasurement {
 public:
  JointMeasurement(std::vector<int> shape, std::vector<HermitianOperator> effects);

  int dim() const { return effects_.front().dim(); }
  int arity() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int size() const { return static_cast<int>(effects_.size()); }
  const std::vector<HermitianOperator>& effects() const { return effects_; }
  const HermitianOperator& effect(std::span<const int> tuple) const;
  const HermitianOperator& effect_at(int flat) const { return effects_.at(static_cast<std::size_t>(flat)); }

  int flat_index(std::span<const int> tuple) const;
  std::vector<int> tuple(int flat) const;

 private:
  std::vector<int> shape_;
  std::vector<HermitianOperator> effects_;
};

/// A POVM together with a visibility t, materialized on demand.
struct DepolarisedPovm {
  Povm base;
  double visibility;

  Povm materialize() const;
};

/// Phi_t(A) = t A + (1 - t) Tr(A) I / d.
HermitianOperator depolarize(const HermitianOperator& effect, double t);
Povm depolarize(const Povm& p, double t);

/// Effects sum_{i'} q(i | i') P_{i'}.
Povm post_process(const Povm& p, const PostProcessingMap& q);

/// Effects sum_j p_j B^(j)_i. All POVMs must share dimension and outcome count.
Povm mix(std::span<const Povm> povms, const PreProcessing& p);

/// Coarse-graining of `m` onto its `target`-th index (0-based).
Povm marginal(const JointMeasurement& m, int target);

/// M_{a_1...a_m} = sum_i prod_l q_l(a_l | i) B_i.
JointMeasurement joint_from_single(const Povm& b, std::span<const PostProcessingMap> qs);

/// Born-rule probabilities Tr(A_i rho).
std::vector<double> born(const Povm& p, const DensityMatrix& rho);

/// Effectwise antipodal operators. Throws NotPositive when one of them is not PSD,
/// which cannot happen for qubits.
Povm antipodal_povm(const Povm& p);

/// Two effects, both with identity coefficient 1/2.
bool is_unbiased_dichotomic(const Povm& p);

/// Random POVM: Wishart effects W_i whitened by the Cholesky factor of sum_i W_i.
Povm random_povm(int dim, int outcomes, std::mt19937_64& rng);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(int dim, std::mt19937_64& rng);

}  // namespace povmsim
