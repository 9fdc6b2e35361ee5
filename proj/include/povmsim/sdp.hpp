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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "povmsim/hermitian.hpp"

// Dense semidefinite programming for small problems.
//
// A problem has real symmetric PSD matrix blocks X_k, real scalars s_j with
// optional box bounds, affine equalities
//     sum_k <C_ik, X_k> + sum_j c_ij s_j = b_i,
// and an optional linear objective that is maximized. It is solved by a
// primal-dual interior-point method on the homogeneous self-dual embedding
// with Nesterov-Todd scaling and Mehrotra predictor-corrector steps.
namespace povmsim::sdp {

struct BlockId {
  int index = -1;
};

struct ScalarId {
  int index = -1;
};

/// Linear functional over block entries and scalars.
class LinearExpr {
 public:
  struct BlockTerm {
    int block;
    int row;
    int col;
    double coef;
  };
  struct ScalarTerm {
    int scalar;
    double coef;
  };

  /// Adds coef * X(row, col). Off-diagonal entries refer to the shared value
  /// X(row, col) = X(col, row), so the term contributes coef / 2 to both
  /// positions of the symmetric coefficient matrix.
  LinearExpr& add(BlockId block, int row, int col, double coef);
  LinearExpr& add(ScalarId scalar, double coef);
  /// coef * trace(X).
  LinearExpr& add_trace(BlockId block, int size, double coef);

  const std::vector<BlockTerm>& block_terms() const { return block_terms_; }
  const std::vector<ScalarTerm>& scalar_terms() const { return scalar_terms_; }
  bool empty() const { return block_terms_.empty() && scalar_terms_.empty(); }

 private:
  std::vector<BlockTerm> block_terms_;
  std::vector<ScalarTerm> scalar_terms_;
};

struct ScalarBounds {
  std::optional<double> lower;
  std::optional<double> upper;
};

class Problem {
 public:
  struct Constraint {
    LinearExpr expr;
    double rhs;
  };

  BlockId add_block(int size);
  ScalarId add_scalar(std::optional<double> lower = std::nullopt, std::optional<double> upper = std::nullopt);
  /// Adds the equality expr == rhs.
  void add_constraint(LinearExpr expr, double rhs);
  /// Objective to maximize.
  void set_objective(LinearExpr expr);

  int block_count() const { return static_cast<int>(block_sizes_.size()); }
  int block_size(int block) const { return block_sizes_.at(static_cast<std::size_t>(block)); }
  const std::vector<int>& block_sizes() const { return block_sizes_; }
  int scalar_count() const { return static_cast<int>(scalar_bounds_.size()); }
  const ScalarBounds& scalar_bounds(int scalar) const { return scalar_bounds_.at(static_cast<std::size_t>(scalar)); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::optional<LinearExpr>& objective() const { return objective_; }

  /// Throws MalformedProblem for dangling ids, out-of-range entries,
  /// non-finite data, or a problem with neither constraints nor bounds.
  void validate() const;

  /// Debug dump: blocks, scalar bounds, constraints as sparse triplets, objective.
  std::string dump_json() const;

 private:
  std::vector<int> block_sizes_;
  std::vector<ScalarBounds> scalar_bounds_;
  std::vector<Constraint> constraints_;
  std::optional<LinearExpr> objective_;
};

enum class Status { Optimal, Infeasible, Unbounded, NumericalLimit };

const char* to_string(Status s);

struct Settings {
  double feasibility_tol = 1e-8;
  double gap_tol = 1e-7;
  int max_iterations = 200;
  /// Upper bound on the number of scalar unknowns after vectorizing every block.
  std::size_t max_dimension = 65536;
};

struct Solution {
  Status status = Status::NumericalLimit;
  /// Primal objective (maximized). For `feasibility` this is the PSD margin.
  double objective = 0.0;
  double dual_objective = 0.0;
  std::vector<RealMatrix> blocks;
  std::vector<double> scalars;
  /// Optimal multipliers of the equalities, or, when Infeasible, a Farkas ray y:
  /// sum_i y_i C_ik is negative semidefinite for every block while b.y exceeds
  /// the largest value sum_ij y_i c_ij s_j can take over the scalar box.
  std::vector<double> duals;
  /// Largest absolute violation of the equalities at the returned point.
  double primal_residual = 0.0;
  /// Duality gap of the final iterate (absolute).
  double dual_gap = 0.0;
  int iterations = 0;
  std::string message;

  const RealMatrix& block(BlockId id) const { return blocks.at(static_cast<std::size_t>(id.index)); }
  double value(ScalarId id) const { return scalars.at(static_cast<std::size_t>(id.index)); }
};

/// Maximizes the objective. Throws MalformedProblem or SizeGuardExceeded.
Solution solve(const Problem& problem, const Settings& settings = {});

/// Decides feasibility of a problem without objective by maximizing a uniform
/// margin lambda in [-1, 1] with X_k - lambda I PSD for every block. Returns
/// Optimal (objective = lambda >= -feasibility_tol) when feasible and
/// Infeasible with a Farkas ray otherwise.
Solution feasibility(const Problem& problem, const Settings& settings = {});

/// Evidence carried by a Farkas ray: the largest eigenvalue of sum_i y_i C_ik
/// over all blocks (should be <= 0) and b.y minus the supremum of the scalar
/// terms over their box (should be > 0; -inf if unbounded).
struct FarkasCheck {
  double max_block_eigenvalue = 0.0;
  /// Largest ray coefficient pointing along an unbounded scalar direction.
  double max_scalar_violation = 0.0;
  double margin = 0.0;
};
FarkasCheck check_farkas(const Problem& problem, const std::vector<double>& ray);

/// Largest violation of the equalities by (blocks, scalars).
double constraint_residual(const Problem& problem, const std::vector<RealMatrix>& blocks,
                           const std::vector<double>& scalars);

/// A complex Hermitian d x d variable H stored as a real 2d x 2d PSD block X
/// with H = (X11 + X22) / 2 + i (X21 - X12) / 2, which is PSD whenever X is.
class HermitianBlock {
 public:
  HermitianBlock(Problem& problem, int dim);

  BlockId block() const { return block_; }
  int dim() const { return dim_; }

  /// coef * Re H(j, k)
  void add_real(LinearExpr& expr, int j, int k, double coef) const;
  /// coef * Im H(j, k)
  void add_imag(LinearExpr& expr, int j, int k, double coef) const;
  /// coef * Tr(H)
  void add_trace(LinearExpr& expr, double coef) const;

  HermitianOperator value(const Solution& solution) const;

 private:
  BlockId block_;
  int dim_;
};

/// Collects sum_v a_v H_v + sum_s s * B_s == R as d^2 real equalities
/// (real parts of the upper triangle and imaginary parts above the diagonal).
class HermitianEquality {
 public:
  explicit HermitianEquality(int dim);

  HermitianEquality& add(const HermitianBlock& var, double coef);
  HermitianEquality& add(ScalarId scalar, const HermitianOperator& coef);

  void emit(Problem& problem, const HermitianOperator& rhs) const;

 private:
  int dim_;
  std::vector<std::pair<HermitianBlock, double>> vars_;
  std::vector<std::pair<ScalarId, HermitianOperator>> scalars_;
};

}  // namespace povmsim::sdp
