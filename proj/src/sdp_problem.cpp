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

#include <cmath>
#include <limits>

#include <json.hpp>

#include "povmsim/errors.hpp"
#include "povmsim/sdp.hpp"

namespace povmsim::sdp {

LinearExpr& LinearExpr::add(BlockId block, int row, int col, double coef) {
  block_terms_.push_back({block.index, row, col, coef});
  return *this;
}

LinearExpr& LinearExpr::add(ScalarId scalar, double coef) {
  scalar_terms_.push_back({scalar.index, coef});
  return *this;
}

LinearExpr& LinearExpr::add_trace(BlockId block, int size, double coef) {
  for (int i = 0; i < size; ++i) add(block, i, i, coef);
  return *this;
}

BlockId Problem::add_block(int size) {
  if (size < 1) throw MalformedProblem("block size must be positive");
  block_sizes_.push_back(size);
  return BlockId{block_count() - 1};
}

ScalarId Problem::add_scalar(std::optional<double> lower, std::optional<double> upper) {
  if (lower && upper && *lower > *upper) throw MalformedProblem("scalar lower bound exceeds upper bound");
  scalar_bounds_.push_back({lower, upper});
  return ScalarId{scalar_count() - 1};
}

void Problem::add_constraint(LinearExpr expr, double rhs) { constraints_.push_back({std::move(expr), rhs}); }

void Problem::set_objective(LinearExpr expr) { objective_ = std::move(expr); }

void Problem::validate() const {
  auto check_expr = [&](const LinearExpr& e) {
    for (const auto& t : e.block_terms()) {
      if (t.block < 0 || t.block >= block_count()) throw MalformedProblem("reference to an unknown block");
      const int n = block_size(t.block);
      if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) throw MalformedProblem("block entry out of range");
      if (!std::isfinite(t.coef)) throw MalformedProblem("non-finite coefficient");
    }
    for (const auto& t : e.scalar_terms()) {
      if (t.scalar < 0 || t.scalar >= scalar_count()) throw MalformedProblem("reference to an unknown scalar");
      if (!std::isfinite(t.coef)) throw MalformedProblem("non-finite coefficient");
    }
  };
  bool has_bound = false;
  for (const auto& b : scalar_bounds_) has_bound = has_bound || b.lower || b.upper;
  if (constraints_.empty() && !has_bound) throw MalformedProblem("problem has neither constraints nor bounds");
  if (block_count() == 0 && scalar_count() == 0) throw MalformedProblem("problem has no variables");
  for (const auto& c : constraints_) {
    check_expr(c.expr);
    if (!std::isfinite(c.rhs)) throw MalformedProblem("non-finite right-hand side");
  }
  if (objective_) check_expr(*objective_);
}

namespace {

nlohmann::json expr_json(const LinearExpr& e) {
  nlohmann::json out;
  out["blocks"] = nlohmann::json::array();
  for (const auto& t : e.block_terms()) out["blocks"].push_back({t.block, t.row, t.col, t.coef});
  out["scalars"] = nlohmann::json::array();
  for (const auto& t : e.scalar_terms()) out["scalars"].push_back({t.scalar, t.coef});
  return out;
}

}  // namespace

std::string Problem::dump_json() const {
  nlohmann::json out;
  out["blocks"] = block_sizes_;
  out["scalars"] = nlohmann::json::array();
  for (const auto& b : scalar_bounds_) {
    out["scalars"].push_back({{"lower", b.lower ? nlohmann::json(*b.lower) : nlohmann::json()},
                              {"upper", b.upper ? nlohmann::json(*b.upper) : nlohmann::json()}});
  }
  out["constraints"] = nlohmann::json::array();
  for (const auto& c : constraints_) {
    auto j = expr_json(c.expr);
    j["rhs"] = c.rhs;
    out["constraints"].push_back(std::move(j));
  }
  out["objective"] = objective_ ? expr_json(*objective_) : nlohmann::json();
  return out.dump(1);
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
    case Status::NumericalLimit:
      return "numerical-limit";
  }
  return "unknown";
}

double constraint_residual(const Problem& problem, const std::vector<RealMatrix>& blocks,
                           const std::vector<double>& scalars) {
  double worst = 0.0;
  for (const auto& c : problem.constraints()) {
    double lhs = 0.0;
    for (const auto& t : c.expr.block_terms()) lhs += t.coef * blocks[static_cast<std::size_t>(t.block)](t.row, t.col);
    for (const auto& t : c.expr.scalar_terms()) lhs += t.coef * scalars[static_cast<std::size_t>(t.scalar)];
    worst = std::max(worst, std::abs(lhs - c.rhs));
  }
  return worst;
}

FarkasCheck check_farkas(const Problem& problem, const std::vector<double>& ray) {
  if (ray.size() != problem.constraints().size()) throw DimensionMismatch("Farkas ray has the wrong length");
  std::vector<RealMatrix> sums;
  for (int n : problem.block_sizes()) sums.push_back(RealMatrix::Zero(n, n));
  std::vector<double> scalar_coef(static_cast<std::size_t>(problem.scalar_count()), 0.0);
  double by = 0.0;
  for (std::size_t i = 0; i < ray.size(); ++i) {
    const auto& c = problem.constraints()[i];
    by += ray[i] * c.rhs;
    for (const auto& t : c.expr.block_terms()) {
      auto& m = sums[static_cast<std::size_t>(t.block)];
      if (t.row == t.col) {
        m(t.row, t.col) += ray[i] * t.coef;
      } else {
        m(t.row, t.col) += 0.5 * ray[i] * t.coef;
        m(t.col, t.row) += 0.5 * ray[i] * t.coef;
      }
    }
    for (const auto& t : c.expr.scalar_terms()) scalar_coef[static_cast<std::size_t>(t.scalar)] += ray[i] * t.coef;
  }
  FarkasCheck out;
  out.max_block_eigenvalue = -std::numeric_limits<double>::infinity();
  for (const auto& m : sums) {
    out.max_block_eigenvalue = std::max(out.max_block_eigenvalue, jacobi_eigenvalues(m).maxCoeff());
  }
  double sup = 0.0;
  for (int j = 0; j < problem.scalar_count(); ++j) {
    const double g = scalar_coef[static_cast<std::size_t>(j)];
    const auto& b = problem.scalar_bounds(j);
    if (g > 0) {
      if (b.upper) {
        sup += g * *b.upper;
      } else {
        out.max_scalar_violation = std::max(out.max_scalar_violation, g);
      }
    } else if (g < 0) {
      if (b.lower) {
        sup += g * *b.lower;
      } else {
        out.max_scalar_violation = std::max(out.max_scalar_violation, -g);
      }
    }
  }
  out.margin = by - sup;
  return out;
}

HermitianBlock::HermitianBlock(Problem& problem, int dim) : block_(problem.add_block(2 * dim)), dim_(dim) {}

void HermitianBlock::add_real(LinearExpr& expr, int j, int k, double coef) const {
  expr.add(block_, j, k, 0.5 * coef);
  expr.add(block_, dim_ + j, dim_ + k, 0.5 * coef);
}

void HermitianBlock::add_imag(LinearExpr& expr, int j, int k, double coef) const {
  if (j == k) return;
  expr.add(block_, dim_ + j, k, 0.5 * coef);
  expr.add(block_, j, dim_ + k, -0.5 * coef);
}

void HermitianBlock::add_trace(LinearExpr& expr, double coef) const {
  for (int j = 0; j < dim_; ++j) add_real(expr, j, j, coef);
}

HermitianOperator HermitianBlock::value(const Solution& solution) const {
  const RealMatrix& x = solution.block(block_);
  const int d = dim_;
  const RealMatrix re = 0.5 * (x.topLeftCorner(d, d) + x.bottomRightCorner(d, d));
  const RealMatrix im = 0.5 * (x.bottomLeftCorner(d, d) - x.topRightCorner(d, d));
  ComplexMatrix h(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) h(j, k) = Complex(re(j, k), im(j, k));
  return HermitianOperator::hermitian_part(h);
}

HermitianEquality::HermitianEquality(int dim) : dim_(dim) {}

HermitianEquality& HermitianEquality::add(const HermitianBlock& var, double coef) {
  if (var.dim() != dim_) throw DimensionMismatch("Hermitian variable dimension mismatch");
  vars_.emplace_back(var, coef);
  return *this;
}

HermitianEquality& HermitianEquality::add(ScalarId scalar, const HermitianOperator& coef) {
  if (coef.dim() != dim_) throw DimensionMismatch("Hermitian coefficient dimension mismatch");
  scalars_.emplace_back(scalar, coef);
  return *this;
}

void HermitianEquality::emit(Problem& problem, const HermitianOperator& rhs) const {
  if (rhs.dim() != dim_) throw DimensionMismatch("Hermitian right-hand side dimension mismatch");
  for (int j = 0; j < dim_; ++j) {
    for (int k = j; k < dim_; ++k) {
      for (int part = 0; part < (j == k ? 1 : 2); ++part) {
        const bool real = part == 0;
        LinearExpr e;
        for (const auto& [var, coef] : vars_) {
          if (real) {
            var.add_real(e, j, k, coef);
          } else {
            var.add_imag(e, j, k, coef);
          }
        }
        for (const auto& [s, coef] : scalars_) {
          const double c = real ? coef(j, k).real() : coef(j, k).imag();
          if (c != 0.0) e.add(s, c);
        }
        problem.add_constraint(std::move(e), real ? rhs(j, k).real() : rhs(j, k).imag());
      }
    }
  }
}

}  // namespace povmsim::sdp
