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

// Interior-point core. Every PSD block and every bounded or split scalar
// becomes one cone block of the standard form
//     minimize c.x  subject to  A x = b,  x in K,
// where x stacks the symmetric vectorizations (off-diagonals scaled by sqrt 2)
// of all blocks. The homogeneous self-dual embedding
//     A x - b tau = 0,  A^T y + s - c tau = 0,  b.y - c.x - kappa = 0
// is followed along its central path with Nesterov-Todd scaling, so every
// run ends with either an optimal pair or an infeasibility ray.

#include <algorithm>
#include <cmath>
#include <limits>

#include "povmsim/errors.hpp"
#include "povmsim/sdp.hpp"

namespace povmsim::sdp {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

class Cone {
 public:
  explicit Cone(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    int off = 0;
    for (int n : sizes_) {
      offsets_.push_back(off);
      off += n * (n + 1) / 2;
      degree_ += n;
    }
    dim_ = off;
  }

  int blocks() const { return static_cast<int>(sizes_.size()); }
  int size(int k) const { return sizes_[static_cast<std::size_t>(k)]; }
  int offset(int k) const { return offsets_[static_cast<std::size_t>(k)]; }
  int dim() const { return dim_; }
  int degree() const { return degree_; }

  static int index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  }

  RealMatrix mat(const RealVector& v, int k) const {
    const int n = size(k);
    RealMatrix m(n, n);
    int p = offset(k);
    for (int i = 0; i < n; ++i) {
      m(i, i) = v[p++];
      for (int j = i + 1; j < n; ++j) {
        m(i, j) = m(j, i) = v[p++] / kSqrt2;
      }
    }
    return m;
  }

  void put(RealVector& v, int k, const RealMatrix& m) const {
    const int n = size(k);
    int p = offset(k);
    for (int i = 0; i < n; ++i) {
      v[p++] = m(i, i);
      for (int j = i + 1; j < n; ++j) v[p++] = kSqrt2 * 0.5 * (m(i, j) + m(j, i));
    }
  }

  RealVector identity() const {
    RealVector v = RealVector::Zero(dim_);
    for (int k = 0; k < blocks(); ++k) put(v, k, RealMatrix::Identity(size(k), size(k)));
    return v;
  }

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int dim_ = 0;
  int degree_ = 0;
};

// How a user scalar is expressed through nonnegative cone coordinates:
// s = offset + sign * x[pos] - x[neg].
struct ScalarMap {
  double offset = 0.0;
  double sign = 1.0;
  int pos = -1;
  int neg = -1;
};

struct StandardForm {
  Cone cone{{}};
  RealMatrix a;  // rows = internal constraints
  RealVector b;
  RealVector c;
  double objective_offset = 0.0;
  std::vector<int> user_block_cone;
  std::vector<ScalarMap> scalars;
  int margin_coord = -1;  // lambda = -1 + x[margin_coord]
  int user_rows = 0;
};

int first_coord(const Cone& cone, int k) { return cone.offset(k); }

StandardForm build_standard_form(const Problem& p, bool margin) {
  StandardForm f;
  std::vector<int> sizes;
  for (int n : p.block_sizes()) {
    f.user_block_cone.push_back(static_cast<int>(sizes.size()));
    sizes.push_back(n);
  }
  struct PendingBound {
    int scalar;
    int pos_block;
    int neg_block;
    double width;
  };
  std::vector<PendingBound> bound_rows;
  std::vector<std::pair<int, int>> scalar_blocks;  // (pos block, neg block)
  for (int j = 0; j < p.scalar_count(); ++j) {
    const auto& bd = p.scalar_bounds(j);
    const int pos = static_cast<int>(sizes.size());
    sizes.push_back(1);
    int neg = -1;
    if ((bd.lower && bd.upper) || (!bd.lower && !bd.upper)) {
      neg = static_cast<int>(sizes.size());
      sizes.push_back(1);
    }
    if (bd.lower && bd.upper) bound_rows.push_back({j, pos, neg, *bd.upper - *bd.lower});
    scalar_blocks.emplace_back(pos, neg);
  }
  int margin_pos = -1;
  int margin_neg = -1;
  if (margin) {
    margin_pos = static_cast<int>(sizes.size());
    sizes.push_back(1);
    margin_neg = static_cast<int>(sizes.size());
    sizes.push_back(1);
  }
  f.cone = Cone(sizes);

  for (int j = 0; j < p.scalar_count(); ++j) {
    const auto& bd = p.scalar_bounds(j);
    ScalarMap m;
    const auto [pos, neg] = scalar_blocks[static_cast<std::size_t>(j)];
    m.pos = first_coord(f.cone, pos);
    if (bd.lower) {
      m.offset = *bd.lower;
    } else if (bd.upper) {
      m.offset = *bd.upper;
      m.sign = -1.0;
    } else {
      m.neg = first_coord(f.cone, neg);
    }
    f.scalars.push_back(m);
  }
  if (margin) f.margin_coord = first_coord(f.cone, margin_pos);

  const int user_rows = static_cast<int>(p.constraints().size());
  const int rows = user_rows + static_cast<int>(bound_rows.size()) + (margin ? 1 : 0);
  f.user_rows = user_rows;
  f.a = RealMatrix::Zero(rows, f.cone.dim());
  f.b = RealVector::Zero(rows);
  f.c = RealVector::Zero(f.cone.dim());

  auto add_block_term = [&](RealVector& row, const LinearExpr::BlockTerm& t, double scale, double* lambda_coef) {
    const int k = f.user_block_cone[static_cast<std::size_t>(t.block)];
    const int n = f.cone.size(k);
    const int idx = f.cone.offset(k) + Cone::index(n, t.row, t.col);
    row[idx] += scale * (t.row == t.col ? t.coef : t.coef / kSqrt2);
    if (lambda_coef && t.row == t.col) *lambda_coef += scale * t.coef;
  };

  for (int i = 0; i < user_rows; ++i) {
    const auto& con = p.constraints()[static_cast<std::size_t>(i)];
    RealVector row = RealVector::Zero(f.cone.dim());
    double rhs = con.rhs;
    double lambda_coef = 0.0;
    for (const auto& t : con.expr.block_terms()) add_block_term(row, t, 1.0, margin ? &lambda_coef : nullptr);
    for (const auto& t : con.expr.scalar_terms()) {
      const auto& m = f.scalars[static_cast<std::size_t>(t.scalar)];
      rhs -= t.coef * m.offset;
      row[m.pos] += t.coef * m.sign;
      if (m.neg >= 0) row[m.neg] -= t.coef;
    }
    if (margin) {
      rhs += lambda_coef;
      row[f.margin_coord] += lambda_coef;
    }
    f.a.row(i) = row.transpose();
    f.b[i] = rhs;
  }
  int r = user_rows;
  for (const auto& br : bound_rows) {
    f.a(r, first_coord(f.cone, br.pos_block)) = 1.0;
    f.a(r, first_coord(f.cone, br.neg_block)) = 1.0;
    f.b[r] = br.width;
    ++r;
  }
  if (margin) {
    f.a(r, first_coord(f.cone, margin_pos)) = 1.0;
    f.a(r, first_coord(f.cone, margin_neg)) = 1.0;
    f.b[r] = 2.0;
    f.c[f.margin_coord] = -1.0;
    f.objective_offset = -1.0;
  } else if (p.objective()) {
    RealVector obj = RealVector::Zero(f.cone.dim());
    for (const auto& t : p.objective()->block_terms()) add_block_term(obj, t, 1.0, nullptr);
    for (const auto& t : p.objective()->scalar_terms()) {
      const auto& m = f.scalars[static_cast<std::size_t>(t.scalar)];
      f.objective_offset += t.coef * m.offset;
      obj[m.pos] += t.coef * m.sign;
      if (m.neg >= 0) obj[m.neg] -= t.coef;
    }
    f.c = -obj;
  }
  return f;
}

struct BlockScaling {
  RealMatrix r;    // W^T(v) = r v r^T, W(s) = r^T s r
  RealMatrix rti;  // r^{-T}; W^{-T}(x) = rti^T x rti
  RealMatrix g;    // r r^T, so that g s g = x
  RealVector lambda;
};

struct Direction {
  RealVector dx, dy, ds;
  double dtau = 0.0;
  double dkappa = 0.0;
};

class InteriorPoint {
 public:
  InteriorPoint(const RealMatrix& a, const RealVector& b, const RealVector& c, const Cone& cone,
                const Settings& settings)
      : a_(a), b_(b), c_(c), cone_(cone), settings_(settings) {}

  struct Result {
    Status status = Status::NumericalLimit;
    RealVector x, y, s;  // already divided by tau when Optimal
    double gap = 0.0;
    int iterations = 0;
    std::string message;
  };

  Result run() {
    const int m = static_cast<int>(a_.rows());
    RealVector x = cone_.identity();
    RealVector s = cone_.identity();
    RealVector y = RealVector::Zero(m);
    double tau = 1.0;
    double kappa = 1.0;
    const double nu = cone_.degree() + 1.0;
    const double bnorm = 1.0 + b_.norm();
    const double cnorm = 1.0 + c_.norm();
    Result res;
    int stalls = 0;

    for (int iter = 0; iter <= settings_.max_iterations; ++iter) {
      res.iterations = iter;
      const RealVector rp = a_ * x - tau * b_;
      const RealVector rd = a_.transpose() * y + s - tau * c_;
      const double cx = c_.dot(x);
      const double by = b_.dot(y);
      const double rg = by - cx - kappa;
      const double xs = x.dot(s);
      const double mu = (xs + tau * kappa) / nu;

      const double pres = rp.norm() / tau / bnorm;
      const double dres = rd.norm() / tau / cnorm;
      const double pobj = cx / tau;
      const double dobj = by / tau;
      const double gap = xs / (tau * tau);
      const double scale = std::max(1.0, std::min(std::abs(pobj), std::abs(dobj)));
      if (pres <= settings_.feasibility_tol && dres <= settings_.feasibility_tol &&
          gap <= settings_.gap_tol * scale && std::abs(pobj - dobj) <= settings_.gap_tol * scale) {
        res.status = Status::Optimal;
        res.x = x / tau;
        res.y = y / tau;
        res.s = s / tau;
        res.gap = std::max(gap, std::abs(pobj - dobj));
        return res;
      }
      if (by > 0 && tau < kappa) {
        const double ray = (a_.transpose() * y + s).norm() / by;
        if (ray <= settings_.feasibility_tol) {
          res.status = Status::Infeasible;
          res.y = y / by;
          res.message = "primal infeasible";
          return res;
        }
      }
      if (cx < 0 && tau < kappa) {
        const double ray = (a_ * x).norm() / -cx;
        if (ray <= settings_.feasibility_tol) {
          res.status = Status::Unbounded;
          res.x = x / -cx;
          res.message = "dual infeasible (objective unbounded)";
          return res;
        }
      }
      if (iter == settings_.max_iterations) break;

      if (!compute_scaling(x, s) || !factor_schur()) {
        res.message = "scaling or Schur factorization failed";
        break;
      }
      base_ = solve_reduced(b_, c_, zero_blocks());

      // Predictor.
      std::vector<RealMatrix> r3;
      for (const auto& sc : scaling_) r3.push_back(-RealMatrix(sc.lambda.asDiagonal()));
      Direction aff = combine(-rp, -rd, r3, -rg, -tau * kappa, tau, kappa);
      const double alpha_aff = step_length(aff, tau, kappa);
      const double sigma = std::clamp(std::pow(1.0 - alpha_aff, 3), 0.0, 1.0);

      // Corrector.
      r3.clear();
      for (int k = 0; k < cone_.blocks(); ++k) {
        const auto& sc = scaling_[static_cast<std::size_t>(k)];
        const RealMatrix dxs = sc.rti.transpose() * cone_.mat(aff.dx, k) * sc.rti;
        const RealMatrix dss = sc.r.transpose() * cone_.mat(aff.ds, k) * sc.r;
        RealMatrix u = -0.5 * (dxs * dss + dss * dxs);
        u.diagonal().array() += sigma * mu - sc.lambda.array().square();
        r3.push_back(lambda_solve(sc.lambda, u));
      }
      const double eta = 1.0 - sigma;
      Direction dir = combine(-eta * rp, -eta * rd, r3, -eta * rg, sigma * mu - tau * kappa - aff.dtau * aff.dkappa,
                              tau, kappa);
      const double alpha = std::min(1.0, 0.99 * step_length(dir, tau, kappa));
      if (!(alpha > 1e-12)) {
        if (++stalls >= 3) {
          res.message = "step length collapsed";
          break;
        }
      } else {
        stalls = 0;
      }
      x += alpha * dir.dx;
      y += alpha * dir.dy;
      s += alpha * dir.ds;
      tau += alpha * dir.dtau;
      kappa += alpha * dir.dkappa;
      if (!std::isfinite(tau) || !std::isfinite(kappa) || !x.allFinite() || !y.allFinite()) {
        res.message = "iterate diverged";
        break;
      }
    }
    res.status = Status::NumericalLimit;
    if (res.message.empty()) res.message = "iteration limit reached";
    res.x = x / tau;
    res.y = y / tau;
    res.s = s / tau;
    res.gap = x.dot(s) / (tau * tau);
    return res;
  }

 private:
  std::vector<RealMatrix> zero_blocks() const {
    std::vector<RealMatrix> z;
    for (int k = 0; k < cone_.blocks(); ++k) z.push_back(RealMatrix::Zero(cone_.size(k), cone_.size(k)));
    return z;
  }

  bool compute_scaling(const RealVector& x, const RealVector& s) {
    scaling_.clear();
    for (int k = 0; k < cone_.blocks(); ++k) {
      const RealMatrix xm = cone_.mat(x, k);
      const RealMatrix sm = cone_.mat(s, k);
      const Eigen::LLT<RealMatrix> lx(xm);
      const Eigen::LLT<RealMatrix> ls(sm);
      if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return false;
      const RealMatrix lxm = lx.matrixL();
      const RealMatrix lsm = ls.matrixL();
      const Eigen::JacobiSVD<RealMatrix> svd(lsm.transpose() * lxm, Eigen::ComputeFullU | Eigen::ComputeFullV);
      BlockScaling sc;
      sc.lambda = svd.singularValues();
      if (!(sc.lambda.minCoeff() > 0.0)) return false;
      const RealVector inv_sqrt = sc.lambda.cwiseSqrt().cwiseInverse();
      sc.r = lxm * svd.matrixV() * inv_sqrt.asDiagonal();
      sc.rti = lsm * svd.matrixU() * inv_sqrt.asDiagonal();
      sc.g = sc.r * sc.r.transpose();
      scaling_.push_back(std::move(sc));
    }
    return true;
  }

  RealVector apply_d(const RealVector& v) const {
    RealVector out(v.size());
    for (int k = 0; k < cone_.blocks(); ++k) {
      const auto& g = scaling_[static_cast<std::size_t>(k)].g;
      cone_.put(out, k, g * cone_.mat(v, k) * g);
    }
    return out;
  }

  bool factor_schur() {
    const int m = static_cast<int>(a_.rows());
    RealMatrix ad(m, cone_.dim());
    for (int i = 0; i < m; ++i) ad.row(i) = apply_d(a_.row(i).transpose()).transpose();
    schur_ = ad * a_.transpose();
    schur_ = 0.5 * (schur_ + schur_.transpose()).eval();
    llt_.compute(schur_);
    if (llt_.info() == Eigen::Success) return true;
    const double reg = 1e-14 * std::max(1.0, schur_.diagonal().maxCoeff());
    schur_.diagonal().array() += reg;
    llt_.compute(schur_);
    return llt_.info() == Eigen::Success;
  }

  RealVector schur_solve(const RealVector& rhs) const {
    RealVector sol = llt_.solve(rhs);
    // One step of iterative refinement.
    sol += llt_.solve(rhs - schur_ * sol);
    return sol;
  }

  Direction solve_reduced(const RealVector& r1, const RealVector& r2, const std::vector<RealMatrix>& r3) const {
    RealVector t(cone_.dim());
    for (int k = 0; k < cone_.blocks(); ++k) {
      const auto& r = scaling_[static_cast<std::size_t>(k)].r;
      cone_.put(t, k, r * r3[static_cast<std::size_t>(k)] * r.transpose());
    }
    Direction d;
    d.dy = schur_solve(r1 - a_ * t + a_ * apply_d(r2));
    d.ds = r2 - a_.transpose() * d.dy;
    d.dx = t - apply_d(d.ds);
    return d;
  }

  Direction combine(const RealVector& r1, const RealVector& r2, const std::vector<RealMatrix>& r3, double r4,
                    double r5, double tau, double kappa) const {
    Direction d = solve_reduced(r1, r2, r3);
    const double num = r4 - b_.dot(d.dy) + c_.dot(d.dx) + r5 / tau;
    const double den = b_.dot(base_.dy) - c_.dot(base_.dx) + kappa / tau;
    d.dtau = num / den;
    d.dx += d.dtau * base_.dx;
    d.dy += d.dtau * base_.dy;
    d.ds += d.dtau * base_.ds;
    d.dkappa = (r5 - kappa * d.dtau) / tau;
    return d;
  }

  static RealMatrix lambda_solve(const RealVector& lambda, const RealMatrix& u) {
    RealMatrix z(u.rows(), u.cols());
    for (Eigen::Index i = 0; i < u.rows(); ++i)
      for (Eigen::Index j = 0; j < u.cols(); ++j) z(i, j) = 2.0 * u(i, j) / (lambda[i] + lambda[j]);
    return z;
  }

  // Largest alpha keeping lambda + alpha * delta PSD, for a scaled direction delta.
  static double cone_step(const RealVector& lambda, const RealMatrix& delta) {
    const RealVector inv_sqrt = lambda.cwiseSqrt().cwiseInverse();
    RealMatrix m = inv_sqrt.asDiagonal() * delta * inv_sqrt.asDiagonal();
    m = 0.5 * (m + m.transpose()).eval();
    double lo;
    if (m.rows() == 1) {
      lo = m(0, 0);
    } else {
      lo = Eigen::SelfAdjointEigenSolver<RealMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues()[0];
    }
    return lo < 0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
  }

  double step_length(const Direction& d, double tau, double kappa) const {
    double alpha = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cone_.blocks(); ++k) {
      const auto& sc = scaling_[static_cast<std::size_t>(k)];
      alpha = std::min(alpha, cone_step(sc.lambda, sc.rti.transpose() * cone_.mat(d.dx, k) * sc.rti));
      alpha = std::min(alpha, cone_step(sc.lambda, sc.r.transpose() * cone_.mat(d.ds, k) * sc.r));
    }
    if (d.dtau < 0) alpha = std::min(alpha, -tau / d.dtau);
    if (d.dkappa < 0) alpha = std::min(alpha, -kappa / d.dkappa);
    return std::min(alpha, 1.0 / 0.99);
  }

  const RealMatrix& a_;
  const RealVector& b_;
  const RealVector& c_;
  const Cone& cone_;
  const Settings& settings_;
  std::vector<BlockScaling> scaling_;
  RealMatrix schur_;
  Eigen::LLT<RealMatrix> llt_;
  Direction base_;
};

struct Reduced {
  RealMatrix a;
  RealVector b;
  std::vector<int> rows;     // original row of each kept row
  RealVector row_norm;       // kept row i = original row / row_norm[i]
  bool inconsistent = false;
  RealVector ray;            // over original rows, when inconsistent
};

Reduced remove_dependent_rows(const RealMatrix& a, const RealVector& b) {
  Reduced out;
  const Eigen::Index m = a.rows();
  if (m == 0) {
    out.a = a;
    out.b = b;
    return out;
  }
  RealMatrix scaled = a;
  RealVector bs = b;
  RealVector norms(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    norms[i] = a.row(i).norm();
    if (norms[i] > 0) {
      scaled.row(i) /= norms[i];
      bs[i] /= norms[i];
    }
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(scaled.transpose());
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  const auto& perm = qr.colsPermutation().indices();
  std::vector<int> kept;
  for (Eigen::Index i = 0; i < rank; ++i) kept.push_back(perm[i]);
  std::sort(kept.begin(), kept.end());
  RealMatrix ak(static_cast<Eigen::Index>(kept.size()), a.cols());
  RealVector bk(static_cast<Eigen::Index>(kept.size()));
  RealVector nk(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    ak.row(static_cast<Eigen::Index>(i)) = scaled.row(kept[i]);
    bk[static_cast<Eigen::Index>(i)] = bs[kept[i]];
    nk[static_cast<Eigen::Index>(i)] = norms[kept[i]];
  }
  // Every dropped row must be implied by the kept ones.
  if (static_cast<Eigen::Index>(kept.size()) < m) {
    const Eigen::ColPivHouseholderQR<RealMatrix> kqr(ak.transpose());
    std::vector<bool> is_kept(static_cast<std::size_t>(m), false);
    for (int i : kept) is_kept[static_cast<std::size_t>(i)] = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (is_kept[static_cast<std::size_t>(i)]) continue;
      const RealVector w = kqr.solve(RealVector(scaled.row(i).transpose()));
      const double implied = w.dot(bk);
      if (std::abs(implied - bs[i]) > 1e-9 * (1.0 + std::abs(bs[i]))) {
        out.inconsistent = true;
        out.ray = RealVector::Zero(m);
        const double sign = bs[i] - implied > 0 ? 1.0 : -1.0;
        out.ray[i] = sign / (norms[i] > 0 ? norms[i] : 1.0);
        for (std::size_t q = 0; q < kept.size(); ++q) {
          out.ray[kept[q]] = -sign * w[static_cast<Eigen::Index>(q)] / nk[static_cast<Eigen::Index>(q)];
        }
        return out;
      }
    }
  }
  out.a = std::move(ak);
  out.b = std::move(bk);
  out.rows = std::move(kept);
  out.row_norm = std::move(nk);
  return out;
}

Solution run(const Problem& problem, const Settings& settings, bool margin) {
  problem.validate();
  if (margin && problem.objective()) throw MalformedProblem("feasibility problems must not carry an objective");
  const StandardForm f = build_standard_form(problem, margin);
  if (static_cast<std::size_t>(f.cone.dim()) > settings.max_dimension) {
    throw SizeGuardExceeded("SDP has " + std::to_string(f.cone.dim()) + " scalar unknowns, limit is " +
                            std::to_string(settings.max_dimension));
  }
  Solution sol;
  const std::size_t user_rows = problem.constraints().size();
  sol.duals.assign(user_rows, 0.0);

  const Reduced red = remove_dependent_rows(f.a, f.b);
  if (red.inconsistent) {
    sol.status = Status::Infeasible;
    sol.message = "equality constraints are inconsistent";
    for (std::size_t i = 0; i < user_rows; ++i) sol.duals[i] = red.ray[static_cast<Eigen::Index>(i)];
    return sol;
  }

  InteriorPoint ipm(red.a, red.b, f.c, f.cone, settings);
  const auto res = ipm.run();
  sol.iterations = res.iterations;
  sol.message = res.message;

  auto map_duals = [&](const RealVector& y) {
    for (std::size_t q = 0; q < red.rows.size(); ++q) {
      const int row = red.rows[q];
      if (row < static_cast<int>(user_rows)) {
        sol.duals[static_cast<std::size_t>(row)] = y[static_cast<Eigen::Index>(q)] / red.row_norm[static_cast<Eigen::Index>(q)];
      }
    }
  };

  if (res.status == Status::Infeasible) {
    sol.status = Status::Infeasible;
    map_duals(res.y);
    return sol;
  }
  if (res.status == Status::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  // Recover the user variables.
  for (int k = 0; k < problem.block_count(); ++k) {
    sol.blocks.push_back(f.cone.mat(res.x, f.user_block_cone[static_cast<std::size_t>(k)]));
  }
  for (const auto& m : f.scalars) {
    double v = m.offset + m.sign * res.x[m.pos];
    if (m.neg >= 0) v -= res.x[m.neg];
    sol.scalars.push_back(v);
  }
  double lambda = 0.0;
  if (margin) {
    lambda = -1.0 + res.x[f.margin_coord];
    for (int k = 0; k < problem.block_count(); ++k) {
      sol.blocks[static_cast<std::size_t>(k)].diagonal().array() += lambda;
    }
  }
  sol.objective = -f.c.dot(res.x) + f.objective_offset;
  sol.dual_objective = -red.b.dot(res.y) + f.objective_offset;
  sol.dual_gap = res.gap;
  sol.primal_residual = constraint_residual(problem, sol.blocks, sol.scalars);
  map_duals(res.y);

  if (res.status == Status::NumericalLimit) {
    sol.status = Status::NumericalLimit;
    return sol;
  }
  sol.status = Status::Optimal;
  if (margin && lambda < -settings.feasibility_tol) {
    sol.status = Status::Infeasible;
    sol.message = "largest PSD margin is negative";
  }
  return sol;
}

}  // namespace

Solution solve(const Problem& problem, const Settings& settings) { return run(problem, settings, false); }

Solution feasibility(const Problem& problem, const Settings& settings) { return run(problem, settings, true); }

}  // namespace povmsim::sdp
