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

#include "povmsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "povmsim/errors.hpp"

namespace povmsim::oracle {

namespace {

std::vector<HermitianOperator> zeros(int n, int d) {
  return std::vector<HermitianOperator>(static_cast<std::size_t>(n), HermitianOperator::zero(d));
}

int position_of(const std::vector<int>& targets, int l) {
  const auto it = std::find(targets.begin(), targets.end(), l);
  return it == targets.end() ? -1 : static_cast<int>(it - targets.begin());
}

void require_targets(const std::vector<Povm>& targets, const SimulationCertificate& cert) {
  if (targets.empty()) throw InvalidArgument("no targets given");
  switch (cert.kind) {
    case CertificateKind::Joint:
      if (!cert.joint) throw InvalidArgument("joint certificate without joint measurement");
      if (cert.joint->arity() != static_cast<int>(targets.size())) {
        throw DimensionMismatch("joint measurement arity does not match the number of targets");
      }
      for (std::size_t l = 0; l < targets.size(); ++l) {
        if (cert.joint->shape()[l] != targets[l].outcomes() || cert.joint->dim() != targets[l].dim()) {
          throw DimensionMismatch("joint measurement shape does not match target " + std::to_string(l));
        }
      }
      break;
    case CertificateKind::KOutcome:
    case CertificateKind::ProjectiveDecomposition:
      if (targets.size() != 1) throw DimensionMismatch("certificate simulates a single POVM");
      break;
    case CertificateKind::FixedAssignment:
      cert.assignment.validate(static_cast<int>(targets.size()));
      break;
  }
}

}  // namespace

std::vector<std::vector<HermitianOperator>> reconstruct(const std::vector<Povm>& targets,
                                                        const SimulationCertificate& cert) {
  require_targets(targets, cert);
  const int d = targets.front().dim();
  std::vector<std::vector<HermitianOperator>> out;
  switch (cert.kind) {
    case CertificateKind::Joint:
      for (std::size_t l = 0; l < targets.size(); ++l) out.push_back(marginal(*cert.joint, static_cast<int>(l)).effects());
      break;
    case CertificateKind::KOutcome: {
      auto acc = zeros(targets.front().outcomes(), d);
      for (const auto& c : cert.components) {
        if (c.povm.outcomes() != targets.front().outcomes()) throw DimensionMismatch("component outcome count");
        for (int i = 0; i < c.povm.outcomes(); ++i) acc[static_cast<std::size_t>(i)] += c.weight * c.povm[i];
      }
      out.push_back(std::move(acc));
      break;
    }
    case CertificateKind::ProjectiveDecomposition: {
      auto acc = zeros(targets.front().outcomes(), d);
      auto add = [&](const WeightedPovm& c) {
        if (c.povm.outcomes() != targets.front().outcomes()) throw DimensionMismatch("component outcome count");
        for (int i = 0; i < c.povm.outcomes(); ++i) acc[static_cast<std::size_t>(i)] += c.weight * c.povm[i];
      };
      for (const auto& c : cert.projective) add(c);
      if (cert.trivial) add(*cert.trivial);
      out.push_back(std::move(acc));
      break;
    }
    case CertificateKind::FixedAssignment:
      for (std::size_t l = 0; l < targets.size(); ++l) {
        auto acc = zeros(targets[l].outcomes(), d);
        for (const auto& sim : cert.simulators) {
          const double p = cert.assignment.weights[l].at(static_cast<std::size_t>(sim.simulator));
          const int pos = position_of(sim.targets, static_cast<int>(l));
          if (p == 0.0) continue;
          if (pos < 0) throw InvalidArgument("simulator does not serve a target it is assigned to");
          const Povm m = marginal(sim.joint, pos);
          if (m.outcomes() != targets[l].outcomes()) throw DimensionMismatch("simulator outcome count");
          for (int i = 0; i < m.outcomes(); ++i) acc[static_cast<std::size_t>(i)] += p * m[i];
        }
        out.push_back(std::move(acc));
      }
      break;
  }
  return out;
}

VerificationReport verify_certificate(const std::vector<Povm>& targets, const SimulationCertificate& cert,
                                      double tol) {
  VerificationReport report;
  report.tolerance = tol;
  bool ok = true;
  auto fail = [&](std::string note) {
    ok = false;
    report.notes.push_back(std::move(note));
  };
  auto check_psd = [&](const Povm& p, const std::string& what) {
    for (int i = 0; i < p.outcomes(); ++i) {
      const double lo = min_eigenvalue(p[i]);
      if (lo < -tol) fail(what + " effect " + std::to_string(i) + " has eigenvalue " + std::to_string(lo));
    }
  };
  auto check_weights = [&](const std::vector<double>& w, const std::string& what) {
    double sum = 0.0;
    for (double x : w) {
      if (x < -tol) fail(what + " has a negative weight");
      sum += x;
    }
    if (std::abs(sum - 1.0) > tol) fail(what + " weights sum to " + std::to_string(sum));
  };

  const double t = cert.visibility;
  if (!(t >= 0.0 && t <= 1.0)) {
    fail("visibility outside [0, 1]");
    report.max_error = std::numeric_limits<double>::infinity();
    return report;
  }
  switch (cert.kind) {
    case CertificateKind::Joint:
      if (cert.joint) {
        for (const auto& e : cert.joint->effects()) {
          if (min_eigenvalue(e) < -tol) fail("joint effect is not positive semidefinite");
        }
      }
      break;
    case CertificateKind::KOutcome: {
      std::vector<double> w;
      for (const auto& c : cert.components) {
        w.push_back(c.weight);
        check_psd(c.povm, "component");
        if (static_cast<int>(c.support.size()) > cert.k) fail("component support exceeds k");
        for (int i = 0; i < c.povm.outcomes(); ++i) {
          if (std::find(c.support.begin(), c.support.end(), i) == c.support.end() && c.povm[i].max_abs() > tol) {
            fail("component has a non-null effect outside its support");
          }
        }
      }
      check_weights(w, "k-outcome decomposition");
      break;
    }
    case CertificateKind::ProjectiveDecomposition: {
      std::vector<double> w;
      for (const auto& c : cert.projective) {
        w.push_back(c.weight);
        for (const auto& e : c.povm.effects()) {
          const ComplexMatrix sq = e.matrix() * e.matrix();
          if ((sq - e.matrix()).cwiseAbs().maxCoeff() > tol) fail("component effect is not a projector");
        }
      }
      if (cert.trivial) {
        w.push_back(cert.trivial->weight);
        for (const auto& e : cert.trivial->povm.effects()) {
          if (to_bloch(e).vector.norm() > tol) fail("trivial component effect is not proportional to the identity");
        }
      }
      check_weights(w, "projective decomposition");
      break;
    }
    case CertificateKind::FixedAssignment:
      for (const auto& sim : cert.simulators) {
        for (const auto& e : sim.joint.effects()) {
          if (min_eigenvalue(e) < -tol) fail("simulator effect is not positive semidefinite");
        }
      }
      for (const auto& row : cert.assignment.weights) check_weights(row, "pre-processing row");
      break;
  }

  const auto rebuilt = reconstruct(targets, cert);
  for (std::size_t l = 0; l < targets.size(); ++l) {
    const Povm target = depolarize(targets[l], t);
    if (static_cast<int>(rebuilt[l].size()) != target.outcomes()) throw DimensionMismatch("outcome count mismatch");
    for (int i = 0; i < target.outcomes(); ++i) {
      const double err = rebuilt[l][static_cast<std::size_t>(i)].max_abs_diff(target[i]);
      report.errors.push_back(err);
      report.max_error = std::max(report.max_error, err);
    }
  }
  if (report.max_error > tol) {
    std::ostringstream s;
    s << "reconstruction error " << report.max_error << " exceeds " << tol;
    fail(s.str());
  }
  report.passed = ok;
  return report;
}

std::vector<double> protocol_statistics(const std::vector<Povm>& targets, const SimulationCertificate& cert, int l,
                                        const DensityMatrix& rho) {
  require_targets(targets, cert);
  const auto& target = targets.at(static_cast<std::size_t>(l));
  std::vector<double> out(static_cast<std::size_t>(target.outcomes()), 0.0);
  auto prob = [&](const HermitianOperator& e) { return e.inner(rho.op()); };
  switch (cert.kind) {
    case CertificateKind::Joint:
      for (int a = 0; a < cert.joint->size(); ++a) {
        const auto tuple = cert.joint->tuple(a);
        out[static_cast<std::size_t>(tuple[static_cast<std::size_t>(l)])] += prob(cert.joint->effect_at(a));
      }
      break;
    case CertificateKind::KOutcome:
      for (const auto& c : cert.components) {
        for (int i = 0; i < c.povm.outcomes(); ++i) out[static_cast<std::size_t>(i)] += c.weight * prob(c.povm[i]);
      }
      break;
    case CertificateKind::ProjectiveDecomposition: {
      auto add = [&](const WeightedPovm& c) {
        for (int i = 0; i < c.povm.outcomes(); ++i) out[static_cast<std::size_t>(i)] += c.weight * prob(c.povm[i]);
      };
      for (const auto& c : cert.projective) add(c);
      if (cert.trivial) add(*cert.trivial);
      break;
    }
    case CertificateKind::FixedAssignment:
      for (const auto& sim : cert.simulators) {
        const double p = cert.assignment.weights[static_cast<std::size_t>(l)].at(static_cast<std::size_t>(sim.simulator));
        const int pos = position_of(sim.targets, l);
        if (p == 0.0 || pos < 0) continue;
        for (int a = 0; a < sim.joint.size(); ++a) {
          const auto tuple = sim.joint.tuple(a);
          out[static_cast<std::size_t>(tuple[static_cast<std::size_t>(pos)])] += p * prob(sim.joint.effect_at(a));
        }
      }
      break;
  }
  return out;
}

DensityMatrix random_pure_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector psi(dim);
  for (int i = 0; i < dim; ++i) psi[i] = Complex(normal(rng), normal(rng));
  return DensityMatrix::pure(psi);
}

DensityMatrix random_mixed_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  ComplexMatrix w = g * g.adjoint();
  w /= w.trace().real();
  return DensityMatrix(HermitianOperator::hermitian_part(w));
}

VerificationReport statistics_check(const std::vector<Povm>& targets, const SimulationCertificate& cert,
                                    int n_states, double tol, std::uint64_t seed) {
  require_targets(targets, cert);
  VerificationReport report;
  report.tolerance = tol;
  std::mt19937_64 rng(seed);
  const int d = targets.front().dim();
  std::vector<Povm> noisy;
  for (const auto& p : targets) noisy.push_back(depolarize(p, cert.visibility));
  for (int s = 0; s < n_states; ++s) {
    const DensityMatrix rho = s % 2 == 0 ? random_pure_state(d, rng) : random_mixed_state(d, rng);
    double worst = 0.0;
    for (std::size_t l = 0; l < targets.size(); ++l) {
      const auto expected = born(noisy[l], rho);
      const auto got = protocol_statistics(targets, cert, static_cast<int>(l), rho);
      double tvd = 0.0;
      for (std::size_t i = 0; i < expected.size(); ++i) tvd += std::abs(expected[i] - got[i]);
      worst = std::max(worst, 0.5 * tvd);
    }
    report.errors.push_back(worst);
    report.max_error = std::max(report.max_error, worst);
  }
  report.passed = report.max_error <= tol;
  if (!report.passed) report.notes.push_back("total-variation distance exceeds tolerance");
  return report;
}

namespace {

struct PairGeometry {
  double alpha;
  double beta;
  Eigen::Vector3d a;
  Eigen::Vector3d b;
};

Eigen::Vector3d bloch3(const HermitianOperator& h) {
  const auto bd = to_bloch(h);
  return Eigen::Vector3d(bd.vector[0], bd.vector[1], bd.vector[2]);
}

// Interval of g0 for which M_00 = g0 I + g.sigma completes to a joint measurement at visibility t.
std::pair<double, double> g0_interval(const PairGeometry& p, double t, const Eigen::Vector3d& g) {
  const double lower = std::max(g.norm(), (g - t * (p.a + p.b)).norm() - (1.0 - p.alpha - p.beta));
  const double upper = std::min(p.alpha - (t * p.a - g).norm(), p.beta - (t * p.b - g).norm());
  return {lower, upper};
}

struct GridPoint {
  double slack = -std::numeric_limits<double>::infinity();
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
};

GridPoint search(const PairGeometry& p, double t, int resolution) {
  constexpr int kMaxZoomLevels = 30;
  constexpr int kZoomResolution = 21;
  constexpr double kFinestStep = 1e-11;
  GridPoint best;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double half = std::min(p.alpha, p.beta);
  int res = resolution;
  for (int level = 0; level <= kMaxZoomLevels; ++level) {
    const double step = 2.0 * half / (res - 1);
    for (int i = 0; i < res; ++i)
      for (int j = 0; j < res; ++j)
        for (int k = 0; k < res; ++k) {
          const Eigen::Vector3d g = center + Eigen::Vector3d(-half + i * step, -half + j * step, -half + k * step);
          const auto [lo, hi] = g0_interval(p, t, g);
          if (hi - lo > best.slack) {
            best.slack = hi - lo;
            best.g = g;
          }
        }
    if (step < kFinestStep) break;
    center = best.g;
    half = 2.0 * step;
    res = std::min(resolution, kZoomResolution);
  }
  return best;
}

}  // namespace

GridResult qubit_pair_jm_grid(const Povm& a, const Povm& b, int resolution) {
  constexpr double kMinSlack = -1e-11;
  if (resolution < 2) throw InvalidArgument("grid resolution must be at least 2");
  if (a.dim() != 2 || b.dim() != 2 || a.outcomes() != 2 || b.outcomes() != 2) {
    throw InvalidArgument("grid oracle takes two dichotomic qubit POVMs");
  }
  const PairGeometry geo{a[0].trace() / 2.0, b[0].trace() / 2.0, bloch3(a[0]), bloch3(b[0])};
  auto feasible = [&](double t) {
    const auto pt = search(geo, t, resolution);
    return std::make_pair(pt.slack >= kMinSlack, pt.g);
  };
  double lo = 0.0;
  double hi = 1.0;
  Eigen::Vector3d best_g = Eigen::Vector3d::Zero();
  if (auto [ok, g] = feasible(1.0); ok) {
    lo = 1.0;
    best_g = g;
  } else if (auto [ok0, g0] = feasible(0.0); ok0) {
    best_g = g0;
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (auto [okm, gm] = feasible(mid); okm) {
        lo = mid;
        best_g = gm;
      } else {
        hi = mid;
      }
    }
  } else {
    return {};
  }

  GridResult out;
  out.t_lower = lo;
  const auto [g_lo, g_hi] = g0_interval(geo, lo, best_g);
  const double g0 = 0.5 * (g_lo + g_hi);
  RealVector gv(3);
  gv << best_g[0], best_g[1], best_g[2];
  const HermitianOperator m00 = from_bloch(g0, gv, 2);
  const HermitianOperator a0 = depolarize(a[0], lo);
  const HermitianOperator b0 = depolarize(b[0], lo);
  std::vector<HermitianOperator> effects = {m00, a0 - m00, b0 - m00, HermitianOperator::identity(2) - a0 - b0 + m00};
  SimulationCertificate cert;
  cert.kind = CertificateKind::Joint;
  cert.visibility = lo;
  cert.joint = JointMeasurement({2, 2}, std::move(effects));
  out.certificate = std::move(cert);
  return out;
}

namespace {

std::vector<double> random_distribution(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> p(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (auto& x : p) sum += (x = ex(rng));
  for (auto& x : p) x /= sum;
  return p;
}

}  // namespace

RandomProcessing random_processing(const std::vector<Povm>& targets, std::mt19937_64& rng) {
  const int m = static_cast<int>(targets.size());
  std::uniform_int_distribution<int> count(2, std::max(2, m));
  std::uniform_int_distribution<int> outcomes(2, 3);
  RandomProcessing proc;
  const int m_new = count(rng);
  for (int k = 0; k < m_new; ++k) {
    proc.pre.emplace_back(random_distribution(m, rng));
    const int n_out = outcomes(rng);
    std::vector<PostProcessingMap> maps;
    for (const auto& t : targets) {
      RealMatrix q(n_out, t.outcomes());
      for (int c = 0; c < t.outcomes(); ++c) {
        const auto col = random_distribution(n_out, rng);
        for (int r = 0; r < n_out; ++r) q(r, c) = col[static_cast<std::size_t>(r)];
      }
      maps.emplace_back(q);
    }
    proc.post.push_back(std::move(maps));
  }
  return proc;
}

VerificationReport monotonicity_check(const std::vector<Povm>& targets, const MonotonicityOptions& options) {
  VerificationReport report;
  report.tolerance = options.tolerance;
  const double before = jm_robustness(targets, options.robustness).t_star;
  bool ok = true;
  for (int trial = 0; trial < options.trials; ++trial) {
    std::seed_seq seq{options.seed, static_cast<std::uint64_t>(trial)};
    std::mt19937_64 rng(seq);
    const auto proc = random_processing(targets, rng);
    const auto processed = process_set(targets, proc.pre, proc.post);
    const double after = jm_robustness(processed, options.robustness).t_star;
    const double drop = before - after;
    report.errors.push_back(drop);
    report.max_error = std::max(report.max_error, drop);
    if (drop > options.tolerance) {
      ok = false;
      std::ostringstream s;
      s << "trial " << trial << ": robustness fell from " << before << " to " << after;
      report.notes.push_back(s.str());
    }
  }
  report.passed = ok;
  return report;
}

}  // namespace povmsim::oracle
