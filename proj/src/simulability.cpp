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

#include "povmsim/simulability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "povmsim/errors.hpp"
#include "povmsim_internal.hpp"

namespace povmsim {

using sdp::HermitianBlock;
using sdp::HermitianEquality;

namespace {

std::vector<std::vector<int>> all_tuples(const std::vector<int>& shape) {
  int total = 1;
  for (int n : shape) {
    if (total > kMaxJointOutcomes / n) {
      throw SizeGuardExceeded("joint outcome count exceeds " + std::to_string(kMaxJointOutcomes));
    }
    total *= n;
  }
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> cur(shape.size(), 0);
  for (int a = 0; a < total; ++a) {
    out.push_back(cur);
    for (int p = static_cast<int>(shape.size()) - 1; p >= 0; --p) {
      auto& c = cur[static_cast<std::size_t>(p)];
      if (++c < shape[static_cast<std::size_t>(p)]) break;
      c = 0;
    }
  }
  return out;
}

int shared_dim(const std::vector<Povm>& targets) {
  if (targets.empty()) throw InvalidArgument("at least one target POVM is required");
  const int d = targets.front().dim();
  for (const auto& p : targets) {
    if (p.dim() != d) throw DimensionMismatch("target POVMs act on different dimensions");
  }
  return d;
}

// Either a free visibility variable or a fixed value.
struct Visibility {
  std::optional<sdp::ScalarId> var;
  double fixed = 0.0;
};

// Emits  sum(...) == Phi_t(effect)  with the visibility moved to the left when it is a variable.
void emit_target(sdp::Problem& problem, HermitianEquality eq, const Visibility& t, const HermitianOperator& effect) {
  const int d = effect.dim();
  const HermitianOperator noise = (effect.trace() / d) * HermitianOperator::identity(d);
  const HermitianOperator traceless = effect - noise;
  if (t.var) {
    eq.add(*t.var, -1.0 * traceless);
    eq.emit(problem, noise);
  } else {
    eq.emit(problem, noise + t.fixed * traceless);
  }
}

struct Program {
  sdp::Problem problem;
  Visibility t;
  // Joint measurement layout (Jm and Projective), one entry per simulator for FixedAssignment.
  struct JointLayout {
    std::vector<int> targets;
    std::vector<int> shape;
    std::vector<HermitianBlock> vars;
  };
  std::vector<JointLayout> joints;
  // k-outcome layout.
  std::vector<std::vector<int>> subsets;
  std::vector<std::vector<HermitianBlock>> subset_vars;
};

Visibility make_visibility(sdp::Problem& problem, std::optional<double> fixed) {
  Visibility t;
  if (fixed) {
    t.fixed = *fixed;
  } else {
    t.var = problem.add_scalar(0.0, 1.0);
    sdp::LinearExpr obj;
    obj.add(*t.var, 1.0);
    problem.set_objective(obj);
  }
  return t;
}

Program::JointLayout add_joint(sdp::Problem& problem, const std::vector<Povm>& targets, std::vector<int> which,
                               int d) {
  Program::JointLayout layout;
  layout.targets = std::move(which);
  for (int l : layout.targets) layout.shape.push_back(targets[static_cast<std::size_t>(l)].outcomes());
  const auto tuples = all_tuples(layout.shape);
  for (std::size_t a = 0; a < tuples.size(); ++a) layout.vars.emplace_back(problem, d);
  return layout;
}

// Adds sum_a coef * M_a over tuples with tuple[pos] == i to eq.
void add_marginal(HermitianEquality& eq, const Program::JointLayout& layout, int pos, int i, double coef) {
  const auto tuples = all_tuples(layout.shape);
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    if (tuples[a][static_cast<std::size_t>(pos)] == i) eq.add(layout.vars[a], coef);
  }
}

Program build_jm(const std::vector<Povm>& targets, std::optional<double> fixed) {
  const int d = shared_dim(targets);
  Program prog;
  prog.t = make_visibility(prog.problem, fixed);
  std::vector<int> all(targets.size());
  std::iota(all.begin(), all.end(), 0);
  prog.joints.push_back(add_joint(prog.problem, targets, all, d));
  const auto& layout = prog.joints.back();
  for (std::size_t l = 0; l < targets.size(); ++l) {
    for (int i = 0; i < targets[l].outcomes(); ++i) {
      HermitianEquality eq(d);
      add_marginal(eq, layout, static_cast<int>(l), i, 1.0);
      emit_target(prog.problem, eq, prog.t, targets[l][i]);
    }
  }
  return prog;
}

Program build_k_outcome(const Povm& target, int k, std::optional<double> fixed) {
  const int n = target.outcomes();
  const int d = target.dim();
  if (k < 1 || k > n) throw InvalidArgument("k must lie between 1 and the number of outcomes");
  Program prog;
  prog.t = make_visibility(prog.problem, fixed);
  prog.subsets = k_subsets(n, k);
  std::vector<HermitianEquality> per_outcome(static_cast<std::size_t>(n), HermitianEquality(d));
  for (const auto& s : prog.subsets) {
    const auto weight = prog.problem.add_scalar(0.0);
    std::vector<HermitianBlock> vars;
    HermitianEquality sum(d);
    for (int i : s) {
      vars.emplace_back(prog.problem, d);
      sum.add(vars.back(), 1.0);
      per_outcome[static_cast<std::size_t>(i)].add(vars.back(), 1.0);
    }
    sum.add(weight, -1.0 * HermitianOperator::identity(d));
    sum.emit(prog.problem, HermitianOperator::zero(d));
    prog.subset_vars.push_back(std::move(vars));
  }
  for (int i = 0; i < n; ++i) emit_target(prog.problem, per_outcome[static_cast<std::size_t>(i)], prog.t, target[i]);
  return prog;
}

Program build_fixed_assignment(const std::vector<Povm>& targets, const AssignmentSpec& spec,
                               std::optional<double> fixed) {
  const int d = shared_dim(targets);
  spec.validate(static_cast<int>(targets.size()));
  Program prog;
  prog.t = make_visibility(prog.problem, fixed);
  for (int j = 0; j < spec.simulators; ++j) {
    prog.joints.push_back(add_joint(prog.problem, targets, spec.targets_of(j), d));
    const auto& layout = prog.joints.back();
    if (layout.targets.empty()) continue;
    HermitianEquality sum(d);
    for (const auto& v : layout.vars) sum.add(v, 1.0);
    sum.emit(prog.problem, HermitianOperator::identity(d));
  }
  for (std::size_t l = 0; l < targets.size(); ++l) {
    for (int i = 0; i < targets[l].outcomes(); ++i) {
      HermitianEquality eq(d);
      for (int j = 0; j < spec.simulators; ++j) {
        const double p = spec.weights[l][static_cast<std::size_t>(j)];
        if (p <= 0.0) continue;
        const auto& layout = prog.joints[static_cast<std::size_t>(j)];
        const auto pos = std::find(layout.targets.begin(), layout.targets.end(), static_cast<int>(l));
        add_marginal(eq, layout, static_cast<int>(pos - layout.targets.begin()), i, p);
      }
      emit_target(prog.problem, eq, prog.t, targets[l][i]);
    }
  }
  return prog;
}

std::vector<Povm> projective_pair(const std::vector<Povm>& targets) {
  if (targets.size() != 1) throw InvalidArgument("projective robustness takes a single POVM");
  if (targets.front().dim() != 2) throw InvalidArgument("projective robustness is implemented for qubits only");
  return {targets.front(), antipodal_povm(targets.front())};
}

Program build(const ProgramSpec& spec, std::optional<double> fixed) {
  switch (spec.kind) {
    case ProgramKind::Jm:
      if (spec.targets.size() < 2) throw InvalidArgument("joint measurability needs at least two targets");
      return build_jm(spec.targets, fixed);
    case ProgramKind::KOutcome:
      if (spec.targets.size() != 1) throw InvalidArgument("k-outcome robustness takes a single POVM");
      return build_k_outcome(spec.targets.front(), spec.k, fixed);
    case ProgramKind::FixedAssignment:
      return build_fixed_assignment(spec.targets, spec.assignment, fixed);
    case ProgramKind::Projective:
      return build_jm(projective_pair(spec.targets), fixed);
  }
  throw InvalidArgument("unknown program kind");
}

JointMeasurement extract_joint(const Program::JointLayout& layout, const sdp::Solution& sol) {
  std::vector<HermitianOperator> effects;
  for (const auto& v : layout.vars) effects.push_back(v.value(sol));
  internal::normalize_to_identity(effects);
  return JointMeasurement(layout.shape, std::move(effects));
}

SimulationCertificate extract(const ProgramSpec& spec, const Program& prog, const sdp::Solution& sol, double t) {
  SimulationCertificate cert;
  cert.visibility = t;
  switch (spec.kind) {
    case ProgramKind::Jm:
      cert.kind = CertificateKind::Joint;
      cert.joint = extract_joint(prog.joints.front(), sol);
      break;
    case ProgramKind::FixedAssignment:
      cert.kind = CertificateKind::FixedAssignment;
      cert.assignment = spec.assignment;
      for (std::size_t j = 0; j < prog.joints.size(); ++j) {
        const auto& layout = prog.joints[j];
        if (layout.targets.empty()) continue;
        cert.simulators.push_back({static_cast<int>(j), layout.targets, extract_joint(layout, sol)});
      }
      break;
    case ProgramKind::Projective: {
      const auto joint = extract_joint(prog.joints.front(), sol);
      cert = extract_projective_decomposition(depolarize(spec.targets.front(), t), joint, t);
      break;
    }
    case ProgramKind::KOutcome: {
      cert.kind = CertificateKind::KOutcome;
      cert.k = spec.k;
      const Povm& target = spec.targets.front();
      const int d = target.dim();
      double total = 0.0;
      for (std::size_t s = 0; s < prog.subsets.size(); ++s) {
        std::vector<HermitianOperator> sub;
        double trace = 0.0;
        for (const auto& v : prog.subset_vars[s]) {
          sub.push_back(v.value(sol));
          trace += sub.back().trace();
        }
        const double weight = trace / d;
        if (weight < internal::kDropWeight) continue;
        internal::normalize_to_identity(sub);
        std::vector<HermitianOperator> effects(static_cast<std::size_t>(target.outcomes()),
                                               HermitianOperator::zero(d));
        for (std::size_t q = 0; q < sub.size(); ++q) {
          effects[static_cast<std::size_t>(prog.subsets[s][q])] = sub[q];
        }
        cert.components.push_back({prog.subsets[s], weight, Povm(std::move(effects))});
        total += weight;
      }
      for (auto& c : cert.components) c.weight /= total;
      break;
    }
  }
  return cert;
}

SolverDiagnostics diagnostics_of(const sdp::Solution& sol) {
  SolverDiagnostics d;
  d.status = sol.status;
  d.iterations = sol.iterations;
  d.primal_residual = sol.primal_residual;
  d.dual_gap = sol.dual_gap;
  d.message = sol.message;
  return d;
}

RobustnessResult bisect(const ProgramSpec& spec, const RobustnessOptions& options) {
  auto attempt = [&](double t) {
    const Program prog = build(spec, t);
    const auto sol = sdp::feasibility(prog.problem, options.settings);
    if (sol.status == sdp::Status::NumericalLimit) {
      throw SolverFailure("feasibility solve at t = " + std::to_string(t) + " did not converge: " + sol.message);
    }
    std::optional<RobustnessResult> out;
    if (sol.status == sdp::Status::Optimal) {
      out = RobustnessResult{t, extract(spec, prog, sol, t), diagnostics_of(sol)};
      out->diagnostics.bisection = true;
    }
    return out;
  };
  auto best = attempt(1.0);
  if (best) return *best;
  best = attempt(0.0);
  if (!best) throw SolverFailure("program is infeasible even at visibility 0");
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > options.bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (auto r = attempt(mid)) {
      best = std::move(r);
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return *best;
}

}  // namespace

const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Joint:
      return "joint";
    case CertificateKind::KOutcome:
      return "k_outcome";
    case CertificateKind::FixedAssignment:
      return "fixed_assignment";
    case CertificateKind::ProjectiveDecomposition:
      return "projective_decomposition";
  }
  return "unknown";
}

std::vector<int> AssignmentSpec::targets_of(int simulator) const {
  std::vector<int> out;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].at(static_cast<std::size_t>(simulator)) > 0.0) out.push_back(static_cast<int>(l));
  }
  return out;
}

void AssignmentSpec::validate(int targets) const {
  if (simulators < 1) throw InvalidArgument("assignment needs at least one simulator");
  if (static_cast<int>(weights.size()) != targets) {
    throw DimensionMismatch("assignment has " + std::to_string(weights.size()) + " rows for " +
                            std::to_string(targets) + " targets");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const auto& row = weights[l];
    if (static_cast<int>(row.size()) != simulators) throw DimensionMismatch("assignment row has wrong length");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw InvalidArgument("assignment weights must be nonnegative");
      sum += p;
    }
    if (sum == 0.0) throw InvalidArgument("target " + std::to_string(l) + " has an empty assignment");
    if (std::abs(sum - 1.0) > kValidationTolerance) {
      throw InvalidArgument("assignment row " + std::to_string(l) + " does not sum to 1");
    }
  }
}

std::vector<std::vector<int>> k_subsets(int n, int k) {
  if (k < 0 || k > n) throw InvalidArgument("subset size out of range");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    if (static_cast<int>(out.size()) > kMaxSubsets) {
      throw SizeGuardExceeded("more than " + std::to_string(kMaxSubsets) + " subsets");
    }
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

RobustnessResult robustness(const ProgramSpec& spec, const RobustnessOptions& options) {
  if (options.bisection) return bisect(spec, options);
  const Program prog = build(spec, std::nullopt);
  const auto sol = sdp::solve(prog.problem, options.settings);
  if (sol.status == sdp::Status::NumericalLimit) {
    auto result = bisect(spec, options);
    result.diagnostics.message = "single solve stopped (" + sol.message + "); used bisection";
    return result;
  }
  if (sol.status != sdp::Status::Optimal) {
    throw SolverFailure(std::string("robustness program reported ") + sdp::to_string(sol.status));
  }
  const double t = std::clamp(sol.value(*prog.t.var), 0.0, 1.0);
  return RobustnessResult{t, extract(spec, prog, sol, t), diagnostics_of(sol)};
}

FeasibilityReport feasible_at(const ProgramSpec& spec, double t, const sdp::Settings& settings) {
  const Program prog = build(spec, t);
  const auto sol = sdp::feasibility(prog.problem, settings);
  FeasibilityReport r;
  r.status = sol.status;
  r.margin = sol.objective;
  if (sol.status == sdp::Status::Infeasible) {
    r.ray = sol.duals;
    r.farkas = sdp::check_farkas(prog.problem, r.ray);
  }
  return r;
}

RobustnessResult jm_robustness(const std::vector<Povm>& targets, const RobustnessOptions& options) {
  return robustness({ProgramKind::Jm, targets, 0, {}}, options);
}

SubsetProfile subset_compat_profile(const std::vector<Povm>& targets, int s, const RobustnessOptions& options) {
  const int m = static_cast<int>(targets.size());
  if (s < 2 || s > m) throw InvalidArgument("subset size must lie between 2 and the number of targets");
  SubsetProfile profile;
  profile.size = s;
  for (const auto& subset : k_subsets(m, s)) {
    std::vector<Povm> chosen;
    for (int l : subset) chosen.push_back(targets[static_cast<std::size_t>(l)]);
    profile.entries.push_back({subset, jm_robustness(chosen, options).t_star});
  }
  const auto [lo, hi] = std::minmax_element(profile.entries.begin(), profile.entries.end(),
                                            [](const auto& a, const auto& b) { return a.t_star < b.t_star; });
  profile.min = lo->t_star;
  profile.max = hi->t_star;
  return profile;
}

RobustnessResult k_outcome_robustness(const Povm& target, int k, const RobustnessOptions& options) {
  return robustness({ProgramKind::KOutcome, {target}, k, {}}, options);
}

RobustnessResult fixed_assignment_robustness(const std::vector<Povm>& targets, const AssignmentSpec& spec,
                                             const RobustnessOptions& options) {
  return robustness({ProgramKind::FixedAssignment, targets, 0, spec}, options);
}

RobustnessResult projective_robustness_qubit(const Povm& target, const RobustnessOptions& options) {
  return robustness({ProgramKind::Projective, {target}, 0, {}}, options);
}

namespace {

// Set partitions of {0..m-1} into at most j blocks, as block labels in canonical order.
void partitions(int m, int j, std::vector<int>& cur, int used, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == m) {
    out.push_back(cur);
    return;
  }
  for (int b = 0; b <= std::min(used, j - 1); ++b) {
    cur.push_back(b);
    partitions(m, j, cur, std::max(used, b + 1), out);
    cur.pop_back();
  }
}

void simplex_grid(int parts, int steps, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == parts - 1) {
    int rest = steps;
    for (int c : cur) rest -= c;
    cur.push_back(rest);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  int used = 0;
  for (int c : cur) used += c;
  for (int c = 0; c <= steps - used; ++c) {
    cur.push_back(c);
    simplex_grid(parts, steps, cur, out);
    cur.pop_back();
  }
}

}  // namespace

HeuristicSearchResult heuristic_assignment_search(const std::vector<Povm>& targets, int simulators,
                                                  double grid_step, const RobustnessOptions& options) {
  const int m = static_cast<int>(targets.size());
  if (simulators < 1) throw InvalidArgument("need at least one simulator");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw InvalidArgument("grid step must lie in (0, 1]");
  const int steps = static_cast<int>(std::lround(1.0 / grid_step));

  std::vector<std::vector<int>> labelings;
  std::vector<int> cur;
  partitions(m, simulators, cur, 0, labelings);
  std::vector<std::vector<int>> grid;
  std::vector<int> gcur;
  simplex_grid(simulators, steps, gcur, grid);

  HeuristicSearchResult best;
  best.t_lower_bound = -1.0;
  auto consider = [&](const AssignmentSpec& spec) {
    auto r = fixed_assignment_robustness(targets, spec, options);
    ++best.programs_solved;
    if (r.t_star > best.t_lower_bound) {
      best.t_lower_bound = r.t_star;
      best.best = spec;
      best.result = std::move(r);
    }
  };
  for (const auto& labels : labelings) {
    AssignmentSpec spec;
    spec.simulators = simulators;
    for (int l = 0; l < m; ++l) {
      std::vector<double> row(static_cast<std::size_t>(simulators), 0.0);
      row[static_cast<std::size_t>(labels[static_cast<std::size_t>(l)])] = 1.0;
      spec.weights.push_back(row);
    }
    consider(spec);
    if (simulators < 2) continue;
    for (int l = 0; l < m; ++l) {
      for (const auto& g : grid) {
        if (std::count(g.begin(), g.end(), 0) == simulators - 1) continue;
        AssignmentSpec mixed = spec;
        for (int j = 0; j < simulators; ++j) {
          mixed.weights[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] =
              static_cast<double>(g[static_cast<std::size_t>(j)]) / steps;
        }
        consider(mixed);
      }
    }
  }
  return best;
}

}  // namespace povmsim
