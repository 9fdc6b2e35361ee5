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

#include <optional>
#include <string>
#include <vector>

#include "povmsim/povm.hpp"
#include "povmsim/sdp.hpp"

namespace povmsim {

inline constexpr int kMaxJointOutcomes = 4096;
inline constexpr int kMaxSubsets = 512;

enum class CertificateKind { Joint, KOutcome, FixedAssignment, ProjectiveDecomposition };

const char* to_string(CertificateKind kind);

/// A sub-POVM supported on `support` (effects outside it are zero), used with probability `weight`.
struct KOutcomeComponent {
  std::vector<int> support;
  double weight = 0.0;
  Povm povm;
};

/// Fixed pre-processing: weights[l][j] = p(j | target l).
struct AssignmentSpec {
  int simulators = 0;
  std::vector<std::vector<double>> weights;

  /// Targets with p(j | l) > 0, in increasing order.
  std::vector<int> targets_of(int simulator) const;
  void validate(int targets) const;
};

/// Joint measurement realized by one simulator for the targets it serves.
struct SimulatorJoint {
  int simulator = 0;
  std::vector<int> targets;
  JointMeasurement joint;
};

struct WeightedPovm {
  double weight = 0.0;
  Povm povm;
};

/// Explicit decomposition data witnessing simulability at `visibility`.
/// Only the fields belonging to `kind` are populated.
struct SimulationCertificate {
  CertificateKind kind = CertificateKind::Joint;
  double visibility = 0.0;

  std::optional<JointMeasurement> joint;

  int k = 0;
  std::vector<KOutcomeComponent> components;

  AssignmentSpec assignment;
  std::vector<SimulatorJoint> simulators;

  std::vector<WeightedPovm> projective;
  std::optional<WeightedPovm> trivial;
};

struct SolverDiagnostics {
  sdp::Status status = sdp::Status::NumericalLimit;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_gap = 0.0;
  bool bisection = false;
  std::string message;
};

struct RobustnessResult {
  double t_star = 0.0;
  SimulationCertificate certificate;
  SolverDiagnostics diagnostics;
};

struct RobustnessOptions {
  sdp::Settings settings;
  /// Bisection over feasibility problems instead of one joint solve.
  bool bisection = false;
  double bisection_tol = 1e-7;
};

enum class ProgramKind { Jm, KOutcome, FixedAssignment, Projective };

/// Which robustness program to set up, and its parameters.
struct ProgramSpec {
  ProgramKind kind = ProgramKind::Jm;
  std::vector<Povm> targets;
  int k = 0;
  AssignmentSpec assignment;
};

RobustnessResult robustness(const ProgramSpec& spec, const RobustnessOptions& options = {});

struct FeasibilityReport {
  sdp::Status status = sdp::Status::NumericalLimit;
  double margin = 0.0;
  std::vector<double> ray;
  sdp::FarkasCheck farkas;
};

/// Decides whether the program admits a certificate at the fixed visibility t.
FeasibilityReport feasible_at(const ProgramSpec& spec, double t, const sdp::Settings& settings = {});

RobustnessResult jm_robustness(const std::vector<Povm>& targets, const RobustnessOptions& options = {});

struct SubsetRobustness {
  std::vector<int> subset;
  double t_star = 0.0;
};

struct SubsetProfile {
  int size = 0;
  std::vector<SubsetRobustness> entries;
  double min = 0.0;
  double max = 0.0;
};

/// jm_robustness of every size-s subset, in lexicographic subset order.
SubsetProfile subset_compat_profile(const std::vector<Povm>& targets, int s, const RobustnessOptions& options = {});

RobustnessResult k_outcome_robustness(const Povm& target, int k, const RobustnessOptions& options = {});

RobustnessResult fixed_assignment_robustness(const std::vector<Povm>& targets, const AssignmentSpec& spec,
                                             const RobustnessOptions& options = {});

RobustnessResult projective_robustness_qubit(const Povm& target, const RobustnessOptions& options = {});

/// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> k_subsets(int n, int k);

/// n x C(n,k) table whose column j holds p_j B^(j) for the j-th k-subset.
JointMeasurement certificate_to_joint_table(const SimulationCertificate& cert, const Povm& target);

/// Inverse of certificate_to_joint_table.
SimulationCertificate joint_table_to_certificate(const JointMeasurement& table, int k, double visibility);

/// Splits a qubit POVM P into projective and trivial parts from a joint
/// measurement M of P and its antipodal POVM.
SimulationCertificate extract_projective_decomposition(const Povm& target, const JointMeasurement& m,
                                                       double visibility);

struct AntipodalTable {
  Povm partner;
  JointMeasurement joint;
};

/// Joint table of Phi_t(target) and its swapped partner from a dichotomic k = 2 certificate.
AntipodalTable antipodal_joint_table(const Povm& target, const SimulationCertificate& cert);

/// Classical processing of a set: for each new POVM k, pre[k] mixes the
/// targets and post[k][l] relabels the outcomes of target l.
std::vector<Povm> process_set(const std::vector<Povm>& targets, const std::vector<PreProcessing>& pre,
                              const std::vector<std::vector<PostProcessingMap>>& post);

/// Merges a fixed-assignment certificate whose targets share identical
/// pre-processing rows into one joint measurement of all targets.
JointMeasurement collapse_shared_preprocessing(const SimulationCertificate& cert);

/// Heuristic J-simulator search: every deterministic assignment up to
/// relabeling, plus, for each of them, one target at a time spread over the
/// simulators on a weight grid. The result is a lower bound only.
struct HeuristicSearchResult {
  double t_lower_bound = 0.0;
  AssignmentSpec best;
  RobustnessResult result;
  int programs_solved = 0;
};

HeuristicSearchResult heuristic_assignment_search(const std::vector<Povm>& targets, int simulators,
                                                  double grid_step = 0.05, const RobustnessOptions& options = {});

}  // namespace povmsim
