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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "povmsim/simulability.hpp"

// Solver-free checks of simulation certificates and robustness values.
namespace povmsim::oracle {

struct VerificationReport {
  bool passed = false;
  double tolerance = 0.0;
  double max_error = 0.0;
  /// One entry per reconstructed effect (or per trial, for monotonicity).
  std::vector<double> errors;
  std::vector<std::string> notes;
};

/// Effects the certificate's protocol produces for each target, by plain arithmetic.
std::vector<std::vector<HermitianOperator>> reconstruct(const std::vector<Povm>& targets,
                                                        const SimulationCertificate& cert);

/// Compares the reconstruction with Phi_t(targets) entrywise and checks
/// weights and positivity of every component.
VerificationReport verify_certificate(const std::vector<Povm>& targets, const SimulationCertificate& cert,
                                      double tol);

/// Outcome distribution of the certificate's protocol for target l.
std::vector<double> protocol_statistics(const std::vector<Povm>& targets, const SimulationCertificate& cert, int l,
                                        const DensityMatrix& rho);

/// Compares Born statistics of Phi_t(targets) with the protocol on random
/// pure and mixed states; errors are total-variation distances.
VerificationReport statistics_check(const std::vector<Povm>& targets, const SimulationCertificate& cert,
                                    int n_states, double tol, std::uint64_t seed);

/// Haar-random pure state.
DensityMatrix random_pure_state(int dim, std::mt19937_64& rng);
/// Trace-normalized Wishart state.
DensityMatrix random_mixed_state(int dim, std::mt19937_64& rng);

struct GridResult {
  double t_lower = 0.0;
  std::optional<SimulationCertificate> certificate;
};

/// Lower bound on the joint-measurability robustness of two dichotomic
/// qubit POVMs from a grid search over the joint effect M_00 = g0 I + g.sigma.
GridResult qubit_pair_jm_grid(const Povm& a, const Povm& b, int resolution);

struct MonotonicityOptions {
  int trials = 20;
  std::uint64_t seed = 1;
  double tolerance = 1e-6;
  RobustnessOptions robustness;
};

/// Random classical processings of the set never lower its robustness.
VerificationReport monotonicity_check(const std::vector<Povm>& targets, const MonotonicityOptions& options = {});

/// One random classical processing (pre- and post-processing) of a set.
struct RandomProcessing {
  std::vector<PreProcessing> pre;
  std::vector<std::vector<PostProcessingMap>> post;
};
RandomProcessing random_processing(const std::vector<Povm>& targets, std::mt19937_64& rng);

}  // namespace povmsim::oracle
