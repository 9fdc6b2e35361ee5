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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace povmsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Tolerance on |H_ij - conj(H_ji)| accepted when building an operator from raw entries.
inline constexpr double kHermiticityTolerance = 1e-12;

/// A d x d complex Hermitian matrix, d >= 2. Immutable once built.
///
/// Raw input is checked against kHermiticityTolerance (scaled by the largest
/// entry) and then replaced by its exact Hermitian part (H + H^dagger) / 2.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& entries);

  /// Takes the Hermitian part of `m` without validating it. For results of
  /// arithmetic that is Hermitian up to rounding.
  static HermitianOperator hermitian_part(const ComplexMatrix& m);
  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);
  /// |psi><psi| for a (not necessarily normalized) vector.
  static HermitianOperator projector(const ComplexVector& psi);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const;
  /// Tr(this * other), always real for Hermitian arguments.
  double inner(const HermitianOperator& other) const;
  /// Largest entrywise modulus of this - other.
  double max_abs_diff(const HermitianOperator& other) const;
  double max_abs() const;

  HermitianOperator& operator+=(const HermitianOperator& rhs);
  HermitianOperator& operator-=(const HermitianOperator& rhs);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator lhs, const HermitianOperator& rhs) { return lhs += rhs; }
  friend HermitianOperator operator-(HermitianOperator lhs, const HermitianOperator& rhs) { return lhs -= rhs; }
  friend HermitianOperator operator*(double s, HermitianOperator h) { return h *= s; }
  friend HermitianOperator operator*(HermitianOperator h, double s) { return h *= s; }

  /// U H U^dagger.
  HermitianOperator conjugated(const ComplexMatrix& unitary) const;

 private:
  struct Unchecked {};
  HermitianOperator(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Coefficients of H = a I + sum_k v_k lambda_k in the generalized Pauli basis.
struct BlochDecomposition {
  double identity_coeff = 0.0;
  RealVector vector;
};

/// Traceless Hermitian basis lambda_1..lambda_{d^2-1} with Tr(lambda_i lambda_j) = 2 delta_ij.
///
/// Ordered column by column: for k = 1..d-1 the symmetric and antisymmetric
/// off-diagonal pairs (j, k), j < k, followed by the k-th diagonal generator.
/// This gives the Pauli matrices (x, y, z) for d = 2 and the Gell-Mann
/// matrices lambda_1..lambda_8 in their usual order for d = 3.
const std::vector<HermitianOperator>& generalized_pauli_basis(int dim);

HermitianOperator from_bloch(double identity_coeff, const RealVector& vector, int dim);
BlochDecomposition to_bloch(const HermitianOperator& h);

/// Sign flip of the traceless part: a I + v.lambda -> a I - v.lambda.
/// The result is not necessarily positive for d > 2.
HermitianOperator antipodal(const HermitianOperator& h);

/// [[Re H, -Im H], [Im H, Re H]]; its spectrum is that of H with every
/// eigenvalue doubled in multiplicity.
RealMatrix embed_real(const HermitianOperator& h);

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
RealVector jacobi_eigenvalues(RealMatrix a);

/// Eigenvalues of H in ascending order (Jacobi on the real embedding).
std::vector<double> eigenvalues(const HermitianOperator& h);
double min_eigenvalue(const HermitianOperator& h);
bool is_psd(const HermitianOperator& h, double tol);

/// A quantum state: PSD within 1e-9 with unit trace within 1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op);

  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix pure(const ComplexVector& psi);

  const HermitianOperator& op() const { return op_; }
  int dim() const { return op_.dim(); }

 private:
  HermitianOperator op_;
};

}  // namespace povmsim
