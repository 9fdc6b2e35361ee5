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

#include "povmsim/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "povmsim/errors.hpp"

namespace povmsim {

namespace {

void require_dim(int dim) {
  if (dim < 2) {
    throw InvalidArgument("operator dimension must be at least 2, got " + std::to_string(dim));
  }
}

std::vector<HermitianOperator> build_basis(int dim) {
  std::vector<HermitianOperator> basis;
  basis.reserve(static_cast<std::size_t>(dim * dim - 1));
  const Complex i_unit(0.0, 1.0);
  for (int k = 1; k < dim; ++k) {
    for (int j = 0; j < k; ++j) {
      ComplexMatrix sym = ComplexMatrix::Zero(dim, dim);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      basis.push_back(HermitianOperator::hermitian_part(sym));
      ComplexMatrix anti = ComplexMatrix::Zero(dim, dim);
      anti(j, k) = -i_unit;
      anti(k, j) = i_unit;
      basis.push_back(HermitianOperator::hermitian_part(anti));
    }
    ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
    const double norm = std::sqrt(2.0 / (k * (k + 1.0)));
    for (int j = 0; j < k; ++j) diag(j, j) = norm;
    diag(k, k) = -k * norm;
    basis.push_back(HermitianOperator::hermitian_part(diag));
  }
  return basis;
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& entries) {
  if (entries.rows() != entries.cols()) {
    throw DimensionMismatch("operator must be square");
  }
  require_dim(static_cast<int>(entries.rows()));
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double skew = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (!(skew <= kHermiticityTolerance * scale)) {
    throw InvalidArgument("operator is not Hermitian (max |H - H^dagger| = " + std::to_string(skew) + ")");
  }
  m_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator HermitianOperator::hermitian_part(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("operator must be square");
  require_dim(static_cast<int>(m.rows()));
  return HermitianOperator(ComplexMatrix(0.5 * (m + m.adjoint())), Unchecked{});
}

HermitianOperator HermitianOperator::identity(int dim) {
  require_dim(dim);
  return HermitianOperator(ComplexMatrix::Identity(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::zero(int dim) {
  require_dim(dim);
  return HermitianOperator(ComplexMatrix::Zero(dim, dim), Unchecked{});
}

HermitianOperator HermitianOperator::projector(const ComplexVector& psi) {
  return hermitian_part(psi * psi.adjoint());
}

double HermitianOperator::trace() const { return m_.trace().real(); }

double HermitianOperator::inner(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw DimensionMismatch("inner product of operators with different dimensions");
  // Tr(A B) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (m_.array() * other.m_.conjugate().array()).sum().real();
}

double HermitianOperator::max_abs_diff(const HermitianOperator& other) const {
  if (other.dim() != dim()) throw DimensionMismatch("comparing operators with different dimensions");
  return (m_ - other.m_).cwiseAbs().maxCoeff();
}

double HermitianOperator::max_abs() const { return m_.cwiseAbs().maxCoeff(); }

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& rhs) {
  if (rhs.dim() != dim()) throw DimensionMismatch("adding operators with different dimensions");
  m_ += rhs.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& rhs) {
  if (rhs.dim() != dim()) throw DimensionMismatch("subtracting operators with different dimensions");
  m_ -= rhs.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianOperator HermitianOperator::conjugated(const ComplexMatrix& unitary) const {
  if (unitary.rows() != dim() || unitary.cols() != dim()) {
    throw DimensionMismatch("conjugating unitary has the wrong shape");
  }
  return hermitian_part(unitary * m_ * unitary.adjoint());
}

const std::vector<HermitianOperator>& generalized_pauli_basis(int dim) {
  require_dim(dim);
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const std::vector<HermitianOperator>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[dim];
  if (!slot) slot = std::make_unique<const std::vector<HermitianOperator>>(build_basis(dim));
  return *slot;
}

HermitianOperator from_bloch(double identity_coeff, const RealVector& vector, int dim) {
  require_dim(dim);
  if (vector.size() != dim * dim - 1) {
    throw DimensionMismatch("Bloch vector of length " + std::to_string(vector.size()) + " does not match d = " +
                            std::to_string(dim) + " (expected " + std::to_string(dim * dim - 1) + ")");
  }
  const auto& basis = generalized_pauli_basis(dim);
  ComplexMatrix m = identity_coeff * ComplexMatrix::Identity(dim, dim);
  for (int k = 0; k < vector.size(); ++k) m += vector[k] * basis[k].matrix();
  return HermitianOperator::hermitian_part(m);
}

BlochDecomposition to_bloch(const HermitianOperator& h) {
  const int d = h.dim();
  const auto& basis = generalized_pauli_basis(d);
  BlochDecomposition out;
  out.identity_coeff = h.trace() / d;
  out.vector.resize(d * d - 1);
  for (int k = 0; k < d * d - 1; ++k) out.vector[k] = 0.5 * h.inner(basis[k]);
  return out;
}

HermitianOperator antipodal(const HermitianOperator& h) {
  // a I - v.lambda = 2 a I - H.
  const double a = h.trace() / h.dim();
  return HermitianOperator::hermitian_part(2.0 * a * ComplexMatrix::Identity(h.dim(), h.dim()) - h.matrix());
}

RealMatrix embed_real(const HermitianOperator& h) {
  const int d = h.dim();
  RealMatrix out(2 * d, 2 * d);
  const RealMatrix re = h.matrix().real();
  const RealMatrix im = h.matrix().imag();
  out.topLeftCorner(d, d) = re;
  out.topRightCorner(d, d) = -im;
  out.bottomLeftCorner(d, d) = im;
  out.bottomRightCorner(d, d) = re;
  return out;
}

RealVector jacobi_eigenvalues(RealMatrix a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("Jacobi eigensolver needs a square matrix");
  a = 0.5 * (a + a.transpose()).eval();
  const double scale = a.norm();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-34 * scale * scale || off == 0.0) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }
  RealVector eig = a.diagonal();
  std::sort(eig.data(), eig.data() + eig.size());
  return eig;
}

std::vector<double> eigenvalues(const HermitianOperator& h) {
  const RealVector doubled = jacobi_eigenvalues(embed_real(h));
  std::vector<double> out(static_cast<std::size_t>(h.dim()));
  // The embedding repeats each eigenvalue twice; average the pairs.
  for (int i = 0; i < h.dim(); ++i) out[static_cast<std::size_t>(i)] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return out;
}

double min_eigenvalue(const HermitianOperator& h) { return jacobi_eigenvalues(embed_real(h))[0]; }

bool is_psd(const HermitianOperator& h, double tol) { return min_eigenvalue(h) >= -tol; }

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1.0) > 1e-10) {
    throw InvalidArgument("density matrix must have unit trace, got " + std::to_string(op_.trace()));
  }
  const double lo = min_eigenvalue(op_);
  if (lo < -1e-9) throw NotPositive(0, lo);
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianOperator::identity(dim) * (1.0 / dim));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw InvalidArgument("pure state vector is zero");
  return DensityMatrix(HermitianOperator::projector(psi / norm));
}

}  // namespace povmsim
