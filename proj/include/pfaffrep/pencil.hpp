/*
 * Copyright 2026 The pfaffrep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Skew-symmetric linear pencils A(x) = x0*A0 + x1*A1 + x2*A2 and their
// pfaffians, pfaffian minors, adjoints and kernels.

#include <array>
#include <vector>

#include "pfaffrep/field_poly.hpp"

namespace pfaffrep {

class SkewPencil {
 public:
  /// Throws SkewSymmetryViolation (naming the offending entry) unless every
  /// A_k is skew within zero_tol relative to max(1, |A_k|max). Stored
  /// matrices are exactly skew.
  explicit SkewPencil(std::array<Matrix, 3> coefficients, double zero_tol = Tolerances{}.zero_tol);

  int half_degree() const { return static_cast<int>(a_[0].rows()) / 2; }
  int size() const { return static_cast<int>(a_[0].rows()); }

  const Matrix& coefficient(int k) const { return a_.at(static_cast<std::size_t>(k)); }
  const std::array<Matrix, 3>& coefficients() const { return a_; }

  Matrix at(const std::array<Complex, 3>& x) const;
  Matrix at(const ProjPoint& p) const { return at(p.coords()); }

  /// Entry (i,j) as the linear form a^0_ij x0 + a^1_ij x1 + a^2_ij x2.
  LinearForm entry(int i, int j) const;

  /// Same A1, A2 with a new constant term.
  SkewPencil with_constant_term(const Matrix& a0) const;

  /// Largest entry modulus over A0, A1, A2.
  double scale() const;

 private:
  std::array<Matrix, 3> a_;
};

/// d x d determinantal representation M(x) = x0*M0 + x1*M1 + x2*M2.
struct DetRep {
  std::array<Matrix, 3> m;

  int half_degree() const { return static_cast<int>(m[0].rows()); }
  Matrix at(const std::array<Complex, 3>& x) const;
  Matrix at(const ProjPoint& p) const { return at(p.coords()); }
  /// Throws DegreeMismatch on inconsistent dimensions.
  void validate() const;
};

struct KernelBasis {
  ProjPoint point;
  Matrix vectors;  // 2d x 2, orthonormal columns
  double residual = 0.0;  // |A v| / |A|
};

/// Symbolic pfaffian, degree d. Pf([[0,1],[-1,0]]) = 1.
HomPoly pfaffian(const SkewPencil& p);

/// Pfaffian of the pencil with rows and columns i, j (0-based) removed.
/// Degree d-1; the empty pfaffian is the constant 1.
HomPoly pfaffian_minor(const SkewPencil& p, int i, int j);

/// Numerical pfaffian of a skew matrix (skew Gaussian elimination with
/// pivoting).
Complex pfaffian_value(const Matrix& a);

/// Adjoint with entries (-1)^(i+j) Pf^{ij} above the diagonal, so that
/// adj * A = Pf(A) * Id.
Matrix pfaffian_adjoint(const Matrix& a);
Matrix pfaffian_adjoint_at(const SkewPencil& p, const ProjPoint& pt);

/// dPf/dx_k assembled from pfaffian minors:
///   sum_{i<j} (-1)^(i+j+1) a^k_ij Pf^{ij}.
HomPoly jacobi_derivative(const SkewPencil& p, int k);

/// Orthonormal basis of the numerical null space (singular values at most
/// rank_tol * sigma_max).
Matrix null_space(const Matrix& a, double rank_tol);

/// Two-dimensional kernel at a curve point. Throws RankDeficiency if the
/// numerical corank is not exactly 2.
KernelBasis kernel_at(const SkewPencil& p, const ProjPoint& pt, const Tolerances& tol);

/// A_k -> X A_k X^t. Throws SingularTransform if |det X| <= zero_tol.
SkewPencil congruence(const SkewPencil& p, const Matrix& x, const Tolerances& tol);

/// [[0, M], [-M^t, 0]].
SkewPencil decomposable_from(const DetRep& m);

/// u v^t - v u^t.
Matrix wedge_to_matrix(const Vector& u, const Vector& v);

/// Symbolic determinant of a determinantal representation (Laplace
/// expansion with memoization).
HomPoly determinant(const DetRep& m);

/// Largest entry modulus.
double max_abs(const Matrix& m);

/// Rotate v so that its largest-modulus entry is real and positive.
Vector fix_phase(const Vector& v);

}  // namespace pfaffrep
