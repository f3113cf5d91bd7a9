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

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "pfaffrep/pencil.hpp"

namespace pfaffrep {

/// Coefficient order of a ternary cubic
///   w000 x^3 + w111 y^3 + w222 z^3 + 6 w012 xyz + 3 (w001 x^2y + w002 x^2z
///   + w011 xy^2 + w022 xz^2 + w112 y^2z + w122 yz^2).
inline constexpr std::array<std::string_view, 10> kCubicNames{
    "w000", "w111", "w222", "w012", "w001", "w002", "w011", "w022", "w112", "w122"};

/// Exponent and multinomial weight of each named coefficient.
const std::array<Exponent, 10>& cubic_exponents();
const std::array<double, 10>& cubic_weights();

/// A fixed cubic.
struct CubicCoeffs {
  std::array<Complex, 10> w{};

  HomPoly to_poly() const;
  static CubicCoeffs from_poly(const HomPoly& cubic);
};

/// A cubic whose coefficients are linear forms in (x0, x1, x2).
struct CubicPencil {
  std::array<LinearForm, 10> w{};

  CubicCoeffs at(const std::array<Complex, 3>& x) const;
  CubicCoeffs at(const ProjPoint& p) const { return at(p.coords()); }
};

/// P_x(F) = x0 dF/dx + x1 dF/dy + x2 dF/dz for a quartic F.
CubicPencil polar_cubic(const HomPoly& quartic);

/// Inverse of polar_cubic by least squares over the 15 quartic coefficients.
/// Throws InconsistentPolarData.
HomPoly integrate_polar(const CubicPencil& w, const Tolerances& tol);

/// The 8x8 Aronhold matrix of a fixed cubic.
Matrix aronhold_matrix(const CubicCoeffs& w);
/// The Aronhold matrix with linear-form entries.
SkewPencil aronhold_pencil(const CubicPencil& w);

/// Pf of the Aronhold matrix of the polar cubic: a quartic.
HomPoly scorza_map(const HomPoly& quartic);

/// Determinant of the 3x3 Hessian of a cubic (itself a cubic).
HomPoly hessian_determinant(const HomPoly& cubic);

struct LineFactorization {
  std::array<LinearForm, 3> lines;  // unit 2-norm coefficient vectors
  Complex scale;                    // cubic = scale * l1 l2 l3
  double residual = 0.0;
};

/// Splits a product of three distinct lines. Throws NotAProductOfLines.
LineFactorization factor_three_lines(const HomPoly& cubic, const Tolerances& tol, std::uint64_t seed = 0);

struct PolarTriangle {
  std::array<LinearForm, 3> lines;  // P = g1^3 + g2^3 + g3^3
  std::array<ProjPoint, 3> vertices;  // vertex k = intersection of the other two lines
  double residual = 0.0;
};

/// Throws DegenerateHessian.
PolarTriangle polar_triangle(const HomPoly& quartic, const ProjPoint& lambda, const Tolerances& tol,
                             std::uint64_t seed = 0);

/// One-dimensional kernel of a symmetric matrix; CorankNotOne otherwise.
Vector corank_one_kernel(const Matrix& m, const Tolerances& tol);

struct ScorzaRelation {
  bool related = false;
  double residual = 0.0;
};

/// max_k |v^t M_k u| / (max_k |M_k| |v| |u|) for the kernels v of M(lambda)
/// and u of M(mu).
ScorzaRelation scorza_related(const DetRep& m, const ProjPoint& lambda, const ProjPoint& mu,
                              const Tolerances& tol);

/// Throws SchemaError unless every M_k is symmetric within zero_tol.
void require_symmetric(const DetRep& m, const Tolerances& tol);

struct ThetaEvidence {
  std::vector<ProjPoint> samples;
  std::vector<std::array<ProjPoint, 3>> triangles;
  std::vector<std::vector<double>> residuals;  // [candidate][3 * sample + k]
  std::vector<double> det_scale_residuals;     // det M against S(F), up to scale
};

struct ThetaMatch {
  int index = -1;
  ThetaEvidence evidence;
};

/// The unique candidate whose kernels pair to zero along polar triangles of
/// sampled points of S(F). Throws NoMatch, MultipleMatches.
ThetaMatch identify_theta(const HomPoly& quartic, const std::vector<DetRep>& candidates, int samples,
                          const Tolerances& tol, std::uint64_t seed = 0);

struct Bitangent {
  LinearForm form;
  double tangency_residual = 0.0;  // worst distance inside root pairs
  bool contained = false;          // the line is a component of the curve
};

/// x -> b_i^t M(x) b_j for two points of the base locus of the net.
/// Throws NotOnBaseLocus.
Bitangent bitangent_from_octad(const DetRep& m, const Vector& bi, const Vector& bj, const Tolerances& tol,
                               std::uint64_t seed = 0);

/// Intersection of two lines as a projective point.
ProjPoint intersect_lines(const LinearForm& a, const LinearForm& b, double zero_tol);

}  // namespace pfaffrep
