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

// Incidence geometry of a pfaffian representation and its elementary
// transformations. The affine formulas live in the chart x0 = 1 with
// sigma1 = -A2, sigma2 = A1 and gamma = A0.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pfaffrep/pencil.hpp"

namespace pfaffrep {

struct CurvePoint {
  ProjPoint pt;
  double curve_residual = 0.0;
};

/// Throws NotOnCurve if the relative residual exceeds match_tol.
CurvePoint make_curve_point(const HomPoly& f, const ProjPoint& pt, const Tolerances& tol);

/// Relative kernel residual |A(pt) v| / (|A(pt)|_F |v|).
double kernel_residual(const SkewPencil& p, const ProjPoint& pt, const Vector& v);

/// u^t A(x) v, or nothing when the form vanishes. For lambda = mu and
/// independent v, u this is the tangent line at lambda.
/// Throws VectorNotInKernel.
std::optional<LinearForm> line_through(const SkewPencil& p, const ProjPoint& lambda, const Vector& v,
                                       const ProjPoint& mu, const Vector& u, const Tolerances& tol);

/// Tangent at a curve point from two independent kernel vectors.
LinearForm tangent_at(const SkewPencil& p, const ProjPoint& lambda, const Tolerances& tol);

/// Tangent from the adjoint: x -> Trace(A(x) adj(lambda)) / 2.
LinearForm tangent_from_adjoint(const SkewPencil& p, const ProjPoint& lambda);

/// K = v^t (t1 sigma1 + t2 sigma2) u / (t1 (l1 - m1) + t2 (l2 - m2)).
/// Throws SamePoint, PointAtInfinity, DegenerateDenominator.
Complex k_constant(const SkewPencil& p, const ProjPoint& lambda, const Vector& v, const ProjPoint& mu,
                   const Vector& u, Complex t1, Complex t2, const Tolerances& tol);

/// K with the parameter t = conj(lambda - mu), which maximizes the
/// denominator.
Complex k_constant(const SkewPencil& p, const ProjPoint& lambda, const Vector& v, const ProjPoint& mu,
                   const Vector& u, const Tolerances& tol);

enum class PairKind { Inadmissible, Semiadmissible, Admissible };

struct PairClassification {
  PairKind kind = PairKind::Inadmissible;
  Matrix kappa;        // kappa(i,j) = K(basis_lambda_i, basis_mu_j)
  Matrix basis_lambda;  // 2d x 2
  Matrix basis_mu;      // 2d x 2
  std::optional<std::pair<Vector, Vector>> special_vectors;  // (u_lambda, u_mu)
};

// Kind is read off the numerical rank of kappa: zero, one (the unique
// vectors with K(u_lambda, .) = K(., u_mu) = 0 are the left and right null
// directions) or two.
PairClassification classify_pair(const SkewPencil& p, const ProjPoint& lambda, const ProjPoint& mu,
                                 const Tolerances& tol);

/// For v at lambda, the vector u at mu with K(v, u) = 0 (null direction of
/// the row v^t kappa).
Vector zero_pairing_partner(const PairClassification& c, const Vector& v);

/// Points mu with u in Ker A(mu), found on the line
/// mu_i = lambda_i - s v^t sigma_i u. Throws NoAdmissiblePartner when that
/// line degenerates.
std::vector<CurvePoint> partner_points(const SkewPencil& p, const ProjPoint& lambda, const Vector& v,
                                       const Vector& u, const Tolerances& tol);

enum class TransformKind { TypeI, TypeII, Conint };

struct ConintData {
  std::vector<ProjPoint> points;
  Matrix vectors;  // 2d x m
  std::vector<Complex> rhos;
  Matrix gamma_matrix;  // m x m
};

struct TransformRecord {
  TransformKind kind = TransformKind::TypeII;
  ProjPoint lambda{1.0, 0.0, 0.0};
  std::optional<ProjPoint> mu;
  Vector v;
  std::optional<Vector> u;
  Complex rho{};
  Complex k{};  // Type I only
  std::optional<ConintData> conint;
  Matrix gamma_before;
  Matrix gamma_after;
};

struct TransformResult {
  SkewPencil pencil;
  TransformRecord record;
};

/// Type I step; throws NotAdmissible when K vanishes.
TransformResult type1(const SkewPencil& p, const ProjPoint& lambda, const ProjPoint& mu, const Vector& v,
                      const Vector& u, const Tolerances& tol);

/// gamma + 2 rho (sigma2 v wedge sigma1 v).
TransformResult type2(const SkewPencil& p, const ProjPoint& lambda, const Vector& v, Complex rho,
                      const Tolerances& tol);

/// Gamma has -rho_i on the diagonal and K(w_i, w_j) off it.
/// Throws SingularGamma.
TransformResult conint(const SkewPencil& p, const std::vector<ProjPoint>& points,
                       const std::vector<Vector>& vectors, const std::vector<Complex>& rhos,
                       const Tolerances& tol);

/// Recomputes a record against p.
TransformResult apply_record(const SkewPencil& p, const TransformRecord& r, const Tolerances& tol);

/// The step undoing r, applied to the pencil r produced (Type I and II).
TransformResult invert_record(const SkewPencil& after, const TransformRecord& r, const Tolerances& tol);

/// Coefficient-wise relative pfaffian difference of two pencils.
double pfaffian_invariance_residual(const SkewPencil& a, const SkewPencil& b);

struct BundleMapReport {
  double identity_residual = 0.0;
  std::array<double, 4> zero_patterns{};  // P(l)v, v^tT(m), u^tR(l), S(m)u
  double transport_angle = 0.0;
  double parameter_independence = 0.0;
  int samples = 0;
  int curve_samples = 0;
};

/// Rational bundle maps of a Type I (T, S, P, R) or Type II (Q) record,
/// checked at the samples. Throws SampleOnExceptionalLine.
BundleMapReport bundle_maps_check(const SkewPencil& p, const TransformRecord& r,
                                  const std::vector<ProjPoint>& samples, const Tolerances& tol,
                                  std::uint64_t seed = 0);

/// sin of the largest principal angle between the column spans.
double subspace_angle(const Matrix& a, const Matrix& b, double rank_tol);

struct BridgeResult {
  std::vector<TransformRecord> steps;
  SkewPencil pencil;
  std::vector<double> norms;  // off-pattern norm before each step and at the end
  bool converged = false;
};

/// Greedy Type II steps driving a second canonical form toward the
/// decomposable pattern. Not converging within the budget is a normal
/// outcome (converged = false).
BridgeResult bridge_to_decomposable(const SkewPencil& p, int budget, const Tolerances& tol,
                                    std::uint64_t seed = 0, double target = 1e-6);

std::string_view to_string(TransformKind k);
std::string_view to_string(PairKind k);

}  // namespace pfaffrep
