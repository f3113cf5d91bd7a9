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

#include "pfaffrep/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "pfaffrep/canonical.hpp"
#include "pfaffrep/errors.hpp"

namespace pfaffrep {

namespace {

const Matrix& sigma2(const SkewPencil& p) { return p.coefficient(1); }
Matrix sigma1(const SkewPencil& p) { return -p.coefficient(2); }

// Affine coordinates (lambda1, lambda2) in the chart x0 = 1.
std::array<Complex, 2> affine(const ProjPoint& pt, const Tolerances& tol) {
  if (std::abs(pt[0]) <= tol.zero_tol) {
    fail(ErrorCode::PointAtInfinity, "point lies on x0 = 0; the affine formulas need x0 != 0");
  }
  return {pt[1] / pt[0], pt[2] / pt[0]};
}

void require_in_kernel(const SkewPencil& p, const ProjPoint& pt, const Vector& v, const Tolerances& tol,
                       const char* name) {
  if (v.size() != p.size()) fail(ErrorCode::DegreeMismatch, std::string(name) + " has wrong length");
  const double r = kernel_residual(p, pt, v);
  if (!(r <= tol.rank_tol)) {
    std::ostringstream os;
    os << name << " is not in the kernel (relative residual " << r << ")";
    fail(ErrorCode::VectorNotInKernel, os.str());
  }
}

Matrix skew_part(const Matrix& m) { return 0.5 * (m - m.transpose()); }

Complex bilinear(const Vector& a, const Matrix& m, const Vector& b) { return (a.transpose() * m * b)(0, 0); }

}  // namespace

std::string_view to_string(TransformKind k) {
  switch (k) {
    case TransformKind::TypeI: return "I";
    case TransformKind::TypeII: return "II";
    case TransformKind::Conint: return "CONINT";
  }
  return "?";
}

std::string_view to_string(PairKind k) {
  switch (k) {
    case PairKind::Inadmissible: return "inadmissible";
    case PairKind::Semiadmissible: return "semiadmissible";
    case PairKind::Admissible: return "admissible";
  }
  return "?";
}

CurvePoint make_curve_point(const HomPoly& f, const ProjPoint& pt, const Tolerances& tol) {
  const double r = curve_residual(f, pt);
  if (!(r <= tol.match_tol)) {
    std::ostringstream os;
    os << "point is not on the curve (relative residual " << r << ")";
    fail(ErrorCode::NotOnCurve, os.str());
  }
  return CurvePoint{pt, r};
}

double kernel_residual(const SkewPencil& p, const ProjPoint& pt, const Vector& v) {
  const Matrix a = p.at(pt);
  const double den = a.norm() * v.norm();
  if (den == 0.0) return v.norm() == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return (a * v).norm() / den;
}

std::optional<LinearForm> line_through(const SkewPencil& p, const ProjPoint& lambda, const Vector& v,
                                       const ProjPoint& mu, const Vector& u, const Tolerances& tol) {
  require_in_kernel(p, lambda, v, tol, "v");
  require_in_kernel(p, mu, u, tol, "u");
  LinearForm l;
  for (int k = 0; k < 3; ++k) l.c[static_cast<std::size_t>(k)] = bilinear(u, p.coefficient(k), v);
  if (l.norm1() <= tol.rank_tol * std::max(1.0, p.scale()) * u.norm() * v.norm()) return std::nullopt;
  return l;
}

LinearForm tangent_at(const SkewPencil& p, const ProjPoint& lambda, const Tolerances& tol) {
  const KernelBasis kb = kernel_at(p, lambda, tol);
  auto l = line_through(p, lambda, kb.vectors.col(0), lambda, kb.vectors.col(1), tol);
  if (!l) fail(ErrorCode::RankDeficiency, "tangent form vanishes; the point is singular");
  return *l;
}

LinearForm tangent_from_adjoint(const SkewPencil& p, const ProjPoint& lambda) {
  const Matrix adj = pfaffian_adjoint_at(p, lambda);
  LinearForm l;
  for (int k = 0; k < 3; ++k) l.c[static_cast<std::size_t>(k)] = 0.5 * (p.coefficient(k) * adj).trace();
  return l;
}

Complex k_constant(const SkewPencil& p, const ProjPoint& lambda, const Vector& v, const ProjPoint& mu,
                   const Vector& u, Complex t1, Complex t2, const Tolerances& tol) {
  const auto l = affine(lambda, tol);
  const auto m = affine(mu, tol);
  const double size = std::max({1.0, std::abs(l[0]), std::abs(l[1]), std::abs(m[0]), std::abs(m[1])});
  if (std::abs(l[0] - m[0]) + std::abs(l[1] - m[1]) <= tol.rank_tol * size) {
    fail(ErrorCode::SamePoint, "lambda and mu coincide");
  }
  const Complex den = t1 * (l[0] - m[0]) + t2 * (l[1] - m[1]);
  if (std::abs(den) <= tol.zero_tol * (std::abs(t1) + std::abs(t2)) * size) {
    fail(ErrorCode::DegenerateDenominator, "t1 (l1 - m1) + t2 (l2 - m2) vanishes");
  }
  const Matrix ts = t1 * sigma1(p) + t2 * sigma2(p);
  return bilinear(v, ts, u) / den;
}

Complex k_constant(const SkewPencil& p, const ProjPoint& lambda, const Vector& v, const ProjPoint& mu,
                   const Vector& u, const Tolerances& tol) {
  const auto l = affine(lambda, tol);
  const auto m = affine(mu, tol);
  return k_constant(p, lambda, v, mu, u, std::conj(l[0] - m[0]), std::conj(l[1] - m[1]), tol);
}

PairClassification classify_pair(const SkewPencil& p, const ProjPoint& lambda, const ProjPoint& mu,
                                 const Tolerances& tol) {
  const KernelBasis kl = kernel_at(p, lambda, tol);
  const KernelBasis km = kernel_at(p, mu, tol);
  PairClassification c;
  c.basis_lambda = kl.vectors;
  c.basis_mu = km.vectors;
  c.kappa = Matrix(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c.kappa(i, j) = k_constant(p, lambda, kl.vectors.col(i), mu, km.vectors.col(j), tol);

  Eigen::JacobiSVD<Matrix> svd(c.kappa, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(0) <= tol.rank_tol * std::max(1.0, p.scale())) {
    c.kind = PairKind::Inadmissible;
  } else if (s(1) <= tol.rank_tol * s(0)) {
    c.kind = PairKind::Semiadmissible;
    // x^t kappa = 0 <=> kappa^t x = 0: x is the conjugate of the last left
    // singular vector; kappa y = 0 gives y as the last right singular vector.
    const Vector x = svd.matrixU().col(1).conjugate();
    const Vector y = svd.matrixV().col(1);
    c.special_vectors = std::make_pair(fix_phase(kl.vectors * x), fix_phase(km.vectors * y));
  } else {
    c.kind = PairKind::Admissible;
  }
  return c;
}

Vector zero_pairing_partner(const PairClassification& c, const Vector& v) {
  const Vector a = c.basis_lambda.adjoint() * v;
  const Eigen::RowVectorXcd row = a.transpose() * c.kappa;
  Vector b(2);
  b << row(1), -row(0);
  if (b.norm() == 0.0) return c.basis_mu.col(0);
  return fix_phase(c.basis_mu * b.normalized());
}

std::vector<CurvePoint> partner_points(const SkewPencil& p, const ProjPoint& lambda, const Vector& v,
                                       const Vector& u, const Tolerances& tol) {
  const auto l = affine(lambda, tol);
  const Complex d1 = bilinear(v, sigma1(p), u);
  const Complex d2 = bilinear(v, sigma2(p), u);
  const double scale = std::max(1.0, p.scale()) * v.norm() * u.norm();
  if (std::abs(d1) + std::abs(d2) <= tol.rank_tol * scale) {
    fail(ErrorCode::NoAdmissiblePartner, "v^t sigma_i u vanishes; K(v, u) is zero for every partner");
  }
  const HomPoly f = pfaffian(p);
  const auto coeffs = restrict_to_line(f, {1.0, l[0], l[1]}, {0.0, -d1, -d2});
  const auto roots = polynomial_roots(coeffs, tol.zero_tol, tol.rank_tol);
  std::vector<CurvePoint> out;
  for (const auto& r : roots) {
    if (std::abs(r.value) <= tol.rank_tol * std::max(1.0, std::abs(r.value))) continue;
    const ProjPoint mu(1.0, l[0] - r.value * d1, l[1] - r.value * d2, tol.zero_tol);
    const double cr = curve_residual(f, mu);
    if (cr > tol.match_tol) continue;
    if (kernel_residual(p, mu, u) > tol.match_tol) continue;
    out.push_back({mu, cr});
  }
  return out;
}

TransformResult type1(const SkewPencil& p, const ProjPoint& lambda, const ProjPoint& mu, const Vector& v,
                      const Vector& u, const Tolerances& tol) {
  require_in_kernel(p, lambda, v, tol, "v");
  require_in_kernel(p, mu, u, tol, "u");
  const Complex k = k_constant(p, lambda, v, mu, u, tol);
  const double scale = std::max(sigma1(p).norm(), sigma2(p).norm()) * v.norm() * u.norm();
  const auto l = affine(lambda, tol);
  const auto m = affine(mu, tol);
  const double dist = std::hypot(std::abs(l[0] - m[0]), std::abs(l[1] - m[1]));
  if (std::abs(k) * dist <= tol.rank_tol * scale) {
    fail(ErrorCode::NotAdmissible, "K vanishes; the vectors are not an admissible pair");
  }
  const Matrix x = sigma1(p) * (u * v.transpose() + v * u.transpose()) * sigma2(p);
  const Matrix& g = p.coefficient(0);
  const Matrix g_new = skew_part(g + (x - x.transpose()) / k);
  TransformRecord r;
  r.kind = TransformKind::TypeI;
  r.lambda = lambda;
  r.mu = mu;
  r.v = v;
  r.u = u;
  r.k = k;
  r.gamma_before = g;
  r.gamma_after = g_new;
  return {p.with_constant_term(g_new), std::move(r)};
}

TransformResult type2(const SkewPencil& p, const ProjPoint& lambda, const Vector& v, Complex rho,
                      const Tolerances& tol) {
  require_in_kernel(p, lambda, v, tol, "v");
  if (std::abs(rho) <= tol.zero_tol) fail(ErrorCode::NotAdmissible, "rho must be nonzero");
  const Matrix& g = p.coefficient(0);
  const Matrix g_new = skew_part(g + 2.0 * rho * wedge_to_matrix(sigma2(p) * v, sigma1(p) * v));
  TransformRecord r;
  r.kind = TransformKind::TypeII;
  r.lambda = lambda;
  r.v = v;
  r.rho = rho;
  r.gamma_before = g;
  r.gamma_after = g_new;
  return {p.with_constant_term(g_new), std::move(r)};
}

TransformResult conint(const SkewPencil& p, const std::vector<ProjPoint>& points,
                       const std::vector<Vector>& vectors, const std::vector<Complex>& rhos,
                       const Tolerances& tol) {
  const auto m = points.size();
  if (m == 0 || vectors.size() != m || rhos.size() != m) {
    fail(ErrorCode::DegreeMismatch, "conint needs equally many points, vectors and constants");
  }
  Matrix w(p.size(), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    require_in_kernel(p, points[i], vectors[i], tol, "w");
    w.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  Matrix gamma(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    gamma(ii, ii) = -rhos[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      gamma(ii, jj) = k_constant(p, points[i], vectors[i], points[j], vectors[j], tol);
      gamma(jj, ii) = gamma(ii, jj);
    }
  }
  Eigen::JacobiSVD<Matrix> svd(gamma);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > tol.rank_tol * s(0))) {
    fail(ErrorCode::SingularGamma, "the CONINT matrix Gamma is not invertible");
  }
  const Matrix ginv = gamma.partialPivLu().inverse();
  const Matrix s1 = sigma1(p);
  const Matrix& s2 = sigma2(p);
  const Matrix core = w * ginv * w.transpose();
  const Matrix& g = p.coefficient(0);
  const Matrix g_new = skew_part(g + s1 * core * s2 - s2 * core * s1);
  TransformRecord r;
  r.kind = TransformKind::Conint;
  r.lambda = points.front();
  r.v = vectors.front();
  r.conint = ConintData{points, w, rhos, gamma};
  r.gamma_before = g;
  r.gamma_after = g_new;
  return {p.with_constant_term(g_new), std::move(r)};
}

TransformResult apply_record(const SkewPencil& p, const TransformRecord& r, const Tolerances& tol) {
  switch (r.kind) {
    case TransformKind::TypeI:
      if (!r.mu || !r.u) fail(ErrorCode::SchemaError, "Type I record needs mu and u");
      return type1(p, r.lambda, *r.mu, r.v, *r.u, tol);
    case TransformKind::TypeII:
      return type2(p, r.lambda, r.v, r.rho, tol);
    case TransformKind::Conint: {
      if (!r.conint) fail(ErrorCode::SchemaError, "CONINT record needs its point data");
      std::vector<Vector> ws;
      for (Eigen::Index i = 0; i < r.conint->vectors.cols(); ++i) ws.emplace_back(r.conint->vectors.col(i));
      return conint(p, r.conint->points, ws, r.conint->rhos, tol);
    }
  }
  fail(ErrorCode::Unsupported, "unknown transform kind");
}

TransformResult invert_record(const SkewPencil& after, const TransformRecord& r, const Tolerances& tol) {
  switch (r.kind) {
    case TransformKind::TypeI:
      if (!r.mu || !r.u) fail(ErrorCode::SchemaError, "Type I record needs mu and u");
      return type1(after, r.lambda, *r.mu, *r.u, r.v, tol);
    case TransformKind::TypeII:
      return type2(after, r.lambda, r.v, -r.rho, tol);
    case TransformKind::Conint:
      break;
  }
  fail(ErrorCode::Unsupported, "only Type I and Type II steps have a closed-form inverse");
}

double pfaffian_invariance_residual(const SkewPencil& a, const SkewPencil& b) {
  const HomPoly pa = pfaffian(a);
  const HomPoly pb = pfaffian(b);
  return scale_residual(pa, pb, 1.0);
}

double subspace_angle(const Matrix& a, const Matrix& b, double rank_tol) {
  Eigen::JacobiSVD<Matrix> sa(a, Eigen::ComputeThinU);
  Eigen::JacobiSVD<Matrix> sb(b, Eigen::ComputeThinU);
  auto rank_of = [&](const Eigen::JacobiSVD<Matrix>& s) {
    const auto& v = s.singularValues();
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v(i) > rank_tol * v(0)) ++r;
    return v.size() == 0 || v(0) == 0.0 ? Eigen::Index{0} : r;
  };
  const Eigen::Index ra = rank_of(sa);
  const Eigen::Index rb = rank_of(sb);
  if (ra != rb) return 1.0;
  if (ra == 0) return 0.0;
  const Matrix ua = sa.matrixU().leftCols(ra);
  const Matrix ub = sb.matrixU().leftCols(rb);
  const Matrix residual = ua - ub * (ub.adjoint() * ua);
  Eigen::JacobiSVD<Matrix> sr(residual);
  return std::min(1.0, sr.singularValues()(0));
}

namespace {

struct MapParams {
  Complex t1, t2;
  Matrix tsigma;
};

MapParams make_params(const SkewPencil& p, std::mt19937_64& rng) {
  MapParams m{random_complex(rng), random_complex(rng), {}};
  m.tsigma = m.t1 * sigma1(p) + m.t2 * sigma2(p);
  return m;
}

Complex line_den(const MapParams& m, const std::array<Complex, 3>& x, const std::array<Complex, 2>& pt) {
  return m.t1 * (x[1] - pt[0] * x[0]) + m.t2 * (x[2] - pt[1] * x[0]);
}

struct TypeIMaps {
  Matrix t, s, p, r;
};

// T, S carry x0 / (K den(x, lambda)); P, R carry x0 / (K den(x, mu)).
Matrix lambda_factor(const TransformRecord& rec, const MapParams& m, const std::array<Complex, 3>& x,
                     const std::array<Complex, 2>& l, bool left) {
  const Complex c = x[0] / (rec.k * line_den(m, x, l));
  const Vector& v = rec.v;
  const Vector& u = *rec.u;
  const Matrix id = Matrix::Identity(v.size(), v.size());
  return left ? Matrix(id + c * m.tsigma * u * v.transpose()) : Matrix(id + c * u * v.transpose() * m.tsigma);
}

Matrix mu_factor(const TransformRecord& rec, const MapParams& m, const std::array<Complex, 3>& x,
                 const std::array<Complex, 2>& mu, bool left) {
  const Complex c = x[0] / (rec.k * line_den(m, x, mu));
  const Vector& v = rec.v;
  const Vector& u = *rec.u;
  const Matrix id = Matrix::Identity(v.size(), v.size());
  return left ? Matrix(id + c * m.tsigma * v * u.transpose()) : Matrix(id + c * v * u.transpose() * m.tsigma);
}

TypeIMaps type1_maps(const TransformRecord& rec, const MapParams& m, const std::array<Complex, 3>& x,
                     const std::array<Complex, 2>& l, const std::array<Complex, 2>& mu, double guard) {
  if (std::abs(line_den(m, x, l)) <= guard || std::abs(line_den(m, x, mu)) <= guard) {
    fail(ErrorCode::SampleOnExceptionalLine, "sample lies on t1(x1 - p1 x0) + t2(x2 - p2 x0) = 0");
  }
  return {lambda_factor(rec, m, x, l, true), lambda_factor(rec, m, x, l, false),
          mu_factor(rec, m, x, mu, false), mu_factor(rec, m, x, mu, true)};
}

Matrix type2_map(const TransformRecord& rec, const MapParams& m, const std::array<Complex, 3>& x,
                 const std::array<Complex, 2>& l, double guard) {
  const Complex dl = line_den(m, x, l);
  if (std::abs(dl) <= guard) {
    fail(ErrorCode::SampleOnExceptionalLine, "sample lies on t1(x1 - l1 x0) + t2(x2 - l2 x0) = 0");
  }
  const auto n = rec.v.size();
  return Matrix::Identity(n, n) + 2.0 * rec.rho * x[0] / dl * rec.v * rec.v.transpose() * m.tsigma;
}

}  // namespace

BundleMapReport bundle_maps_check(const SkewPencil& p, const TransformRecord& r,
                                  const std::vector<ProjPoint>& samples, const Tolerances& tol,
                                  std::uint64_t seed) {
  if (r.kind == TransformKind::Conint) {
    fail(ErrorCode::Unsupported, "bundle maps are defined for Type I and Type II records");
  }
  if (r.gamma_before.size() != 0 && max_abs(r.gamma_before - p.coefficient(0)) >
                                        tol.match_tol * std::max(1.0, max_abs(p.coefficient(0)))) {
    fail(ErrorCode::SchemaError, "record does not refer to the given pencil");
  }
  const SkewPencil after = apply_record(p, r, tol).pencil;
  const HomPoly f = pfaffian(p);
  std::mt19937_64 rng(seed);
  const MapParams m1 = make_params(p, rng);
  const MapParams m2 = make_params(p, rng);
  const auto l = affine(r.lambda, tol);
  BundleMapReport rep;

  const double guard = tol.zero_tol;
  for (const ProjPoint& s : samples) {
    const auto& x = s.coords();
    const Matrix a = p.at(x);
    const Matrix b = after.at(x);
    const bool on_curve = curve_residual(f, s) <= tol.match_tol;
    Matrix transported1;
    Matrix transported2;
    Matrix kernel_a;
    if (on_curve) kernel_a = kernel_at(p, s, tol).vectors;
    if (r.kind == TransformKind::TypeI) {
      const auto mu = affine(*r.mu, tol);
      const TypeIMaps t = type1_maps(r, m1, x, l, mu, guard);
      const Matrix lhs = t.r * t.t * a;
      const Matrix rhs = b * t.s * t.p;
      const double scale = t.r.norm() * t.t.norm() * a.norm() + b.norm() * t.s.norm() * t.p.norm();
      rep.identity_residual = std::max(rep.identity_residual, (lhs - rhs).norm() / scale);
      if (on_curve) {
        transported1 = t.s * t.p * kernel_a;
        const TypeIMaps t2 = type1_maps(r, m2, x, l, mu, guard);
        transported2 = t2.s * t2.p * kernel_a;
      }
    } else {
      const Matrix q = type2_map(r, m1, x, l, guard);
      const Matrix lhs = q.transpose().partialPivLu().solve(a);
      const Matrix rhs = b * q;
      const double scale = lhs.norm() + rhs.norm();
      rep.identity_residual = std::max(rep.identity_residual, (lhs - rhs).norm() / scale);
      if (on_curve) {
        transported1 = q * kernel_a;
        transported2 = type2_map(r, m2, x, l, guard) * kernel_a;
      }
    }
    if (on_curve) {
      const Matrix kernel_b = kernel_at(after, s, tol).vectors;
      rep.transport_angle = std::max(rep.transport_angle, subspace_angle(transported1, kernel_b, tol.rank_tol));
      rep.parameter_independence =
          std::max(rep.parameter_independence, subspace_angle(transported1, transported2, tol.rank_tol));
      ++rep.curve_samples;
    }
    ++rep.samples;
  }

  if (r.kind == TransformKind::TypeI) {
    const auto mu = affine(*r.mu, tol);
    const std::array<Complex, 3> xl{1.0, l[0], l[1]};
    const std::array<Complex, 3> xm{1.0, mu[0], mu[1]};
    const Vector& v = r.v;
    const Vector& u = *r.u;
    const Matrix p_l = mu_factor(r, m1, xl, mu, false);
    const Matrix r_l = mu_factor(r, m1, xl, mu, true);
    const Matrix t_m = lambda_factor(r, m1, xm, l, true);
    const Matrix s_m = lambda_factor(r, m1, xm, l, false);
    rep.zero_patterns[0] = (p_l * v).norm() / (p_l.norm() * v.norm());
    rep.zero_patterns[1] = (v.transpose() * t_m).norm() / (t_m.norm() * v.norm());
    rep.zero_patterns[2] = (u.transpose() * r_l).norm() / (r_l.norm() * u.norm());
    rep.zero_patterns[3] = (s_m * u).norm() / (s_m.norm() * u.norm());
  }
  return rep;
}

namespace {

// Entries of A0 that vanish on the decomposable pattern.
Vector off_pattern(const Matrix& g, int d) {
  Vector out(d * (d - 1));
  Eigen::Index k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      out(k++) = g(i, j);
      out(k++) = g(d + i, d + j);
    }
  return out;
}

struct BridgeCandidate {
  double score = 0.0;
  std::array<Complex, 2> point{};
  Vector w;  // absorbs sqrt(rho)
};

Complex least_squares_rho(const Vector& update, const Vector& target) {
  const Complex den = update.squaredNorm();
  if (std::abs(den) == 0.0) return 0.0;
  return -update.dot(target) / den;
}

// Gauss-Newton on (w, l1, l2) for A(1,l1,l2) w = 0 and
// off_pattern(gamma + 2 W(sigma2 w, sigma1 w)) = 0.
BridgeCandidate refine(const SkewPencil& p, BridgeCandidate c) {
  const int d = p.half_degree();
  const int n = p.size();
  const Matrix& g = p.coefficient(0);
  const Matrix& s2 = sigma2(p);
  const Matrix s1 = sigma1(p);
  auto residual = [&](const Vector& w, const std::array<Complex, 2>& l) {
    Vector r(n + d * (d - 1));
    r.head(n) = p.at(std::array<Complex, 3>{1.0, l[0], l[1]}) * w;
    r.tail(d * (d - 1)) = off_pattern(g + 2.0 * wedge_to_matrix(s2 * w, s1 * w), d);
    return r;
  };
  Vector r = residual(c.w, c.point);
  double norm = r.norm();
  const double floor = 1e-15 * std::max(1.0, p.scale());
  for (int it = 0; it < 60 && norm > floor; ++it) {
    Matrix jac = Matrix::Zero(r.size(), n + 2);
    jac.topLeftCorner(n, n) = p.at(std::array<Complex, 3>{1.0, c.point[0], c.point[1]});
    jac.block(0, n, n, 1) = s2 * c.w;
    jac.block(0, n + 1, n, 1) = -s1 * c.w;
    const Vector s2w = s2 * c.w;
    const Vector s1w = s1 * c.w;
    for (int k = 0; k < n; ++k) {
      const Matrix dk = 2.0 * (wedge_to_matrix(s2.col(k), s1w) + wedge_to_matrix(s2w, s1.col(k)));
      jac.block(n, k, d * (d - 1), 1) = off_pattern(dk, d);
    }
    const Vector step = jac.completeOrthogonalDecomposition().solve(-r);
    double lambda = 1.0;
    bool improved = false;
    for (int back = 0; back < 12; ++back, lambda *= 0.5) {
      const Vector w = c.w + lambda * step.head(n);
      const std::array<Complex, 2> l{c.point[0] + lambda * step(n), c.point[1] + lambda * step(n + 1)};
      const Vector rn = residual(w, l);
      if (rn.norm() < norm) {
        c.w = w;
        c.point = l;
        r = rn;
        improved = norm - rn.norm() > 1e-12 * norm;
        norm = rn.norm();
        break;
      }
    }
    if (!improved) break;
  }
  c.score = norm;
  return c;
}

// Newton along x2 back onto the curve.
std::optional<ProjPoint> snap_to_curve(const HomPoly& f, std::array<Complex, 2> l, const Tolerances& tol) {
  const HomPoly df = partial(f, 2);
  for (int it = 0; it < 8; ++it) {
    const std::array<Complex, 3> x{1.0, l[0], l[1]};
    const Complex fv = f.evaluate(x);
    const Complex dv = df.evaluate(x);
    if (std::abs(dv) == 0.0) break;
    l[1] -= fv / dv;
  }
  const ProjPoint pt(1.0, l[0], l[1], tol.zero_tol);
  if (curve_residual(f, pt) > tol.match_tol) return std::nullopt;
  return pt;
}

}  // namespace

BridgeResult bridge_to_decomposable(const SkewPencil& p, int budget, const Tolerances& tol, std::uint64_t seed,
                                    double target) {
  structure_report(p, tol);  // validates the second canonical form
  const int d = p.half_degree();
  const HomPoly f = pfaffian(p);
  std::mt19937_64 rng(seed);
  BridgeResult out{{}, p, {off_pattern_norm(p)}, false};
  const double goal = target * std::max(1.0, p.scale());
  constexpr int kSamples = 32;
  constexpr int kRefined = 4;
  const std::array<std::array<Complex, 2>, 6> mixes{{{1.0, 0.0},
                                                     {0.0, 1.0},
                                                     {1.0, 1.0},
                                                     {1.0, -1.0},
                                                     {1.0, Complex(0.0, 1.0)},
                                                     {1.0, Complex(0.0, -1.0)}}};

  for (int step = 0; step < budget && out.norms.back() > goal; ++step) {
    const SkewPencil& cur = out.pencil;
    const Vector target_entries = off_pattern(cur.coefficient(0), d);
    const Matrix& s2 = sigma2(cur);
    const Matrix s1 = sigma1(cur);

    std::vector<BridgeCandidate> candidates;
    for (const ProjPoint& q : sample_curve_points(f, kSamples, rng, tol)) {
      Matrix basis;
      try {
        basis = kernel_at(cur, q, tol).vectors;
      } catch (const Error&) {
        continue;
      }
      for (const auto& mix : mixes) {
        const Vector v = basis.col(0) * mix[0] + basis.col(1) * mix[1];
        const Vector update = off_pattern(2.0 * wedge_to_matrix(s2 * v, s1 * v), d);
        const Complex rho = least_squares_rho(update, target_entries);
        if (rho == Complex{}) continue;
        candidates.push_back({(target_entries + rho * update).norm(), {q[1], q[2]}, v * std::sqrt(rho)});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const BridgeCandidate& a, const BridgeCandidate& b) { return a.score < b.score; });
    if (candidates.size() > static_cast<std::size_t>(kRefined)) candidates.resize(kRefined);

    std::optional<TransformResult> best;
    double best_norm = out.norms.back() * (1.0 - 1e-3);
    for (const BridgeCandidate& start : candidates) {
      const BridgeCandidate c = refine(cur, start);
      const auto pt = snap_to_curve(f, c.point, tol);
      if (!pt) continue;
      Matrix basis;
      try {
        basis = kernel_at(cur, *pt, tol).vectors;
      } catch (const Error&) {
        continue;
      }
      Vector v = basis * (basis.adjoint() * c.w);
      if (v.norm() <= tol.zero_tol) continue;
      v = fix_phase(v.normalized());
      const Vector update = off_pattern(2.0 * wedge_to_matrix(s2 * v, s1 * v), d);
      const Complex rho = least_squares_rho(update, target_entries);
      if (std::abs(rho) <= tol.zero_tol) continue;
      try {
        TransformResult tr = type2(cur, *pt, v, rho, tol);
        const double nn = off_pattern_norm(tr.pencil);
        if (nn < best_norm) {
          best_norm = nn;
          best = std::move(tr);
        }
      } catch (const Error&) {
        continue;
      }
    }
    if (!best) continue;
    out.steps.push_back(std::move(best->record));
    out.pencil = std::move(best->pencil);
    out.norms.push_back(best_norm);
  }
  out.converged = out.norms.back() <= goal;
  return out;
}

}  // namespace pfaffrep
