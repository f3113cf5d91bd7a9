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

#include "pfaffrep/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <tuple>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "pfaffrep/errors.hpp"

namespace pfaffrep {

namespace {

using Vec3 = Eigen::Vector3cd;

Vec3 to_vec(const LinearForm& l) { return Vec3(l.c[0], l.c[1], l.c[2]); }
Vec3 to_vec(const std::array<Complex, 3>& x) { return Vec3(x[0], x[1], x[2]); }
LinearForm to_form(const Vec3& v) { return LinearForm{{v(0), v(1), v(2)}}; }

// Bilinear cross product; Eigen's cross() conjugates complex results.
Vec3 cross(const Vec3& a, const Vec3& b) {
  return Vec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

// (row, col, sign, coefficient index) of the upper triangle of the
// Aronhold matrix.
struct ArEntry {
  int row, col;
  double sign;
  int index;
};

enum : int { W000, W111, W222, W012, W001, W002, W011, W022, W112, W122 };

constexpr std::array<ArEntry, 21> kAronhold{{
    {0, 1, 1, W222},  {0, 2, -1, W122}, {0, 4, 1, W112},  {0, 6, 1, W022},  {0, 7, -1, W012},
    {1, 2, 1, W022},  {1, 3, 1, W122},  {1, 4, -1, W012}, {1, 5, -1, W022}, {1, 7, 1, W002},
    {2, 3, -1, W112}, {2, 5, 1, W012},  {2, 6, -1, W002}, {3, 4, -1, W111}, {3, 6, -1, W012},
    {3, 7, 1, W011},  {4, 5, -1, W011}, {4, 6, 1, W001},  {5, 6, 1, W002},  {5, 7, -1, W001},
    {6, 7, 1, W000},
}};

HomPoly det3(const std::array<std::array<HomPoly, 3>, 3>& h) {
  return h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) -
         h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
         h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
}

HomPoly cube(const LinearForm& l) {
  const HomPoly p = HomPoly::from_linear(l);
  return p * p * p;
}

bool point_less(const ProjPoint& a, const ProjPoint& b) {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(a[k].real() - b[k].real()) > 1e-9) return a[k].real() < b[k].real();
    if (std::abs(a[k].imag() - b[k].imag()) > 1e-9) return a[k].imag() < b[k].imag();
  }
  return false;
}

}  // namespace

const std::array<Exponent, 10>& cubic_exponents() {
  static const std::array<Exponent, 10> e{{{3, 0, 0},
                                           {0, 3, 0},
                                           {0, 0, 3},
                                           {1, 1, 1},
                                           {2, 1, 0},
                                           {2, 0, 1},
                                           {1, 2, 0},
                                           {1, 0, 2},
                                           {0, 2, 1},
                                           {0, 1, 2}}};
  return e;
}

const std::array<double, 10>& cubic_weights() {
  static const std::array<double, 10> w{1, 1, 1, 6, 3, 3, 3, 3, 3, 3};
  return w;
}

HomPoly CubicCoeffs::to_poly() const {
  HomPoly p(3);
  for (std::size_t i = 0; i < 10; ++i) p.add_term(cubic_exponents()[i], cubic_weights()[i] * w[i]);
  return p;
}

CubicCoeffs CubicCoeffs::from_poly(const HomPoly& cubic) {
  if (cubic.degree() != 3) fail(ErrorCode::DegreeMismatch, "expected a cubic");
  CubicCoeffs c;
  for (std::size_t i = 0; i < 10; ++i) c.w[i] = cubic.coeff(cubic_exponents()[i]) / cubic_weights()[i];
  return c;
}

CubicCoeffs CubicPencil::at(const std::array<Complex, 3>& x) const {
  CubicCoeffs c;
  for (std::size_t i = 0; i < 10; ++i) c.w[i] = w[i](x);
  return c;
}

CubicPencil polar_cubic(const HomPoly& quartic) {
  if (quartic.degree() != 4) fail(ErrorCode::DegreeMismatch, "polar cubic needs a quartic");
  CubicPencil out;
  for (int k = 0; k < 3; ++k) {
    const HomPoly dk = partial(quartic, k);
    for (std::size_t i = 0; i < 10; ++i) {
      out.w[i].c[static_cast<std::size_t>(k)] = dk.coeff(cubic_exponents()[i]) / cubic_weights()[i];
    }
  }
  return out;
}

HomPoly integrate_polar(const CubicPencil& w, const Tolerances& tol) {
  const auto monomials = monomials_of_degree(4);
  Matrix a(30, static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    const CubicPencil col = polar_cubic(HomPoly::monomial(monomials[m], 1.0));
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t k = 0; k < 3; ++k) a(static_cast<Eigen::Index>(3 * i + k), static_cast<Eigen::Index>(m)) = col.w[i].c[k];
  }
  Vector b(30);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t k = 0; k < 3; ++k) b(static_cast<Eigen::Index>(3 * i + k)) = w.w[i].c[k];
  HomPoly out(4);
  if (b.norm() == 0.0) return out;
  const Vector x = a.colPivHouseholderQr().solve(b);
  const double residual = (a * x - b).norm() / b.norm();
  if (!(residual <= tol.match_tol)) {
    std::ostringstream os;
    os << "polar data is not the polar of a quartic (relative residual " << residual << ")";
    fail(ErrorCode::InconsistentPolarData, os.str());
  }
  const double cut = tol.zero_tol * x.cwiseAbs().maxCoeff();
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    const Complex c = x(static_cast<Eigen::Index>(m));
    if (std::abs(c) > cut) out.add_term(monomials[m], c);
  }
  return out;
}

Matrix aronhold_matrix(const CubicCoeffs& w) {
  Matrix ar = Matrix::Zero(8, 8);
  for (const ArEntry& e : kAronhold) {
    ar(e.row, e.col) = e.sign * w.w[static_cast<std::size_t>(e.index)];
    ar(e.col, e.row) = -ar(e.row, e.col);
  }
  return ar;
}

SkewPencil aronhold_pencil(const CubicPencil& w) {
  std::array<Matrix, 3> a;
  for (std::size_t k = 0; k < 3; ++k) {
    CubicCoeffs c;
    for (std::size_t i = 0; i < 10; ++i) c.w[i] = w.w[i].c[k];
    a[k] = aronhold_matrix(c);
  }
  return SkewPencil(std::move(a));
}

HomPoly scorza_map(const HomPoly& quartic) { return pfaffian(aronhold_pencil(polar_cubic(quartic))); }

HomPoly hessian_determinant(const HomPoly& cubic) {
  if (cubic.degree() != 3) fail(ErrorCode::DegreeMismatch, "Hessian determinant needs a cubic");
  std::array<std::array<HomPoly, 3>, 3> h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = partial(partial(cubic, i), j);
  return det3(h);
}

ProjPoint intersect_lines(const LinearForm& a, const LinearForm& b, double zero_tol) {
  const Vec3 x = cross(to_vec(a), to_vec(b));
  return ProjPoint(x(0), x(1), x(2), zero_tol * x.norm());
}

LineFactorization factor_three_lines(const HomPoly& cubic, const Tolerances& tol, std::uint64_t seed) {
  if (cubic.degree() != 3) fail(ErrorCode::DegreeMismatch, "expected a cubic");
  if (cubic.is_zero(tol.zero_tol)) fail(ErrorCode::NotAProductOfLines, "the cubic vanishes");
  std::mt19937_64 rng(seed);
  LineFactorization best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::array<std::array<Vec3, 3>, 2> pts;
    bool separated = true;
    for (auto& side : pts) {
      const std::array<Complex, 3> base{random_complex(rng), random_complex(rng), random_complex(rng)};
      const std::array<Complex, 3> dir{random_complex(rng), random_complex(rng), random_complex(rng)};
      const auto roots = polynomial_roots(restrict_to_line(cubic, base, dir), tol.zero_tol, tol.rank_tol);
      if (roots.size() != 3 || std::any_of(roots.begin(), roots.end(), [](const RootCluster& r) {
            return r.multiplicity != 1;
          })) {
        separated = false;
        break;
      }
      for (std::size_t k = 0; k < 3; ++k) side[k] = to_vec(base) + roots[k].value * to_vec(dir);
    }
    if (!separated) continue;
    std::array<int, 3> perm{0, 1, 2};
    do {
      std::array<LinearForm, 3> lines;
      HomPoly prod = HomPoly::constant(1.0);
      for (std::size_t k = 0; k < 3; ++k) {
        lines[k] = to_form(cross(pts[0][k], pts[1][static_cast<std::size_t>(perm[k])]).normalized());
        prod = prod * HomPoly::from_linear(lines[k]);
      }
      Complex num = 0.0;
      double den = 0.0;
      for (const auto& [e, c] : prod.terms()) {
        num += std::conj(c) * cubic.coeff(e);
        den += std::norm(c);
      }
      if (den == 0.0) continue;
      const Complex s = num / den;
      const double r = scale_residual(prod, cubic, s);
      if (r < best.residual) best = {lines, s, r};
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best.residual <= tol.match_tol) break;
  }
  if (!(best.residual <= tol.match_tol)) {
    std::ostringstream os;
    os << "cubic is not a product of three distinct lines (best residual " << best.residual << ")";
    fail(ErrorCode::NotAProductOfLines, os.str());
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (cross(to_vec(best.lines[i]), to_vec(best.lines[j])).norm() <= tol.rank_tol) {
        fail(ErrorCode::NotAProductOfLines, "repeated line factor");
      }
    }
  }
  return best;
}

PolarTriangle polar_triangle(const HomPoly& quartic, const ProjPoint& lambda, const Tolerances& tol,
                             std::uint64_t seed) {
  const HomPoly p = polar_cubic(quartic).at(lambda).to_poly();
  const double scale = p.max_abs_coeff();
  if (scale == 0.0) fail(ErrorCode::DegenerateHessian, "polar cubic vanishes");
  const HomPoly h = hessian_determinant(p);
  LineFactorization f;
  try {
    f = factor_three_lines(h, tol, seed);
  } catch (const Error& e) {
    fail(ErrorCode::DegenerateHessian, std::string("Hessian does not split into three lines: ") + e.message());
  }
  const auto monomials = monomials_of_degree(3);
  Matrix a(10, 3);
  Vector b(10);
  std::array<HomPoly, 3> cubes;
  for (std::size_t k = 0; k < 3; ++k) cubes[k] = cube(f.lines[k]);
  for (std::size_t m = 0; m < 10; ++m) {
    b(static_cast<Eigen::Index>(m)) = p.coeff(monomials[m]);
    for (std::size_t k = 0; k < 3; ++k) a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = cubes[k].coeff(monomials[m]);
  }
  const Vector c = a.colPivHouseholderQr().solve(b);
  PolarTriangle t{{}, {ProjPoint(1.0, 0.0, 0.0), ProjPoint(1.0, 0.0, 0.0), ProjPoint(1.0, 0.0, 0.0)}, 0.0};
  HomPoly sum(3);
  for (std::size_t k = 0; k < 3; ++k) {
    const Complex ck = c(static_cast<Eigen::Index>(k));
    if (std::abs(ck) <= tol.zero_tol * scale) fail(ErrorCode::DegenerateHessian, "a triangle side has zero weight");
    const Complex root = std::pow(ck, 1.0 / 3.0);
    for (std::size_t i = 0; i < 3; ++i) t.lines[k].c[i] = root * f.lines[k].c[i];
    sum += cube(t.lines[k]);
  }
  t.residual = scale_residual(p, sum, 1.0);
  if (!(t.residual <= tol.match_tol)) {
    std::ostringstream os;
    os << "polar cubic is not a sum of three cubes (residual " << t.residual << ")";
    fail(ErrorCode::DegenerateHessian, os.str());
  }
  std::array<std::pair<ProjPoint, LinearForm>, 3> sides{
      {{intersect_lines(t.lines[1], t.lines[2], tol.zero_tol), t.lines[0]},
       {intersect_lines(t.lines[0], t.lines[2], tol.zero_tol), t.lines[1]},
       {intersect_lines(t.lines[0], t.lines[1], tol.zero_tol), t.lines[2]}}};
  std::sort(sides.begin(), sides.end(), [](const auto& x, const auto& y) { return point_less(x.first, y.first); });
  for (std::size_t k = 0; k < 3; ++k) {
    t.vertices[k] = sides[k].first;
    t.lines[k] = sides[k].second;
  }
  return t;
}

Vector corank_one_kernel(const Matrix& m, const Tolerances& tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int corank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(0) == 0.0 || s(i) <= tol.rank_tol * s(0)) ++corank;
  if (corank != 1) {
    std::ostringstream os;
    os << "numerical corank " << corank << " (expected 1)";
    fail(ErrorCode::CorankNotOne, os.str());
  }
  return fix_phase(svd.matrixV().col(m.cols() - 1));
}

void require_symmetric(const DetRep& m, const Tolerances& tol) {
  m.validate();
  for (int k = 0; k < 3; ++k) {
    const Matrix& a = m.m[static_cast<std::size_t>(k)];
    const double bound = tol.zero_tol * std::max(1.0, max_abs(a));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = i + 1; j < a.cols(); ++j)
        if (std::abs(a(i, j) - a(j, i)) > bound) {
          std::ostringstream os;
          os << "M" << k << "[" << i << "][" << j << "] differs from M" << k << "[" << j << "][" << i << "]";
          fail(ErrorCode::SchemaError, os.str());
        }
  }
}

ScorzaRelation scorza_related(const DetRep& m, const ProjPoint& lambda, const ProjPoint& mu,
                              const Tolerances& tol) {
  m.validate();
  const Vector v = corank_one_kernel(m.at(lambda), tol);
  const Vector u = corank_one_kernel(m.at(mu), tol);
  double num = 0.0;
  double scale = 0.0;
  for (const Matrix& mk : m.m) {
    num = std::max(num, std::abs((v.transpose() * mk * u)(0, 0)));
    scale = std::max(scale, mk.norm());
  }
  const double residual = scale == 0.0 ? 0.0 : num / (scale * v.norm() * u.norm());
  return {residual <= tol.match_tol, residual};
}

ThetaMatch identify_theta(const HomPoly& quartic, const std::vector<DetRep>& candidates, int samples,
                          const Tolerances& tol, std::uint64_t seed) {
  if (samples < 3) fail(ErrorCode::Usage, "identify_theta needs at least 3 samples");
  if (candidates.empty()) fail(ErrorCode::NoMatch, "empty candidate list");
  const HomPoly s = scorza_map(quartic);
  std::mt19937_64 rng(seed);
  ThetaMatch out;
  ThetaEvidence& ev = out.evidence;
  for (int round = 0; round < 8 && static_cast<int>(ev.samples.size()) < samples; ++round) {
    for (const ProjPoint& lambda : sample_curve_points(s, samples, rng, tol)) {
      if (static_cast<int>(ev.samples.size()) == samples) break;
      try {
        const PolarTriangle t = polar_triangle(quartic, lambda, tol, rng());
        ev.samples.push_back(lambda);
        ev.triangles.push_back(t.vertices);
      } catch (const Error&) {
        continue;
      }
    }
  }
  if (static_cast<int>(ev.samples.size()) < samples) {
    fail(ErrorCode::NotConverged, "could not sample enough polar triangles");
  }
  std::vector<int> matches;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const DetRep& m = candidates[c];
    require_symmetric(m, tol);
    const HomPoly det = determinant(m);
    const auto scale = equal_up_to_scale(s, det, 1.0);
    ev.det_scale_residuals.push_back(scale ? scale_residual(s, det, *scale) : 1.0);
    std::vector<double> row;
    bool all = true;
    for (std::size_t i = 0; i < ev.samples.size(); ++i) {
      for (const ProjPoint& mu : ev.triangles[i]) {
        try {
          const ScorzaRelation r = scorza_related(m, ev.samples[i], mu, tol);
          row.push_back(r.residual);
          all = all && r.related;
        } catch (const Error&) {
          row.push_back(std::numeric_limits<double>::infinity());
          all = false;
        }
      }
    }
    ev.residuals.push_back(std::move(row));
    if (all) matches.push_back(static_cast<int>(c));
  }
  if (matches.empty()) fail(ErrorCode::NoMatch, "no candidate is Scorza related along the sampled triangles");
  if (matches.size() > 1) {
    std::ostringstream os;
    os << matches.size() << " candidates match";
    fail(ErrorCode::MultipleMatches, os.str());
  }
  out.index = matches.front();
  return out;
}

Bitangent bitangent_from_octad(const DetRep& m, const Vector& bi, const Vector& bj, const Tolerances& tol,
                               std::uint64_t seed) {
  m.validate();
  const auto d = m.m[0].rows();
  if (bi.size() != d || bj.size() != d) fail(ErrorCode::DegreeMismatch, "octad points have wrong length");
  for (const Vector* b : {&bi, &bj}) {
    for (int k = 0; k < 3; ++k) {
      const Matrix& mk = m.m[static_cast<std::size_t>(k)];
      const double r = std::abs((b->transpose() * mk * *b)(0, 0)) / (std::max(1.0, mk.norm()) * b->squaredNorm());
      if (!(r <= tol.match_tol)) {
        std::ostringstream os;
        os << "point is not on quadric " << k << " of the net (residual " << r << ")";
        fail(ErrorCode::NotOnBaseLocus, os.str());
      }
    }
  }
  Bitangent out;
  for (int k = 0; k < 3; ++k)
    out.form.c[static_cast<std::size_t>(k)] = (bi.transpose() * m.m[static_cast<std::size_t>(k)] * bj)(0, 0);
  const Vec3 l = to_vec(out.form);
  if (l.norm() <= tol.rank_tol * std::max(1.0, bi.norm() * bj.norm())) {
    fail(ErrorCode::SamePoint, "the two octad points give the zero form");
  }

  // Two points spanning the line, then the restricted determinant.
  Eigen::JacobiSVD<Matrix> svd(Matrix(l.transpose()), Eigen::ComputeFullV);
  std::mt19937_64 rng(seed);
  const Vec3 p = svd.matrixV().col(1);
  const Vec3 q = svd.matrixV().col(2) + random_complex(rng) * p;
  const HomPoly det = determinant(m);
  const auto coeffs = restrict_to_line(det, {p(0), p(1), p(2)}, {q(0), q(1), q(2)});
  double cmax = 0.0;
  for (const Complex& c : coeffs) cmax = std::max(cmax, std::abs(c));
  if (cmax <= tol.match_tol * std::max(1.0, det.max_abs_coeff())) {
    out.contained = true;
    return out;
  }
  std::vector<Complex> roots;
  for (const RootCluster& r : polynomial_roots(coeffs, tol.zero_tol, 0.0))
    for (int k = 0; k < r.multiplicity; ++k) roots.push_back(r.value);
  if (roots.size() != 4) {
    out.tangency_residual = std::numeric_limits<double>::infinity();
    return out;
  }
  auto gap = [&](int a, int b) {
    return std::abs(roots[static_cast<std::size_t>(a)] - roots[static_cast<std::size_t>(b)]) /
           std::max(1.0, std::abs(roots[static_cast<std::size_t>(a)]));
  };
  out.tangency_residual = std::min({std::max(gap(0, 1), gap(2, 3)), std::max(gap(0, 2), gap(1, 3)),
                                    std::max(gap(0, 3), gap(1, 2))});
  return out;
}

}  // namespace pfaffrep
