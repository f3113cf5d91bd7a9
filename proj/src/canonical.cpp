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

#include "pfaffrep/canonical.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include <Eigen/SVD>

#include "pfaffrep/errors.hpp"

namespace pfaffrep {

namespace {

Matrix symplectic_block() {
  Matrix j(2, 2);
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

bool root_less(Complex a, Complex b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

void require_second_form(const SkewPencil& p, const Tolerances& tol) {
  const int d = p.half_degree();
  const Matrix& a1 = p.coefficient(1);
  const Matrix& a2 = p.coefficient(2);
  const double bound = tol.match_tol * std::max(1.0, std::max(max_abs(a1), max_abs(a2)));
  Matrix e1 = Matrix::Zero(2 * d, 2 * d);
  e1.topRightCorner(d, d) = Matrix::Identity(d, d);
  e1.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
  Matrix e2 = Matrix::Zero(2 * d, 2 * d);
  const Matrix diag = a2.topRightCorner(d, d).diagonal().asDiagonal();
  e2.topRightCorner(d, d) = diag;
  e2.bottomLeftCorner(d, d) = -diag;
  if (max_abs(a1 - e1) > bound || max_abs(a2 - e2) > bound) {
    fail(ErrorCode::NotInCanonicalForm, "A1, A2 are not [[0,Id],[-Id,0]], [[0,D],[-D,0]]");
  }
}

}  // namespace

double canonical_residual(const SkewPencil& p, const std::vector<Complex>& roots) {
  const int d = p.half_degree();
  if (static_cast<int>(roots.size()) != d) return std::numeric_limits<double>::infinity();
  Matrix e1 = Matrix::Zero(2 * d, 2 * d);
  Matrix e2 = Matrix::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    e1.block(2 * i, 2 * i, 2, 2) = symplectic_block();
    e2.block(2 * i, 2 * i, 2, 2) = -roots[static_cast<std::size_t>(i)] * symplectic_block();
  }
  const double scale = std::max(1.0, std::max(max_abs(e1), max_abs(e2)));
  return std::max(max_abs(p.coefficient(1) - e1), max_abs(p.coefficient(2) - e2)) / scale;
}

std::vector<Complex> canonical_roots(const SkewPencil& p, const Tolerances& tol) {
  const int d = p.half_degree();
  std::vector<Complex> roots;
  for (int i = 0; i < d; ++i) roots.push_back(-p.coefficient(2)(2 * i, 2 * i + 1));
  if (canonical_residual(p, roots) > tol.match_tol) {
    fail(ErrorCode::NotInCanonicalForm, "A1, A2 are not block diagonal with symplectic blocks");
  }
  return roots;
}

CanonicalReport to_canonical(const SkewPencil& p, const Tolerances& tol, std::uint64_t seed) {
  const int d = p.half_degree();
  auto line_roots = roots_on_line(pfaffian(p), tol);
  std::vector<Complex> roots;
  for (const auto& r : line_roots) roots.push_back(r.value);
  std::sort(roots.begin(), roots.end(), root_less);
  if (static_cast<int>(roots.size()) != d) {
    fail(ErrorCode::RepeatedRoots, "expected " + std::to_string(d) + " roots on x0 = 0");
  }

  std::mt19937_64 rng(seed);
  const Matrix& a1 = p.coefficient(1);
  const double a1_scale = std::max(1.0, max_abs(a1));
  Matrix b(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    const Complex root = roots[static_cast<std::size_t>(i)];
    const Matrix fiber = root * a1 + p.coefficient(2);
    const Matrix ker = null_space(fiber, tol.rank_tol);
    if (ker.cols() != 2) {
      std::ostringstream os;
      os << "kernel at root " << root << " has dimension " << ker.cols() << " (expected 2)";
      fail(ErrorCode::SpanFailure, os.str());
    }
    Vector u = ker.col(0);
    Vector v = ker.col(1);
    Complex pairing = u.transpose() * a1 * v;
    for (int attempt = 0; attempt < 8 && std::abs(pairing) <= tol.rank_tol * a1_scale; ++attempt) {
      Matrix mix(2, 2);
      for (int k = 0; k < 4; ++k) mix(k / 2, k % 2) = random_complex(rng);
      const Matrix basis = ker * mix;
      u = basis.col(0);
      v = basis.col(1);
      pairing = u.transpose() * a1 * v;
    }
    if (std::abs(pairing) <= tol.rank_tol * a1_scale) {
      std::ostringstream os;
      os << "A1 pairing vanishes on the kernel at root " << root;
      fail(ErrorCode::SpanFailure, os.str());
    }
    v /= pairing;
    b.row(2 * i) = u.transpose();
    b.row(2 * i + 1) = v.transpose();
  }

  Eigen::JacobiSVD<Matrix> svd(b);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= tol.rank_tol * s(0)) {
    fail(ErrorCode::SpanFailure, "kernels at the roots do not span the whole space");
  }
  SkewPencil out = congruence(p, b, tol);
  const double residual = canonical_residual(out, roots);
  return CanonicalReport{roots, b, std::move(out), residual};
}

Matrix second_canonical_Q(int d) {
  Matrix q = Matrix::Zero(2 * d, 2 * d);
  for (int r = 0; r < d; ++r) {
    q(r, 2 * r) = 1.0;
    q(r, 2 * r + 1) = -1.0;
    q(d + r, 2 * r + 1) = 1.0;
  }
  return q;
}

SkewPencil to_second_canonical(const SkewPencil& p, const Tolerances& tol) {
  canonical_roots(p, tol);
  return congruence(p, second_canonical_Q(p.half_degree()), tol);
}

SkewPencil gauge_action(const SkewPencil& p, const std::vector<Matrix>& blocks, const Tolerances& tol) {
  const int d = p.half_degree();
  if (static_cast<int>(blocks.size()) != d) {
    fail(ErrorCode::DegreeMismatch, "expected " + std::to_string(d) + " gauge blocks");
  }
  canonical_roots(p, tol);
  Matrix r = Matrix::Zero(2 * d, 2 * d);
  for (int i = 0; i < d; ++i) {
    const Matrix& blk = blocks[static_cast<std::size_t>(i)];
    if (blk.rows() != 2 || blk.cols() != 2) fail(ErrorCode::DegreeMismatch, "gauge blocks must be 2x2");
    const Complex det = blk.determinant();
    if (std::abs(det - 1.0) > tol.match_tol) {
      std::ostringstream os;
      os << "gauge block " << i << " has determinant " << det;
      fail(ErrorCode::NotUnimodular, os.str());
    }
    r.block(2 * i, 2 * i, 2, 2) = blk;
  }
  return congruence(p, r, tol);
}

int free_parameter_count(int d) { return d >= 3 ? 3 * d * (d - 3) / 2 : 0; }

double off_pattern_norm(const SkewPencil& p) {
  const int d = p.half_degree();
  const Matrix& a0 = p.coefficient(0);
  double m = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      m = std::max(m, std::abs(a0(i, j)));
      m = std::max(m, std::abs(a0(d + i, d + j)));
    }
  }
  return m;
}

StructureReport structure_report(const SkewPencil& p, const Tolerances& tol) {
  require_second_form(p, tol);
  const int d = p.half_degree();
  const Matrix& a0 = p.coefficient(0);
  const double bound = tol.match_tol * std::max(1.0, p.scale());
  StructureReport r;
  r.free_parameter_count = free_parameter_count(d);
  r.is_decomposable_form = off_pattern_norm(p) <= bound;
  bool symmetric = r.is_decomposable_form;
  for (int i = 0; i < d && symmetric; ++i)
    for (int j = i + 1; j < d && symmetric; ++j)
      symmetric = std::abs(a0(i, d + j) - a0(j, d + i)) <= bound;
  r.is_symmetric_blocks = symmetric;
  return r;
}

}  // namespace pfaffrep
