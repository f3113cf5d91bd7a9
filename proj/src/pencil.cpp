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

#include "pfaffrep/pencil.hpp"

#include <bit>
#include <cstdint>
#include <sstream>
#include <unordered_map>

#include <Eigen/SVD>

#include "pfaffrep/errors.hpp"

namespace pfaffrep {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) fail(ErrorCode::DegreeMismatch, std::string(what) + " is not square");
}

// Expansion along the lowest remaining index; memo keyed by index subset.
class PfaffianExpander {
 public:
  explicit PfaffianExpander(std::vector<std::vector<HomPoly>> entries)
      : entries_(std::move(entries)) {}

  HomPoly run() {
    const auto n = entries_.size();
    const std::uint32_t all = n == 0 ? 0u : static_cast<std::uint32_t>((1ull << n) - 1);
    return expand(all);
  }

 private:
  HomPoly expand(std::uint32_t mask) {
    if (mask == 0) return HomPoly::constant(1.0);
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    const int first = std::countr_zero(mask);
    const std::uint32_t rest = mask & ~(1u << first);
    HomPoly sum(std::popcount(mask) / 2);
    int position = 0;
    for (std::uint32_t scan = rest; scan != 0; scan &= scan - 1, ++position) {
      const int j = std::countr_zero(scan);
      const HomPoly& a = entries_[static_cast<std::size_t>(first)][static_cast<std::size_t>(j)];
      if (a.terms().empty()) continue;
      HomPoly term = a * expand(rest & ~(1u << j));
      if (position % 2 == 1) term *= -1.0;
      sum += term;
    }
    memo_.emplace(mask, sum);
    return sum;
  }

  std::vector<std::vector<HomPoly>> entries_;
  std::unordered_map<std::uint32_t, HomPoly> memo_;
};

HomPoly pfaffian_of_indices(const SkewPencil& p, const std::vector<int>& idx) {
  if (idx.size() % 2 != 0) fail(ErrorCode::DegreeMismatch, "odd pfaffian size");
  if (idx.size() > 30) fail(ErrorCode::Unsupported, "pencil too large for symbolic pfaffian");
  std::vector<std::vector<HomPoly>> e(idx.size(), std::vector<HomPoly>(idx.size(), HomPoly(1)));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) e[a][b] = HomPoly::from_linear(p.entry(idx[a], idx[b]));
  return PfaffianExpander(std::move(e)).run();
}

}  // namespace

SkewPencil::SkewPencil(std::array<Matrix, 3> coefficients, double zero_tol)
    : a_(std::move(coefficients)) {
  const auto n = a_[0].rows();
  for (int k = 0; k < 3; ++k) {
    const Matrix& m = a_[static_cast<std::size_t>(k)];
    if (m.rows() != m.cols() || m.rows() != n) {
      fail(ErrorCode::DegreeMismatch, "pencil coefficients must be square of equal size");
    }
  }
  if (n == 0 || n % 2 != 0) fail(ErrorCode::DegreeMismatch, "pencil size must be even and positive");
  for (int k = 0; k < 3; ++k) {
    Matrix& m = a_[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!std::isfinite(std::abs(m(i, j)))) {
          std::ostringstream os;
          os << "A" << k << "[" << i << "][" << j << "] is not finite";
          fail(ErrorCode::SchemaError, os.str());
        }
      }
    }
    const double bound = zero_tol * std::max(1.0, max_abs(m));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i; j < n; ++j) {
        if (std::abs(m(i, j) + m(j, i)) > bound) {
          std::ostringstream os;
          os << "A" << k << "[" << i << "][" << j << "] = " << m(i, j) << " but A" << k << "[" << j
             << "][" << i << "] = " << m(j, i);
          fail(ErrorCode::SkewSymmetryViolation, os.str());
        }
      }
    }
    m = (0.5 * (m - m.transpose())).eval();
  }
}

Matrix SkewPencil::at(const std::array<Complex, 3>& x) const {
  return x[0] * a_[0] + x[1] * a_[1] + x[2] * a_[2];
}

LinearForm SkewPencil::entry(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) fail(ErrorCode::IndexOutOfRange, "entry index");
  return LinearForm{{a_[0](i, j), a_[1](i, j), a_[2](i, j)}};
}

SkewPencil SkewPencil::with_constant_term(const Matrix& a0) const {
  return SkewPencil({a0, a_[1], a_[2]}, Tolerances{}.zero_tol);
}

double SkewPencil::scale() const {
  return std::max({max_abs(a_[0]), max_abs(a_[1]), max_abs(a_[2])});
}

Matrix DetRep::at(const std::array<Complex, 3>& x) const {
  return x[0] * m[0] + x[1] * m[1] + x[2] * m[2];
}

void DetRep::validate() const {
  const auto n = m[0].rows();
  for (const Matrix& a : m) {
    if (a.rows() != n || a.cols() != n) fail(ErrorCode::DegreeMismatch, "DetRep matrices must be d x d");
  }
  if (n == 0) fail(ErrorCode::DegreeMismatch, "empty DetRep");
}

HomPoly pfaffian(const SkewPencil& p) {
  std::vector<int> idx(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  return pfaffian_of_indices(p, idx);
}

HomPoly pfaffian_minor(const SkewPencil& p, int i, int j) {
  if (i < 0 || j < 0 || i >= p.size() || j >= p.size() || i == j) {
    std::ostringstream os;
    os << "minor indices (" << i << ", " << j << ") invalid for size " << p.size();
    fail(ErrorCode::IndexOutOfRange, os.str());
  }
  std::vector<int> idx;
  for (int k = 0; k < p.size(); ++k)
    if (k != i && k != j) idx.push_back(k);
  return pfaffian_of_indices(p, idx);
}

Complex pfaffian_value(const Matrix& input) {
  require_square(input, "pfaffian argument");
  const Eigen::Index n = input.rows();
  if (n % 2 != 0) return 0.0;
  Matrix a = input;
  Complex pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = 0;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == Complex{}) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      const Vector tau = a.row(k).tail(m).transpose() / a(k, k + 1);
      const Vector col = a.col(k + 1).tail(m);
      a.bottomRightCorner(m, m) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

Matrix pfaffian_adjoint(const Matrix& a) {
  require_square(a, "adjoint argument");
  const Eigen::Index n = a.rows();
  Matrix adj = Matrix::Zero(n, n);
  if (n == 2) {
    adj(0, 1) = -1.0;
    adj(1, 0) = 1.0;
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      std::vector<Eigen::Index> keep;
      for (Eigen::Index k = 0; k < n; ++k)
        if (k != i && k != j) keep.push_back(k);
      const Matrix sub = a(keep, keep);
      const Complex v = ((i + j) % 2 == 0 ? 1.0 : -1.0) * pfaffian_value(sub);
      adj(i, j) = v;
      adj(j, i) = -v;
    }
  }
  return adj;
}

Matrix pfaffian_adjoint_at(const SkewPencil& p, const ProjPoint& pt) {
  return pfaffian_adjoint(p.at(pt));
}

HomPoly jacobi_derivative(const SkewPencil& p, int k) {
  if (k < 0 || k > 2) fail(ErrorCode::IndexOutOfRange, "axis must be 0, 1 or 2");
  HomPoly sum(p.half_degree() - 1);
  const Matrix& ak = p.coefficient(k);
  for (int i = 0; i < p.size(); ++i) {
    for (int j = i + 1; j < p.size(); ++j) {
      if (ak(i, j) == Complex{}) continue;
      const double sign = (i + j) % 2 == 0 ? -1.0 : 1.0;
      sum += pfaffian_minor(p, i, j) * (sign * ak(i, j));
    }
  }
  return sum;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Vector fix_phase(const Vector& v) {
  if (v.size() == 0) return v;
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v(k)) == 0.0) return v;
  return v * (std::abs(v(k)) / v(k));
}

Matrix null_space(const Matrix& a, double rank_tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * smax) ++rank;
  if (smax == 0.0) rank = 0;
  return svd.matrixV().rightCols(a.cols() - rank);
}

KernelBasis kernel_at(const SkewPencil& p, const ProjPoint& pt, const Tolerances& tol) {
  const Matrix a = p.at(pt);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  int corank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax == 0.0 || s(i) <= tol.rank_tol * smax) ++corank;
  if (corank != 2) {
    std::ostringstream os;
    os << "numerical corank " << corank << " (expected 2) at the given point";
    fail(ErrorCode::RankDeficiency, os.str());
  }
  Matrix v = svd.matrixV().rightCols(2);
  v.col(0) = fix_phase(v.col(0));
  v.col(1) = fix_phase(v.col(1));
  const double residual = (a * v).norm() / smax;
  return KernelBasis{pt, v, residual};
}

SkewPencil congruence(const SkewPencil& p, const Matrix& x, const Tolerances& tol) {
  if (x.rows() != p.size() || x.cols() != p.size()) {
    fail(ErrorCode::DegreeMismatch, "congruence matrix has wrong size");
  }
  if (std::abs(x.determinant()) <= tol.zero_tol) {
    fail(ErrorCode::SingularTransform, "congruence matrix is singular");
  }
  std::array<Matrix, 3> out;
  for (int k = 0; k < 3; ++k) {
    const Matrix m = x * p.coefficient(k) * x.transpose();
    out[static_cast<std::size_t>(k)] = 0.5 * (m - m.transpose());
  }
  return SkewPencil(std::move(out), tol.zero_tol);
}

SkewPencil decomposable_from(const DetRep& m) {
  m.validate();
  const auto d = m.m[0].rows();
  std::array<Matrix, 3> out;
  for (int k = 0; k < 3; ++k) {
    Matrix a = Matrix::Zero(2 * d, 2 * d);
    a.topRightCorner(d, d) = m.m[static_cast<std::size_t>(k)];
    a.bottomLeftCorner(d, d) = -m.m[static_cast<std::size_t>(k)].transpose();
    out[static_cast<std::size_t>(k)] = a;
  }
  return SkewPencil(std::move(out));
}

Matrix wedge_to_matrix(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) fail(ErrorCode::DegreeMismatch, "wedge factors differ in length");
  return u * v.transpose() - v * u.transpose();
}

HomPoly determinant(const DetRep& m) {
  m.validate();
  const int d = m.half_degree();
  if (d > 30) fail(ErrorCode::Unsupported, "determinant too large");
  std::vector<std::vector<HomPoly>> e(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      e[static_cast<std::size_t>(i)].push_back(
          HomPoly::from_linear(LinearForm{{m.m[0](i, j), m.m[1](i, j), m.m[2](i, j)}}));
  std::unordered_map<std::uint32_t, HomPoly> memo;
  // used = set of consumed columns; the current row is popcount(used).
  auto expand = [&](auto&& self, std::uint32_t used) -> HomPoly {
    const int row = std::popcount(used);
    if (row == d) return HomPoly::constant(1.0);
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    HomPoly sum(d - row);
    int position = 0;
    for (int c = 0; c < d; ++c) {
      if (used & (1u << c)) continue;
      const HomPoly& a = e[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
      if (!a.terms().empty()) {
        HomPoly term = a * self(self, used | (1u << c));
        if (position % 2 == 1) term *= -1.0;
        sum += term;
      }
      ++position;
    }
    memo.emplace(used, sum);
    return sum;
  };
  return expand(expand, 0u);
}

}  // namespace pfaffrep
