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

// Brute-force reference computations used to pin down library results.

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "pfaffrep/canonical.hpp"
#include "pfaffrep/pencil.hpp"

namespace oracle {

using namespace pfaffrep;

inline int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

/// Every perfect matching of {0..n-1} as a flat list i1 j1 i2 j2 ... with
/// i_k < j_k and i1 < i2 < ...
inline std::vector<std::vector<int>> perfect_matchings(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  auto rec = [&](auto&& self) -> void {
    int first = -1;
    for (int i = 0; i < n; ++i)
      if (!used[static_cast<std::size_t>(i)]) {
        first = i;
        break;
      }
    if (first < 0) {
      out.push_back(current);
      return;
    }
    used[static_cast<std::size_t>(first)] = true;
    for (int j = first + 1; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      current.push_back(first);
      current.push_back(j);
      self(self);
      current.resize(current.size() - 2);
      used[static_cast<std::size_t>(j)] = false;
    }
    used[static_cast<std::size_t>(first)] = false;
  };
  rec(rec);
  return out;
}

inline Complex pfaffian_by_matchings(const Matrix& a) {
  Complex total = 0.0;
  for (const auto& m : perfect_matchings(static_cast<int>(a.rows()))) {
    Complex term = static_cast<double>(permutation_sign(m));
    for (std::size_t k = 0; k < m.size(); k += 2) term *= a(m[k], m[k + 1]);
    total += term;
  }
  return total;
}

inline HomPoly pfaffian_by_matchings(const SkewPencil& p) {
  HomPoly total(p.half_degree());
  for (const auto& m : perfect_matchings(p.size())) {
    HomPoly term = HomPoly::constant(static_cast<double>(permutation_sign(m)));
    for (std::size_t k = 0; k < m.size(); k += 2) term = term * HomPoly::from_linear(p.entry(m[k], m[k + 1]));
    total += term;
  }
  return total;
}

/// Leibniz formula.
inline Complex determinant_by_permutations(const Matrix& a) {
  std::vector<int> perm(static_cast<std::size_t>(a.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  Complex total = 0.0;
  do {
    Complex term = static_cast<double>(permutation_sign(perm));
    for (std::size_t i = 0; i < perm.size(); ++i) term *= a(static_cast<int>(i), perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline HomPoly determinant_by_permutations(const DetRep& m) {
  const int d = m.half_degree();
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  HomPoly total(d);
  do {
    HomPoly term = HomPoly::constant(static_cast<double>(permutation_sign(perm)));
    for (int i = 0; i < d; ++i) {
      LinearForm l;
      for (std::size_t k = 0; k < 3; ++k) l.c[k] = m.m[k](i, perm[static_cast<std::size_t>(i)]);
      term = term * HomPoly::from_linear(l);
    }
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_complex(rng);
  return m;
}

inline Matrix random_skew(int n, std::mt19937_64& rng) {
  const Matrix m = random_matrix(n, n, rng);
  return m - m.transpose();
}

inline Vector random_vector(int n, std::mt19937_64& rng) { return random_matrix(n, 1, rng).col(0); }

/// Skew pencil with A1, A2 in block form for the given roots.
inline SkewPencil block_pencil(const Matrix& a0, const std::vector<Complex>& roots) {
  const int n = static_cast<int>(a0.rows());
  Matrix a1 = Matrix::Zero(n, n);
  Matrix a2 = Matrix::Zero(n, n);
  for (int i = 0; i < n / 2; ++i) {
    a1(2 * i, 2 * i + 1) = 1.0;
    a1(2 * i + 1, 2 * i) = -1.0;
    a2(2 * i, 2 * i + 1) = -roots[static_cast<std::size_t>(i)];
    a2(2 * i + 1, 2 * i) = roots[static_cast<std::size_t>(i)];
  }
  return SkewPencil({a0, a1, a2});
}

inline std::vector<Complex> random_roots(int d, std::mt19937_64& rng) {
  std::vector<Complex> r;
  for (int i = 0; i < d; ++i) r.push_back(random_complex(rng));
  return r;
}

/// A generic pencil: block form with random roots and A0, moved by a
/// well-conditioned random congruence.
inline SkewPencil random_pencil(int d, std::mt19937_64& rng) {
  const SkewPencil b = block_pencil(random_skew(2 * d, rng), random_roots(d, rng));
  const Matrix x = Matrix::Identity(2 * d, 2 * d) + 0.3 * random_matrix(2 * d, 2 * d, rng);
  return congruence(b, x, Tolerances{});
}

/// Second canonical form built from a symmetric determinantal
/// representation M0 + x1 Id - x2 D.
inline SkewPencil random_decomposable(int d, std::mt19937_64& rng, std::vector<Complex>* roots = nullptr) {
  const Matrix m = random_matrix(d, d, rng);
  Matrix diag = Matrix::Zero(d, d);
  const std::vector<Complex> r = random_roots(d, rng);
  for (int i = 0; i < d; ++i) diag(i, i) = r[static_cast<std::size_t>(i)];
  if (roots) *roots = r;
  DetRep rep{{m + m.transpose(), Matrix::Identity(d, d), -diag}};
  return decomposable_from(rep);
}

inline double relative_difference(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max({1.0, a.norm(), b.norm()});
}

/// Overlap |<a,b>| / (|a||b|) of two complex vectors.
inline double overlap(const Vector& a, const Vector& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace oracle
