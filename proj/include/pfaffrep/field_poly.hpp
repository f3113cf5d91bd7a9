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

// Complex scalars, tolerances, projective points, linear forms and sparse
// homogeneous polynomials in three variables (x0, x1, x2).

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pfaffrep {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Numerical thresholds shared by every operation.
///
/// zero_tol decides when a scalar is zero, rank_tol is the relative singular
/// value cutoff for kernels, match_tol is the relative tolerance for
/// comparing computed objects against each other.
struct Tolerances {
  double zero_tol = 1e-9;
  double rank_tol = 1e-8;
  double match_tol = 1e-6;

  /// Throws InvalidTolerance unless 0 < zero_tol <= rank_tol <= match_tol.
  void validate() const;
};

/// Point of the projective plane, stored at the representative whose first
/// coordinate of modulus above zero_tol equals one.
class ProjPoint {
 public:
  ProjPoint(Complex x0, Complex x1, Complex x2, double zero_tol = Tolerances{}.zero_tol);
  explicit ProjPoint(const std::array<Complex, 3>& x, double zero_tol = Tolerances{}.zero_tol)
      : ProjPoint(x[0], x[1], x[2], zero_tol) {}

  Complex operator[](int k) const { return x_[static_cast<std::size_t>(k)]; }
  const std::array<Complex, 3>& coords() const { return x_; }

  /// Coordinate-wise comparison of normalized representatives.
  bool approx_equal(const ProjPoint& other, double tol) const;

 private:
  std::array<Complex, 3> x_;
};

/// c0*x0 + c1*x1 + c2*x2.
struct LinearForm {
  std::array<Complex, 3> c{};

  Complex operator()(const std::array<Complex, 3>& x) const {
    return c[0] * x[0] + c[1] * x[1] + c[2] * x[2];
  }
  Complex operator()(const ProjPoint& p) const { return (*this)(p.coords()); }
  double norm1() const { return std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]); }
  bool is_zero(double zero_tol) const { return norm1() <= zero_tol; }
};

using Exponent = std::array<int, 3>;

/// Graded lexicographic order: larger x0 power first, then larger x1 power.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = a[0] + a[1] + a[2];
    const int db = b[0] + b[1] + b[2];
    if (da != db) return da > db;
    if (a[0] != b[0]) return a[0] > b[0];
    if (a[1] != b[1]) return a[1] > b[1];
    return a[2] > b[2];
  }
};

/// Sparse homogeneous polynomial in x0, x1, x2.
///
/// Arithmetic keeps every term it produces (exact zeros excepted); call
/// normalized() to drop coefficients below a threshold.
class HomPoly {
 public:
  using Terms = std::map<Exponent, Complex, GradedLex>;

  explicit HomPoly(int degree = 0);

  static HomPoly constant(Complex c);
  static HomPoly monomial(const Exponent& e, Complex c);
  static HomPoly from_linear(const LinearForm& l);

  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  Complex coeff(const Exponent& e) const;
  void add_term(const Exponent& e, Complex c);

  HomPoly normalized(double zero_tol) const;
  bool is_zero(double zero_tol = 0.0) const;
  double max_abs_coeff() const;

  Complex evaluate(const std::array<Complex, 3>& x) const;
  Complex operator()(const ProjPoint& p) const { return evaluate(p.coords()); }

  HomPoly& operator+=(const HomPoly& other);
  HomPoly& operator-=(const HomPoly& other);
  HomPoly& operator*=(Complex s);

  friend HomPoly operator+(HomPoly a, const HomPoly& b) { return a += b; }
  friend HomPoly operator-(HomPoly a, const HomPoly& b) { return a -= b; }
  friend HomPoly operator*(HomPoly a, Complex s) { return a *= s; }
  friend HomPoly operator*(Complex s, HomPoly a) { return a *= s; }
  friend HomPoly operator*(const HomPoly& a, const HomPoly& b);

 private:
  int degree_;
  Terms terms_;
};

/// All exponent triples of total degree d in graded-lex order.
std::vector<Exponent> monomials_of_degree(int degree);

Complex eval(const HomPoly& p, const ProjPoint& pt);

/// Partial derivative along axis k. Degree 0 input yields the zero
/// polynomial of degree 0.
HomPoly partial(const HomPoly& p, int axis);

/// Coefficients (ascending powers of t) of p(base + t*direction).
std::vector<Complex> restrict_to_line(const HomPoly& p, const std::array<Complex, 3>& base,
                                      const std::array<Complex, 3>& direction);

struct RootCluster {
  Complex value;
  int multiplicity = 1;
};

/// Roots of a univariate polynomial given by ascending coefficients, via the
/// eigenvalues of its companion matrix. Trailing coefficients with modulus
/// below zero_tol*max|c| are dropped first. Roots closer than cluster_tol
/// (relative to max(1,|root|)) are merged.
std::vector<RootCluster> polynomial_roots(std::span<const Complex> ascending, double zero_tol,
                                          double cluster_tol);

/// Evaluate a univariate polynomial with ascending coefficients (Horner).
Complex horner(std::span<const Complex> ascending, Complex t);

struct LineRoot {
  Complex value;
  int multiplicity = 1;
  double residual = 0.0;
};

/// Roots t of p(0, t, 1): the points (0, t, 1) where the curve p = 0 meets
/// the line x0 = 0.
///
/// Throws NonGenericLine when p(0,x1,x2) vanishes identically or the point
/// (0,1,0) lies on the curve, and RepeatedRoots when two roots are closer
/// than rank_tol.
std::vector<LineRoot> roots_on_line(const HomPoly& p, const Tolerances& tol);

/// Returns c with q = c*p, comparing coefficients relative to the largest
/// coefficient modulus involved.
std::optional<Complex> equal_up_to_scale(const HomPoly& p, const HomPoly& q, double rel_tol);

/// Relative coefficient residual max|q - c p| / max(|q|,|c p|).
double scale_residual(const HomPoly& p, const HomPoly& q, Complex c);

/// Standard complex normal samples from a seeded engine.
Complex random_complex(std::mt19937_64& rng);

/// Points of the curve p = 0, sampled by intersecting it with random lines
/// through a fixed random point. Every returned point has x0 != 0.
std::vector<ProjPoint> sample_curve_points(const HomPoly& p, int count, std::mt19937_64& rng,
                                           const Tolerances& tol);

/// Relative residual |p(pt)| / (max coefficient * |pt|^deg).
double curve_residual(const HomPoly& p, const ProjPoint& pt);

}  // namespace pfaffrep
