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

#include "pfaffrep/field_poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pfaffrep/errors.hpp"

namespace pfaffrep {

void Tolerances::validate() const {
  const bool ok = zero_tol > 0.0 && rank_tol > 0.0 && match_tol > 0.0 && zero_tol <= rank_tol &&
                  rank_tol <= match_tol && std::isfinite(match_tol);
  if (!ok) {
    std::ostringstream os;
    os << "need 0 < zero_tol <= rank_tol <= match_tol, got " << zero_tol << ", " << rank_tol << ", "
       << match_tol;
    fail(ErrorCode::InvalidTolerance, os.str());
  }
}

// ---------------------------------------------------------------- ProjPoint

ProjPoint::ProjPoint(Complex x0, Complex x1, Complex x2, double zero_tol) : x_{x0, x1, x2} {
  for (const Complex& c : x_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      fail(ErrorCode::ZeroPoint, "projective point has a non-finite coordinate");
    }
  }
  for (int k = 0; k < 3; ++k) {
    if (std::abs(x_[k]) > zero_tol) {
      const Complex s = x_[k];
      for (Complex& c : x_) c /= s;
      x_[k] = 1.0;
      return;
    }
  }
  fail(ErrorCode::ZeroPoint, "all coordinates of the projective point vanish");
}

bool ProjPoint::approx_equal(const ProjPoint& other, double tol) const {
  for (int k = 0; k < 3; ++k) {
    if (std::abs(x_[k] - other.x_[k]) > tol * std::max(1.0, std::abs(x_[k]))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- HomPoly

HomPoly::HomPoly(int degree) : degree_(degree) {
  if (degree < 0) fail(ErrorCode::DegreeMismatch, "negative degree");
}

HomPoly HomPoly::constant(Complex c) {
  HomPoly p(0);
  p.add_term({0, 0, 0}, c);
  return p;
}

HomPoly HomPoly::monomial(const Exponent& e, Complex c) {
  HomPoly p(e[0] + e[1] + e[2]);
  p.add_term(e, c);
  return p;
}

HomPoly HomPoly::from_linear(const LinearForm& l) {
  HomPoly p(1);
  p.add_term({1, 0, 0}, l.c[0]);
  p.add_term({0, 1, 0}, l.c[1]);
  p.add_term({0, 0, 1}, l.c[2]);
  return p;
}

Complex HomPoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex{} : it->second;
}

void HomPoly::add_term(const Exponent& e, Complex c) {
  if (e[0] < 0 || e[1] < 0 || e[2] < 0 || e[0] + e[1] + e[2] != degree_) {
    fail(ErrorCode::DegreeMismatch, "exponent does not match polynomial degree " +
                                        std::to_string(degree_));
  }
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

HomPoly HomPoly::normalized(double zero_tol) const {
  HomPoly out(degree_);
  for (const auto& [e, c] : terms_) {
    if (std::abs(c) > zero_tol) out.terms_.emplace(e, c);
  }
  return out;
}

bool HomPoly::is_zero(double zero_tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const auto& t) { return std::abs(t.second) <= zero_tol; });
}

double HomPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

namespace {

Complex ipow(Complex x, int n) {
  Complex r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void require_same_degree(const HomPoly& a, const HomPoly& b) {
  if (a.degree() != b.degree() && !a.terms().empty() && !b.terms().empty()) {
    fail(ErrorCode::DegreeMismatch, "cannot add polynomials of degree " +
                                        std::to_string(a.degree()) + " and " +
                                        std::to_string(b.degree()));
  }
}

std::vector<Complex> poly_mul(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

}  // namespace

Complex HomPoly::evaluate(const std::array<Complex, 3>& x) const {
  Complex s{};
  for (const auto& [e, c] : terms_) s += c * ipow(x[0], e[0]) * ipow(x[1], e[1]) * ipow(x[2], e[2]);
  return s;
}

HomPoly& HomPoly::operator+=(const HomPoly& other) {
  require_same_degree(*this, other);
  if (terms_.empty()) degree_ = other.degree_;
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

HomPoly& HomPoly::operator-=(const HomPoly& other) {
  require_same_degree(*this, other);
  if (terms_.empty()) degree_ = other.degree_;
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

HomPoly& HomPoly::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

HomPoly operator*(const HomPoly& a, const HomPoly& b) {
  HomPoly r(a.degree() + b.degree());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms())
      r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
  return r;
}

std::vector<Exponent> monomials_of_degree(int degree) {
  std::vector<Exponent> out;
  for (int a = degree; a >= 0; --a)
    for (int b = degree - a; b >= 0; --b) out.push_back({a, b, degree - a - b});
  return out;
}

Complex eval(const HomPoly& p, const ProjPoint& pt) { return p.evaluate(pt.coords()); }

HomPoly partial(const HomPoly& p, int axis) {
  if (axis < 0 || axis > 2) fail(ErrorCode::IndexOutOfRange, "axis must be 0, 1 or 2");
  if (p.degree() == 0) return HomPoly(0);
  HomPoly r(p.degree() - 1);
  for (const auto& [e, c] : p.terms()) {
    if (e[axis] == 0) continue;
    Exponent f = e;
    f[axis] -= 1;
    r.add_term(f, c * static_cast<double>(e[axis]));
  }
  return r;
}

std::vector<Complex> restrict_to_line(const HomPoly& p, const std::array<Complex, 3>& base,
                                      const std::array<Complex, 3>& direction) {
  std::vector<Complex> out(static_cast<std::size_t>(p.degree()) + 1);
  for (const auto& [e, c] : p.terms()) {
    std::vector<Complex> acc{c};
    for (int k = 0; k < 3; ++k) {
      const std::vector<Complex> lin{base[k], direction[k]};
      for (int i = 0; i < e[k]; ++i) acc = poly_mul(acc, lin);
    }
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] += acc[i];
  }
  return out;
}

Complex horner(std::span<const Complex> ascending, Complex t) {
  Complex r{};
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) r = r * t + *it;
  return r;
}

std::vector<RootCluster> polynomial_roots(std::span<const Complex> ascending, double zero_tol,
                                          double cluster_tol) {
  double scale = 0.0;
  for (const Complex& c : ascending) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  std::size_t n = ascending.size();
  while (n > 0 && std::abs(ascending[n - 1]) <= zero_tol * scale) --n;
  if (n <= 1) return {};
  const int deg = static_cast<int>(n) - 1;
  const Complex lead = ascending[n - 1];

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -ascending[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + deg);

  // Newton polish on the full polynomial.
  const std::span<const Complex> poly = ascending.first(n);
  std::vector<Complex> deriv(n - 1);
  for (std::size_t i = 1; i < n; ++i) deriv[i - 1] = poly[i] * static_cast<double>(i);
  for (Complex& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const Complex f = horner(poly, r);
      const Complex df = horner(deriv, r);
      if (std::abs(df) <= 1e-300) break;
      const Complex step = f / df;
      if (!(std::abs(step) < 1e-3 * std::max(1.0, std::abs(r)))) break;
      r -= step;
    }
  }

  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<RootCluster> clusters;
  std::vector<Complex> sums;
  for (const Complex& r : roots) {
    bool merged = false;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (std::abs(clusters[c].value - r) <= cluster_tol * std::max(1.0, std::abs(r))) {
        sums[c] += r;
        clusters[c].multiplicity += 1;
        clusters[c].value = sums[c] / static_cast<double>(clusters[c].multiplicity);
        merged = true;
        break;
      }
    }
    if (!merged) {
      clusters.push_back({r, 1});
      sums.push_back(r);
    }
  }
  return clusters;
}

std::vector<LineRoot> roots_on_line(const HomPoly& p, const Tolerances& tol) {
  const int d = p.degree();
  std::vector<Complex> coeffs(static_cast<std::size_t>(d) + 1);
  for (int b = 0; b <= d; ++b) coeffs[static_cast<std::size_t>(b)] = p.coeff({0, b, d - b});
  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale <= tol.zero_tol) {
    fail(ErrorCode::NonGenericLine, "polynomial vanishes identically on the line x0 = 0");
  }
  if (d == 0) return {};
  if (std::abs(coeffs.back()) <= tol.zero_tol * scale) {
    fail(ErrorCode::NonGenericLine, "the point (0,1,0) lies on the curve");
  }
  const auto clusters = polynomial_roots(coeffs, tol.zero_tol, tol.rank_tol);
  std::vector<LineRoot> out;
  for (const auto& c : clusters) {
    if (c.multiplicity > 1) {
      std::ostringstream os;
      os << "root " << c.value << " has multiplicity " << c.multiplicity
         << "; a coordinate change is required";
      fail(ErrorCode::RepeatedRoots, os.str());
    }
    const double residual = std::abs(horner(coeffs, c.value)) /
                            (scale * std::pow(std::max(1.0, std::abs(c.value)), d));
    out.push_back({c.value, c.multiplicity, residual});
  }
  return out;
}

double scale_residual(const HomPoly& p, const HomPoly& q, Complex c) {
  double num = 0.0;
  for (const auto& [e, qc] : q.terms()) num = std::max(num, std::abs(qc - c * p.coeff(e)));
  for (const auto& [e, pc] : p.terms()) num = std::max(num, std::abs(q.coeff(e) - c * pc));
  const double den = std::max(q.max_abs_coeff(), std::abs(c) * p.max_abs_coeff());
  if (den == 0.0) return 0.0;
  return num / den;
}

std::optional<Complex> equal_up_to_scale(const HomPoly& p, const HomPoly& q, double rel_tol) {
  if (p.degree() != q.degree() && !p.terms().empty() && !q.terms().empty()) return std::nullopt;
  if (p.terms().empty() || p.max_abs_coeff() == 0.0) return std::nullopt;
  auto dominant = std::max_element(p.terms().begin(), p.terms().end(), [](const auto& a, const auto& b) {
    return std::abs(a.second) < std::abs(b.second);
  });
  const Complex c = q.coeff(dominant->first) / dominant->second;
  if (scale_residual(p, q, c) <= rel_tol) return c;
  return std::nullopt;
}

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

double curve_residual(const HomPoly& p, const ProjPoint& pt) {
  double m = 0.0;
  for (int k = 0; k < 3; ++k) m = std::max(m, std::abs(pt[k]));
  const double scale = p.max_abs_coeff() * std::pow(m, p.degree());
  if (scale == 0.0) return 0.0;
  return std::abs(eval(p, pt)) / scale;
}

std::vector<ProjPoint> sample_curve_points(const HomPoly& p, int count, std::mt19937_64& rng,
                                           const Tolerances& tol) {
  std::vector<ProjPoint> out;
  if (count <= 0) return out;
  const std::array<Complex, 3> base{1.0, random_complex(rng), random_complex(rng)};
  for (int attempt = 0; attempt < 64 * count && static_cast<int>(out.size()) < count; ++attempt) {
    const std::array<Complex, 3> dir{random_complex(rng), random_complex(rng), random_complex(rng)};
    const auto coeffs = restrict_to_line(p, base, dir);
    const auto roots = polynomial_roots(coeffs, tol.zero_tol, 0.0);
    for (const auto& r : roots) {
      const std::array<Complex, 3> x{base[0] + r.value * dir[0], base[1] + r.value * dir[1],
                                     base[2] + r.value * dir[2]};
      if (std::abs(x[0]) <= 1e-3 * std::max({1.0, std::abs(x[1]), std::abs(x[2])})) continue;
      out.emplace_back(x, tol.zero_tol);
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  return out;
}

}  // namespace pfaffrep
