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

// The worked quartic example: F, its Scorza quartic S(F), the printed
// coefficient table of the polar cubic, the printed symmetric
// representation M and the printed kernel data.

#include <cmath>
#include <numbers>

#include "pfaffrep/quartic.hpp"

namespace example {

using namespace pfaffrep;

inline const double kCbrt107 = std::cbrt(107.0);

inline HomPoly term(int a, int b, int c, Complex coeff) { return HomPoly::monomial({a, b, c}, coeff); }

/// x^4 + x^3 y - y^4 - y z^3 + 107^(1/3) x y^2 z.
inline HomPoly quartic_f() {
  return term(4, 0, 0, 1.0) + term(3, 1, 0, 1.0) + term(0, 4, 0, -1.0) + term(0, 1, 3, -1.0) +
         term(1, 2, 1, kCbrt107);
}

/// The printed S(F).
inline HomPoly scorza_printed() {
  return term(3, 1, 0, 27.0) + term(1, 3, 0, -432.0) + term(0, 4, 0, -1.0) + term(2, 1, 1, -72.0 * kCbrt107) +
         term(1, 2, 1, -9.0 * kCbrt107) + term(2, 0, 2, 81.0 / kCbrt107) + term(1, 0, 3, -108.0) +
         term(0, 1, 3, -27.0);
}

inline LinearForm lf(Complex a, Complex b, Complex c) { return LinearForm{{a, b, c}}; }

/// The printed table of polar coefficients.
inline CubicPencil printed_w_table() {
  CubicPencil w;
  // order: w000 w111 w222 w012 w001 w002 w011 w022 w112 w122
  w.w = {lf(4, 1, 0), lf(0, -4, 0),     lf(0, -1, 0), lf(0, 1.0 / 3, 0),  lf(1, 0, 0),
         lf(0, 0, 0), lf(0, 0, 1.0 / 3), lf(0, 0, 0),  lf(1.0 / 3, 0, 0), lf(0, 0, -1)};
  return w;
}

/// Scale between the Aronhold pfaffian of the polar and the printed S(F).
inline const double kScorzaScale = kCbrt107 / 81.0;

inline Complex unit_root(double turns) { return std::polar(1.0, 2.0 * std::numbers::pi * turns); }

/// The printed symmetric representation x1 Id - x2 D + x0 A.
inline DetRep m_theta() {
  const Complex e1 = unit_root(1.0 / 6.0);  // (-1)^(1/3)
  const Complex e2 = unit_root(1.0 / 3.0);  // (-1)^(2/3)
  Matrix a(4, 4);
  const double t = 428.0 / 3.0;
  a << 4.0, -24.296, Complex(23.685, 0.336), Complex(-23.685, 0.336),  //
      0.0, t - kCbrt107, Complex(-141.449, 2.004), Complex(141.449, 2.004),  //
      0.0, 0.0, t - kCbrt107 * e2, -145.099,  //
      0.0, 0.0, 0.0, t + kCbrt107 * e1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) a(i, j) = a(j, i);
  Matrix d = Matrix::Zero(4, 4);
  d(1, 1) = -3.0;
  d(2, 2) = 3.0 * e1;
  d(3, 3) = -3.0 * e2;
  return DetRep{{a, Matrix::Identity(4, 4), -d}};
}

inline std::vector<Complex> m_theta_roots() {
  return {0.0, -3.0, 3.0 * unit_root(1.0 / 6.0), -3.0 * unit_root(1.0 / 3.0)};
}

inline ProjPoint lambda() { return ProjPoint(1.0, 0.0, 0.75 / kCbrt107); }

inline std::array<ProjPoint, 3> printed_triangle() {
  return {ProjPoint(1.0, 0.0, 0.0), ProjPoint(1.0, -4.0, Complex(-20.034, 34.609)),
          ProjPoint(1.0, -4.0, Complex(-20.034, -34.609))};
}

inline Vector vec4(Complex a, Complex b, Complex c, Complex d) {
  Vector v(4);
  v << a, b, c, d;
  return v;
}

/// Printed kernel vectors at lambda and at the three vertices.
inline std::array<Vector, 4> printed_kernels() {
  using C = Complex;
  return {vec4(C(-0.006, -0.009), C(-0.335, -0.482), C(-0.571, 0.04), C(-0.236, 0.521)),
          vec4(0.0, C(-0.543, -0.164), C(-0.419, 0.404), C(0.124, 0.569)),
          vec4(C(0.602, -0.73), C(-0.186, -0.025), C(-0.124, 0.147), C(0.062, 0.172)),
          vec4(C(0.613, 0.72), C(-0.185, 0.028), C(-0.059, 0.173), C(0.127, 0.145))};
}

/// Tolerances matched to the three printed decimals of M.
inline Tolerances printed_tolerances() { return Tolerances{1e-9, 1e-5, 1e-5}; }

}  // namespace example
