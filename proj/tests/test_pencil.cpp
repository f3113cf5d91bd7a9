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

#include <doctest.h>

#include <random>

#include "pfaffrep/errors.hpp"
#include "pfaffrep/pencil.hpp"
#include "pfaffrep/quartic.hpp"
#include "pfaffrep/transforms.hpp"
#include "support/example_quartic.hpp"
#include "support/oracles.hpp"

using namespace pfaffrep;

namespace {

Matrix zeros(int n) { return Matrix::Zero(n, n); }

SkewPencil two_by_two(LinearForm l) {
  std::array<Matrix, 3> a{zeros(2), zeros(2), zeros(2)};
  for (std::size_t k = 0; k < 3; ++k) {
    a[k](0, 1) = l.c[k];
    a[k](1, 0) = -l.c[k];
  }
  return SkewPencil(a);
}

SkewPencil random_linear_pencil(int n, std::mt19937_64& rng) {
  return SkewPencil({oracle::random_skew(n, rng), oracle::random_skew(n, rng), oracle::random_skew(n, rng)});
}

double coefficient_gap(const HomPoly& a, const HomPoly& b) {
  return scale_residual(a, b, 1.0);
}

}  // namespace

TEST_CASE("pencil construction checks skew-symmetry and shape") {
  Matrix bad = zeros(2);
  bad(0, 1) = 1.0;
  bad(1, 0) = 0.5;
  try {
    SkewPencil({zeros(2), bad, zeros(2)});
    FAIL("expected SkewSymmetryViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SkewSymmetryViolation);
    CHECK(e.message().find("A1[0][1]") != std::string::npos);
  }
  CHECK_THROWS_AS(SkewPencil({zeros(3), zeros(3), zeros(3)}), Error);
  CHECK_THROWS_AS(SkewPencil({zeros(2), zeros(4), zeros(2)}), Error);
}

TEST_CASE("pfaffian of small pencils") {
  const LinearForm l{{1.0, Complex(2.0, -1.0), 3.0}};
  const HomPoly pf = pfaffian(two_by_two(l));
  CHECK(pf.degree() == 1);
  for (std::size_t k = 0; k < 3; ++k) {
    Exponent e{0, 0, 0};
    e[k] = 1;
    CHECK(std::abs(pf.coeff(e) - l.c[k]) < 1e-15);
  }
  CHECK(std::abs(pfaffian_value(two_by_two(l).coefficient(0)) - 1.0) < 1e-15);

  std::mt19937_64 rng(1);
  const SkewPencil p = random_linear_pencil(4, rng);
  auto f = [&](int i, int j) { return HomPoly::from_linear(p.entry(i, j)); };
  const HomPoly closed = f(0, 1) * f(2, 3) - f(0, 2) * f(1, 3) + f(0, 3) * f(1, 2);
  CHECK(coefficient_gap(pfaffian(p), closed) < 1e-14);
}

TEST_CASE("pfaffian of the Aronhold pencil of the printed table") {
  const SkewPencil ar = aronhold_pencil(example::printed_w_table());
  const HomPoly pf = pfaffian(ar);
  // The printed table reproduces S(F) only for the entries it shares with
  // the derived polar; the scaled comparison is pinned in the quartic tests.
  CHECK(pf.degree() == 4);
  CHECK(std::abs(pf.coeff({0, 4, 0})) > 0.0);
}

TEST_CASE("pfaffian agrees with the perfect matching expansion") {
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 8; n += 2) {
    const SkewPencil p = random_linear_pencil(n, rng);
    CHECK(coefficient_gap(pfaffian(p), oracle::pfaffian_by_matchings(p)) < 1e-10);
    const Matrix a = oracle::random_skew(n, rng);
    const Complex ref = oracle::pfaffian_by_matchings(a);
    CHECK(std::abs(pfaffian_value(a) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("pfaffian squared is the determinant") {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 8; n += 2) {
    const Matrix a = oracle::random_skew(n, rng);
    const Complex pf = pfaffian_value(a);
    const Complex det = oracle::determinant_by_permutations(a);
    CHECK(std::abs(pf * pf - det) <= 1e-9 * std::abs(det));
  }
}

TEST_CASE("pfaffian minors") {
  std::mt19937_64 rng(4);
  const SkewPencil p = random_linear_pencil(4, rng);
  const HomPoly minor = pfaffian_minor(p, 0, 1);
  CHECK(coefficient_gap(minor, HomPoly::from_linear(p.entry(2, 3))) < 1e-15);
  CHECK_THROWS_AS(pfaffian_minor(p, 1, 1), Error);
  CHECK_THROWS_AS(pfaffian_minor(p, 0, 4), Error);
  const HomPoly empty = pfaffian_minor(two_by_two({{1.0, 0.0, 0.0}}), 0, 1);
  CHECK(empty.degree() == 0);
  CHECK(std::abs(empty.coeff({0, 0, 0}) - 1.0) < 1e-15);
}

TEST_CASE("Jacobi derivative formula") {
  std::mt19937_64 rng(5);
  const SkewPencil p = random_linear_pencil(6, rng);
  const HomPoly pf = pfaffian(p);
  for (int k = 0; k < 3; ++k) CHECK(coefficient_gap(jacobi_derivative(p, k), partial(pf, k)) < 1e-8);
}

TEST_CASE("pfaffian adjoint") {
  const Matrix adj = pfaffian_adjoint(two_by_two({{1.0, 0.0, 0.0}}).coefficient(0));
  CHECK(std::abs(adj(0, 1) + 1.0) < 1e-15);
  CHECK(std::abs(adj(1, 0) - 1.0) < 1e-15);

  std::mt19937_64 rng(6);
  const SkewPencil p = random_linear_pencil(6, rng);
  const ProjPoint x(random_complex(rng), random_complex(rng), random_complex(rng));
  const Matrix a = p.at(x);
  const Matrix ad = pfaffian_adjoint_at(p, x);
  const Matrix id = Matrix::Identity(6, 6);
  CHECK((ad * a - pfaffian_value(a) * id).norm() <= 1e-8 * ad.norm() * a.norm());

  const auto pts = sample_curve_points(pfaffian(p), 2, rng, Tolerances{});
  for (const auto& pt : pts) {
    Eigen::JacobiSVD<Matrix> svd(pfaffian_adjoint_at(p, pt));
    const auto s = svd.singularValues();
    CHECK(s(2) <= 1e-7 * s(0));
  }
}

TEST_CASE("kernels at curve points") {
  std::mt19937_64 rng(7);
  const Tolerances tol;
  const SkewPencil p = oracle::random_pencil(3, rng);
  const auto pts = sample_curve_points(pfaffian(p), 3, rng, tol);
  for (const auto& pt : pts) {
    const KernelBasis k = kernel_at(p, pt, tol);
    CHECK(k.vectors.cols() == 2);
    CHECK((k.vectors.adjoint() * k.vectors - Matrix::Identity(2, 2)).norm() < 1e-10);
    CHECK((p.at(pt) * k.vectors).norm() <= tol.rank_tol * p.at(pt).norm());
  }
  const ProjPoint off(1.0, random_complex(rng), random_complex(rng));
  try {
    kernel_at(p, off, tol);
    FAIL("expected RankDeficiency");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RankDeficiency);
  }
}

TEST_CASE("kernel of a decomposable pencil splits") {
  std::mt19937_64 rng(8);
  const Tolerances tol;
  const Matrix m0 = oracle::random_matrix(3, 3, rng);
  const DetRep m{{m0, oracle::random_matrix(3, 3, rng), oracle::random_matrix(3, 3, rng)}};
  const SkewPencil p = decomposable_from(m);
  const auto pts = sample_curve_points(determinant(m), 2, rng, tol);
  for (const auto& pt : pts) {
    const Matrix k = kernel_at(p, pt, tol).vectors;
    const Matrix mp = m.at(pt);
    const Matrix w = null_space(mp.transpose(), tol.rank_tol);
    const Matrix v = null_space(mp, tol.rank_tol);
    REQUIRE(w.cols() == 1);
    REQUIRE(v.cols() == 1);
    Matrix expected = Matrix::Zero(6, 2);
    expected.block(0, 0, 3, 1) = w;
    expected.block(3, 1, 3, 1) = v;
    CHECK(subspace_angle(k, expected, 1e-10) < 1e-8);
  }
}

TEST_CASE("printed kernel vector at lambda") {
  const SkewPencil p = decomposable_from(example::m_theta());
  const Tolerances tol = example::printed_tolerances();
  const KernelBasis k = kernel_at(p, example::lambda(), tol);
  // The printed vector spans the cokernel of M at lambda: the first block.
  Vector embedded = Vector::Zero(8);
  embedded.head(4) = example::printed_kernels()[0];
  const Vector proj = k.vectors * (k.vectors.adjoint() * embedded);
  CHECK(proj.norm() / embedded.norm() >= 1.0 - 1e-3);
}

TEST_CASE("congruence scales the pfaffian by the determinant") {
  const Tolerances tol;
  std::mt19937_64 rng(9);
  const SkewPencil p4 = random_linear_pencil(4, rng);
  CHECK(oracle::relative_difference(congruence(p4, Matrix::Identity(4, 4), tol).coefficient(1), p4.coefficient(1)) <
        1e-15);
  const auto s = equal_up_to_scale(pfaffian(p4), pfaffian(congruence(p4, 2.0 * Matrix::Identity(4, 4), tol)), 1e-12);
  REQUIRE(s.has_value());
  CHECK(std::abs(*s - 16.0) < 1e-12);

  const SkewPencil p6 = random_linear_pencil(6, rng);
  const Matrix x = oracle::random_matrix(6, 6, rng);
  const auto t = equal_up_to_scale(pfaffian(p6), pfaffian(congruence(p6, x, tol)), 1e-7);
  REQUIRE(t.has_value());
  CHECK(std::abs(*t - x.determinant()) <= 1e-7 * std::abs(x.determinant()));
  CHECK_THROWS_AS(congruence(p6, Matrix::Zero(6, 6), tol), Error);
}

TEST_CASE("decomposable pencils have the determinant as pfaffian") {
  const DetRep one{{Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, -1.0)}};
  const HomPoly pf = pfaffian(decomposable_from(one));
  CHECK(coefficient_gap(pf, determinant(one)) < 1e-15);

  std::mt19937_64 rng(10);
  const DetRep m{{oracle::random_matrix(3, 3, rng), oracle::random_matrix(3, 3, rng), oracle::random_matrix(3, 3, rng)}};
  CHECK(coefficient_gap(determinant(m), oracle::determinant_by_permutations(m)) < 1e-12);
  const auto s = equal_up_to_scale(pfaffian(decomposable_from(m)), determinant(m), 1e-10);
  REQUIRE(s.has_value());
  CHECK(std::abs(std::abs(*s) - 1.0) < 1e-10);
  CHECK(std::abs(s->imag()) < 1e-10);
}

TEST_CASE("printed symmetric representation and the Scorza quartic") {
  // The printed entries carry three decimals, so det M matches -S(F) only
  // to about 1e-3.
  const HomPoly pf = pfaffian(decomposable_from(example::m_theta()));
  CHECK(scale_residual(example::scorza_printed(), pf, -1.0) < 5e-3);
  CHECK(scale_residual(example::scorza_printed(), pf, -1.0) > 1e-6);
}

TEST_CASE("wedge matrices") {
  Vector e1 = Vector::Zero(4), e2 = Vector::Zero(4);
  e1(0) = 1.0;
  e2(1) = 1.0;
  const Matrix w = wedge_to_matrix(e1, e2);
  CHECK(std::abs(w(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(w(1, 0) + 1.0) < 1e-15);
  CHECK(w.cwiseAbs().sum() == doctest::Approx(2.0));

  std::mt19937_64 rng(12);
  const Vector u = oracle::random_vector(6, rng);
  CHECK(wedge_to_matrix(u, u).norm() == 0.0);
  const Vector v = oracle::random_vector(6, rng);
  CHECK(null_space(wedge_to_matrix(u, v), 1e-10).cols() == 4);
  CHECK(wedge_to_matrix(u, Complex(2.0, 1.0) * u).norm() < 1e-13);
}
