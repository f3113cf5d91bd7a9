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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "pfaffrep/canonical.hpp"
#include "pfaffrep/errors.hpp"
#include "pfaffrep/quartic.hpp"
#include "pfaffrep/transforms.hpp"
#include "support/example_quartic.hpp"
#include "support/oracles.hpp"

using namespace pfaffrep;

namespace {

// Pinned tolerances.
constexpr double kAronholdTol = 1e-6;
constexpr double kVertexTol = 5e-3;
constexpr double kRelatedTol = 1e-4;
constexpr double kInvarianceTol = 1e-7;
constexpr double kRoundTripTol = 1e-7;
constexpr double kBundleIdentityTol = 1e-6;
constexpr double kZeroPatternTol = 1e-6;
constexpr double kAngleTol = 1e-5;
constexpr double kPfDetTol = 1e-7;
constexpr double kMatchingTol = 1e-10;
constexpr double kRootTol = 1e-6;
constexpr double kBlockTol = 1e-7;
constexpr double kPolarTol = 1e-8;
constexpr double kFactorTol = 1e-7;
constexpr double kBridgeTol = 1e-6;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "failed: ";
      else detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

using Criterion = std::function<void(Verdict&)>;

struct Sample {
  ProjPoint pt;
  Matrix basis;
};

std::vector<Sample> curve_samples(const SkewPencil& p, int count, std::mt19937_64& rng, const Tolerances& tol) {
  std::vector<Sample> out;
  for (const ProjPoint& q : sample_curve_points(pfaffian(p), count, rng, tol))
    out.push_back({q, kernel_at(p, q, tol).vectors});
  return out;
}

Vector combo(const Sample& s, std::mt19937_64& rng) {
  return s.basis.col(0) * random_complex(rng) + s.basis.col(1) * random_complex(rng);
}

double gamma_gap(const SkewPencil& a, const SkewPencil& b) {
  return max_abs(a.coefficient(0) - b.coefficient(0)) / std::max(1.0, max_abs(b.coefficient(0)));
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

void aronhold_regression(Verdict& v) {
  const HomPoly printed = example::scorza_printed();
  // The printed w table is inconsistent with F; the polar of F is used
  // instead and the pfaffian agrees with S(F) up to a fixed constant.
  const HomPoly from_table = pfaffian(aronhold_pencil(example::printed_w_table()));
  const bool table_matches = equal_up_to_scale(printed, from_table, kAronholdTol).has_value();
  const HomPoly derived = pfaffian(aronhold_pencil(polar_cubic(example::quartic_f())));
  const double r = scale_residual(printed, derived, example::kScorzaScale);
  v.require(r <= kAronholdTol, "derived polar residual " + sci(r));
  v.require(!table_matches, "printed table unexpectedly proportional");
  v.detail << "resolved w convention (polar of F): Pf = (107^(1/3)/81) S(F), coefficient residual " << sci(r)
           << "; literal printed w table is not proportional to S(F)";
}

void polar_triangle_regression(Verdict& v) {
  const PolarTriangle t = polar_triangle(example::quartic_f(), example::lambda(), Tolerances{});
  double worst = 0.0;
  for (const ProjPoint& e : example::printed_triangle()) {
    double best = std::numeric_limits<double>::infinity();
    for (const ProjPoint& p : t.vertices) {
      double d = 0.0;
      for (int k = 0; k < 3; ++k) d = std::max(d, std::abs(p[k] - e[k]));
      best = std::min(best, d);
    }
    worst = std::max(worst, best);
  }
  v.require(worst <= kVertexTol, "vertex distance " + sci(worst));
  v.detail << "max vertex deviation " << sci(worst);
}

void scorza_correspondence(Verdict& v) {
  const Tolerances tol = example::printed_tolerances();
  const DetRep m = example::m_theta();
  double worst = 0.0;
  for (const ProjPoint& mu : example::printed_triangle()) {
    const ScorzaRelation r = scorza_related(m, example::lambda(), mu, tol);
    v.require(r.related && r.residual <= kRelatedTol, "triangle vertex not related (" + sci(r.residual) + ")");
    worst = std::max(worst, r.residual);
  }
  std::mt19937_64 rng(2024);
  double closest = std::numeric_limits<double>::infinity();
  int unrelated = 0;
  for (const ProjPoint& mu : sample_curve_points(determinant(m), 5, rng, tol)) {
    const ScorzaRelation r = scorza_related(m, example::lambda(), mu, tol);
    v.require(!r.related, "random point related (" + sci(r.residual) + ")");
    if (!r.related) ++unrelated;
    closest = std::min(closest, r.residual);
  }
  v.require(unrelated == 5, "expected 5 random points");
  v.detail << "related residual <= " << sci(worst) << ", random points >= " << sci(closest);
}

void pfaffian_invariance(Verdict& v) {
  const Tolerances tol;
  std::mt19937_64 rng(4);
  double worst_pf = 0.0;
  double worst_rt = 0.0;
  for (int d = 2; d <= 4; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      const SkewPencil p = oracle::random_pencil(d, rng);
      const auto s = curve_samples(p, 3, rng, tol);
      const TransformResult t1 = type1(p, s[0].pt, s[1].pt, combo(s[0], rng), combo(s[1], rng), tol);
      const TransformResult t2 = type2(p, s[0].pt, combo(s[0], rng), random_complex(rng), tol);
      const int m = 1 + trial % 3;
      std::vector<ProjPoint> pts;
      std::vector<Vector> ws;
      std::vector<Complex> rhos;
      for (int i = 0; i < m; ++i) {
        pts.push_back(s[static_cast<std::size_t>(i)].pt);
        ws.push_back(combo(s[static_cast<std::size_t>(i)], rng));
        rhos.push_back(random_complex(rng));
      }
      const TransformResult c = conint(p, pts, ws, rhos, tol);
      for (const auto* r : {&t1, &t2, &c}) worst_pf = std::max(worst_pf, pfaffian_invariance_residual(p, r->pencil));
      worst_rt = std::max(worst_rt, gamma_gap(invert_record(t1.pencil, t1.record, tol).pencil, p));
      worst_rt = std::max(worst_rt, gamma_gap(invert_record(t2.pencil, t2.record, tol).pencil, p));
    }
  }
  v.require(worst_pf <= kInvarianceTol, "pfaffian residual " + sci(worst_pf));
  v.require(worst_rt <= kRoundTripTol, "round trip residual " + sci(worst_rt));
  v.detail << "180 steps, pfaffian residual " << sci(worst_pf) << ", round trip " << sci(worst_rt);
}

void kernel_bookkeeping(Verdict& v) {
  const Tolerances tol;
  std::mt19937_64 rng(5);
  double worst1 = 0.0;
  double worst2 = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const SkewPencil p = oracle::random_pencil(2 + trial % 3, rng);
    const auto s = curve_samples(p, 2, rng, tol);
    const Vector vl = combo(s[0], rng);
    const Vector um = combo(s[1], rng);
    const TransformResult t1 = type1(p, s[0].pt, s[1].pt, vl, um, tol);
    worst1 = std::max({worst1, kernel_residual(t1.pencil, s[0].pt, um), kernel_residual(t1.pencil, s[1].pt, vl)});
    const TransformResult t2 = type2(p, s[0].pt, vl, random_complex(rng), tol);
    worst2 = std::max(worst2, kernel_residual(t2.pencil, s[0].pt, vl));
  }
  v.require(worst1 <= tol.rank_tol, "Type I kernel residual " + sci(worst1));
  v.require(worst2 <= tol.rank_tol, "Type II kernel residual " + sci(worst2));
  v.detail << "Type I " << sci(worst1) << ", Type II " << sci(worst2) << " (rank_tol " << sci(tol.rank_tol) << ")";
}

void bundle_maps(Verdict& v) {
  const Tolerances tol;
  std::mt19937_64 rng(6);
  double identity = 0.0, zeros = 0.0, angle = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const SkewPencil p = oracle::random_pencil(2 + trial % 3, rng);
    const auto s = curve_samples(p, 7, rng, tol);
    std::vector<ProjPoint> samples;
    for (std::size_t i = 2; i < s.size(); ++i) samples.push_back(s[i].pt);
    const TransformResult t1 = type1(p, s[0].pt, s[1].pt, combo(s[0], rng), combo(s[1], rng), tol);
    const BundleMapReport r1 = bundle_maps_check(p, t1.record, samples, tol, static_cast<std::uint64_t>(trial));
    const TransformResult t2 = type2(p, s[0].pt, combo(s[0], rng), random_complex(rng), tol);
    const BundleMapReport r2 = bundle_maps_check(p, t2.record, samples, tol, static_cast<std::uint64_t>(trial));
    identity = std::max({identity, r1.identity_residual, r2.identity_residual});
    for (double z : r1.zero_patterns) zeros = std::max(zeros, z);
    angle = std::max({angle, r1.transport_angle, r1.parameter_independence, r2.transport_angle});
    v.require(r1.curve_samples == 5 && r2.curve_samples == 5, "expected 5 curve samples");
  }
  v.require(identity <= kBundleIdentityTol, "identity residual " + sci(identity));
  v.require(zeros <= kZeroPatternTol, "zero pattern residual " + sci(zeros));
  v.require(angle <= kAngleTol, "subspace angle " + sci(angle));
  v.detail << "identity " << sci(identity) << ", zero patterns " << sci(zeros) << ", angles " << sci(angle);
}

void oracle_equivalences(Verdict& v) {
  std::mt19937_64 rng(7);
  double pfdet = 0.0;
  double matching = 0.0;
  for (int n = 2; n <= 8; n += 2) {
    for (int trial = 0; trial < 5; ++trial) {
      const SkewPencil p({oracle::random_skew(n, rng), oracle::random_skew(n, rng), oracle::random_skew(n, rng)});
      const ProjPoint x(random_complex(rng), random_complex(rng), random_complex(rng));
      const Complex pf = eval(pfaffian(p), x);
      const Complex det = oracle::determinant_by_permutations(p.at(x));
      pfdet = std::max(pfdet, std::abs(pf * pf - det) / std::abs(det));
      matching = std::max(matching, scale_residual(oracle::pfaffian_by_matchings(p), pfaffian(p), 1.0));
    }
  }
  v.require(pfdet <= kPfDetTol, "Pf^2 vs det " + sci(pfdet));
  v.require(matching <= kMatchingTol, "recursion vs matchings " + sci(matching));
  v.detail << "Pf^2 = det to " << sci(pfdet) << ", matchings to " << sci(matching);
}

void canonical_form(Verdict& v) {
  const SkewPencil p = decomposable_from(example::m_theta());
  const CanonicalReport r = to_canonical(p, Tolerances{});
  double worst = 0.0;
  for (Complex e : example::m_theta_roots()) {
    double best = std::numeric_limits<double>::infinity();
    for (Complex x : r.roots) best = std::min(best, std::abs(x - e));
    worst = std::max(worst, best);
  }
  v.require(r.roots.size() == 4 && worst <= kRootTol, "root deviation " + sci(worst));
  v.require(r.residual <= kBlockTol, "block residual " + sci(r.residual));
  const StructureReport s = structure_report(p, Tolerances{});
  v.require(s.free_parameter_count == 6, "free parameter count " + std::to_string(s.free_parameter_count));
  v.require(s.is_decomposable_form && s.is_symmetric_blocks, "structure flags");
  v.detail << "roots to " << sci(worst) << ", blocks to " << sci(r.residual) << ", 6 free parameters";
}

void round_trips(Verdict& v) {
  const Tolerances tol;
  std::mt19937_64 rng(9);
  double polar = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    HomPoly f(4);
    for (const Exponent& e : monomials_of_degree(4)) f.add_term(e, random_complex(rng));
    polar = std::max(polar, scale_residual(f, integrate_polar(polar_cubic(f), tol), 1.0));
  }
  double factor = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    HomPoly g = HomPoly::constant(1.0);
    for (int k = 0; k < 3; ++k)
      g = g * HomPoly::from_linear(LinearForm{{random_complex(rng), random_complex(rng), random_complex(rng)}});
    factor = std::max(factor, factor_three_lines(g, tol, static_cast<std::uint64_t>(trial)).residual);
  }
  v.require(polar <= kPolarTol, "polar round trip " + sci(polar));
  v.require(factor <= kFactorTol, "factorization residual " + sci(factor));
  v.detail << "polar " << sci(polar) << ", factorization " << sci(factor);
}

void bridging(Verdict& v) {
  const Tolerances tol;
  std::mt19937_64 rng(10);
  const Matrix m = oracle::random_matrix(4, 4, rng);
  Matrix diag = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) diag(i, i) = random_complex(rng);
  const SkewPencil p = decomposable_from(DetRep{{m + m.transpose(), Matrix::Identity(4, 4), -diag}});
  const auto s = curve_samples(p, 1, rng, tol);
  const TransformResult planted = type2(p, s[0].pt, combo(s[0], rng), Complex(0.4, 0.3), tol);
  const BridgeResult r = bridge_to_decomposable(planted.pencil, 50, tol, 1, kBridgeTol);
  const double goal = kBridgeTol * std::max(1.0, planted.pencil.scale());
  v.require(r.converged && r.norms.back() <= goal, "off-pattern norm " + sci(r.norms.back()));
  v.detail << "off-pattern " << sci(r.norms.front()) << " -> " << sci(r.norms.back()) << " in " << r.steps.size()
           << " steps";
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Criterion run;
    double budget_s;
  };
  const std::vector<Entry> criteria{
      {1, "Aronhold regression", aronhold_regression, 1.0},
      {2, "polar triangle regression", polar_triangle_regression, 1.0},
      {3, "Scorza correspondence", scorza_correspondence, 1.0},
      {4, "pfaffian invariance", pfaffian_invariance, 30.0},
      {5, "kernel bookkeeping", kernel_bookkeeping, 0.0},
      {6, "bundle map identities", bundle_maps, 0.0},
      {7, "oracle equivalences", oracle_equivalences, 0.0},
      {8, "canonical form", canonical_form, 0.0},
      {9, "round trips", round_trips, 0.0},
      {10, "bridging", bridging, 0.0},
  };
  int failures = 0;
  for (const Entry& c : criteria) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) v.require(secs < c.budget_s, "runtime " + sci(secs) + " s");
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%s): %s [%.3f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.str().c_str(),
                secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
