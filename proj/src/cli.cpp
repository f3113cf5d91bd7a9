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

#include "pfaffrep/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>

#include "pfaffrep/errors.hpp"

namespace pfaffrep::cli {

namespace {

struct Context {
  const Json& payload;
  const Tolerances& tol;
  std::uint64_t seed;
  RunReport& report;

  const Json& field(const std::string& key) const { return require_field(payload, key, "/payload"); }
  std::string at(const std::string& key) const { return "/payload/" + key; }
  bool has(const std::string& key) const { return payload.contains(key); }

  SkewPencil pencil(const std::string& key = "pencil") const { return pencil_from_json(field(key), at(key), tol); }
  ProjPoint point(const std::string& key) const { return point_from_json(field(key), at(key), tol); }
  Vector vec(const std::string& key) const { return vector_from_json(field(key), at(key)); }
  Complex scalar(const std::string& key) const { return complex_from_json(field(key), at(key)); }
  HomPoly poly(const std::string& key) const { return poly_from_json(field(key), at(key)); }
  DetRep detrep(const std::string& key) const { return detrep_from_json(field(key), at(key)); }
  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const Json& j = payload[key];
    if (!j.is_number_integer()) fail(ErrorCode::SchemaError, "at " + at(key) + ": expected an integer");
    return j.get<int>();
  }

  void out(const std::string& key, Json value) const { report.outputs[key] = std::move(value); }
  void residual(const std::string& name, double value, double tolerance) const {
    report.residuals.push_back({name, value, tolerance});
  }
};

using Handler = std::function<void(Context&)>;

double relative_max(const Matrix& diff, double scale) { return max_abs(diff) / std::max(scale, 1e-300); }

void check_expected(Context& c, const HomPoly& computed, const std::string& name) {
  if (!c.has("expected")) return;
  const HomPoly expected = c.poly("expected");
  // computed = s * expected
  const auto scale = equal_up_to_scale(expected, computed, 1.0);
  const Complex s = scale.value_or(1.0);
  c.out(name + "_scale", to_json(s));
  c.residual(name + "_vs_expected", scale_residual(expected, computed, s), c.tol.match_tol);
}

void pf_invariance(Context& c, const SkewPencil& before, const SkewPencil& after) {
  c.residual("pfaffian_invariance", pfaffian_invariance_residual(before, after), c.tol.match_tol);
}

double cosine_gap(const LinearForm& a, const LinearForm& b) {
  Complex dot = 0.0;
  for (std::size_t k = 0; k < 3; ++k) dot += std::conj(a.c[k]) * b.c[k];
  const double na = std::sqrt(std::norm(a.c[0]) + std::norm(a.c[1]) + std::norm(a.c[2]));
  const double nb = std::sqrt(std::norm(b.c[0]) + std::norm(b.c[1]) + std::norm(b.c[2]));
  if (na == 0.0 || nb == 0.0) return 1.0;
  return std::max(0.0, 1.0 - std::abs(dot) / (na * nb));
}

LinearForm gradient_form(const HomPoly& f, const ProjPoint& pt) {
  LinearForm g;
  for (int k = 0; k < 3; ++k) g.c[static_cast<std::size_t>(k)] = eval(partial(f, k), pt);
  return g;
}

Json record_list(const std::vector<TransformRecord>& rs) {
  Json a = Json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a;
}

void emit_transform(Context& c, const SkewPencil& before, const TransformResult& t) {
  c.out("pencil", to_json(t.pencil));
  c.out("record", to_json(t.record));
  pf_invariance(c, before, t.pencil);
}

void cmd_pf(Context& c) {
  const HomPoly pf = pfaffian(c.pencil());
  c.out("pfaffian", to_json(pf));
  check_expected(c, pf, "pfaffian");
}

void cmd_pf_minor(Context& c) {
  const SkewPencil p = c.pencil();
  c.out("minor", to_json(pfaffian_minor(p, c.integer("i", -1), c.integer("j", -1))));
}

void cmd_adjoint(Context& c) {
  const SkewPencil p = c.pencil();
  const ProjPoint pt = c.point("point");
  const Matrix a = p.at(pt);
  const Matrix adj = pfaffian_adjoint(a);
  const Complex pf = pfaffian_value(a);
  c.out("adjoint", to_json(adj));
  c.out("pfaffian_value", to_json(pf));
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  c.residual("adjoint_identity", relative_max(adj * a - pf * id, adj.norm() * a.norm()), c.tol.rank_tol);
}

void cmd_kernel(Context& c) {
  const KernelBasis kb = kernel_at(c.pencil(), c.point("point"), c.tol);
  c.out("point", to_json(kb.point));
  c.out("vectors", to_json(kb.vectors));
  c.residual("kernel", kb.residual, c.tol.rank_tol);
}

void cmd_canon(Context& c) {
  const SkewPencil p = c.pencil();
  const CanonicalReport r = to_canonical(p, c.tol, c.seed);
  c.out("canonical", to_json(r));
  c.residual("block_form", r.residual, c.tol.match_tol);
  c.residual("pfaffian_scaling", scale_residual(pfaffian(p), pfaffian(r.pencil), r.basis_change.determinant()),
             c.tol.match_tol);
}

void cmd_canon2(Context& c) {
  const SkewPencil p = c.pencil();
  const SkewPencil out = to_second_canonical(p, c.tol);
  const Matrix q = second_canonical_Q(p.half_degree());
  c.out("pencil", to_json(out));
  c.out("Q", to_json(q));
  c.out("det_Q", to_json(q.determinant()));
  c.residual("pfaffian_scaling", scale_residual(pfaffian(p), pfaffian(out), q.determinant()), c.tol.match_tol);
}

void cmd_gauge(Context& c) {
  const SkewPencil p = c.pencil();
  const Json& blocks = c.field("blocks");
  if (!blocks.is_array()) fail(ErrorCode::SchemaError, "at /payload/blocks: expected an array");
  std::vector<Matrix> rs;
  for (std::size_t i = 0; i < blocks.size(); ++i) rs.push_back(matrix_from_json(blocks[i], "/payload/blocks/" + std::to_string(i)));
  const std::vector<Complex> roots = canonical_roots(p, c.tol);
  const SkewPencil out = gauge_action(p, rs, c.tol);
  c.out("pencil", to_json(out));
  c.residual("block_form", canonical_residual(out, roots), c.tol.match_tol);
  pf_invariance(c, p, out);
}

void cmd_structure(Context& c) {
  const StructureReport r = structure_report(c.pencil(), c.tol);
  c.out("is_decomposable_form", r.is_decomposable_form);
  c.out("is_symmetric_blocks", r.is_symmetric_blocks);
  c.out("free_parameter_count", r.free_parameter_count);
}

void cmd_tangent(Context& c) {
  const SkewPencil p = c.pencil();
  const ProjPoint pt = c.point("point");
  const HomPoly f = pfaffian(p);
  const CurvePoint cp = make_curve_point(f, pt, c.tol);
  const LinearForm t = tangent_at(p, pt, c.tol);
  const LinearForm ta = tangent_from_adjoint(p, pt);
  const LinearForm g = gradient_form(f, pt);
  c.out("tangent", to_json(t));
  c.out("tangent_from_adjoint", to_json(ta));
  c.out("gradient", to_json(g));
  c.out("curve_residual", cp.curve_residual);
  c.residual("tangent_vs_gradient", cosine_gap(t, g), c.tol.match_tol);
  c.residual("adjoint_vs_gradient", cosine_gap(ta, g), c.tol.match_tol);
}

void cmd_line(Context& c) {
  const SkewPencil p = c.pencil();
  const ProjPoint l = c.point("lambda");
  const ProjPoint m = c.point("mu");
  const auto form = line_through(p, l, c.vec("v"), m, c.vec("u"), c.tol);
  if (!form) {
    c.out("line", nullptr);
    return;
  }
  c.out("line", to_json(*form));
  const double n = form->norm1();
  c.residual("vanishes_at_lambda", std::abs((*form)(l)) / n, c.tol.match_tol);
  c.residual("vanishes_at_mu", std::abs((*form)(m)) / n, c.tol.match_tol);
}

void cmd_classify(Context& c) {
  const PairClassification r = classify_pair(c.pencil(), c.point("lambda"), c.point("mu"), c.tol);
  c.out("kind", std::string(to_string(r.kind)));
  c.out("kappa", to_json(r.kappa));
  c.out("basis_lambda", to_json(r.basis_lambda));
  c.out("basis_mu", to_json(r.basis_mu));
  if (r.special_vectors) {
    c.out("special_vectors", Json{{"u_lambda", vector_to_json(r.special_vectors->first)},
                                  {"u_mu", vector_to_json(r.special_vectors->second)}});
  }
}

void cmd_kconst(Context& c) {
  const SkewPencil p = c.pencil();
  const ProjPoint l = c.point("lambda");
  const ProjPoint m = c.point("mu");
  const Vector v = c.vec("v");
  const Vector u = c.vec("u");
  std::mt19937_64 rng(c.seed);
  Complex t1 = random_complex(rng);
  Complex t2 = random_complex(rng);
  if (c.has("t")) {
    const Vector t = c.vec("t");
    if (t.size() != 2) fail(ErrorCode::SchemaError, "at /payload/t: expected [t1, t2]");
    t1 = t(0);
    t2 = t(1);
  }
  const Complex k = k_constant(p, l, v, m, u, t1, t2, c.tol);
  const Complex k2 = k_constant(p, l, v, m, u, random_complex(rng), random_complex(rng), c.tol);
  c.out("K", to_json(k));
  c.residual("parameter_independence", std::abs(k - k2) / (1.0 + std::abs(k)), c.tol.rank_tol);
}

void cmd_partners(Context& c) {
  const auto pts = partner_points(c.pencil(), c.point("lambda"), c.vec("v"), c.vec("u"), c.tol);
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(Json{{"point", to_json(p.pt)}, {"curve_residual", p.curve_residual}});
  c.out("partners", std::move(a));
}

void cmd_type1(Context& c) {
  const SkewPencil p = c.pencil();
  const ProjPoint l = c.point("lambda");
  const ProjPoint m = c.point("mu");
  const Vector v = c.vec("v");
  const Vector u = c.vec("u");
  const TransformResult t = type1(p, l, m, v, u, c.tol);
  emit_transform(c, p, t);
  const Matrix adj_l = pfaffian_adjoint_at(t.pencil, l);
  c.residual("u_in_new_kernel_at_lambda", kernel_residual(t.pencil, l, u), c.tol.rank_tol);
  c.residual("v_in_new_kernel_at_mu", kernel_residual(t.pencil, m, v), c.tol.rank_tol);
  c.residual("inverse_round_trip",
             relative_max(invert_record(t.pencil, t.record, c.tol).pencil.coefficient(0) - p.coefficient(0),
                          std::max(1.0, max_abs(p.coefficient(0)))),
             c.tol.match_tol);
  (void)adj_l;
}

void cmd_type2(Context& c) {
  const SkewPencil p = c.pencil();
  const ProjPoint l = c.point("lambda");
  const Vector v = c.vec("v");
  const TransformResult t = type2(p, l, v, c.scalar("rho"), c.tol);
  emit_transform(c, p, t);
  c.residual("v_in_new_kernel_at_lambda", kernel_residual(t.pencil, l, v), c.tol.rank_tol);
  c.residual("inverse_round_trip",
             relative_max(invert_record(t.pencil, t.record, c.tol).pencil.coefficient(0) - p.coefficient(0),
                          std::max(1.0, max_abs(p.coefficient(0)))),
             c.tol.match_tol);
}

void cmd_conint(Context& c) {
  const SkewPencil p = c.pencil();
  std::vector<ProjPoint> pts;
  std::vector<Vector> ws;
  std::vector<Complex> rhos;
  const Json& jp = c.field("points");
  const Json& jw = c.field("vectors");
  const Json& jr = c.field("rhos");
  if (!jp.is_array() || !jw.is_array() || !jr.is_array()) {
    fail(ErrorCode::SchemaError, "at /payload: points, vectors and rhos must be arrays");
  }
  for (std::size_t i = 0; i < jp.size(); ++i) pts.push_back(point_from_json(jp[i], "/payload/points/" + std::to_string(i), c.tol));
  for (std::size_t i = 0; i < jw.size(); ++i) ws.push_back(vector_from_json(jw[i], "/payload/vectors/" + std::to_string(i)));
  for (std::size_t i = 0; i < jr.size(); ++i) rhos.push_back(complex_from_json(jr[i], "/payload/rhos/" + std::to_string(i)));
  emit_transform(c, p, conint(p, pts, ws, rhos, c.tol));
}

std::vector<ProjPoint> samples_from(Context& c, const HomPoly& f) {
  std::vector<ProjPoint> out;
  if (c.has("samples")) {
    const Json& js = c.field("samples");
    if (!js.is_array()) fail(ErrorCode::SchemaError, "at /payload/samples: expected an array");
    for (std::size_t i = 0; i < js.size(); ++i) out.push_back(point_from_json(js[i], "/payload/samples/" + std::to_string(i), c.tol));
    return out;
  }
  std::mt19937_64 rng(c.seed);
  return sample_curve_points(f, c.integer("sample_count", 5), rng, c.tol);
}

void cmd_bundle(Context& c) {
  const SkewPencil p = c.pencil();
  const TransformRecord r = record_from_json(c.field("record"), c.at("record"), c.tol);
  const auto samples = samples_from(c, pfaffian(p));
  const BundleMapReport rep = bundle_maps_check(p, r, samples, c.tol, c.seed);
  c.out("samples", rep.samples);
  c.out("curve_samples", rep.curve_samples);
  c.residual("bundle_identity", rep.identity_residual, c.tol.match_tol);
  if (r.kind == TransformKind::TypeI) {
    const char* names[] = {"P(lambda)v", "v^tT(mu)", "u^tR(lambda)", "S(mu)u"};
    for (std::size_t i = 0; i < 4; ++i) c.residual(names[i], rep.zero_patterns[i], c.tol.match_tol);
  }
  c.residual("kernel_transport_angle", rep.transport_angle, std::max(c.tol.match_tol, 1e-5));
  c.residual("parameter_independence_angle", rep.parameter_independence, std::max(c.tol.match_tol, 1e-5));
}

void cmd_bridge(Context& c) {
  const SkewPencil p = c.pencil();
  double target = 1e-6;
  if (c.has("target")) target = number_from_json(c.field("target"), c.at("target"));
  const BridgeResult r = bridge_to_decomposable(p, c.integer("budget", 50), c.tol, c.seed, target);
  c.out("steps", record_list(r.steps));
  c.out("pencil", to_json(r.pencil));
  c.out("norms", r.norms);
  c.out("converged", r.converged);
  c.residual("off_pattern_norm", r.norms.back(), target * std::max(1.0, p.scale()));
  pf_invariance(c, p, r.pencil);
}

void cmd_polar(Context& c) { c.out("w", to_json(polar_cubic(c.poly("quartic")))); }

bool is_linear_form_json(const Json& j) { return j.is_array() && j.size() == 3; }

void cmd_aronhold(Context& c) {
  const Json& w = c.field("w");
  if (!w.is_object() || !w.contains("w000")) fail(ErrorCode::SchemaError, "at /payload/w: expected cubic coefficients");
  if (is_linear_form_json(w["w000"])) {
    const SkewPencil ar = aronhold_pencil(cubic_pencil_from_json(w, c.at("w")));
    const HomPoly pf = pfaffian(ar);
    c.out("aronhold", to_json(ar));
    c.out("pfaffian", to_json(pf));
    check_expected(c, pf, "pfaffian");
  } else {
    const Matrix ar = aronhold_matrix(cubic_from_json(w, c.at("w")));
    c.out("aronhold", to_json(ar));
    c.out("pfaffian", to_json(pfaffian_value(ar)));
  }
}

void cmd_scorza(Context& c) {
  const HomPoly s = scorza_map(c.poly("quartic"));
  c.out("scorza", to_json(s));
  check_expected(c, s, "scorza");
}

void cmd_integrate(Context& c) {
  const CubicPencil w = cubic_pencil_from_json(c.field("w"), c.at("w"));
  const HomPoly f = integrate_polar(w, c.tol);
  c.out("quartic", to_json(f));
  const CubicPencil back = polar_cubic(f);
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t k = 0; k < 3; ++k) {
      diff = std::max(diff, std::abs(back.w[i].c[k] - w.w[i].c[k]));
      scale = std::max(scale, std::abs(w.w[i].c[k]));
    }
  c.residual("round_trip", scale == 0.0 ? diff : diff / scale, c.tol.match_tol);
}

void cmd_triangle(Context& c) {
  const PolarTriangle t = polar_triangle(c.poly("quartic"), c.point("lambda"), c.tol, c.seed);
  Json lines = Json::array();
  Json verts = Json::array();
  for (std::size_t k = 0; k < 3; ++k) {
    lines.push_back(to_json(t.lines[k]));
    verts.push_back(to_json(t.vertices[k]));
  }
  c.out("lines", std::move(lines));
  c.out("vertices", std::move(verts));
  c.residual("sum_of_cubes", t.residual, c.tol.match_tol);
}

void cmd_factor(Context& c) {
  const HomPoly cubic = c.poly("cubic");
  const LineFactorization f = factor_three_lines(cubic, c.tol, c.seed);
  Json lines = Json::array();
  for (const auto& l : f.lines) lines.push_back(to_json(l));
  c.out("lines", std::move(lines));
  c.out("scale", to_json(f.scale));
  c.residual("product", f.residual, c.tol.match_tol);
}

void cmd_related(Context& c) {
  const DetRep m = c.detrep("M");
  require_symmetric(m, c.tol);
  const ScorzaRelation r = scorza_related(m, c.point("lambda"), c.point("mu"), c.tol);
  c.out("related", r.related);
  c.out("residual", r.residual);
}

void cmd_identify(Context& c) {
  const HomPoly f = c.poly("quartic");
  const Json& jc = c.field("candidates");
  if (!jc.is_array()) fail(ErrorCode::SchemaError, "at /payload/candidates: expected an array");
  std::vector<DetRep> cands;
  for (std::size_t i = 0; i < jc.size(); ++i) cands.push_back(detrep_from_json(jc[i], "/payload/candidates/" + std::to_string(i)));
  const ThetaMatch m = identify_theta(f, cands, c.integer("samples", 3), c.tol, c.seed);
  c.out("index", m.index);
  Json samples = Json::array();
  for (std::size_t i = 0; i < m.evidence.samples.size(); ++i) {
    Json tri = Json::array();
    for (const auto& v : m.evidence.triangles[i]) tri.push_back(to_json(v));
    samples.push_back(Json{{"lambda", to_json(m.evidence.samples[i])}, {"triangle", std::move(tri)}});
  }
  c.out("samples", std::move(samples));
  c.out("residuals", m.evidence.residuals);
  c.out("det_scale_residuals", m.evidence.det_scale_residuals);
}

void cmd_bitangent(Context& c) {
  const DetRep m = c.detrep("M");
  require_symmetric(m, c.tol);
  const Bitangent b = bitangent_from_octad(m, c.vec("bi"), c.vec("bj"), c.tol, c.seed);
  c.out("bitangent", to_json(b.form));
  c.out("contained", b.contained);
  c.residual("tangency", b.tangency_residual, std::sqrt(c.tol.match_tol));
}

void cmd_replay(Context& c) {
  SkewPencil p = c.pencil();
  const Json& jr = c.field("records");
  if (!jr.is_array()) fail(ErrorCode::SchemaError, "at /payload/records: expected an array");
  Json steps = Json::array();
  for (std::size_t i = 0; i < jr.size(); ++i) {
    const std::string path = "/payload/records/" + std::to_string(i);
    const TransformRecord r = record_from_json(jr[i], path, c.tol);
    const TransformResult t = apply_record(p, r, c.tol);
    const std::string tag = "step" + std::to_string(i);
    c.residual(tag + "_pfaffian_invariance", pfaffian_invariance_residual(p, t.pencil), c.tol.match_tol);
    if (r.gamma_after.size() != 0) {
      c.residual(tag + "_gamma_after",
                 relative_max(r.gamma_after - t.pencil.coefficient(0), std::max(1.0, max_abs(r.gamma_after))),
                 c.tol.match_tol);
    }
    steps.push_back(to_json(t.record));
    p = t.pencil;
  }
  c.out("steps", std::move(steps));
  c.out("pencil", to_json(p));
}

const std::map<std::string, Handler>& registry() {
  static const std::map<std::string, Handler> r{
      {"pf", cmd_pf},
      {"pf-minor", cmd_pf_minor},
      {"adjoint", cmd_adjoint},
      {"kernel", cmd_kernel},
      {"canon", cmd_canon},
      {"canon2", cmd_canon2},
      {"gauge", cmd_gauge},
      {"structure", cmd_structure},
      {"tangent", cmd_tangent},
      {"line", cmd_line},
      {"classify-pair", cmd_classify},
      {"k-const", cmd_kconst},
      {"partners", cmd_partners},
      {"type1", cmd_type1},
      {"type2", cmd_type2},
      {"conint", cmd_conint},
      {"bundle-check", cmd_bundle},
      {"bridge", cmd_bridge},
      {"polar-cubic", cmd_polar},
      {"aronhold", cmd_aronhold},
      {"scorza", cmd_scorza},
      {"integrate-polar", cmd_integrate},
      {"triangle", cmd_triangle},
      {"factor-lines", cmd_factor},
      {"related", cmd_related},
      {"identify-theta", cmd_identify},
      {"bitangent", cmd_bitangent},
      {"verify-replay", cmd_replay},
  };
  return r;
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

bool is_complex_json(const Json& j) { return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(); }

std::string poly_text(const Json& j) {
  std::string s;
  for (const auto& t : j["terms"]) {
    const Complex c{t["coeff"][0].get<double>(), t["coeff"][1].get<double>()};
    if (!s.empty()) s += " + ";
    s += "(" + format_complex(c) + ")";
    for (int k = 0; k < 3; ++k) {
      const int e = t["exp"][static_cast<std::size_t>(k)].get<int>();
      if (e == 0) continue;
      s += "*x" + std::to_string(k);
      if (e > 1) s += "^" + std::to_string(e);
    }
  }
  return s.empty() ? "0" : s;
}

void text_value(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (is_complex_json(j)) {
    os << format_complex({j[0].get<double>(), j[1].get<double>()});
  } else if (j.is_object() && j.contains("degree") && j.contains("terms")) {
    os << poly_text(j);
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return is_complex_json(e) || e.is_primitive(); });
    if (flat) {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ", ";
        text_value(os, j[i], indent);
      }
      os << "]";
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << "\n" << pad << "- ";
        text_value(os, j[i], indent + 2);
      }
    }
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      os << "\n" << pad << k << ": ";
      text_value(os, v, indent + 2);
    }
  } else if (j.is_number_float()) {
    os << format_double(j.get<double>());
  } else if (j.is_string()) {
    os << j.get<std::string>();
  } else {
    os << j.dump();
  }
}

Json error_json(const std::string& command, const Error& e) {
  return Json{{"command", command},
              {"error",
               {{"code", std::string(to_string(e.code()))},
                {"class", static_cast<int>(e.error_class())},
                {"message", e.message()}}}};
}

}  // namespace

bool RunReport::ok() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const Residual& r) { return r.ok(); });
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : registry()) n.push_back(k);
    return n;
  }();
  return names;
}

Tolerances tolerance_profile(const std::string& name) {
  if (name == "default") return Tolerances{};
  if (name == "loose") return Tolerances{1e-7, 1e-5, 1e-4};
  if (name == "strict") return Tolerances{1e-12, 1e-10, 1e-8};
  fail(ErrorCode::Usage, "unknown tolerance profile \"" + name + "\" (default, loose, strict)");
}

Tolerances environment_tolerances() {
  const char* env = std::getenv("PFAFFREP_TOL_PROFILE");
  if (env == nullptr || *env == '\0') return Tolerances{};
  return tolerance_profile(env);
}

ProblemFile parse_problem(const Json& doc, const std::string& path, const Overrides& overrides) {
  const Json& kind = require_field(doc, "kind", path);
  if (!kind.is_string() || registry().count(kind.get<std::string>()) == 0) {
    std::string list;
    for (const auto& n : command_names()) list += (list.empty() ? "" : ", ") + n;
    fail(ErrorCode::SchemaError, "at " + path + "/kind: unknown command; valid commands: " + list);
  }
  ProblemFile p;
  p.kind = kind.get<std::string>();
  p.payload = require_field(doc, "payload", path);
  if (!p.payload.is_object()) fail(ErrorCode::SchemaError, "at " + path + "/payload: expected an object");
  p.tolerances = environment_tolerances();
  if (doc.contains("tolerances")) p.tolerances = tolerances_from_json(doc["tolerances"], path + "/tolerances", p.tolerances);
  if (doc.contains("seed")) {
    const Json& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail(ErrorCode::SchemaError, "at " + path + "/seed: expected a nonnegative integer");
    }
    p.seed = s.get<std::uint64_t>();
  }
  if (overrides.profile) p.tolerances = *overrides.profile;
  if (overrides.zero_tol) p.tolerances.zero_tol = *overrides.zero_tol;
  if (overrides.rank_tol) p.tolerances.rank_tol = *overrides.rank_tol;
  if (overrides.match_tol) p.tolerances.match_tol = *overrides.match_tol;
  if (overrides.seed) p.seed = *overrides.seed;
  p.tolerances.validate();
  return p;
}

Json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Usage, "cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("malformed JSON: ") + e.what());
  }
}

RunReport dispatch(const ProblemFile& problem) {
  RunReport report;
  report.command = problem.kind;
  report.seed = problem.seed;
  report.tolerances = problem.tolerances;
  report.inputs_digest = fnv1a(problem.kind + "\n" + problem.payload.dump() + "\n" + to_json(problem.tolerances).dump() +
                               "\n" + std::to_string(problem.seed));
  const auto start = std::chrono::steady_clock::now();
  Context ctx{problem.payload, problem.tolerances, problem.seed, report};
  try {
    registry().at(problem.kind)(ctx);
  } catch (const Json::exception& e) {
    fail(ErrorCode::SchemaError, std::string("at /payload: ") + e.what());
  }
  report.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string format_complex(Complex c) {
  const std::string re = format_double(c.real());
  const double im = c.imag();
  const std::string mag = format_double(std::abs(im));
  return re + (std::signbit(im) ? "-" : "+") + mag + "i";
}

Json report_to_json(const RunReport& r, bool timing) {
  Json res = Json::array();
  for (const auto& x : r.residuals) {
    res.push_back(Json{{"name", x.name}, {"value", x.value}, {"tolerance", x.tolerance}, {"ok", x.ok()}});
  }
  Json out{{"command", r.command},
           {"inputs_digest", r.inputs_digest},
           {"seed", r.seed},
           {"tolerances", to_json(r.tolerances)},
           {"outputs", r.outputs},
           {"residuals", std::move(res)},
           {"ok", r.ok()}};
  if (timing) out["wall_time_ms"] = r.wall_time_ms;
  return out;
}

std::string report_to_text(const RunReport& r, bool timing) {
  std::ostringstream os;
  os << "command: " << r.command << "\nseed: " << r.seed << "\ndigest: " << r.inputs_digest;
  os << "\noutputs:";
  text_value(os, r.outputs, 2);
  if (!r.residuals.empty()) {
    os << "\nresiduals:";
    for (const auto& x : r.residuals) {
      os << "\n  " << x.name << " = " << format_double(x.value) << " (tol " << format_double(x.tolerance) << ") "
         << (x.ok() ? "ok" : "FAIL");
    }
  }
  if (timing) os << "\nwall_time_ms: " << format_double(r.wall_time_ms);
  os << "\n";
  return os.str();
}

Outcome run(const Json& doc, const std::string& path, const Overrides& overrides, bool timing) {
  std::string command = doc.is_object() && doc.contains("kind") && doc["kind"].is_string() ? doc["kind"].get<std::string>() : "";
  try {
    const ProblemFile p = parse_problem(doc, path, overrides);
    const RunReport r = dispatch(p);
    return {report_to_json(r, timing), report_to_text(r, timing), r.ok() ? 0 : static_cast<int>(ErrorClass::Numerical)};
  } catch (const Error& e) {
    const int code = static_cast<int>(e.error_class());
    return {error_json(command, e), "error (" + std::string(to_string(e.code())) + "): " + e.message() + "\n", code};
  }
}

Outcome run_batch(const Json& docs, const Overrides& overrides, bool timing) {
  std::vector<std::future<Outcome>> jobs;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] { return run(docs[i], "/" + std::to_string(i), overrides, timing); }));
  }
  Outcome all{Json::array(), "", 0};
  for (auto& j : jobs) {
    Outcome o = j.get();
    all.json.push_back(std::move(o.json));
    all.text += o.text + "\n";
    if (all.exit_code == 0) all.exit_code = o.exit_code;
  }
  return all;
}

}  // namespace pfaffrep::cli
