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

#include "pfaffrep/json_io.hpp"

#include <cmath>

#include "pfaffrep/errors.hpp"

namespace pfaffrep {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorCode::SchemaError, "at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const Json& require_array(const Json& j, const std::string& path, std::size_t size = 0) {
  if (!j.is_array()) schema(path, "expected an array");
  if (size != 0 && j.size() != size) schema(path, "expected " + std::to_string(size) + " elements");
  return j;
}

}  // namespace

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Json to_json(const LinearForm& l) { return Json::array({to_json(l.c[0]), to_json(l.c[1]), to_json(l.c[2])}); }

Json to_json(const ProjPoint& p) { return Json::array({to_json(p[0]), to_json(p[1]), to_json(p[2])}); }

Json to_json(const HomPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    terms.push_back(Json{{"exp", Json::array({e[0], e[1], e[2]})}, {"coeff", to_json(c)}});
  }
  return Json{{"degree", p.degree()}, {"terms", std::move(terms)}};
}

Json to_json(const SkewPencil& p) {
  return Json{{"d", p.half_degree()},
              {"A0", to_json(p.coefficient(0))},
              {"A1", to_json(p.coefficient(1))},
              {"A2", to_json(p.coefficient(2))}};
}

Json to_json(const DetRep& m) {
  return Json{{"d", m.half_degree()}, {"M0", to_json(m.m[0])}, {"M1", to_json(m.m[1])}, {"M2", to_json(m.m[2])}};
}

Json to_json(const CubicCoeffs& w) {
  Json out = Json::object();
  for (std::size_t i = 0; i < 10; ++i) out[std::string(kCubicNames[i])] = to_json(w.w[i]);
  return out;
}

Json to_json(const CubicPencil& w) {
  Json out = Json::object();
  for (std::size_t i = 0; i < 10; ++i) out[std::string(kCubicNames[i])] = to_json(w.w[i]);
  return out;
}

Json to_json(const TransformRecord& r) {
  Json out{{"kind", std::string(to_string(r.kind))}, {"lambda", to_json(r.lambda)}};
  if (r.mu) out["mu"] = to_json(*r.mu);
  out["v"] = vector_to_json(r.v);
  if (r.u) out["u"] = vector_to_json(*r.u);
  if (r.kind == TransformKind::TypeII) out["rho"] = to_json(r.rho);
  if (r.kind == TransformKind::TypeI) out["K"] = to_json(r.k);
  if (r.conint) {
    Json pts = Json::array();
    for (const auto& p : r.conint->points) pts.push_back(to_json(p));
    Json ws = Json::array();
    for (Eigen::Index i = 0; i < r.conint->vectors.cols(); ++i) ws.push_back(vector_to_json(r.conint->vectors.col(i)));
    Json rhos = Json::array();
    for (const auto& c : r.conint->rhos) rhos.push_back(to_json(c));
    out["points"] = std::move(pts);
    out["vectors"] = std::move(ws);
    out["rhos"] = std::move(rhos);
    out["Gamma"] = to_json(r.conint->gamma_matrix);
  }
  out["gamma_before"] = to_json(r.gamma_before);
  out["gamma_after"] = to_json(r.gamma_after);
  return out;
}

Json to_json(const Tolerances& t) {
  return Json{{"zero_tol", t.zero_tol}, {"rank_tol", t.rank_tol}, {"match_tol", t.match_tol}};
}

Json to_json(const CanonicalReport& r) {
  Json roots = Json::array();
  for (const auto& c : r.roots) roots.push_back(to_json(c));
  return Json{{"roots", std::move(roots)},
              {"basis_change", to_json(r.basis_change)},
              {"pencil", to_json(r.pencil)},
              {"residual", r.residual}};
}

const Json& require_field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path, "missing field \"" + key + "\"");
  return *it;
}

double number_from_json(const Json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) schema(path, "number is not finite");
  return x;
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {number_from_json(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) schema(path, "expected a complex number [re, im]");
  return {number_from_json(j[0], child(path, 0)), number_from_json(j[1], child(path, 1))};
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  require_array(j, path);
  const auto rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    require_array(j[i], child(path, i));
    if (i == 0) cols = j[i].size();
    if (j[i].size() != cols) schema(child(path, i), "ragged matrix row");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < cols; ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(j[i][k], child(child(path, i), k));
  return m;
}

Vector vector_from_json(const Json& j, const std::string& path) {
  require_array(j, path);
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], child(path, i));
  return v;
}

LinearForm linear_from_json(const Json& j, const std::string& path) {
  require_array(j, path, 3);
  LinearForm l;
  for (std::size_t k = 0; k < 3; ++k) l.c[k] = complex_from_json(j[k], child(path, k));
  return l;
}

ProjPoint point_from_json(const Json& j, const std::string& path, const Tolerances& tol) {
  require_array(j, path, 3);
  std::array<Complex, 3> x;
  for (std::size_t k = 0; k < 3; ++k) x[k] = complex_from_json(j[k], child(path, k));
  try {
    return ProjPoint(x, tol.zero_tol);
  } catch (const Error& e) {
    fail(e.code(), "at " + path + ": " + e.message());
  }
}

HomPoly poly_from_json(const Json& j, const std::string& path) {
  const Json& deg = require_field(j, "degree", path);
  if (!deg.is_number_integer() || deg.get<int>() < 0) schema(child(path, "degree"), "expected a nonnegative integer");
  HomPoly p(deg.get<int>());
  const std::string tp = child(path, "terms");
  const Json& terms = require_array(require_field(j, "terms", path), tp);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string ip = child(tp, i);
    const Json& e = require_array(require_field(terms[i], "exp", ip), child(ip, "exp"), 3);
    Exponent ex{};
    for (std::size_t k = 0; k < 3; ++k) {
      if (!e[k].is_number_integer() || e[k].get<int>() < 0) schema(child(child(ip, "exp"), k), "expected a nonnegative integer");
      ex[k] = e[k].get<int>();
    }
    if (ex[0] + ex[1] + ex[2] != p.degree()) schema(child(ip, "exp"), "exponents do not sum to the degree");
    p.add_term(ex, complex_from_json(require_field(terms[i], "coeff", ip), child(ip, "coeff")));
  }
  return p;
}

SkewPencil pencil_from_json(const Json& j, const std::string& path, const Tolerances& tol) {
  std::array<Matrix, 3> a;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string key = "A" + std::to_string(k);
    a[k] = matrix_from_json(require_field(j, key, path), child(path, key));
    if (a[k].rows() != a[k].cols()) schema(child(path, key), "matrix is not square");
  }
  if (j.contains("d")) {
    const Json& d = j["d"];
    if (!d.is_number_integer() || 2 * d.get<long>() != a[0].rows()) schema(child(path, "d"), "d does not match the matrix size");
  }
  try {
    return SkewPencil(std::move(a), tol.zero_tol);
  } catch (const Error& e) {
    fail(e.code(), "at " + path + ": " + e.message());
  }
}

DetRep detrep_from_json(const Json& j, const std::string& path) {
  DetRep m;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::string key = "M" + std::to_string(k);
    m.m[k] = matrix_from_json(require_field(j, key, path), child(path, key));
  }
  try {
    m.validate();
  } catch (const Error& e) {
    schema(path, e.message());
  }
  return m;
}

CubicCoeffs cubic_from_json(const Json& j, const std::string& path) {
  CubicCoeffs w;
  for (std::size_t i = 0; i < 10; ++i) {
    const std::string key(kCubicNames[i]);
    w.w[i] = complex_from_json(require_field(j, key, path), child(path, key));
  }
  return w;
}

CubicPencil cubic_pencil_from_json(const Json& j, const std::string& path) {
  CubicPencil w;
  for (std::size_t i = 0; i < 10; ++i) {
    const std::string key(kCubicNames[i]);
    w.w[i] = linear_from_json(require_field(j, key, path), child(path, key));
  }
  return w;
}

TransformRecord record_from_json(const Json& j, const std::string& path, const Tolerances& tol) {
  TransformRecord r;
  const Json& kind = require_field(j, "kind", path);
  const std::string k = kind.is_string() ? kind.get<std::string>() : std::string();
  if (k == "I") {
    r.kind = TransformKind::TypeI;
  } else if (k == "II") {
    r.kind = TransformKind::TypeII;
  } else if (k == "CONINT") {
    r.kind = TransformKind::Conint;
  } else {
    schema(child(path, "kind"), "expected \"I\", \"II\" or \"CONINT\"");
  }
  if (r.kind == TransformKind::Conint) {
    ConintData c;
    const std::string pp = child(path, "points");
    const Json& pts = require_array(require_field(j, "points", path), pp);
    for (std::size_t i = 0; i < pts.size(); ++i) c.points.push_back(point_from_json(pts[i], child(pp, i), tol));
    const std::string vp = child(path, "vectors");
    const Json& ws = require_array(require_field(j, "vectors", path), vp);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      const Vector w = vector_from_json(ws[i], child(vp, i));
      if (i == 0) c.vectors.resize(w.size(), static_cast<Eigen::Index>(ws.size()));
      if (w.size() != c.vectors.rows()) schema(child(vp, i), "vector length mismatch");
      c.vectors.col(static_cast<Eigen::Index>(i)) = w;
    }
    const std::string rp = child(path, "rhos");
    const Json& rhos = require_array(require_field(j, "rhos", path), rp);
    for (std::size_t i = 0; i < rhos.size(); ++i) c.rhos.push_back(complex_from_json(rhos[i], child(rp, i)));
    if (c.points.empty() || c.points.size() != ws.size() || c.points.size() != rhos.size()) {
      schema(path, "points, vectors and rhos must have equal nonzero length");
    }
    r.lambda = c.points.front();
    r.v = c.vectors.col(0);
    r.conint = std::move(c);
  } else {
    r.lambda = point_from_json(require_field(j, "lambda", path), child(path, "lambda"), tol);
    r.v = vector_from_json(require_field(j, "v", path), child(path, "v"));
  }
  if (r.kind == TransformKind::TypeI) {
    r.mu = point_from_json(require_field(j, "mu", path), child(path, "mu"), tol);
    r.u = vector_from_json(require_field(j, "u", path), child(path, "u"));
  }
  if (r.kind == TransformKind::TypeII) r.rho = complex_from_json(require_field(j, "rho", path), child(path, "rho"));
  if (j.contains("gamma_before")) r.gamma_before = matrix_from_json(j["gamma_before"], child(path, "gamma_before"));
  if (j.contains("gamma_after")) r.gamma_after = matrix_from_json(j["gamma_after"], child(path, "gamma_after"));
  return r;
}

Tolerances tolerances_from_json(const Json& j, const std::string& path, Tolerances base) {
  if (!j.is_object()) schema(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string p = child(path, key);
    if (key == "zero_tol") {
      base.zero_tol = number_from_json(value, p);
    } else if (key == "rank_tol") {
      base.rank_tol = number_from_json(value, p);
    } else if (key == "match_tol") {
      base.match_tol = number_from_json(value, p);
    } else {
      schema(p, "unknown tolerance field");
    }
  }
  return base;
}

}  // namespace pfaffrep
