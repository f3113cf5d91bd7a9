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

// JSON encodings. Complex scalars are [re, im]; parse errors carry a JSON
// pointer to the offending value.

#include <string>

#include <json.hpp>

#include "pfaffrep/canonical.hpp"
#include "pfaffrep/quartic.hpp"
#include "pfaffrep/transforms.hpp"

namespace pfaffrep {

using Json = nlohmann::ordered_json;

Json to_json(Complex c);
Json to_json(const Matrix& m);
Json vector_to_json(const Vector& v);
Json to_json(const LinearForm& l);
Json to_json(const ProjPoint& p);
Json to_json(const HomPoly& p);
Json to_json(const SkewPencil& p);
Json to_json(const DetRep& m);
Json to_json(const CubicCoeffs& w);
Json to_json(const CubicPencil& w);
Json to_json(const TransformRecord& r);
Json to_json(const Tolerances& t);
Json to_json(const CanonicalReport& r);

// Parsers. `path` is the JSON pointer of `j` inside the document.
const Json& require_field(const Json& j, const std::string& key, const std::string& path);
double number_from_json(const Json& j, const std::string& path);
Complex complex_from_json(const Json& j, const std::string& path);
Matrix matrix_from_json(const Json& j, const std::string& path);
Vector vector_from_json(const Json& j, const std::string& path);
LinearForm linear_from_json(const Json& j, const std::string& path);
ProjPoint point_from_json(const Json& j, const std::string& path, const Tolerances& tol);
HomPoly poly_from_json(const Json& j, const std::string& path);
SkewPencil pencil_from_json(const Json& j, const std::string& path, const Tolerances& tol);
DetRep detrep_from_json(const Json& j, const std::string& path);
CubicCoeffs cubic_from_json(const Json& j, const std::string& path);
CubicPencil cubic_pencil_from_json(const Json& j, const std::string& path);
TransformRecord record_from_json(const Json& j, const std::string& path, const Tolerances& tol);
/// Overrides the fields present in j.
Tolerances tolerances_from_json(const Json& j, const std::string& path, Tolerances base);

}  // namespace pfaffrep
