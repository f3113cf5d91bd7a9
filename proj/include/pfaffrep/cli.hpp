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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfaffrep/json_io.hpp"

namespace pfaffrep::cli {

struct ProblemFile {
  std::string kind;
  Json payload;
  Tolerances tolerances;
  std::uint64_t seed = 0;
};

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool ok() const { return value <= tolerance; }
};

struct RunReport {
  std::string command;
  std::string inputs_digest;
  Json outputs = Json::object();
  std::vector<Residual> residuals;
  std::uint64_t seed = 0;
  Tolerances tolerances;
  double wall_time_ms = 0.0;

  bool ok() const;
};

/// Command-line overrides, applied after the problem file.
struct Overrides {
  std::optional<Tolerances> profile;
  std::optional<double> zero_tol;
  std::optional<double> rank_tol;
  std::optional<double> match_tol;
  std::optional<std::uint64_t> seed;
};

struct Outcome {
  Json json;
  std::string text;
  int exit_code = 0;
};

const std::vector<std::string>& command_names();

/// "default", "loose" or "strict"; throws Usage otherwise.
Tolerances tolerance_profile(const std::string& name);

/// Profile named by PFAFFREP_TOL_PROFILE, or the defaults.
Tolerances environment_tolerances();

/// Validates kind, tolerances and seed; payloads are validated by dispatch.
ProblemFile parse_problem(const Json& doc, const std::string& path, const Overrides& overrides);

/// Reads a file ("-" for standard input) into JSON; SchemaError on bad JSON.
Json read_json(const std::string& path);

RunReport dispatch(const ProblemFile& problem);

/// Parses and dispatches, mapping errors to exit codes: 1 usage, 2 schema,
/// 3 numerical (also any residual above its tolerance), 4 precondition.
Outcome run(const Json& doc, const std::string& path, const Overrides& overrides, bool timing);

/// Runs an array of problem files concurrently; results keep input order
/// and the exit code is the first nonzero one.
Outcome run_batch(const Json& docs, const Overrides& overrides, bool timing);

Json report_to_json(const RunReport& r, bool timing);
std::string report_to_text(const RunReport& r, bool timing);
std::string format_complex(Complex c);

}  // namespace pfaffrep::cli
