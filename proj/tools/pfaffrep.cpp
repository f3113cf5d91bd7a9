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

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "pfaffrep/cli.hpp"
#include "pfaffrep/errors.hpp"

namespace cli = pfaffrep::cli;

namespace {

struct Options {
  std::string format = "text";
  std::string tol;
  std::optional<double> zero_tol, rank_tol, match_tol;
  std::optional<std::uint64_t> seed;
  bool timing = false;
  std::string file = "-";
};

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double x = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return x;
}

cli::Overrides overrides_from(const Options& o) {
  cli::Overrides ov;
  if (!o.tol.empty()) {
    if (o.tol.find(',') == std::string::npos) {
      ov.profile = cli::tolerance_profile(o.tol);
    } else {
      std::stringstream ss(o.tol);
      std::string part;
      std::vector<double> v;
      try {
        while (std::getline(ss, part, ',')) v.push_back(parse_double(part));
      } catch (const std::exception&) {
        pfaffrep::fail(pfaffrep::ErrorCode::Usage, "--tol expects a profile name or zero,rank,match");
      }
      if (v.size() != 3) pfaffrep::fail(pfaffrep::ErrorCode::Usage, "--tol expects a profile name or zero,rank,match");
      ov.profile = pfaffrep::Tolerances{v[0], v[1], v[2]};
    }
  }
  ov.zero_tol = o.zero_tol;
  ov.rank_tol = o.rank_tol;
  ov.match_tol = o.match_tol;
  ov.seed = o.seed;
  return ov;
}

int emit(const cli::Outcome& out, const Options& o) {
  if (o.format == "json") {
    std::cout << out.json.dump(2) << "\n";
  } else {
    std::cout << out.text;
  }
  return out.exit_code;
}

int run_command(const std::string& kind, const Options& o) {
  const cli::Overrides ov = overrides_from(o);
  pfaffrep::Json doc = cli::read_json(o.file);
  if (!doc.is_object()) pfaffrep::fail(pfaffrep::ErrorCode::SchemaError, "at /: expected an object");
  if (!doc.contains("kind")) doc = pfaffrep::Json{{"kind", kind}, {"payload", doc}};
  if (doc["kind"] != kind) {
    pfaffrep::fail(pfaffrep::ErrorCode::Usage, "problem kind " + doc["kind"].dump() + " does not match subcommand " + kind);
  }
  return emit(cli::run(doc, "", ov, o.timing), o);
}

int run_file(const Options& o) {
  const cli::Overrides ov = overrides_from(o);
  const pfaffrep::Json doc = cli::read_json(o.file);
  if (doc.is_array()) return emit(cli::run_batch(doc, ov, o.timing), o);
  return emit(cli::run(doc, "", ov, o.timing), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pfaffrep: linear pfaffian representations of plane curves"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tol", o.tol, "Tolerance profile (default, loose, strict) or zero,rank,match");
  app.add_option("--zero-tol", o.zero_tol, "Override zero tolerance");
  app.add_option("--rank-tol", o.rank_tol, "Override rank tolerance");
  app.add_option("--match-tol", o.match_tol, "Override match tolerance");
  app.add_option("--seed", o.seed, "Override seed");
  app.add_flag("--timing", o.timing, "Report wall time");

  std::string selected;
  auto* run = app.add_subcommand("run", "Run a problem file or a JSON array of problem files");
  run->add_option("file", o.file, "Problem file, or - for stdin");
  run->callback([&] { selected = "run"; });
  for (const auto& name : cli::command_names()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " command on a problem or payload file");
    sub->add_option("file", o.file, "Problem or payload file, or - for stdin");
    sub->callback([&, name] { selected = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    return selected == "run" ? run_file(o) : run_command(selected, o);
  } catch (const pfaffrep::Error& e) {
    std::cerr << "error (" << pfaffrep::to_string(e.code()) << "): " << e.message() << "\n";
    return static_cast<int>(e.error_class());
  }
}
