// Copyright 2026 The topoasm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "topoasm/cli.hpp"
#include "topoasm/engine.hpp"
#include "topoasm/export.hpp"

using namespace topoasm;
namespace fs = std::filesystem;

namespace {

const std::string kData = TOPOASM_DATA_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "topoasm");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string &name) {
  fs::path d = fs::temp_directory_path() / "topoasm_test";
  fs::create_directories(d);
  return d / name;
}

}  // namespace

TEST_CASE("geometry document round trip") {
  Assembly a = synthesize(load_icm(kData + "/toffoli.icm"), SynthesisConfig{});
  std::string doc = geometry_document(a);
  GeometrySet g = parse_geometry_document(doc);
  CHECK(g.defects == a.geometry.defects);
  CHECK(g.boxes.size() == a.geometry.boxes.size());
  for (std::size_t i = 0; i < g.boxes.size(); ++i) {
    CHECK(g.boxes[i].footprint == a.geometry.boxes[i].footprint);
    CHECK(g.boxes[i].port == a.geometry.boxes[i].port);
  }
  CHECK(g.pins == a.geometry.pins);
  CHECK(plumbing_volume(global_bounding_box(g)) == a.volume);
  CHECK(doc.rfind("{\n \"format\": \"topoasm-geometry\"", 0) == 0);
  CHECK_THROWS_AS(parse_geometry_document("{\"format\": \"other\"}"), std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry_document("not json"), std::invalid_argument);
}

TEST_CASE("stats csv layout") {
  SynthesisConfig cfg;
  cfg.policy.condition.kind = ConditionKind::temporal;
  cfg.script = OutcomeScript::load(kData + "/trace_outcomes.txt");
  Assembly a = synthesize(load_icm(kData + "/toffoli.icm"), cfg);
  std::istringstream csv(stats_csv(a));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "step,nr_a,nr_y,a_pool,y_pool,sched_round");
  std::getline(csv, line);
  CHECK(line == "1,2,1,6,6,1");
  int rows = 1;
  while (std::getline(csv, line) && line.rfind("volume", 0) != 0) ++rows;
  CHECK(rows == 21);
  CHECK(line == "volume," + std::to_string(a.volume));
}

TEST_CASE("cli exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"--circuit", kData + "/toffoli.icm", "--scheduler", "fifo"}).code == kExitUsage);
  CHECK(cli({"--circuit", kData + "/toffoli.icm", "--p-fail", "1"}).code == kExitUsage);
  CHECK(cli({"--circuit", kData + "/nope.icm"}).code == kExitFailure);

  fs::path bad = scratch("bad.icm");
  std::ofstream(bad) << "init 0 0\ncnot 0 7\n";
  Run r = cli({"--circuit", bad.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find(":2") != std::string::npos);

  fs::path dud = scratch("dud.txt");
  std::ofstream(dud) << "0\n";
  CHECK(cli({"--circuit", kData + "/toffoli.icm", "--outcomes", dud.string()}).code == kExitFailure);

  Run ok = cli({"--circuit", kData + "/toffoli.icm"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("connected 21") != std::string::npos);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("cli exports are byte identical across runs") {
  auto run = [](const std::string &tag) {
    std::vector<fs::path> files{scratch(tag + ".json"), scratch(tag + ".csv"), scratch(tag + ".log")};
    Run r = cli({"--circuit", kData + "/toffoli.icm", "--seed", "4", "--export-geometry", files[0].string(),
                 "--export-stats", files[1].string(), "--journal", files[2].string()});
    REQUIRE(r.code == kExitOk);
    std::vector<std::string> out;
    for (const auto &f : files) out.push_back(slurp(f));
    return out;
  };
  auto a = run("a"), b = run("b");
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK_FALSE(a[i].empty());
    CHECK(a[i] == b[i]);
  }
}

TEST_CASE("compare mode prints medians") {
  Run r = cli({"--circuit", kData + "/toffoli.icm", "--compare", "2"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("seed,spiral,alap,asap\n1,", 0) == 0);
  CHECK(r.out.find("\nmedian,") != std::string::npos);
  CHECK(r.out.find("spiral_vs_alap_reduction,") != std::string::npos);
}

TEST_CASE("unwritable export path fails cleanly") {
  Run r = cli({"--circuit", kData + "/toffoli.icm", "--export-geometry", "/nonexistent/dir/g.json"});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("cannot open") != std::string::npos);
}
