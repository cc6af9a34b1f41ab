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

#include "topoasm/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "topoasm/engine.hpp"
#include "topoasm/export.hpp"
#include "topoasm/icm.hpp"

namespace topoasm {

namespace {

struct RunSpec {
  std::string circuit;
  std::string scheduler = "spiral";
  std::string condition = "back_to_back";
  int period = 24;
  int threshold = 2;
  double p_fail = 0.5;
  double confidence = 0.999;
  int pool_cap = 10;
  int pool_gap = 2;
  std::uint64_t seed = 1;
  std::string outcomes;
  bool no_recycle = false;
  bool strict = false;
  int max_rounds = 64;
  std::string geometry_path;
  std::string stats_path;
  std::string journal_path;
  int compare = 0;
};

SynthesisConfig make_config(const RunSpec &r) {
  SynthesisConfig c;
  c.policy.kind = parse_scheduler_kind(r.scheduler);
  static const std::map<std::string, ConditionKind> conditions{{"back_to_back", ConditionKind::back_to_back},
                                                               {"temporal", ConditionKind::temporal},
                                                               {"pool_threshold", ConditionKind::pool_threshold}};
  c.policy.condition.kind = conditions.at(r.condition);
  c.policy.condition.period = r.period;
  c.policy.condition.threshold = r.threshold;
  c.policy.p_fail = r.p_fail;
  c.policy.confidence = r.confidence;
  c.pool.cap_per_type = r.pool_cap;
  c.pool.pool_gap = r.pool_gap;
  c.seed = r.seed;
  c.recycle = !r.no_recycle;
  c.strict = r.strict;
  c.max_rounds = r.max_rounds;
  if (!r.outcomes.empty()) c.script = OutcomeScript::load(r.outcomes);
  return c;
}

template <typename T>
T median(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

int compare(const IcmCircuit &circuit, const RunSpec &spec, std::ostream &out, std::ostream &err) {
  out << "seed";
  for (const char *k : {"spiral", "alap", "asap"}) out << ',' << k;
  out << '\n';
  std::map<std::string, std::vector<std::int64_t>> vols;
  int failures = 0;
  for (int i = 0; i < spec.compare; ++i) {
    std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(i);
    out << seed;
    for (const char *k : {"spiral", "alap", "asap"}) {
      RunSpec r = spec;
      r.scheduler = k;
      r.seed = seed;
      r.outcomes.clear();
      try {
        Assembly a = synthesize(circuit, make_config(r));
        vols[k].push_back(a.volume);
        out << ',' << a.volume;
      } catch (const SynthesisFailure &e) {
        ++failures;
        out << ",fail";
        err << k << " seed " << seed << ": " << e.what() << '\n';
      }
    }
    out << '\n';
  }
  out << "median";
  for (const char *k : {"spiral", "alap", "asap"}) {
    if (vols[k].empty()) {
      out << ",-";
    } else {
      out << ',' << median(vols[k]);
    }
  }
  out << '\n';
  if (!vols["spiral"].empty() && !vols["alap"].empty()) {
    double s = static_cast<double>(median(vols["spiral"])), a = static_cast<double>(median(vols["alap"]));
    out << "spiral_vs_alap_reduction," << std::fixed << std::setprecision(4) << (1.0 - s / a) << '\n';
  }
  return failures ? kExitFailure : kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &argv, std::ostream &out, std::ostream &err) {
  RunSpec spec;
  CLI::App app{"Online synthesis of ICM circuits into topological assemblies", "topoasm"};
  app.add_option("--circuit", spec.circuit, "ICM circuit file")->required();
  app.add_option("--scheduler", spec.scheduler, "spiral|asap|alap")
      ->check(CLI::IsMember({"spiral", "asap", "alap"}));
  app.add_option("--condition", spec.condition, "spiral scheduling condition")
      ->check(CLI::IsMember({"back_to_back", "temporal", "pool_threshold"}));
  app.add_option("--period", spec.period, "timesteps between temporal rounds")->check(CLI::PositiveNumber);
  app.add_option("--threshold", spec.threshold, "pool_threshold trigger level")->check(CLI::NonNegativeNumber);
  app.add_option("--p-fail", spec.p_fail, "distillation failure probability")->check(CLI::Range(0.0, 1.0));
  app.add_option("--confidence", spec.confidence, "round sizing confidence")->check(CLI::Range(0.0, 1.0));
  app.add_option("--pool-cap", spec.pool_cap, "connections kept per type")->check(CLI::PositiveNumber);
  app.add_option("--pool-gap", spec.pool_gap, "distance from circuit to rail plane")->check(CLI::PositiveNumber);
  app.add_option("--seed", spec.seed, "outcome rng seed");
  app.add_option("--outcomes", spec.outcomes, "outcome script, one bitmap line per round");
  app.add_flag("--no-recycle", spec.no_recycle, "keep one wire per qubit lifetime");
  app.add_flag("--strict", spec.strict, "fail instead of scheduling again when the pool runs short");
  app.add_option("--max-rounds", spec.max_rounds, "round limit")->check(CLI::PositiveNumber);
  app.add_option("--export-geometry", spec.geometry_path, "geometry JSON output");
  app.add_option("--export-stats", spec.stats_path, "per-step CSV output");
  app.add_option("--journal", spec.journal_path, "diagnosis journal output");
  app.add_option("--compare", spec.compare, "run all schedulers over N seeds")->check(CLI::PositiveNumber);

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  if (spec.p_fail >= 1.0 || spec.confidence <= 0.0 || spec.confidence >= 1.0) {
    err << "error: need p-fail < 1 and 0 < confidence < 1\n";
    return kExitUsage;
  }

  IcmCircuit circuit;
  try {
    std::ifstream probe(spec.circuit);
    if (!probe) {
      err << "error: cannot read " << spec.circuit << '\n';
      return kExitFailure;
    }
    circuit = load_icm(spec.circuit);
  } catch (const IcmError &e) {
    err << spec.circuit << ':' << e.what() << '\n';
    return kExitUsage;
  }

  if (spec.compare > 0) return compare(circuit, spec, out, err);

  SynthesisConfig config;
  try {
    config = make_config(spec);
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  try {
    Assembly a = synthesize(circuit, config);
    if (!spec.geometry_path.empty()) export_geometry(a, spec.geometry_path);
    if (!spec.stats_path.empty()) export_stats(a, spec.stats_path);
    if (!spec.journal_path.empty()) export_journal(a.journal, spec.journal_path);
    out << "scheduler " << spec.scheduler << "\nvolume " << a.volume << "\nrounds " << a.layers.size()
        << "\nsteps " << a.records.size() << "\nconnected " << a.connected_inputs << '\n';
    return kExitOk;
  } catch (const SynthesisFailure &e) {
    err << "synthesis failed: " << e.what() << '\n';
    if (!spec.journal_path.empty()) {
      try {
        export_journal(e.journal(), spec.journal_path);
      } catch (const std::exception &w) {
        err << "error: " << w.what() << '\n';
      }
    }
    return kExitFailure;
  } catch (const std::runtime_error &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace topoasm
