// Copyright 2026 The Saltolab Authors
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

#include "salto/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "salto/checks.hpp"
#include "salto/config.hpp"
#include "salto/rollout.hpp"

namespace salto {
namespace {

namespace fs = std::filesystem;

void write_file(const std::string& path, const std::string& content) {
  if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) {
    fs::create_directories(parent);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

RunConfig load_config_for(const std::string& config_path, const std::string& preset,
                          const std::vector<std::string>& overrides) {
  if (!preset.empty()) {
    nlohmann::json j = run_config_to_json(preset_by_name(preset));
    for (const std::string& o : overrides) apply_override(j, o);
    return parse_run_config(j);
  }
  return load_run_config(config_path, overrides);
}

struct EvalCase {
  std::string kind;
  int level;
};

std::vector<EvalCase> suite_cases(const std::string& suite, int* seeds) {
  *seeds = 5;
  if (suite == "empty") {
    *seeds = 0;
    return {};
  }
  if (suite == "flat") return {{"flat", 0}};
  if (suite == "stairs-ablation") return {{"stairs", 0}, {"stairs", 2}, {"stairs", 4}};
  if (suite == "terrains") {
    *seeds = 3;
    std::vector<EvalCase> cases;
    for (const char* kind : {"single_gap", "single_step", "stairs", "stepping_stones"}) {
      for (int level : {0, 3}) cases.push_back({kind, level});
    }
    return cases;
  }
  throw ConfigError("unknown eval suite: " + suite);
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

int cmd_terrain(const TerrainCmdArgs& args) {
  try {
    TerrainSpec spec{terrain_kind_from_string(args.kind), args.level, args.seed};
    const TerrainProfile profile = generate_terrain(spec);
    write_file(args.out_path, terrain_to_json(spec, profile));

    if (!args.csv_path.empty()) {
      std::string csv = "x,h\n";
      double x = -1.0;
      double h = height_at(profile, x);
      csv += format_g(x) + "," + format_g(h) + "\n";
      for (const Breakpoint& bp : profile.breakpoints) {
        if (bp.x <= x || bp.x > profile.extent) continue;
        csv += format_g(bp.x) + "," + format_g(h) + "\n";
        h = bp.height;
        csv += format_g(bp.x) + "," + format_g(h) + "\n";
        x = bp.x;
      }
      csv += format_g(profile.extent) + "," + format_g(h) + "\n";
      write_file(args.csv_path, csv);
    }
    std::cout << "wrote " << args.out_path << " (" << profile.breakpoints.size() - 1
              << " breakpoints past spawn)\n";
    return kExitOk;
  } catch (const InvalidLevel& e) {
    std::cerr << "InvalidLevel: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_run(const RunCmdArgs& args) {
  RunConfig config;
  try {
    config = load_config_for(args.config_path, args.preset, args.overrides);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const TerrainProfile terrain = make_terrain(config.terrain);
    Environment env = make_environment(config);
    const auto policy = make_policy(config.policy);

    fs::create_directories(config.out_dir);
    write_file(config.out_dir + "/resolved_config.json", run_config_to_json(config).dump(2) + "\n");

    std::ofstream csv(config.out_dir + "/rollout.csv", std::ios::binary);
    RolloutLog log(csv);
    std::ofstream depth_log;
    if (config.depth_log) {
      depth_log.open(config.out_dir + "/depth.bin", std::ios::binary);
      env.set_depth_sink(&depth_log);
    }
    std::vector<ActionCommand> actions;
    const EpisodeSummary summary =
        run_rollout(env, *policy, terrain, config.seed, config.max_steps, &log, &actions);

    std::string action_lines;
    for (const ActionCommand& a : actions) action_lines += action_to_json_line(a) + "\n";
    write_file(config.out_dir + "/actions.jsonl", action_lines);
    write_file(config.out_dir + "/summary.json", summary_to_json_line(summary) + "\n");

    std::cout << summary_to_json_line(summary) << "\n";

    const bool failed = summary.termination != "timeout" && summary.termination != "none" &&
                        summary.termination != "max_steps";
    if (failed && args.strict) return kExitEpisodeFailure;
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_eval(const EvalCmdArgs& args) {
  RunConfig config;
  int seeds = 0;
  std::vector<EvalCase> cases;
  try {
    config = load_config_for(args.config_path, args.preset, args.overrides);
    cases = suite_cases(args.suite, &seeds);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    std::string csv = "terrain,level,seed,distance,steps,termination\n";
    for (const EvalCase& c : cases) {
      std::vector<double> distances, steps;
      for (int seed = 1; seed <= seeds; ++seed) {
        RunConfig run_cfg = config;
        run_cfg.terrain.kind = c.kind;
        run_cfg.terrain.level = c.level;
        run_cfg.terrain.seed = static_cast<std::uint64_t>(seed);
        const TerrainProfile terrain = make_terrain(run_cfg.terrain);
        Environment env = make_environment(run_cfg);
        const auto policy = make_policy(run_cfg.policy);
        const EpisodeSummary s =
            run_rollout(env, *policy, terrain, static_cast<std::uint64_t>(seed),
                        run_cfg.max_steps);
        csv += c.kind + "," + std::to_string(c.level) + "," + std::to_string(seed) + "," +
               format_g(s.distance) + "," + std::to_string(s.steps) + "," + s.termination + "\n";
        distances.push_back(s.distance);
        steps.push_back(static_cast<double>(s.steps));
      }
      if (seeds > 0) {
        csv += c.kind + "," + std::to_string(c.level) + ",median," +
               format_g(median_of(distances)) + "," + format_g(median_of(steps)) + ",-\n";
      }
    }
    write_file(args.out_csv, csv);
    const fs::path out_dir = fs::path(args.out_csv).parent_path();
    const std::string cfg_path =
        (out_dir.empty() ? fs::path(".") : out_dir) / "resolved_config.json";
    write_file(cfg_path, run_config_to_json(config).dump(2) + "\n");
    std::cout << "wrote " << args.out_csv << " (" << cases.size() << " cases x " << seeds
              << " seeds)\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_check(const CheckCmdArgs& args) {
  const std::vector<CheckResult> results = run_property_checks(args.subset);
  bool all = true;
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.module << "/" << r.name;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::printf("  [%.2fs]\n", r.seconds);
    all = all && r.pass;
  }
  std::cout << (all ? "all checks passed" : "CHECKS FAILED") << " (" << results.size()
            << " suites)\n";
  if (!args.out_json.empty()) write_file(args.out_json, checks_to_json(results));
  return all ? kExitOk : kExitPropertyFailure;
}

}  // namespace salto
