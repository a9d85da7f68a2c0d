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

#include <CLI11.hpp>

#include "salto/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"saltolab: sagittal-plane quadruped jumping stack"};
  app.require_subcommand(1);

  salto::TerrainCmdArgs terrain_args;
  CLI::App* terrain = app.add_subcommand("terrain", "generate a terrain file");
  terrain->add_option("--kind", terrain_args.kind,
                      "single_gap | single_step | stairs | stepping_stones");
  terrain->add_option("--level", terrain_args.level, "curriculum level");
  terrain->add_option("--seed", terrain_args.seed, "generator seed");
  terrain->add_option("-o,--out", terrain_args.out_path, "terrain JSON path");
  terrain->add_option("--csv", terrain_args.csv_path, "optional (x,h) profile CSV");

  salto::RunCmdArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run one rollout");
  run->add_option("-c,--config", run_args.config_path, "run config JSON");
  run->add_option("--preset", run_args.preset, "named preset (default | accept-flat)");
  run->add_option("--override", run_args.overrides, "a.b=c overrides")->take_all();
  run->add_flag("--strict", run_args.strict, "exit 3 when the episode fails");

  salto::EvalCmdArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "run an evaluation suite");
  eval->add_option("-c,--config", eval_args.config_path, "run config JSON");
  eval->add_option("--preset", eval_args.preset, "named preset");
  eval->add_option("--override", eval_args.overrides, "a.b=c overrides")->take_all();
  eval->add_option("--suite", eval_args.suite, "flat | stairs-ablation | terrains | empty");
  eval->add_option("-o,--out", eval_args.out_csv, "metrics CSV path");

  salto::CheckCmdArgs check_args;
  CLI::App* check = app.add_subcommand("check", "run the property suites");
  check->add_option("--subset", check_args.subset, "filter by module/name substring");
  check->add_option("--json", check_args.out_json, "write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : salto::kExitUsage;
  }

  if (terrain->parsed()) return salto::cmd_terrain(terrain_args);
  if (run->parsed()) return salto::cmd_run(run_args);
  if (eval->parsed()) return salto::cmd_eval(eval_args);
  if (check->parsed()) return salto::cmd_check(check_args);
  return salto::kExitUsage;
}
