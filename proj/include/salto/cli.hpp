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

#pragma once

#include <string>
#include <vector>

namespace salto {

// Exit codes: 0 success, 1 property failure, 2 usage/config error,
// 3 strict-mode episode failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitEpisodeFailure = 3;

struct TerrainCmdArgs {
  std::string kind = "stairs";
  int level = 0;
  std::uint64_t seed = 0;
  std::string out_path = "terrain.json";
  std::string csv_path;  // optional (x, h) plot data
};

struct RunCmdArgs {
  std::string config_path;
  std::string preset;  // optional named preset instead of a file
  std::vector<std::string> overrides;
  bool strict = false;
};

struct EvalCmdArgs {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  std::string suite = "flat";
  std::string out_csv = "eval.csv";
};

struct CheckCmdArgs {
  std::string subset;
  std::string out_json;  // optional report path (stdout always gets a summary)
};

int cmd_terrain(const TerrainCmdArgs& args);
int cmd_run(const RunCmdArgs& args);
int cmd_eval(const EvalCmdArgs& args);
int cmd_check(const CheckCmdArgs& args);

}  // namespace salto
