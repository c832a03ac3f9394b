// Copyright 2026 The Authors.
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

#ifndef DEI_CLI_COMMANDS_H_
#define DEI_CLI_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dei/io.h"

namespace dei::cli {

// Collects every output of a command and writes them only once the command
// has finished: each file goes to a temporary sibling first and is renamed
// into place, so a failure leaves no new files behind.
class OutputSet {
 public:
  // An empty path means standard output.
  void add(std::filesystem::path path, std::string contents);
  void commit(std::ostream& out);

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
  std::string stdout_;
};

struct MetricsArgs {
  std::string perf;
  std::string speakers;
  std::string tasks;
  std::string universe;
  double tau = 1.0;
  bool tested_only = false;
  std::string scale = "percent";
  std::string input_scale = "percent";
  std::string out;
  std::string lorenz_out;
};

struct EfficiencyArgs {
  std::string goods;
  std::string perf_override;
  std::string amrs_override;
  std::string weights = "0.5,0.25,0.25";
  double max_memory = 16.0;
  std::string out;
  std::string amrs_out;
};

struct FitArgs {
  std::string trajectories;
  std::string c_range = "0:2";
  std::string input_scale;
  std::string out;
  std::string samples_out;
  std::string x_grid = "1000,2000,5000,10000,20000,50000,100000";
};

struct AllocateArgs {
  std::string curves;
  std::string speakers;
  std::string sources = "bn,en,hi,ml,mr,ta,ur";
  std::string targets;
  std::int64_t budget = -1;
  std::string strategy = "greedy";
  double tau = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::string missing = "strict";
  std::string composition = "best-source";
  bool clamp = false;
  std::string plan_out;
  std::string trace_out;
  std::string eval_out;
};

struct ReportArgs {
  std::string scorecard;
  std::string lorenz;
  std::string efficiency;
  std::string amrs;
  std::string curves;
  std::string plan;
  std::string trace;
  std::string evaluation;
  std::string out;
};

void cmd_metrics(const MetricsArgs& args, OutputSet& outputs,
                 std::ostream& err);
void cmd_efficiency(const EfficiencyArgs& args, OutputSet& outputs,
                    std::ostream& err);
void cmd_fit(const FitArgs& args, OutputSet& outputs, std::ostream& err);
void cmd_allocate(const AllocateArgs& args, OutputSet& outputs,
                  std::ostream& err);
void cmd_report(const ReportArgs& args, OutputSet& outputs, std::ostream& err);

// Comma-separated list, empty items rejected.
std::vector<std::string> parse_list(const std::string& text,
                                    std::string_view flag);

// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace dei::cli

#endif  // DEI_CLI_COMMANDS_H_
