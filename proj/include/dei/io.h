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

// File formats. Flat tables are comma-separated with a fixed header;
// nested records (curve registries, plans, evaluations) use the sectioned
// key-value text of text_format.h. Every format_* function is canonical:
// sorted keys, fixed number formatting, trailing newline.
//
// parse_* functions take the file contents plus a name used in error
// messages; load_* read the file first.

#ifndef DEI_IO_H_
#define DEI_IO_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dei/allocator.h"
#include "dei/curves.h"
#include "dei/efficiency.h"
#include "dei/lang_metrics.h"

namespace dei {

namespace fs = std::filesystem;

enum class ScoreScale { kPercent, kUnit };

ScoreScale parse_scale(std::string_view name);  // throws ConfigError
std::string_view scale_name(ScoreScale scale);

// lang,speakers_millions
SpeakerTable parse_speakers(std::string_view text, std::string_view source);
SpeakerTable load_speakers(const fs::path& path);
std::string format_speakers(const SpeakerTable& table);

// task,max_performance,target_lang  ("*" = task default)
std::vector<TaskSpec> parse_tasks(std::string_view text,
                                  std::string_view source);
std::vector<TaskSpec> load_tasks(const fs::path& path);
std::string format_tasks(const std::vector<TaskSpec>& tasks);

// One language code per line.
LanguageUniverse parse_universe(std::string_view text, std::string_view source);
LanguageUniverse load_universe(const fs::path& path);
std::string format_universe(const LanguageUniverse& universe);

// task,model,train_lang,target_lang,score. Unit-scale scores are stored
// multiplied by 100 so they share the scale of the task maxima.
PerformanceTable parse_performance(std::string_view text,
                                   std::string_view source, ScoreScale scale);
PerformanceTable load_performance(const fs::path& path, ScoreScale scale);
std::string format_performance(const PerformanceTable& table);

// source,target,samples,score. A "# scale: percent|unit" comment declares
// the score scale (unit when absent); `scale` overrides it. Scores are
// normalized to [0, 1]. Sample counts must strictly increase within a pair.
std::vector<TrajectoryPoint> parse_trajectories(
    std::string_view text, std::string_view source,
    std::optional<ScoreScale> scale = std::nullopt);
std::vector<TrajectoryPoint> load_trajectories(
    const fs::path& path, std::optional<ScoreScale> scale = std::nullopt);
std::string format_trajectories(const std::vector<TrajectoryPoint>& points);

// model,group,task,throughput,memory_gb,perf
std::vector<ModelGoods> parse_goods(std::string_view text,
                                    std::string_view source);
std::vector<ModelGoods> load_goods(const fs::path& path);
std::string format_goods(const std::vector<ModelGoods>& goods);

// group,task,metric,amrs
AmrsTable parse_amrs(std::string_view text, std::string_view source);
AmrsTable load_amrs(const fs::path& path);
std::string format_amrs(const AmrsTable& table);

// model,task,perf: replaces the perf column of matching goods.
using PerfOverrides = std::map<std::pair<std::string, std::string>, double>;
PerfOverrides parse_perf_overrides(std::string_view text,
                                   std::string_view source);
PerfOverrides load_perf_overrides(const fs::path& path);

CurveRegistry parse_curve_registry(std::string_view text,
                                   std::string_view source);
CurveRegistry load_curve_registry(const fs::path& path);
std::string format_curve_registry(const CurveRegistry& registry);

// Plan record file plus optional trace CSV (step,source,gain,gm,gini).
AllocationPlan parse_plan(std::string_view plan_text, std::string_view source,
                          std::optional<std::string_view> trace_text = {});
AllocationPlan load_plan(const fs::path& plan_path,
                         std::optional<fs::path> trace_path = {});
std::string format_plan(const AllocationPlan& plan);
std::string format_trace(const AllocationPlan& plan);

PlanEvaluation parse_evaluation(std::string_view text, std::string_view source);
std::string format_evaluation(const PlanEvaluation& eval);

std::string_view composition_name(Composition composition);
Composition parse_composition(std::string_view name);  // throws ConfigError

// task,model,train_lang,tau,mode,scale,m_tau,gini,languages,tested
std::string format_scorecard(const Scorecard& card, double tau,
                             bool tested_only, ScoreScale scale);
// task,model,train_lang,k,population_fraction,cumulative_share
std::string format_lorenz(const Scorecard& card);

struct EfficiencyRow {
  ModelGoods goods;
  double memory_saved = 0.0;
  double amrs_throughput = 0.0;
  double amrs_memory = 0.0;
  double efficiency = 0.0;
  // Range of the score when every overridden AMRS varies within its
  // printed rounding interval; equal to `efficiency` for computed AMRS.
  double efficiency_min = 0.0;
  double efficiency_max = 0.0;
};
std::string format_efficiency(const std::vector<EfficiencyRow>& rows);

struct ReferenceMetric {
  std::string table;  // all_languages | tested_only | baseline
  std::string metric;
  std::string train_lang;
  std::string model;
  std::string task;
  double value = 0.0;
};

struct ReferenceAllocation {
  std::string objective;  // gm_tau0 | gm_tau1
  std::int64_t budget = 0;
  std::string model;
  std::map<std::string, std::int64_t> samples;
};

// Everything under data/: published tables as shipped with the toolkit.
struct DataBundle {
  SpeakerTable speakers;
  std::vector<TaskSpec> tasks;
  LanguageUniverse universe;
  std::vector<ModelGoods> goods;
  AmrsTable printed_amrs;
  PerfOverrides baseline_perf;
  CurveRegistry muril_curves;
  CurveRegistry xlmr_curves;
  std::vector<ReferenceAllocation> allocations;
  std::vector<ReferenceMetric> reference_metrics;

  std::optional<double> reference(std::string_view table,
                                  std::string_view metric,
                                  std::string_view train_lang,
                                  std::string_view model,
                                  std::string_view task) const;
};

DataBundle load_bundle(const fs::path& data_dir);

}  // namespace dei

#endif  // DEI_IO_H_
