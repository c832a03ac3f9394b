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

// Efficiency score: converts a model's goods (CPU throughput, memory saved
// below a fixed ceiling) into units of performance by dividing by the
// average marginal rate of substitution (AMRS) of that good within the
// model's indifference group, then takes a weighted sum with performance.

#ifndef DEI_EFFICIENCY_H_
#define DEI_EFFICIENCY_H_

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dei {

enum class Good { kThroughput, kMemorySaved };

// "throughput" / "memory".
std::string_view good_name(Good good);
Good parse_good(std::string_view name);  // throws DataError

struct ModelGoods {
  std::string model;
  std::string group;  // indifference group, e.g. "regional" or "global"
  std::string task;
  double throughput = 0.0;  // instances per second on CPU
  double memory_gb = 0.0;   // memory used
  double performance = 0.0;

  friend bool operator==(const ModelGoods&, const ModelGoods&) = default;
};

struct EfficiencyConfig {
  double max_memory_gb = 16.0;
  double w_perf = 0.5;
  double w_throughput = 0.25;
  double w_memory = 0.25;
};

// Throws ConfigError on negative weights or a non-positive memory ceiling.
// Returns a warning when the weights do not sum to 1.
std::vector<std::string> check_config(const EfficiencyConfig& config);

// Throws DataError when memory used exceeds the ceiling.
double memory_saved(const ModelGoods& goods, const EfficiencyConfig& config);

double good_value(const ModelGoods& goods, Good good,
                  const EfficiencyConfig& config);

// |dM / dperf| between neighbours after ordering the group by ascending
// performance. All models must share group and task.
std::vector<double> mrs_sequence(std::span<const ModelGoods> group_models,
                                 Good good, const EfficiencyConfig& config);

// Arithmetic mean. Throws DataError on an empty list.
double amrs(std::span<const double> mrs_values);

struct AmrsKey {
  std::string group;
  std::string task;
  Good good = Good::kThroughput;

  friend auto operator<=>(const AmrsKey&, const AmrsKey&) = default;
};

class AmrsTable {
 public:
  // Rejects non-positive values (they would divide by zero downstream).
  void set(const AmrsKey& key, double value);
  std::optional<double> find(const AmrsKey& key) const;
  const std::map<AmrsKey, double>& entries() const { return entries_; }

 private:
  std::map<AmrsKey, double> entries_;
};

// One AMRS per (group, task, good). Throws DataError naming any group with
// fewer than two models.
AmrsTable compute_amrs_table(std::span<const ModelGoods> goods,
                             const EfficiencyConfig& config);

// w_perf * perf + w_tp * throughput / AMRS_tp + w_mem * saved / AMRS_mem.
double efficiency_score(const ModelGoods& goods, const AmrsTable& amrs,
                        const EfficiencyConfig& config);

}  // namespace dei

#endif  // DEI_EFFICIENCY_H_
