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

#include "dei/efficiency.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dei/errors.h"

namespace dei {

std::string_view good_name(Good good) {
  return good == Good::kThroughput ? "throughput" : "memory";
}

Good parse_good(std::string_view name) {
  if (name == "throughput") return Good::kThroughput;
  if (name == "memory") return Good::kMemorySaved;
  throw DataError(fmt::format(
      "unknown metric '{}' (expected throughput or memory)", name));
}

std::vector<std::string> check_config(const EfficiencyConfig& config) {
  if (!(config.max_memory_gb > 0.0)) {
    throw ConfigError(fmt::format("max memory must be positive, got {}",
                                  config.max_memory_gb));
  }
  for (double w : {config.w_perf, config.w_throughput, config.w_memory}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ConfigError(
          fmt::format("efficiency weights must be nonnegative, got {}", w));
    }
  }
  std::vector<std::string> warnings;
  const double sum = config.w_perf + config.w_throughput + config.w_memory;
  if (std::abs(sum - 1.0) > 1e-9) {
    warnings.push_back(
        fmt::format("efficiency weights sum to {}, not 1", sum));
  }
  return warnings;
}

double memory_saved(const ModelGoods& goods, const EfficiencyConfig& config) {
  if (goods.memory_gb > config.max_memory_gb) {
    throw DataError(fmt::format("{}: memory used {} GB exceeds maximum {} GB",
                                goods.model, goods.memory_gb,
                                config.max_memory_gb));
  }
  return config.max_memory_gb - goods.memory_gb;
}

double good_value(const ModelGoods& goods, Good good,
                  const EfficiencyConfig& config) {
  return good == Good::kThroughput ? goods.throughput
                                   : memory_saved(goods, config);
}

std::vector<double> mrs_sequence(std::span<const ModelGoods> group_models,
                                 Good good, const EfficiencyConfig& config) {
  if (group_models.size() < 2) {
    const std::string name =
        group_models.empty()
            ? std::string("<empty>")
            : fmt::format("{}/{}", group_models[0].group,
                          group_models[0].task);
    throw DataError(fmt::format(
        "indifference group {} has fewer than two models", name));
  }
  for (const auto& m : group_models) {
    if (m.group != group_models[0].group || m.task != group_models[0].task) {
      throw DataError(fmt::format(
          "model {} ({}/{}) mixed into group {}/{}", m.model, m.group, m.task,
          group_models[0].group, group_models[0].task));
    }
  }
  std::vector<const ModelGoods*> ordered;
  for (const auto& m : group_models) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ModelGoods* x, const ModelGoods* y) {
                     if (x->performance != y->performance) {
                       return x->performance < y->performance;
                     }
                     return x->model < y->model;
                   });

  std::vector<double> mrs;
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
    const ModelGoods& lo = *ordered[i];
    const ModelGoods& hi = *ordered[i + 1];
    const double dperf = hi.performance - lo.performance;
    if (dperf == 0.0) {
      throw DataError(fmt::format(
          "models {} and {} have equal performance {}; MRS undefined",
          lo.model, hi.model, lo.performance));
    }
    const double dgood =
        good_value(hi, good, config) - good_value(lo, good, config);
    mrs.push_back(std::abs(dgood / dperf));
  }
  return mrs;
}

double amrs(std::span<const double> mrs_values) {
  if (mrs_values.empty()) throw DataError("AMRS of an empty MRS list");
  return std::accumulate(mrs_values.begin(), mrs_values.end(), 0.0) /
         static_cast<double>(mrs_values.size());
}

void AmrsTable::set(const AmrsKey& key, double value) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ComputationError(fmt::format(
        "AMRS for {}/{}/{} must be positive, got {}", key.group, key.task,
        good_name(key.good), value));
  }
  entries_[key] = value;
}

std::optional<double> AmrsTable::find(const AmrsKey& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

AmrsTable compute_amrs_table(std::span<const ModelGoods> goods,
                             const EfficiencyConfig& config) {
  std::map<std::pair<std::string, std::string>, std::vector<ModelGoods>>
      groups;
  for (const auto& g : goods) groups[{g.group, g.task}].push_back(g);

  AmrsTable table;
  for (const auto& [key, members] : groups) {
    for (Good good : {Good::kThroughput, Good::kMemorySaved}) {
      const auto mrs = mrs_sequence(members, good, config);
      table.set({key.first, key.second, good}, amrs(mrs));
    }
  }
  return table;
}

double efficiency_score(const ModelGoods& goods, const AmrsTable& amrs,
                        const EfficiencyConfig& config) {
  auto lookup = [&](Good good) {
    auto value = amrs.find({goods.group, goods.task, good});
    if (!value) {
      throw DataError(fmt::format("no AMRS for {}/{}/{}", goods.group,
                                  goods.task, good_name(good)));
    }
    if (!(*value > 0.0)) {
      throw ComputationError(fmt::format("zero AMRS for {}/{}/{}",
                                         goods.group, goods.task,
                                         good_name(good)));
    }
    return *value;
  };
  const double tp = lookup(Good::kThroughput);
  const double mem = lookup(Good::kMemorySaved);
  return config.w_perf * goods.performance +
         config.w_throughput * goods.throughput / tp +
         config.w_memory * memory_saved(goods, config) / mem;
}

}  // namespace dei
