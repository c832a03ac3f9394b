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

#include "dei/lang_metrics.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "dei/errors.h"

namespace dei {
namespace {

void check_gini_input(std::span<const double> values) {
  if (values.empty()) {
    throw DataError("Gini coefficient of an empty vector is undefined");
  }
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DataError(fmt::format(
          "Gini coefficient requires nonnegative finite values, got {}", v));
    }
  }
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::stable_sort(sorted.begin(), sorted.end());
  return sorted;
}

}  // namespace

void SpeakerTable::add(const std::string& lang, double millions) {
  if (lang.empty()) throw DataError("empty language code in speaker table");
  if (!std::isfinite(millions) || millions < 0.0) {
    throw DataError(fmt::format("speaker count for '{}' must be >= 0, got {}",
                                lang, millions));
  }
  if (!entries_.emplace(lang, millions).second) {
    throw DataError(fmt::format("duplicate language '{}' in speaker table",
                                lang));
  }
}

std::optional<double> SpeakerTable::find(std::string_view lang) const {
  auto it = entries_.find(lang);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

double TaskSpec::max_for(std::string_view lang) const {
  auto it = language_max.find(lang);
  return it == language_max.end() ? max_performance : it->second;
}

void validate_task(const TaskSpec& task) {
  if (task.id.empty()) throw ConfigError("task with empty id");
  if (!(task.max_performance > 0.0)) {
    throw ConfigError(fmt::format(
        "task '{}': max performance must be positive, got {}", task.id,
        task.max_performance));
  }
  for (const auto& [lang, max] : task.language_max) {
    if (!(max > 0.0)) {
      throw ConfigError(fmt::format(
          "task '{}': max performance for '{}' must be positive, got {}",
          task.id, lang, max));
    }
  }
}

LanguageUniverse::LanguageUniverse(std::vector<std::string> codes)
    : codes_(std::move(codes)) {
  std::vector<std::string> seen = codes_;
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i].empty()) throw DataError("empty language code in universe");
    if (i > 0 && seen[i] == seen[i - 1]) {
      throw DataError(
          fmt::format("duplicate language '{}' in universe", seen[i]));
    }
  }
}

LanguageUniverse LanguageUniverse::indian_scheduled_plus_english() {
  return LanguageUniverse({"as", "bn", "brx", "doi", "en", "gu", "hi", "kn",
                           "kok", "ks", "mai", "ml", "mni", "mr", "ne", "or",
                           "pa", "sa", "sat", "sd", "ta", "te", "ur"});
}

bool LanguageUniverse::contains(std::string_view code) const {
  return index_of(code).has_value();
}

std::optional<std::size_t> LanguageUniverse::index_of(
    std::string_view code) const {
  auto it = std::find(codes_.begin(), codes_.end(), code);
  if (it == codes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

double utility(double raw_score, double max_performance) {
  if (!(max_performance > 0.0)) {
    throw ConfigError(fmt::format("max performance must be positive, got {}",
                                  max_performance));
  }
  if (!std::isfinite(raw_score) || raw_score < 0.0) {
    throw DataError(
        fmt::format("raw score must be a nonnegative number, got {}",
                    raw_score));
  }
  return std::min(raw_score / max_performance, 1.0);
}

double utility(double raw_score, const TaskSpec& task) {
  return utility(raw_score, task.max_performance);
}

std::vector<double> demand(const SpeakerTable& speakers,
                           const LanguageUniverse& universe,
                           DemandParams params) {
  if (universe.size() == 0) {
    throw ConfigError("demand over an empty language universe");
  }
  if (!(params.tau >= 0.0 && params.tau <= 1.0)) {
    throw ConfigError(
        fmt::format("tau must lie in [0, 1], got {}", params.tau));
  }
  std::vector<double> weights(universe.size(), 1.0);
  if (params.tau > 0.0) {
    for (std::size_t i = 0; i < universe.size(); ++i) {
      const auto& lang = universe.codes()[i];
      auto n = speakers.find(lang);
      if (!n) {
        throw DataError(
            fmt::format("no speaker count for language '{}'", lang));
      }
      weights[i] = std::pow(*n, params.tau);
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) {
    throw ComputationError("demand weights sum to zero");
  }
  for (double& w : weights) w /= total;
  return weights;
}

double global_metric(std::span<const double> utilities,
                     std::span<const double> weights) {
  if (utilities.size() != weights.size()) {
    throw ConfigError(fmt::format(
        "global metric: {} utilities but {} demand weights", utilities.size(),
        weights.size()));
  }
  double m = 0.0;
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    m += weights[i] * utilities[i];
  }
  return m;
}

double gini(std::span<const double> values) {
  check_gini_input(values);
  const std::vector<double> y = sorted_copy(values);
  const double n = static_cast<double>(y.size());
  double total = 0.0;
  double ranked = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total += y[i];
    ranked += (n - static_cast<double>(i)) * y[i];  // (n + 1 - rank)
  }
  if (!(total > 0.0)) {
    throw ComputationError(
        "Gini coefficient undefined: all values are zero");
  }
  const double g = (n + 1.0 - 2.0 * ranked / total) / n;
  return std::clamp(g, 0.0, (n - 1.0) / n);
}

LorenzCurve lorenz_points(std::span<const double> values) {
  check_gini_input(values);
  const std::vector<double> y = sorted_copy(values);
  const double total = std::accumulate(y.begin(), y.end(), 0.0);
  if (!(total > 0.0)) {
    throw ComputationError("Lorenz curve undefined: all values are zero");
  }
  const double n = static_cast<double>(y.size());
  LorenzCurve curve;
  curve.reserve(y.size() + 1);
  curve.push_back({0.0, 0.0});
  double running = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    running += y[k];
    curve.push_back({static_cast<double>(k + 1) / n, running / total});
  }
  curve.back() = {1.0, 1.0};
  return curve;
}

double gini_from_lorenz(std::span<const LorenzPoint> curve) {
  constexpr double kEndpointTolerance = 1e-12;
  if (curve.size() < 2) {
    throw DataError("Lorenz curve needs at least two points");
  }
  const auto& first = curve.front();
  const auto& last = curve.back();
  if (std::abs(first.population_fraction) > kEndpointTolerance ||
      std::abs(first.cumulative_share) > kEndpointTolerance) {
    throw DataError("Lorenz curve must start at (0, 0)");
  }
  if (std::abs(last.population_fraction - 1.0) > kEndpointTolerance ||
      std::abs(last.cumulative_share - 1.0) > kEndpointTolerance) {
    throw DataError("Lorenz curve must end at (1, 1)");
  }
  double area = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    const auto& p = curve[k - 1];
    const auto& q = curve[k];
    if (!std::isfinite(q.population_fraction) ||
        !std::isfinite(q.cumulative_share) ||
        q.population_fraction < p.population_fraction ||
        q.cumulative_share < p.cumulative_share) {
      throw DataError(fmt::format(
          "Lorenz curve is not nondecreasing at point {}", k));
    }
    area += (q.population_fraction - p.population_fraction) *
            (q.cumulative_share + p.cumulative_share) / 2.0;
  }
  return 1.0 - 2.0 * area;
}

void PerformanceTable::add(PerformanceKey key, double score) {
  if (!std::isfinite(score) || score < 0.0) {
    throw DataError(fmt::format(
        "score for ({}, {}, {}, {}) must be a nonnegative number, got {}",
        key.task, key.model, key.train_lang, key.target_lang, score));
  }
  auto [it, inserted] = entries_.emplace(std::move(key), score);
  if (!inserted) {
    const auto& k = it->first;
    throw DataError(fmt::format("duplicate score for ({}, {}, {}, {})", k.task,
                                k.model, k.train_lang, k.target_lang));
  }
}

Scorecard dei_scorecard(const PerformanceTable& perf,
                        const SpeakerTable& speakers,
                        std::span<const TaskSpec> tasks,
                        const LanguageUniverse& universe,
                        const ScorecardOptions& options) {
  std::map<std::string, const TaskSpec*, std::less<>> task_index;
  for (const auto& task : tasks) {
    validate_task(task);
    if (!task_index.emplace(task.id, &task).second) {
      throw ConfigError(fmt::format("task '{}' specified twice", task.id));
    }
  }

  Scorecard card;
  const auto& entries = perf.entries();
  for (auto it = entries.begin(); it != entries.end();) {
    const PerformanceKey& head = it->first;
    auto group_end = it;
    while (group_end != entries.end() &&
           group_end->first.task == head.task &&
           group_end->first.model == head.model &&
           group_end->first.train_lang == head.train_lang) {
      ++group_end;
    }

    auto task_it = task_index.find(head.task);
    if (task_it == task_index.end()) {
      throw DataError(fmt::format("unknown task id '{}'", head.task));
    }
    const TaskSpec& task = *task_it->second;

    std::map<std::string, double, std::less<>> scored;
    for (auto e = it; e != group_end; ++e) {
      const auto& lang = e->first.target_lang;
      if (!universe.contains(lang)) {
        throw DataError(fmt::format(
            "unknown language code '{}' (not in the language universe)",
            lang));
      }
      const double max = task.max_for(lang);
      if (e->second > max) {
        card.warnings.push_back(fmt::format(
            "({}, {}, {}, {}): score {} exceeds task maximum {}; utility "
            "clamped to 1",
            head.task, head.model, head.train_lang, lang, e->second, max));
      }
      scored.emplace(lang, utility(e->second, max));
    }

    ScorecardRow row;
    row.task = head.task;
    row.model = head.model;
    row.train_lang = head.train_lang;
    row.tested = scored.size();
    for (const auto& lang : universe.codes()) {
      auto s = scored.find(lang);
      if (s == scored.end() && options.tested_only) continue;
      row.languages.push_back(lang);
      row.utilities.push_back(s == scored.end() ? 0.0 : s->second);
    }

    const auto weights =
        demand(speakers, LanguageUniverse(row.languages), options.demand);
    row.m_tau = global_metric(row.utilities, weights);
    try {
      row.gini = gini(row.utilities);
    } catch (const ComputationError& e) {
      throw ComputationError(fmt::format("({}, {}, {}): {}", row.task,
                                         row.model, row.train_lang, e.what()));
    }
    card.rows.push_back(std::move(row));
    it = group_end;
  }
  return card;
}

}  // namespace dei
