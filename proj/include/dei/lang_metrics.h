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

// Language-level diversity and equity metrics.
//
// Diversity is the demand-weighted global metric
//
//   M_tau = sum_l d_l * u_l,   d_l = n_l^tau / sum_l' n_l'^tau,
//
// where u_l is task performance in language l divided by the task's best
// attainable (human) performance and n_l the speaker population. tau = 1
// weighs languages by speakers, tau = 0 uniformly.
//
// Equity is the Gini coefficient of the per-language utilities. Languages in
// the universe without a test set contribute utility 0 unless the scorecard
// runs in tested-only mode.

#ifndef DEI_LANG_METRICS_H_
#define DEI_LANG_METRICS_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dei {

// Language code -> speakers in millions.
class SpeakerTable {
 public:
  // Throws DataError on an empty or duplicate code or a negative count.
  void add(const std::string& lang, double millions);

  std::optional<double> find(std::string_view lang) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, double, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, double, std::less<>> entries_;
};

// A task and its theoretical maximum score (human performance, percent).
// Some tasks pool several datasets with different human baselines; those
// are expressed as per-language overrides of the default maximum.
struct TaskSpec {
  std::string id;
  double max_performance = 100.0;
  std::map<std::string, double, std::less<>> language_max;

  double max_for(std::string_view lang) const;
};

// Throws ConfigError when any maximum is not strictly positive.
void validate_task(const TaskSpec& task);

class LanguageUniverse {
 public:
  LanguageUniverse() = default;
  // Throws DataError on duplicates or empty codes.
  explicit LanguageUniverse(std::vector<std::string> codes);

  // The 22 scheduled languages of India plus English.
  static LanguageUniverse indian_scheduled_plus_english();

  const std::vector<std::string>& codes() const { return codes_; }
  std::size_t size() const { return codes_.size(); }
  bool contains(std::string_view code) const;
  std::optional<std::size_t> index_of(std::string_view code) const;

 private:
  std::vector<std::string> codes_;
};

struct DemandParams {
  double tau = 1.0;
};

struct LorenzPoint {
  double population_fraction = 0.0;
  double cumulative_share = 0.0;

  friend bool operator==(const LorenzPoint&, const LorenzPoint&) = default;
};
using LorenzCurve = std::vector<LorenzPoint>;

// raw_score / max_performance, clamped to 1 for super-human scores.
// Throws ConfigError for a non-positive maximum, DataError for a negative
// score.
double utility(double raw_score, double max_performance);
double utility(double raw_score, const TaskSpec& task);

// Normalized demand weights aligned with `universe.codes()`. Speaker entries
// are only required when tau > 0.
std::vector<double> demand(const SpeakerTable& speakers,
                           const LanguageUniverse& universe,
                           DemandParams params);

double global_metric(std::span<const double> utilities,
                     std::span<const double> weights);

// Discrete Gini over values sorted ascending:
//   G = (n + 1 - 2 * sum_i (n + 1 - i) y_i / sum_i y_i) / n.
// Throws DataError on negative or non-finite entries and ComputationError
// when every entry is zero.
double gini(std::span<const double> values);

// n + 1 points; point k holds the share of the total owned by the k smallest
// values.
LorenzCurve lorenz_points(std::span<const double> values);

// 1 - 2 * (trapezoidal area under the curve).
double gini_from_lorenz(std::span<const LorenzPoint> curve);

struct PerformanceKey {
  std::string task;
  std::string model;
  std::string train_lang;
  std::string target_lang;

  friend auto operator<=>(const PerformanceKey&,
                          const PerformanceKey&) = default;
};

// Raw scores on the percent scale of TaskSpec::max_performance.
class PerformanceTable {
 public:
  // Throws DataError on a duplicate key or a negative/non-finite score.
  void add(PerformanceKey key, double score);

  const std::map<PerformanceKey, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<PerformanceKey, double> entries_;
};

struct ScorecardOptions {
  DemandParams demand;
  // Restrict the universe to languages that have a score in the row.
  bool tested_only = false;
};

struct ScorecardRow {
  std::string task;
  std::string model;
  std::string train_lang;
  // Languages the metrics were computed over and their utilities.
  std::vector<std::string> languages;
  std::vector<double> utilities;
  std::size_t tested = 0;
  double m_tau = 0.0;
  double gini = 0.0;
};

struct Scorecard {
  std::vector<ScorecardRow> rows;  // sorted by (task, model, train_lang)
  std::vector<std::string> warnings;
};

Scorecard dei_scorecard(const PerformanceTable& perf,
                        const SpeakerTable& speakers,
                        std::span<const TaskSpec> tasks,
                        const LanguageUniverse& universe,
                        const ScorecardOptions& options);

}  // namespace dei

#endif  // DEI_LANG_METRICS_H_
