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

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "dei/errors.h"
#include "dei/io.h"
#include "dei/text_format.h"

namespace dei {
namespace {

// Re-throws a DataError raised by a table invariant with the row location.
template <typename Fn>
void at_row(const CsvReader& reader, Fn&& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", reader.where(), e.what()));
  }
}

void check_language_code(std::string_view code, std::string_view where) {
  const bool ok =
      !code.empty() && std::all_of(code.begin(), code.end(), [](char ch) {
        return std::islower(static_cast<unsigned char>(ch)) ||
               std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' ||
               ch == '_';
      });
  if (!ok) {
    throw DataError(
        fmt::format("{}: invalid language code '{}' (expected lowercase tag)",
                    where, code));
  }
}

void check_identifier(std::string_view id, std::string_view what,
                      std::string_view where) {
  if (id.empty()) throw DataError(fmt::format("{}: empty {}", where, what));
}

std::string source_of(const fs::path& path) { return path.string(); }

}  // namespace

ScoreScale parse_scale(std::string_view name) {
  if (name == "percent") return ScoreScale::kPercent;
  if (name == "unit") return ScoreScale::kUnit;
  throw ConfigError(
      fmt::format("unknown scale '{}' (expected percent or unit)", name));
}

std::string_view scale_name(ScoreScale scale) {
  return scale == ScoreScale::kPercent ? "percent" : "unit";
}

SpeakerTable parse_speakers(std::string_view text, std::string_view source) {
  CsvReader reader(text, std::string(source));
  reader.expect_header({"lang", "speakers_millions"});
  SpeakerTable table;
  std::vector<std::string> row;
  while (reader.next(row)) {
    check_language_code(row[0], reader.where());
    const double n = parse_number(row[1], reader.where());
    at_row(reader, [&] { table.add(row[0], n); });
  }
  return table;
}

SpeakerTable load_speakers(const fs::path& path) {
  return parse_speakers(read_text_file(path), source_of(path));
}

std::string format_speakers(const SpeakerTable& table) {
  std::string out = "lang,speakers_millions\n";
  for (const auto& [lang, n] : table.entries()) {
    out += fmt::format("{},{}\n", lang, format_number(n));
  }
  return out;
}

std::vector<TaskSpec> parse_tasks(std::string_view text,
                                  std::string_view source) {
  CsvReader reader(text, std::string(source));
  reader.expect_header({"task", "max_performance", "target_lang"});
  std::map<std::string, TaskSpec> tasks;
  std::set<std::string> with_default;
  std::vector<std::string> row;
  while (reader.next(row)) {
    check_identifier(row[0], "task id", reader.where());
    const double max = parse_number(row[1], reader.where());
    if (!(max > 0.0)) {
      throw DataError(fmt::format("{}: max performance must be positive",
                                  reader.where()));
    }
    TaskSpec& task = tasks[row[0]];
    task.id = row[0];
    if (row[2] == "*") {
      if (!with_default.insert(row[0]).second) {
        throw DataError(fmt::format("{}: duplicate default maximum for '{}'",
                                    reader.where(), row[0]));
      }
      task.max_performance = max;
    } else {
      check_language_code(row[2], reader.where());
      if (!task.language_max.emplace(row[2], max).second) {
        throw DataError(fmt::format("{}: duplicate maximum for ({}, {})",
                                    reader.where(), row[0], row[2]));
      }
    }
  }
  std::vector<TaskSpec> out;
  for (auto& [id, task] : tasks) {
    if (!with_default.count(id)) {
      throw DataError(fmt::format("{}: task '{}' has no default ('*') maximum",
                                  source, id));
    }
    out.push_back(std::move(task));
  }
  return out;
}

std::vector<TaskSpec> load_tasks(const fs::path& path) {
  return parse_tasks(read_text_file(path), source_of(path));
}

std::string format_tasks(const std::vector<TaskSpec>& tasks) {
  std::vector<const TaskSpec*> sorted;
  for (const auto& t : tasks) sorted.push_back(&t);
  std::sort(sorted.begin(), sorted.end(),
            [](const TaskSpec* x, const TaskSpec* y) { return x->id < y->id; });
  std::string out = "task,max_performance,target_lang\n";
  for (const TaskSpec* t : sorted) {
    out += fmt::format("{},{},*\n", t->id, format_number(t->max_performance));
    for (const auto& [lang, max] : t->language_max) {
      out += fmt::format("{},{},{}\n", t->id, format_number(max), lang);
    }
  }
  return out;
}

LanguageUniverse parse_universe(std::string_view text,
                                std::string_view source) {
  std::vector<std::string> codes;
  int line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    if (raw.empty() || raw.front() == '#') continue;
    check_language_code(raw, fmt::format("{}:{}", source, line_no));
    codes.push_back(raw);
  }
  try {
    return LanguageUniverse(std::move(codes));
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", source, e.what()));
  }
}

LanguageUniverse load_universe(const fs::path& path) {
  return parse_universe(read_text_file(path), source_of(path));
}

std::string format_universe(const LanguageUniverse& universe) {
  std::string out;
  for (const auto& code : universe.codes()) out += code + "\n";
  return out;
}

PerformanceTable parse_performance(std::string_view text,
                                   std::string_view source, ScoreScale scale) {
  CsvReader reader(text, std::string(source));
  reader.expect_header({"task", "model", "train_lang", "target_lang", "score"});
  PerformanceTable table;
  std::vector<std::string> row;
  while (reader.next(row)) {
    check_identifier(row[0], "task id", reader.where());
    check_identifier(row[1], "model id", reader.where());
    check_language_code(row[2], reader.where());
    check_language_code(row[3], reader.where());
    double score = parse_number(row[4], reader.where());
    if (scale == ScoreScale::kUnit) score *= 100.0;
    at_row(reader, [&] {
      table.add({row[0], row[1], row[2], row[3]}, score);
    });
  }
  return table;
}

PerformanceTable load_performance(const fs::path& path, ScoreScale scale) {
  return parse_performance(read_text_file(path), source_of(path), scale);
}

std::string format_performance(const PerformanceTable& table) {
  std::string out = "task,model,train_lang,target_lang,score\n";
  for (const auto& [k, score] : table.entries()) {
    out += fmt::format("{},{},{},{},{}\n", k.task, k.model, k.train_lang,
                       k.target_lang, format_number(score));
  }
  return out;
}

std::vector<TrajectoryPoint> parse_trajectories(
    std::string_view text, std::string_view source,
    std::optional<ScoreScale> scale) {
  CsvReader reader(text, std::string(source));
  reader.expect_header({"source", "target", "samples", "score"});
  std::vector<TrajectoryPoint> points;
  std::map<std::pair<std::string, std::string>, std::int64_t> last_samples;
  std::vector<std::string> row;
  while (reader.next(row)) {
    check_language_code(row[0], reader.where());
    check_language_code(row[1], reader.where());
    const std::int64_t samples = parse_integer(row[2], reader.where());
    if (samples < 1) {
      throw DataError(fmt::format("{}: sample count must be >= 1, got {}",
                                  reader.where(), samples));
    }
    auto [it, fresh] = last_samples.emplace(std::pair{row[0], row[1]}, samples);
    if (!fresh) {
      if (samples <= it->second) {
        throw DataError(fmt::format(
            "{}: sample counts for {}->{} must strictly increase ({} after {})",
            reader.where(), row[0], row[1], samples, it->second));
      }
      it->second = samples;
    }
    points.push_back(
        {row[0], row[1], samples, parse_number(row[3], reader.where())});
  }

  ScoreScale declared = ScoreScale::kUnit;
  for (const auto& comment : reader.comments()) {
    if (comment.rfind("scale:", 0) == 0) {
      try {
        declared = parse_scale(trim(comment.substr(6)));
      } catch (const ConfigError& e) {
        throw DataError(fmt::format("{}: {}", source, e.what()));
      }
    }
  }
  if (scale.value_or(declared) == ScoreScale::kPercent) {
    for (auto& p : points) p.score /= 100.0;
  }
  return points;
}

std::vector<TrajectoryPoint> load_trajectories(const fs::path& path,
                                               std::optional<ScoreScale> scale) {
  return parse_trajectories(read_text_file(path), source_of(path), scale);
}

std::string format_trajectories(const std::vector<TrajectoryPoint>& points) {
  std::vector<TrajectoryPoint> sorted = points;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TrajectoryPoint& x, const TrajectoryPoint& y) {
                     return std::tie(x.source, x.target, x.samples) <
                            std::tie(y.source, y.target, y.samples);
                   });
  std::string out = "# scale: unit\nsource,target,samples,score\n";
  for (const auto& p : sorted) {
    out += fmt::format("{},{},{},{}\n", p.source, p.target, p.samples,
                       format_number(p.score));
  }
  return out;
}

std::vector<ModelGoods> parse_goods(std::string_view text,
                                    std::string_view source) {
  CsvReader reader(text, std::string(source));
  reader.expect_header(
      {"model", "group", "task", "throughput", "memory_gb", "perf"});
  std::vector<ModelGoods> goods;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::string> row;
  while (reader.next(row)) {
    check_identifier(row[0], "model id", reader.where());
    check_identifier(row[1], "group", reader.where());
    check_identifier(row[2], "task id", reader.where());
    ModelGoods g{row[0],
                 row[1],
                 row[2],
                 parse_number(row[3], reader.where()),
                 parse_number(row[4], reader.where()),
                 parse_number(row[5], reader.where())};
    if (!(g.throughput > 0.0) || !std::isfinite(g.throughput)) {
      throw DataError(
          fmt::format("{}: throughput must be positive", reader.where()));
    }
    if (!(g.memory_gb > 0.0) || !std::isfinite(g.memory_gb)) {
      throw DataError(
          fmt::format("{}: memory used must be positive", reader.where()));
    }
    if (!(g.performance >= 0.0) || !std::isfinite(g.performance)) {
      throw DataError(
          fmt::format("{}: performance must be >= 0", reader.where()));
    }
    if (!seen.emplace(g.model, g.task).second) {
      throw DataError(fmt::format("{}: duplicate goods for ({}, {})",
                                  reader.where(), g.model, g.task));
    }
    goods.push_back(std::move(g));
  }
  return goods;
}

std::vector<ModelGoods> load_goods(const fs::path& path) {
  return parse_goods(read_text_file(path), source_of(path));
}

std::string format_goods(const std::vector<ModelGoods>& goods) {
  std::vector<ModelGoods> sorted = goods;
  std::sort(sorted.begin(), sorted.end(),
            [](const ModelGoods& x, const ModelGoods& y) {
              return std::tie(x.model, x.task) < std::tie(y.model, y.task);
            });
  std::string out = "model,group,task,throughput,memory_gb,perf\n";
  for (const auto& g : sorted) {
    out += fmt::format("{},{},{},{},{},{}\n", g.model, g.group, g.task,
                       format_number(g.throughput), format_number(g.memory_gb),
                       format_number(g.performance));
  }
  return out;
}

AmrsTable parse_amrs(std::string_view text, std::string_view source) {
  CsvReader reader(text, std::string(source));
  reader.expect_header({"group", "task", "metric", "amrs"});
  AmrsTable table;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const AmrsKey key{row[0], row[1], [&] {
                        try {
                          return parse_good(row[2]);
                        } catch (const DataError& e) {
                          throw DataError(fmt::format("{}: {}", reader.where(),
                                                      e.what()));
                        }
                      }()};
    const double value = parse_number(row[3], reader.where());
    if (table.find(key)) {
      throw DataError(fmt::format("{}: duplicate AMRS for {}/{}/{}",
                                  reader.where(), row[0], row[1], row[2]));
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DataError(fmt::format("{}: AMRS must be positive, got {}",
                                  reader.where(), row[3]));
    }
    table.set(key, value);
  }
  return table;
}

AmrsTable load_amrs(const fs::path& path) {
  return parse_amrs(read_text_file(path), source_of(path));
}

std::string format_amrs(const AmrsTable& table) {
  std::string out = "group,task,metric,amrs\n";
  for (const auto& [key, value] : table.entries()) {
    out += fmt::format("{},{},{},{}\n", key.group, key.task,
                       good_name(key.good), format_number(value));
  }
  return out;
}

PerfOverrides parse_perf_overrides(std::string_view text,
                                   std::string_view source) {
  CsvReader reader(text, std::string(source));
  reader.expect_header({"model", "task", "perf"});
  PerfOverrides out;
  std::vector<std::string> row;
  while (reader.next(row)) {
    const double perf = parse_number(row[2], reader.where());
    if (!(perf >= 0.0)) {
      throw DataError(fmt::format("{}: perf must be >= 0", reader.where()));
    }
    if (!out.emplace(std::pair{row[0], row[1]}, perf).second) {
      throw DataError(fmt::format("{}: duplicate perf for ({}, {})",
                                  reader.where(), row[0], row[1]));
    }
  }
  return out;
}

PerfOverrides load_perf_overrides(const fs::path& path) {
  return parse_perf_overrides(read_text_file(path), source_of(path));
}

std::string format_scorecard(const Scorecard& card, double tau,
                             bool tested_only, ScoreScale scale) {
  const double factor = scale == ScoreScale::kPercent ? 100.0 : 1.0;
  std::string out =
      "task,model,train_lang,tau,mode,scale,m_tau,gini,languages,tested\n";
  for (const auto& row : card.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", row.task, row.model,
                       row.train_lang, format_number(tau),
                       tested_only ? "tested-only" : "all-languages",
                       scale_name(scale), format_number(row.m_tau * factor),
                       format_number(row.gini), row.languages.size(),
                       row.tested);
  }
  return out;
}

std::string format_lorenz(const Scorecard& card) {
  std::string out =
      "task,model,train_lang,k,population_fraction,cumulative_share\n";
  for (const auto& row : card.rows) {
    const auto curve = lorenz_points(row.utilities);
    for (std::size_t k = 0; k < curve.size(); ++k) {
      out += fmt::format("{},{},{},{},{},{}\n", row.task, row.model,
                         row.train_lang, k,
                         format_number(curve[k].population_fraction),
                         format_number(curve[k].cumulative_share));
    }
  }
  return out;
}

std::string format_efficiency(const std::vector<EfficiencyRow>& rows) {
  std::string out =
      "model,group,task,perf,throughput,memory_saved,amrs_throughput,"
      "amrs_memory,efficiency,efficiency_min,efficiency_max\n";
  for (const auto& r : rows) {
    out += fmt::format(
        "{},{},{},{},{},{},{},{},{},{},{}\n", r.goods.model, r.goods.group,
        r.goods.task, format_number(r.goods.performance),
        format_number(r.goods.throughput), format_number(r.memory_saved),
        format_number(r.amrs_throughput), format_number(r.amrs_memory),
        format_number(r.efficiency), format_number(r.efficiency_min),
        format_number(r.efficiency_max));
  }
  return out;
}

std::optional<double> DataBundle::reference(std::string_view table,
                                            std::string_view metric,
                                            std::string_view train_lang,
                                            std::string_view model,
                                            std::string_view task) const {
  for (const auto& r : reference_metrics) {
    if (r.table == table && r.metric == metric && r.train_lang == train_lang &&
        r.model == model && r.task == task) {
      return r.value;
    }
  }
  return std::nullopt;
}

DataBundle load_bundle(const fs::path& data_dir) {
  DataBundle bundle;
  bundle.speakers = load_speakers(data_dir / "speakers.csv");
  bundle.tasks = load_tasks(data_dir / "tasks.csv");
  for (const auto& t : bundle.tasks) validate_task(t);
  bundle.universe = load_universe(data_dir / "universe.txt");
  bundle.goods = load_goods(data_dir / "goods.csv");
  bundle.printed_amrs = load_amrs(data_dir / "amrs_paper.csv");
  bundle.baseline_perf = load_perf_overrides(data_dir / "perf_baseline.csv");
  bundle.muril_curves = load_curve_registry(data_dir / "curves_muril_large.txt");
  bundle.xlmr_curves = load_curve_registry(data_dir / "curves_xlmr_large.txt");

  const fs::path ref = data_dir / "reference";
  {
    const auto path = ref / "allocations.csv";
    CsvReader reader(read_text_file(path), path.string());
    reader.expect_header({"objective", "budget", "model", "bn", "en", "hi",
                          "ml", "mr", "ta", "ur"});
    std::vector<std::string> row;
    while (reader.next(row)) {
      ReferenceAllocation alloc{row[0], parse_integer(row[1], reader.where()),
                                row[2], {}};
      std::int64_t total = 0;
      for (std::size_t i = 3; i < row.size(); ++i) {
        const auto n = parse_integer(row[i], reader.where());
        alloc.samples[reader.header()[i]] = n;
        total += n;
      }
      if (total != alloc.budget) {
        throw DataError(fmt::format("{}: allocation sums to {}, budget {}",
                                    reader.where(), total, alloc.budget));
      }
      bundle.allocations.push_back(std::move(alloc));
    }
  }
  {
    const auto path = ref / "dei_all_languages.csv";
    CsvReader reader(read_text_file(path), path.string());
    reader.expect_header({"metric", "train_lang", "model", "task", "value"});
    std::vector<std::string> row;
    while (reader.next(row)) {
      bundle.reference_metrics.push_back({"all_languages", row[0], row[1],
                                          row[2], row[3],
                                          parse_number(row[4], reader.where())});
    }
  }
  {
    const auto path = ref / "gini_tested_only.csv";
    CsvReader reader(read_text_file(path), path.string());
    reader.expect_header({"train_lang", "model", "task", "gini"});
    std::vector<std::string> row;
    while (reader.next(row)) {
      bundle.reference_metrics.push_back({"tested_only", "gini", row[0], row[1],
                                          row[2],
                                          parse_number(row[3], reader.where())});
    }
  }
  {
    const auto path = ref / "baseline_summary.csv";
    CsvReader reader(read_text_file(path), path.string());
    reader.expect_header(
        {"task", "model", "baseline", "m_tau1", "gini", "efficiency"});
    std::vector<std::string> row;
    while (reader.next(row)) {
      for (std::size_t i = 2; i < row.size(); ++i) {
        bundle.reference_metrics.push_back(
            {"baseline", reader.header()[i], "en", row[1], row[0],
             parse_number(row[i], reader.where())});
      }
    }
  }
  return bundle;
}

}  // namespace dei
