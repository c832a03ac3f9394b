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
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "cli/commands.h"
#include "dei/errors.h"
#include "dei/text_format.h"

namespace dei::cli {
namespace {

// Printed AMRS values carry one decimal.
constexpr double kPrintedAmrsHalfStep = 0.05;

double flag_number(const std::string& text, std::string_view flag) {
  try {
    return parse_number(text, flag);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

void check_tau(double tau) {
  if (!std::isfinite(tau) || tau < 0.0) {
    throw ConfigError(fmt::format("--tau must be >= 0, got {}", tau));
  }
}

SpeakerTable speakers_for(const std::string& path, double tau) {
  if (path.empty()) {
    if (tau > 0.0) throw ConfigError("--speakers is required when --tau > 0");
    return {};
  }
  return load_speakers(path);
}

void warn(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "dei: warning: " << w << "\n";
}

// Efficiency with explicit AMRS values; +inf when an AMRS bound reaches 0.
double score_with(const ModelGoods& g, double saved, double amrs_tp,
                  double amrs_mem, const EfficiencyConfig& cfg) {
  auto term = [](double w, double good, double a) {
    if (w == 0.0) return 0.0;
    return a > 0.0 ? w * good / a : std::numeric_limits<double>::infinity();
  };
  return cfg.w_perf * g.performance +
         term(cfg.w_throughput, g.throughput, amrs_tp) +
         term(cfg.w_memory, saved, amrs_mem);
}

}  // namespace

void cmd_metrics(const MetricsArgs& args, OutputSet& outputs,
                 std::ostream& err) {
  const ScoreScale display = parse_scale(args.scale);
  const ScoreScale input = parse_scale(args.input_scale);
  check_tau(args.tau);
  const SpeakerTable speakers = speakers_for(args.speakers, args.tau);
  const PerformanceTable perf = load_performance(args.perf, input);
  const std::vector<TaskSpec> tasks = load_tasks(args.tasks);
  for (const auto& t : tasks) validate_task(t);
  const LanguageUniverse universe =
      args.universe.empty() ? LanguageUniverse::indian_scheduled_plus_english()
                            : load_universe(args.universe);

  ScorecardOptions options;
  options.demand.tau = args.tau;
  options.tested_only = args.tested_only;
  const Scorecard card =
      dei_scorecard(perf, speakers, tasks, universe, options);
  warn(err, card.warnings);

  outputs.add(args.out,
              format_scorecard(card, args.tau, args.tested_only, display));
  if (!args.lorenz_out.empty()) {
    outputs.add(args.lorenz_out, format_lorenz(card));
  }
}

void cmd_efficiency(const EfficiencyArgs& args, OutputSet& outputs,
                    std::ostream& err) {
  const auto w = parse_list(args.weights, "--weights");
  if (w.size() != 3) {
    throw ConfigError(fmt::format(
        "--weights needs three values (perf,throughput,memory), got '{}'",
        args.weights));
  }
  EfficiencyConfig cfg;
  cfg.max_memory_gb = args.max_memory;
  cfg.w_perf = flag_number(w[0], "--weights");
  cfg.w_throughput = flag_number(w[1], "--weights");
  cfg.w_memory = flag_number(w[2], "--weights");
  warn(err, check_config(cfg));

  const std::vector<ModelGoods> goods = load_goods(args.goods);
  if (goods.empty()) {
    throw DataError(fmt::format("{}: no goods rows", args.goods));
  }
  AmrsTable used = compute_amrs_table(goods, cfg);
  std::set<AmrsKey> overridden;
  if (!args.amrs_override.empty()) {
    const AmrsTable supplied = load_amrs(args.amrs_override);
    for (const auto& [key, value] : supplied.entries()) {
      if (!used.find(key)) {
        err << fmt::format(
            "dei: warning: AMRS override {}/{}/{} matches no goods group\n",
            key.group, key.task, good_name(key.good));
      }
      used.set(key, value);
      overridden.insert(key);
    }
  }
  PerfOverrides perf;
  if (!args.perf_override.empty()) {
    perf = load_perf_overrides(args.perf_override);
    for (const auto& [key, _] : perf) {
      const bool known =
          std::any_of(goods.begin(), goods.end(), [&](const ModelGoods& g) {
            return g.model == key.first && g.task == key.second;
          });
      if (!known) {
        throw DataError(fmt::format("{}: no goods row for ({}, {})",
                                    args.perf_override, key.first,
                                    key.second));
      }
    }
  }

  std::vector<ModelGoods> sorted = goods;
  std::sort(sorted.begin(), sorted.end(),
            [](const ModelGoods& x, const ModelGoods& y) {
              return std::tie(x.task, x.group, x.model) <
                     std::tie(y.task, y.group, y.model);
            });
  std::vector<EfficiencyRow> rows;
  for (ModelGoods g : sorted) {
    if (auto it = perf.find({g.model, g.task}); it != perf.end()) {
      g.performance = it->second;
    }
    EfficiencyRow row;
    row.memory_saved = memory_saved(g, cfg);
    const AmrsKey tp_key{g.group, g.task, Good::kThroughput};
    const AmrsKey mem_key{g.group, g.task, Good::kMemorySaved};
    row.amrs_throughput = *used.find(tp_key);
    row.amrs_memory = *used.find(mem_key);
    row.efficiency = efficiency_score(g, used, cfg);

    const double tp_step = overridden.count(tp_key) ? kPrintedAmrsHalfStep : 0;
    const double mem_step =
        overridden.count(mem_key) ? kPrintedAmrsHalfStep : 0;
    row.efficiency_min =
        score_with(g, row.memory_saved, row.amrs_throughput + tp_step,
                   row.amrs_memory + mem_step, cfg);
    row.efficiency_max =
        score_with(g, row.memory_saved, row.amrs_throughput - tp_step,
                   row.amrs_memory - mem_step, cfg);
    row.goods = std::move(g);
    rows.push_back(std::move(row));
  }

  outputs.add(args.out, format_efficiency(rows));
  if (!args.amrs_out.empty()) outputs.add(args.amrs_out, format_amrs(used));
}

void cmd_fit(const FitArgs& args, OutputSet& outputs, std::ostream& err) {
  const auto colon = args.c_range.find(':');
  if (colon == std::string::npos) {
    throw ConfigError(
        fmt::format("--c-range must be lo:hi, got '{}'", args.c_range));
  }
  ExponentRange range{flag_number(args.c_range.substr(0, colon), "--c-range"),
                      flag_number(args.c_range.substr(colon + 1), "--c-range")};
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.lo < 0 ||
      range.hi <= range.lo) {
    throw ConfigError(fmt::format(
        "--c-range needs 0 <= lo < hi, got '{}'", args.c_range));
  }
  std::optional<ScoreScale> scale;
  if (!args.input_scale.empty()) scale = parse_scale(args.input_scale);
  std::vector<std::int64_t> grid;
  if (!args.samples_out.empty()) {
    for (const auto& item : parse_list(args.x_grid, "--x-grid")) {
      const double x = flag_number(item, "--x-grid");
      if (!(x >= 1.0) || x != std::floor(x)) {
        throw ConfigError(fmt::format(
            "--x-grid values must be integers >= 1, got '{}'", item));
      }
      grid.push_back(static_cast<std::int64_t>(x));
    }
  }

  const auto points = load_trajectories(args.trajectories, scale);
  if (points.empty()) {
    throw DataError(fmt::format("{}: no trajectory rows", args.trajectories));
  }
  std::map<CurveRegistry::Key, std::vector<TrajectoryPoint>> pairs;
  for (const auto& p : points) pairs[{p.source, p.target}].push_back(p);

  CurveRegistry registry;
  std::vector<std::string> rejects;
  for (const auto& [key, pts] : pairs) {
    try {
      registry.add(fit_power_law(pts, range));
    } catch (const DataError& e) {
      rejects.push_back(fmt::format("{} {}: {}", key.first, key.second,
                                    e.what()));
    } catch (const ComputationError& e) {
      rejects.push_back(fmt::format("{} {}: {}", key.first, key.second,
                                    e.what()));
    }
  }
  if (registry.size() == 0) {
    throw ComputationError(fmt::format("{}: no pair could be fitted",
                                       args.trajectories));
  }

  std::string text = format_curve_registry(registry);
  if (!rejects.empty()) {
    text += "# rejects\n";
    for (const auto& r : rejects) {
      text += "# " + r + "\n";
      err << "dei: warning: rejected " << r << "\n";
    }
  }
  outputs.add(args.out, std::move(text));

  if (!args.samples_out.empty()) {
    std::string csv = "source,target,samples,predicted\n";
    for (const auto& [key, curve] : registry.curves()) {
      for (const auto x : grid) {
        csv += fmt::format("{},{},{},{}\n", key.first, key.second, x,
                           format_number(predict(curve, x)));
      }
    }
    outputs.add(args.samples_out, std::move(csv));
  }
}

void cmd_allocate(const AllocateArgs& args, OutputSet& outputs,
                  std::ostream& err) {
  if (args.budget < 0) {
    throw ConfigError(fmt::format("--budget must be >= 0, got {}",
                                  args.budget));
  }
  check_tau(args.tau);
  MissingCurvePolicy policy;
  if (args.missing == "strict") {
    policy = MissingCurvePolicy::kStrict;
  } else if (args.missing == "permissive") {
    policy = MissingCurvePolicy::kPermissive;
  } else {
    throw ConfigError(fmt::format(
        "--missing must be strict or permissive, got '{}'", args.missing));
  }
  EvaluationOptions eval_options;
  eval_options.composition = parse_composition(args.composition);
  eval_options.clamp_to_unit = args.clamp;
  std::string single;
  if (args.strategy.rfind("single:", 0) == 0) {
    single = args.strategy.substr(7);
    if (single.empty()) throw ConfigError("--strategy single: needs a language");
  } else if (args.strategy != "greedy" && args.strategy != "egalitarian") {
    throw ConfigError(fmt::format(
        "--strategy must be greedy, egalitarian or single:<lang>, got '{}'",
        args.strategy));
  }

  AllocationRequest request;
  request.budget = args.budget;
  request.sources = parse_list(args.sources, "--sources");
  request.alpha = args.alpha;
  request.beta = args.beta;
  request.missing_policy = policy;
  const SpeakerTable speakers = speakers_for(args.speakers, args.tau);
  request.curves = load_curve_registry(args.curves);
  if (args.targets.empty()) {
    std::set<std::string> targets;
    for (const auto& [key, _] : request.curves.curves()) targets.insert(key.second);
    for (const auto& [key, _] : request.curves.missing()) targets.insert(key.second);
    request.targets.assign(targets.begin(), targets.end());
  } else {
    request.targets = parse_list(args.targets, "--targets");
  }
  request.demand = demand(speakers, LanguageUniverse(request.targets),
                          DemandParams{args.tau});
  validate_request(request);
  for (const auto& [s, t] : missing_pairs(request)) {
    err << fmt::format("dei: warning: no curve for {} -> {}; dropped\n", s, t);
  }

  AllocationPlan plan;
  if (!single.empty()) {
    plan = single_source_allocate(request, single);
  } else if (args.strategy == "egalitarian") {
    plan = egalitarian_allocate(request);
  } else {
    plan = greedy_allocate(request);
  }
  const PlanEvaluation eval = evaluate_plan(plan, request, eval_options);
  warn(err, eval.warnings);

  outputs.add(args.plan_out, format_plan(plan));
  if (!args.trace_out.empty()) outputs.add(args.trace_out, format_trace(plan));
  if (!args.eval_out.empty()) {
    outputs.add(args.eval_out, format_evaluation(eval));
  }
}

}  // namespace dei::cli
