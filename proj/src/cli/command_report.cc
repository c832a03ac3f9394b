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

// Markdown report assembled from the files written by the other
// subcommands. The report echoes the canonical number strings of its inputs
// rather than recomputing them, so it never disagrees with those files.

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <set>

#include "cli/commands.h"
#include "dei/errors.h"
#include "dei/text_format.h"

namespace dei::cli {
namespace {

constexpr std::string_view kSurrogateMark = "†";

struct Input {
  std::string path;
  std::string text;
};

std::optional<Input> read_input(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return Input{path, read_text_file(path)};
}

std::vector<std::vector<std::string>> read_table(
    const Input& input, const std::vector<std::string>& header) {
  CsvReader reader(input.text, input.path);
  reader.expect_header(header);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  while (reader.next(row)) rows.push_back(row);
  return rows;
}

void table_header(std::string& out, const std::vector<std::string>& cols) {
  out += "|";
  for (const auto& c : cols) out += " " + c + " |";
  out += "\n|";
  for (std::size_t i = 0; i < cols.size(); ++i) out += "---|";
  out += "\n";
}

void table_row(std::string& out, const std::vector<std::string>& cells) {
  out += "|";
  for (const auto& c : cells) out += " " + c + " |";
  out += "\n";
}

void scorecard_section(std::string& out, const Input& card,
                       const std::optional<Input>& lorenz) {
  const auto rows = read_table(
      card, {"task", "model", "train_lang", "tau", "mode", "scale", "m_tau",
             "gini", "languages", "tested"});
  std::map<std::string, std::size_t> lorenz_points;
  if (lorenz) {
    for (const auto& r : read_table(*lorenz, {"task", "model", "train_lang",
                                              "k", "population_fraction",
                                              "cumulative_share"})) {
      ++lorenz_points[r[0] + "/" + r[1] + "/" + r[2]];
    }
  }
  out += "## Scorecard\n\n";
  out += fmt::format("Source: `{}`. Measured values.\n\n", card.path);
  table_header(out, {"task", "model", "train", "tau", "mode", "M_tau",
                     "Gini", "tested/languages", "Lorenz points"});
  for (const auto& r : rows) {
    const std::string key = r[0] + "/" + r[1] + "/" + r[2];
    std::string ref = "not supplied";
    if (lorenz) {
      auto it = lorenz_points.find(key);
      if (it == lorenz_points.end()) {
        throw DataError(fmt::format("{}: no Lorenz points for {}",
                                    lorenz->path, key));
      }
      ref = fmt::format("`{}` {} ({} points)", lorenz->path, key, it->second);
    }
    table_row(out, {r[0], r[1], r[2], r[3], r[4],
                    fmt::format("{} ({})", r[6], r[5]), r[7],
                    r[9] + "/" + r[8], ref});
  }
  out += "\n";
}

void efficiency_section(std::string& out, const Input& eff) {
  const auto rows = read_table(
      eff, {"model", "group", "task", "perf", "throughput", "memory_saved",
            "amrs_throughput", "amrs_memory", "efficiency", "efficiency_min",
            "efficiency_max"});
  out += "## Efficiency\n\n";
  out += fmt::format("Source: `{}`.\n\n", eff.path);
  table_header(out, {"task", "group", "model", "perf", "AMRS tp", "AMRS mem",
                     "efficiency", "range"});
  bool any_range = false;
  for (const auto& r : rows) {
    std::string range = "-";
    if (r[9] != r[10]) {
      range = fmt::format("[{}, {}]", r[9], r[10]);
      any_range = true;
    }
    table_row(out, {r[2], r[1], r[0], r[3], r[6], r[7], r[8], range});
  }
  out += "\n";
  if (any_range) {
    out +=
        "Range: efficiency when each externally supplied AMRS moves within "
        "+/-0.05, the rounding interval of a value printed to one decimal.\n\n";
  }
}

void amrs_section(std::string& out, const Input& amrs) {
  const auto rows = read_table(amrs, {"group", "task", "metric", "amrs"});
  out += "## AMRS\n\n";
  out += fmt::format("Source: `{}`.\n\n", amrs.path);
  table_header(out, {"group", "task", "good", "AMRS"});
  for (const auto& r : rows) table_row(out, {r[0], r[1], r[2], r[3]});
  out += "\n";
}

void curves_section(std::string& out, const Input& curves) {
  const CurveRegistry reg = parse_curve_registry(curves.text, curves.path);
  out += "## Learning curves\n\n";
  out += fmt::format("Source: `{}`. {} fitted pairs, {} marked missing.\n\n",
                     curves.path, reg.size(), reg.missing().size());
  if (reg.size() > 0) {
    double c_lo = reg.curves().begin()->second.c;
    double c_hi = c_lo;
    double r2_sum = 0.0;
    for (const auto& [_, c] : reg.curves()) {
      c_lo = std::min(c_lo, c.c);
      c_hi = std::max(c_hi, c.c);
      r2_sum += c.r_squared;
    }
    out += fmt::format("Exponent range: [{}, {}]. Mean R^2: {}.\n\n",
                       format_number(c_lo), format_number(c_hi),
                       format_number(r2_sum / reg.size()));
  }
  for (const auto& [key, miss] : reg.missing()) {
    out += fmt::format("- missing: {} -> {}\n", key.first, key.second);
  }
  if (!reg.missing().empty()) out += "\n";
}

void plan_section(std::string& out, const Input& plan,
                  const std::optional<Input>& trace) {
  const AllocationPlan p =
      trace ? parse_plan(plan.text, plan.path, std::string_view(trace->text))
            : parse_plan(plan.text, plan.path);
  out += "## Allocation plan\n\n";
  out += fmt::format("Source: `{}`. Strategy {}, budget {}.\n\n", plan.path,
                     p.strategy, p.budget);
  table_header(out, {"source", "samples"});
  for (const auto& s : p.sources) {
    table_row(out, {s.source, std::to_string(s.samples)});
  }
  out += "\n";
  if (trace) {
    out += fmt::format("Trace: `{}`, {} steps.\n\n", trace->path,
                       p.trace.size());
  }
}

void evaluation_section(std::string& out, const Input& eval_input) {
  const PlanEvaluation eval =
      parse_evaluation(eval_input.text, eval_input.path);
  out += fmt::format("## Surrogate evaluation {}\n\n", kSurrogateMark);
  out += fmt::format(
      "Source: `{}`. Curve-predicted, composition {}{}.\n\n", eval_input.path,
      composition_name(eval.composition),
      eval.clamped ? ", clamped to [0, 1]" : "");
  out += fmt::format("- M_tau {}: {}\n- Gini {}: {}\n\n", kSurrogateMark,
                     format_number(eval.m_tau), kSurrogateMark,
                     format_number(eval.gini));
  table_header(out, {"target", "demand",
                     fmt::format("utility {}", kSurrogateMark), "covered"});
  for (std::size_t i = 0; i < eval.targets.size(); ++i) {
    table_row(out, {eval.targets[i], format_number(eval.demand[i]),
                    format_number(eval.utility[i]),
                    eval.covered[i] ? "yes" : "no"});
  }
  out += "\n";
}

}  // namespace

void cmd_report(const ReportArgs& args, OutputSet& outputs,
                std::ostream& /*err*/) {
  if (args.trace.size() && args.plan.empty()) {
    throw ConfigError("--trace needs --plan");
  }
  if (args.lorenz.size() && args.scorecard.empty()) {
    throw ConfigError("--lorenz needs --scorecard");
  }
  const auto scorecard = read_input(args.scorecard);
  const auto lorenz = read_input(args.lorenz);
  const auto efficiency = read_input(args.efficiency);
  const auto amrs = read_input(args.amrs);
  const auto curves = read_input(args.curves);
  const auto plan = read_input(args.plan);
  const auto trace = read_input(args.trace);
  const auto evaluation = read_input(args.evaluation);

  std::vector<const Input*> inputs;
  for (const auto* in : {&scorecard, &lorenz, &efficiency, &amrs, &curves,
                         &plan, &trace, &evaluation}) {
    if (*in) inputs.push_back(&**in);
  }
  if (inputs.empty()) throw ConfigError("report needs at least one input");

  std::string out = "# DEI report\n\n";
  out += fmt::format(
      "Values marked {} are predicted from fitted learning curves "
      "(surrogate), not measured.\n\n",
      kSurrogateMark);
  out += "## Inputs\n\n";
  table_header(out, {"file", "sha256"});
  for (const Input* in : inputs) {
    table_row(out, {"`" + in->path + "`", sha256_hex(in->text)});
  }
  out += "\n";

  if (scorecard) scorecard_section(out, *scorecard, lorenz);
  if (efficiency) efficiency_section(out, *efficiency);
  if (amrs) amrs_section(out, *amrs);
  if (curves) curves_section(out, *curves);
  if (plan) plan_section(out, *plan, trace);
  if (evaluation) evaluation_section(out, *evaluation);

  outputs.add(args.out, std::move(out));
}

}  // namespace dei::cli
