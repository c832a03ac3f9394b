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

#include <cmath>
#include <set>

#include "dei/errors.h"
#include "dei/io.h"
#include "dei/text_format.h"

namespace dei {
namespace {

std::string where(std::string_view source, const RecordSection& section) {
  return fmt::format("{}:{}", source, section.line);
}

bool parse_bool(const std::string& text, std::string_view at) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw DataError(
      fmt::format("{}: expected true or false, got '{}'", at, text));
}

const char* bool_text(bool value) { return value ? "true" : "false"; }

std::vector<std::string> split_list(const std::string& text) {
  if (trim(text).empty()) return {};
  return split(text, ',');
}

void expect_args(const RecordSection& section, std::size_t n,
                 std::string_view source) {
  if (section.args.size() != n) {
    throw DataError(fmt::format("{}: [{}] takes {} argument(s), got {}",
                                where(source, section), section.kind, n,
                                section.args.size()));
  }
}

}  // namespace

CurveRegistry parse_curve_registry(std::string_view text,
                                   std::string_view source) {
  CurveRegistry registry;
  for (const auto& s : parse_records(text, source)) {
    if (s.kind != "curve") {
      throw DataError(fmt::format("{}: unexpected section [{}]",
                                  where(source, s), s.kind));
    }
    expect_args(s, 2, source);
    const std::string at = where(source, s);
    std::optional<double> r2;
    if (auto v = s.get("r_squared")) r2 = parse_number(*v, at);
    const bool missing = parse_bool(s.get("missing").value_or("false"), at);
    try {
      if (missing) {
        registry.mark_missing({s.args[0], s.args[1], r2});
      } else {
        LearningCurve curve{s.args[0],
                            s.args[1],
                            parse_number(s.at("a", source), at),
                            parse_number(s.at("b", source), at),
                            parse_number(s.at("c", source), at),
                            parse_number(s.at("r_squared", source), at)};
        if (!std::isfinite(curve.a) || !std::isfinite(curve.b) ||
            !std::isfinite(curve.c) || curve.c < 0.0) {
          throw DataError(
              "coefficients must be finite with a non-negative exponent");
        }
        registry.add(std::move(curve));
      }
    } catch (const DataError& e) {
      if (std::string_view(e.what()).starts_with(source)) throw;
      throw DataError(fmt::format("{}: {}", at, e.what()));
    }
  }
  return registry;
}

CurveRegistry load_curve_registry(const fs::path& path) {
  return parse_curve_registry(read_text_file(path), path.string());
}

std::string format_curve_registry(const CurveRegistry& registry) {
  // Present and missing pairs interleave in (source, target) order.
  std::map<CurveRegistry::Key, RecordSection> sections;
  for (const auto& [key, curve] : registry.curves()) {
    RecordSection s{"curve", {key.first, key.second}, {}, 0};
    s.fields["a"] = format_number(curve.a);
    s.fields["b"] = format_number(curve.b);
    s.fields["c"] = format_number(curve.c);
    s.fields["missing"] = "false";
    s.fields["r_squared"] = format_number(curve.r_squared);
    sections.emplace(key, std::move(s));
  }
  for (const auto& [key, miss] : registry.missing()) {
    RecordSection s{"curve", {key.first, key.second}, {}, 0};
    s.fields["missing"] = "true";
    if (miss.r_squared) s.fields["r_squared"] = format_number(*miss.r_squared);
    sections.emplace(key, std::move(s));
  }
  std::string out;
  for (const auto& [key, s] : sections) append_section(out, s);
  return out;
}

std::string_view composition_name(Composition composition) {
  return composition == Composition::kBestSource ? "best-source" : "mean";
}

Composition parse_composition(std::string_view name) {
  if (name == "best-source") return Composition::kBestSource;
  if (name == "mean") return Composition::kMean;
  throw ConfigError(fmt::format(
      "unknown composition '{}' (expected best-source or mean)", name));
}

std::string format_plan(const AllocationPlan& plan) {
  std::string out = "# allocation plan\n";
  RecordSection head{"plan", {}, {}, 0};
  std::string names;
  for (const auto& s : plan.sources) {
    if (!names.empty()) names += ',';
    names += s.source;
  }
  head.fields["budget"] = std::to_string(plan.budget);
  head.fields["sources"] = names;
  head.fields["strategy"] = plan.strategy;
  head.fields["total"] = std::to_string(plan.total());
  append_section(out, head);
  for (const auto& s : plan.sources) {
    RecordSection sec{"source", {s.source}, {}, 0};
    sec.fields["gini"] = format_number(s.gini);
    sec.fields["gm"] = format_number(s.gm);
    sec.fields["samples"] = std::to_string(s.samples);
    append_section(out, sec);
  }
  return out;
}

std::string format_trace(const AllocationPlan& plan) {
  std::string out = "step,source,gain,gm,gini\n";
  for (const auto& r : plan.trace) {
    out += fmt::format("{},{},{},{},{}\n", r.step, r.source,
                       format_number(r.gain), format_number(r.gm),
                       format_number(r.gini));
  }
  return out;
}

AllocationPlan parse_plan(std::string_view plan_text, std::string_view source,
                          std::optional<std::string_view> trace_text) {
  const auto sections = parse_records(plan_text, source);
  if (sections.empty() || sections.front().kind != "plan") {
    throw DataError(fmt::format("{}: expected a leading [plan] section",
                                source));
  }
  const RecordSection& head = sections.front();
  const std::string head_at = where(source, head);
  AllocationPlan plan;
  plan.strategy = head.at("strategy", source);
  plan.budget = parse_integer(head.at("budget", source), head_at);
  if (plan.budget < 0) {
    throw DataError(fmt::format("{}: negative budget", head_at));
  }
  const std::int64_t total = parse_integer(head.at("total", source), head_at);
  const auto listed = split_list(head.at("sources", source));

  std::set<std::string> seen;
  for (std::size_t i = 1; i < sections.size(); ++i) {
    const RecordSection& s = sections[i];
    const std::string at = where(source, s);
    if (s.kind != "source") {
      throw DataError(fmt::format("{}: unexpected section [{}]", at, s.kind));
    }
    expect_args(s, 1, source);
    if (!seen.insert(s.args[0]).second) {
      throw DataError(fmt::format("{}: duplicate source '{}'", at, s.args[0]));
    }
    SourceAllocation alloc{s.args[0],
                           parse_integer(s.at("samples", source), at),
                           parse_number(s.at("gm", source), at),
                           parse_number(s.at("gini", source), at)};
    if (alloc.samples < 0) {
      throw DataError(fmt::format("{}: negative sample count", at));
    }
    plan.sources.push_back(std::move(alloc));
  }
  std::vector<std::string> names;
  for (const auto& s : plan.sources) names.push_back(s.source);
  if (names != listed) {
    throw DataError(fmt::format(
        "{}: source sections do not match sources = {}", head_at,
        head.at("sources", source)));
  }
  if (plan.total() != total || total != plan.budget) {
    throw DataError(fmt::format(
        "{}: allocations sum to {}, header says total {} of budget {}",
        head_at, plan.total(), total, plan.budget));
  }

  if (trace_text) {
    const std::string trace_source = fmt::format("{} (trace)", source);
    CsvReader reader(*trace_text, trace_source);
    reader.expect_header({"step", "source", "gain", "gm", "gini"});
    std::vector<std::string> row;
    while (reader.next(row)) {
      TraceRow r{parse_integer(row[0], reader.where()), row[1],
                 parse_number(row[2], reader.where()),
                 parse_number(row[3], reader.where()),
                 parse_number(row[4], reader.where())};
      if (r.step != static_cast<std::int64_t>(plan.trace.size()) + 1) {
        throw DataError(fmt::format("{}: expected step {}, got {}",
                                    reader.where(), plan.trace.size() + 1,
                                    r.step));
      }
      if (!seen.count(r.source)) {
        throw DataError(fmt::format("{}: unknown source '{}'", reader.where(),
                                    r.source));
      }
      plan.trace.push_back(std::move(r));
    }
  }
  return plan;
}

AllocationPlan load_plan(const fs::path& plan_path,
                         std::optional<fs::path> trace_path) {
  const std::string text = read_text_file(plan_path);
  if (!trace_path) return parse_plan(text, plan_path.string());
  const std::string trace = read_text_file(*trace_path);
  return parse_plan(text, plan_path.string(), std::string_view(trace));
}

std::string format_evaluation(const PlanEvaluation& eval) {
  std::string out =
      "# curve-predicted outcome (surrogate, not a fine-tuning result)\n";
  RecordSection head{"evaluation", {}, {}, 0};
  std::string names;
  for (const auto& t : eval.targets) {
    if (!names.empty()) names += ',';
    names += t;
  }
  head.fields["clamped"] = bool_text(eval.clamped);
  head.fields["composition"] = std::string(composition_name(eval.composition));
  head.fields["gini"] = format_number(eval.gini);
  head.fields["label"] = "surrogate";
  head.fields["m_tau"] = format_number(eval.m_tau);
  head.fields["targets"] = names;
  append_section(out, head);
  for (std::size_t i = 0; i < eval.targets.size(); ++i) {
    RecordSection s{"target", {eval.targets[i]}, {}, 0};
    s.fields["covered"] = bool_text(eval.covered[i]);
    s.fields["demand"] = format_number(eval.demand[i]);
    s.fields["utility"] = format_number(eval.utility[i]);
    append_section(out, s);
  }
  return out;
}

PlanEvaluation parse_evaluation(std::string_view text,
                                std::string_view source) {
  const auto sections = parse_records(text, source);
  if (sections.empty() || sections.front().kind != "evaluation") {
    throw DataError(
        fmt::format("{}: expected a leading [evaluation] section", source));
  }
  const RecordSection& head = sections.front();
  const std::string head_at = where(source, head);
  PlanEvaluation eval;
  eval.clamped = parse_bool(head.at("clamped", source), head_at);
  try {
    eval.composition = parse_composition(head.at("composition", source));
  } catch (const ConfigError& e) {
    throw DataError(fmt::format("{}: {}", head_at, e.what()));
  }
  eval.gini = parse_number(head.at("gini", source), head_at);
  eval.m_tau = parse_number(head.at("m_tau", source), head_at);
  const auto listed = split_list(head.at("targets", source));
  for (std::size_t i = 1; i < sections.size(); ++i) {
    const RecordSection& s = sections[i];
    const std::string at = where(source, s);
    if (s.kind != "target") {
      throw DataError(fmt::format("{}: unexpected section [{}]", at, s.kind));
    }
    expect_args(s, 1, source);
    eval.targets.push_back(s.args[0]);
    eval.covered.push_back(parse_bool(s.at("covered", source), at));
    eval.demand.push_back(parse_number(s.at("demand", source), at));
    eval.utility.push_back(parse_number(s.at("utility", source), at));
  }
  if (eval.targets != listed) {
    throw DataError(fmt::format(
        "{}: target sections do not match targets = {}", head_at,
        head.at("targets", source)));
  }
  return eval;
}

}  // namespace dei
