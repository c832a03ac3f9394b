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

#include "dei/allocator.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "dei/errors.h"
#include "dei/lang_metrics.h"

namespace dei {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> sorted_sources(const AllocationRequest& request) {
  std::vector<std::string> sources = request.sources;
  std::sort(sources.begin(), sources.end());
  return sources;
}

// Predictions and demand weights of every target covered by `source`.
struct SourceView {
  std::vector<double> weights;
  std::vector<double> predictions;
};

SourceView view_at(const AllocationRequest& request, const std::string& source,
                   std::int64_t k) {
  SourceView view;
  for (std::size_t t = 0; t < request.targets.size(); ++t) {
    const LearningCurve* curve = request.curves.find(source, request.targets[t]);
    if (curve == nullptr) {
      if (request.missing_policy == MissingCurvePolicy::kStrict) {
        throw DataError(fmt::format("no learning curve for pair {}->{}",
                                    source, request.targets[t]));
      }
      continue;
    }
    view.weights.push_back(request.demand[t]);
    view.predictions.push_back(predict(*curve, k));
  }
  if (view.predictions.empty()) {
    throw DataError(
        fmt::format("source '{}' has no curve for any target", source));
  }
  return view;
}

double gm_of(const SourceView& view) {
  return global_metric(view.predictions, view.weights);
}

double gini_of(const SourceView& view, const std::string& source) {
  std::vector<double> magnitudes;
  magnitudes.reserve(view.predictions.size());
  for (double p : view.predictions) magnitudes.push_back(std::abs(p));
  try {
    return gini(magnitudes);
  } catch (const ComputationError& e) {
    throw ComputationError(fmt::format("source '{}': {}", source, e.what()));
  }
}

// alpha * dgm + beta * dgini with a zero weight switching its term off
// entirely, so that 0 * inf never arises from the -inf initial state.
double marginal_gain(const AllocationRequest& request, double gm,
                     double current_gm, double gini_value,
                     double current_gini) {
  double gain = 0.0;
  if (request.alpha != 0.0) gain += request.alpha * (gm - current_gm);
  if (request.beta != 0.0) gain += request.beta * (current_gini - gini_value);
  return gain;
}

AllocationPlan plan_from_counts(const AllocationRequest& request,
                                std::string strategy,
                                const std::vector<std::string>& sources,
                                const std::vector<std::int64_t>& counts) {
  AllocationPlan plan;
  plan.strategy = std::move(strategy);
  plan.budget = request.budget;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    SourceAllocation alloc{sources[i], counts[i], -kInf, 1.0};
    if (counts[i] > 0) {
      const SourceView view = view_at(request, sources[i], counts[i]);
      alloc.gm = gm_of(view);
      alloc.gini = gini_of(view, sources[i]);
    }
    plan.sources.push_back(std::move(alloc));
  }
  return plan;
}

}  // namespace

void validate_request(const AllocationRequest& request) {
  if (request.budget < 1) {
    throw ConfigError(
        fmt::format("budget must be at least 1, got {}", request.budget));
  }
  if (request.sources.empty()) throw ConfigError("no source languages");
  if (request.targets.empty()) throw ConfigError("no target languages");
  for (const auto* list : {&request.sources, &request.targets}) {
    std::set<std::string> seen;
    for (const auto& code : *list) {
      if (code.empty()) throw ConfigError("empty language code");
      if (!seen.insert(code).second) {
        throw ConfigError(fmt::format("language '{}' listed twice", code));
      }
    }
  }
  if (request.demand.size() != request.targets.size()) {
    throw ConfigError(fmt::format("{} demand weights for {} targets",
                                  request.demand.size(),
                                  request.targets.size()));
  }
  for (double d : request.demand) {
    if (!std::isfinite(d) || d < 0.0) {
      throw ConfigError(
          fmt::format("demand weights must be nonnegative, got {}", d));
    }
  }
  for (double w : {request.alpha, request.beta}) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ConfigError(
          fmt::format("objective weights must be nonnegative, got {}", w));
    }
  }
  if (!(request.alpha + request.beta > 0.0)) {
    throw ConfigError("alpha + beta must be positive");
  }
  if (request.missing_policy == MissingCurvePolicy::kStrict) {
    const auto missing = missing_pairs(request);
    if (!missing.empty()) {
      std::string list;
      for (const auto& [s, t] : missing) {
        if (!list.empty()) list += ", ";
        list += s + "->" + t;
      }
      throw DataError(fmt::format("missing learning curves: {}", list));
    }
  }
}

std::vector<std::pair<std::string, std::string>> missing_pairs(
    const AllocationRequest& request) {
  std::vector<std::pair<std::string, std::string>> missing;
  for (const auto& s : sorted_sources(request)) {
    for (const auto& t : request.targets) {
      if (request.curves.find(s, t) == nullptr) missing.emplace_back(s, t);
    }
  }
  return missing;
}

double source_gm(const AllocationRequest& request, const std::string& source,
                 std::int64_t k) {
  return gm_of(view_at(request, source, k));
}

double source_gini(const AllocationRequest& request, const std::string& source,
                   std::int64_t k) {
  return gini_of(view_at(request, source, k), source);
}

std::int64_t AllocationPlan::samples_for(std::string_view source) const {
  for (const auto& s : sources) {
    if (s.source == source) return s.samples;
  }
  return 0;
}

std::int64_t AllocationPlan::total() const {
  std::int64_t sum = 0;
  for (const auto& s : sources) sum += s.samples;
  return sum;
}

AllocationPlan greedy_allocate(const AllocationRequest& request) {
  validate_request(request);
  const auto sources = sorted_sources(request);
  const std::size_t n = sources.size();

  std::vector<std::int64_t> samples(n, 0);
  std::vector<double> current_gm(n, -kInf);
  std::vector<double> current_gini(n, 1.0);

  AllocationPlan plan;
  plan.strategy = "greedy";
  plan.budget = request.budget;
  plan.trace.reserve(static_cast<std::size_t>(request.budget));

  for (std::int64_t allocated = 0; allocated < request.budget; ++allocated) {
    std::size_t best = n;
    double best_gain = -kInf;
    double best_gm = 0.0;
    double best_gini = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const SourceView view = view_at(request, sources[s], samples[s] + 1);
      const double gm = gm_of(view);
      const double g = gini_of(view, sources[s]);
      const double gain =
          marginal_gain(request, gm, current_gm[s], g, current_gini[s]);
      if (best == n || gain > best_gain) {
        best = s;
        best_gain = gain;
        best_gm = gm;
        best_gini = g;
      }
    }
    samples[best] += 1;
    current_gm[best] = best_gm;
    current_gini[best] = best_gini;
    plan.trace.push_back(
        {allocated + 1, sources[best], best_gain, best_gm, best_gini});
  }

  for (std::size_t s = 0; s < n; ++s) {
    plan.sources.push_back(
        {sources[s], samples[s], current_gm[s], current_gini[s]});
  }
  return plan;
}

AllocationPlan egalitarian_allocate(const AllocationRequest& request) {
  validate_request(request);
  const auto sources = sorted_sources(request);
  const auto n = static_cast<std::int64_t>(sources.size());
  std::vector<std::int64_t> counts(sources.size(), request.budget / n);
  const std::int64_t remainder = request.budget % n;
  for (std::int64_t i = 0; i < remainder; ++i) counts[i] += 1;
  return plan_from_counts(request, "egalitarian", sources, counts);
}

AllocationPlan single_source_allocate(const AllocationRequest& request,
                                      const std::string& source) {
  validate_request(request);
  const auto sources = sorted_sources(request);
  auto it = std::find(sources.begin(), sources.end(), source);
  if (it == sources.end()) {
    throw ConfigError(
        fmt::format("source '{}' is not among the source languages", source));
  }
  std::vector<std::int64_t> counts(sources.size(), 0);
  counts[it - sources.begin()] = request.budget;
  return plan_from_counts(request, "single:" + source, sources, counts);
}

PlanEvaluation evaluate_plan(const AllocationPlan& plan,
                             const AllocationRequest& request,
                             const EvaluationOptions& options) {
  if (request.demand.size() != request.targets.size()) {
    throw ConfigError("demand weights are not aligned with targets");
  }
  PlanEvaluation eval;
  eval.composition = options.composition;
  eval.clamped = options.clamp_to_unit;
  eval.targets = request.targets;
  eval.demand = request.demand;

  for (const auto& target : request.targets) {
    std::vector<double> predictions;
    for (const auto& alloc : plan.sources) {
      if (alloc.samples <= 0) continue;
      const LearningCurve* curve = request.curves.find(alloc.source, target);
      if (curve == nullptr) continue;
      predictions.push_back(predict(*curve, alloc.samples));
    }
    if (predictions.empty()) {
      if (request.missing_policy == MissingCurvePolicy::kStrict) {
        throw DataError(fmt::format(
            "no funded source has a curve for target '{}'", target));
      }
      eval.warnings.push_back(fmt::format(
          "target '{}' is not covered by any funded source; utility 0",
          target));
      eval.utility.push_back(0.0);
      eval.covered.push_back(false);
      continue;
    }
    double u = 0.0;
    if (options.composition == Composition::kBestSource) {
      u = *std::max_element(predictions.begin(), predictions.end());
    } else {
      u = std::accumulate(predictions.begin(), predictions.end(), 0.0) /
          static_cast<double>(predictions.size());
    }
    if (options.clamp_to_unit) u = std::clamp(u, 0.0, 1.0);
    eval.utility.push_back(u);
    eval.covered.push_back(true);
  }

  eval.m_tau = global_metric(eval.utility, eval.demand);
  std::vector<double> magnitudes;
  for (double u : eval.utility) magnitudes.push_back(std::abs(u));
  eval.gini = gini(magnitudes);
  return eval;
}

}  // namespace dei
