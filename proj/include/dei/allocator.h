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

// Annotation-budget allocation across source languages.
//
// The greedy strategy hands out the budget one instance at a time. For each
// source s with k = samples[s] + 1 it evaluates
//
//   gm_s   = sum_t d_t * f_{s,t}(k)
//   gini_s = Gini(|f_{s,t}(k)| for t in T)
//   gain_s = alpha * (gm_s - current_gm[s]) + beta * (current_gini[s] - gini_s)
//
// and gives the instance to the source with the largest gain. current_gm
// starts at -inf, so every source receives one instance before any receives
// a second; current_gini starts at 1. Ties go to the lexicographically
// smallest source.

#ifndef DEI_ALLOCATOR_H_
#define DEI_ALLOCATOR_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dei/curves.h"

namespace dei {

enum class MissingCurvePolicy {
  kStrict,      // a missing (source, target) curve is an error
  kPermissive,  // the target is dropped from that source's sums
};

struct AllocationRequest {
  std::int64_t budget = 0;
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  CurveRegistry curves;
  std::vector<double> demand;  // aligned with targets
  double alpha = 1.0;
  double beta = 1.0;
  MissingCurvePolicy missing_policy = MissingCurvePolicy::kStrict;
};

// Throws ConfigError on an invalid request and, under the strict policy,
// DataError listing every missing (source, target) pair.
void validate_request(const AllocationRequest& request);

// (source, target) pairs without a usable curve.
std::vector<std::pair<std::string, std::string>> missing_pairs(
    const AllocationRequest& request);

// Demand-weighted prediction sum for `source` at k instances.
double source_gm(const AllocationRequest& request, const std::string& source,
                 std::int64_t k);

// Gini over |prediction| of every covered target at k instances.
double source_gini(const AllocationRequest& request, const std::string& source,
                   std::int64_t k);

struct TraceRow {
  std::int64_t step = 0;  // 1-based
  std::string source;
  double gain = 0.0;
  double gm = 0.0;
  double gini = 0.0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct SourceAllocation {
  std::string source;
  std::int64_t samples = 0;
  // Objective state after the last instance given to this source; -inf and 1
  // for sources that received nothing.
  double gm = 0.0;
  double gini = 1.0;

  friend bool operator==(const SourceAllocation&,
                         const SourceAllocation&) = default;
};

struct AllocationPlan {
  std::string strategy;  // greedy | egalitarian | single:<lang>
  std::int64_t budget = 0;
  std::vector<SourceAllocation> sources;  // sorted by source
  std::vector<TraceRow> trace;            // greedy only

  std::int64_t samples_for(std::string_view source) const;
  std::int64_t total() const;

  friend bool operator==(const AllocationPlan&,
                         const AllocationPlan&) = default;
};

AllocationPlan greedy_allocate(const AllocationRequest& request);

// floor(X / |S|) each; the remainder goes one each to the lexicographically
// first sources.
AllocationPlan egalitarian_allocate(const AllocationRequest& request);

// The whole budget to `source`. Throws ConfigError if it is not in S.
AllocationPlan single_source_allocate(const AllocationRequest& request,
                                      const std::string& source);

enum class Composition {
  kBestSource,  // max over funded sources
  kMean,        // mean over funded sources
};

struct EvaluationOptions {
  Composition composition = Composition::kBestSource;
  bool clamp_to_unit = false;
};

// Curve-predicted outcome of a plan. These numbers are a surrogate for
// actually fine-tuning on the allocated data.
struct PlanEvaluation {
  Composition composition = Composition::kBestSource;
  bool clamped = false;
  std::vector<std::string> targets;
  std::vector<double> demand;
  std::vector<double> utility;
  std::vector<bool> covered;
  double m_tau = 0.0;
  double gini = 0.0;
  std::vector<std::string> warnings;
};

PlanEvaluation evaluate_plan(const AllocationPlan& plan,
                             const AllocationRequest& request,
                             const EvaluationOptions& options);

}  // namespace dei

#endif  // DEI_ALLOCATOR_H_
