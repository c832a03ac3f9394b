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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>

#include "dei/errors.h"
#include "dei/io.h"
#include "dei/lang_metrics.h"
#include "test_support.h"

namespace dei {
namespace {

using testing::Rng;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Two sources, two equally weighted targets, exponents 1 so every gain is a
// small fraction.
AllocationRequest hand_request(std::int64_t budget) {
  AllocationRequest r;
  r.budget = budget;
  r.sources = {"b", "a"};
  r.targets = {"t1", "t2"};
  r.demand = {0.5, 0.5};
  r.curves.add({"a", "t1", 3.0, -2.0, 1.0, 1.0});
  r.curves.add({"a", "t2", 3.0, -2.0, 1.0, 1.0});
  r.curves.add({"b", "t1", 4.0, -3.0, 1.0, 1.0});
  r.curves.add({"b", "t2", 1.5, 0.0, 1.0, 1.0});
  return r;
}

TEST(Greedy, HandTrace) {
  struct Row {
    const char* source;
    double gain, gm, gini;
  };
  const Row expected[] = {
      {"a", kInf, 1.0, 0.0},           {"b", kInf, 5.0 / 4, 1.0 / 10},
      {"a", 1.0, 2.0, 0.0},            {"b", 29.0 / 40, 2.0, 1.0 / 8},
      {"a", 1.0 / 3, 7.0 / 3, 0.0},    {"b", 5.0 / 24, 9.0 / 4, 1.0 / 6},
      {"a", 1.0 / 6, 5.0 / 2, 0.0},    {"b", 49.0 / 456, 19.0 / 8, 7.0 / 38},
      {"a", 1.0 / 10, 13.0 / 5, 0.0},  {"a", 1.0 / 15, 8.0 / 3, 0.0},
  };
  const auto plan = greedy_allocate(hand_request(10));
  ASSERT_EQ(plan.trace.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    SCOPED_TRACE(i + 1);
    EXPECT_EQ(plan.trace[i].step, static_cast<std::int64_t>(i + 1));
    EXPECT_EQ(plan.trace[i].source, expected[i].source);
    if (std::isinf(expected[i].gain)) {
      EXPECT_EQ(plan.trace[i].gain, kInf);
    } else {
      EXPECT_NEAR(plan.trace[i].gain, expected[i].gain, 1e-12);
    }
    EXPECT_NEAR(plan.trace[i].gm, expected[i].gm, 1e-12);
    EXPECT_NEAR(plan.trace[i].gini, expected[i].gini, 1e-12);
  }
  EXPECT_EQ(plan.samples_for("a"), 6);
  EXPECT_EQ(plan.samples_for("b"), 4);
}

TEST(Greedy, ZeroBetaSkipsGiniTerm) {
  auto r = hand_request(4);
  r.beta = 0.0;
  const auto plan = greedy_allocate(r);
  // a: 1, 2 -> gains inf, 1; b: 5/4, 2 -> gains inf, 3/4.
  EXPECT_EQ(plan.trace[2].source, "a");
  EXPECT_DOUBLE_EQ(plan.trace[3].gain, 0.75);
}

TEST(Greedy, StrictPolicyListsMissingPairs) {
  auto r = hand_request(5);
  r.targets.push_back("t3");
  r.demand = {0.4, 0.4, 0.2};
  r.curves.add({"a", "t3", 1.0, -1.0, 0.5, 1.0});
  try {
    greedy_allocate(r);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("b->t3"), std::string::npos);
  }
  r.missing_policy = MissingCurvePolicy::kPermissive;
  EXPECT_EQ(missing_pairs(r).size(), 1u);
  const auto plan = greedy_allocate(r);
  EXPECT_EQ(plan.total(), 5);
  // b's sums cover t1 and t2 only.
  EXPECT_NEAR(source_gm(r, "b", 1), 0.4 * 1.0 + 0.4 * 1.5, 1e-15);
}

TEST(Greedy, RejectsInvalidRequests) {
  auto r = hand_request(0);
  EXPECT_THROW(greedy_allocate(r), ConfigError);
  r = hand_request(3);
  r.alpha = 0.0;
  r.beta = 0.0;
  EXPECT_THROW(greedy_allocate(r), ConfigError);
  r = hand_request(3);
  r.demand = {1.0};
  EXPECT_THROW(greedy_allocate(r), ConfigError);
  r = hand_request(3);
  r.sources.push_back("a");
  EXPECT_THROW(greedy_allocate(r), ConfigError);
}

TEST(Egalitarian, RemainderToFirstSources) {
  auto r = hand_request(7);
  r.sources = {"c", "b", "a"};
  for (const auto& t : {"t1", "t2"}) r.curves.add({"c", t, 1.0, -1.0, 0.5, 1.0});
  const auto plan = egalitarian_allocate(r);
  EXPECT_EQ(plan.samples_for("a"), 3);
  EXPECT_EQ(plan.samples_for("b"), 2);
  EXPECT_EQ(plan.samples_for("c"), 2);
  EXPECT_TRUE(plan.trace.empty());
}

TEST(SingleSource, WholeBudget) {
  const auto plan = single_source_allocate(hand_request(50), "b");
  EXPECT_EQ(plan.strategy, "single:b");
  EXPECT_EQ(plan.samples_for("b"), 50);
  EXPECT_EQ(plan.samples_for("a"), 0);
  EXPECT_EQ(plan.sources[0].gm, -kInf);
  EXPECT_THROW(single_source_allocate(hand_request(5), "z"), ConfigError);
}

TEST(Evaluate, CompositionModes) {
  const auto r = hand_request(4);
  AllocationPlan plan = egalitarian_allocate(r);  // a: 2, b: 2
  auto best = evaluate_plan(plan, r, {Composition::kBestSource, false});
  // t1: a 2, b 2.5; t2: a 2, b 1.5.
  EXPECT_DOUBLE_EQ(best.utility[0], 2.5);
  EXPECT_DOUBLE_EQ(best.utility[1], 2.0);
  EXPECT_DOUBLE_EQ(best.m_tau, 2.25);
  auto mean = evaluate_plan(plan, r, {Composition::kMean, false});
  EXPECT_DOUBLE_EQ(mean.utility[0], 2.25);
  EXPECT_DOUBLE_EQ(mean.utility[1], 1.75);
  auto clamped = evaluate_plan(plan, r, {Composition::kBestSource, true});
  EXPECT_DOUBLE_EQ(clamped.utility[0], 1.0);
  EXPECT_DOUBLE_EQ(clamped.gini, 0.0);
  EXPECT_TRUE(clamped.clamped);
}

TEST(Evaluate, UncoveredTargetsInPermissiveMode) {
  auto r = hand_request(4);
  r.targets.push_back("t3");
  r.demand = {0.25, 0.25, 0.5};
  r.missing_policy = MissingCurvePolicy::kPermissive;
  const auto eval =
      evaluate_plan(egalitarian_allocate(r), r, EvaluationOptions{});
  EXPECT_FALSE(eval.covered[2]);
  EXPECT_EQ(eval.utility[2], 0.0);
  EXPECT_EQ(eval.warnings.size(), 1u);
}

AllocationRequest random_request(Rng& rng) {
  AllocationRequest r;
  const int ns = rng.integer(1, 5);
  const int nt = rng.integer(1, 5);
  for (int i = 0; i < ns; ++i) r.sources.push_back("s" + std::to_string(i));
  for (int i = 0; i < nt; ++i) r.targets.push_back("t" + std::to_string(i));
  double total = 0.0;
  for (int i = 0; i < nt; ++i) {
    r.demand.push_back(rng.uniform(0.01, 1.0));
    total += r.demand.back();
  }
  for (auto& d : r.demand) d /= total;
  for (const auto& s : r.sources) {
    for (const auto& t : r.targets) {
      r.curves.add({s, t, rng.uniform(0.5, 2.5), rng.uniform(-30.0, -3.0),
                    rng.uniform(0.05, 0.6), 1.0});
    }
  }
  r.budget = rng.integer(1, 400);
  r.alpha = rng.coin(0.8) ? 1.0 : rng.uniform(0.0, 2.0);
  r.beta = rng.coin(0.5) ? 1.0 : (rng.coin() ? 0.0 : rng.uniform(0.0, 2.0));
  return r;
}

TEST(GreedyProperties, BudgetExactAndDeterministic) {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = random_request(rng);
    const auto p1 = greedy_allocate(r);
    const auto p2 = greedy_allocate(r);
    EXPECT_EQ(p1.total(), r.budget);
    EXPECT_EQ(egalitarian_allocate(r).total(), r.budget);
    EXPECT_EQ(p1, p2);
    EXPECT_EQ(format_plan(p1), format_plan(p2));
    EXPECT_EQ(format_trace(p1), format_trace(p2));
  }
}

TEST(GreedyProperties, FirstRoundCoversSourcesInOrder) {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = random_request(rng);
    const auto plan = greedy_allocate(r);
    const auto n = std::min<std::size_t>(r.budget, r.sources.size());
    std::vector<std::string> sorted = r.sources;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(plan.trace[i].source, sorted[i]);
      if (r.alpha > 0.0) EXPECT_EQ(plan.trace[i].gain, kInf);
    }
  }
}

TEST(GreedyProperties, SourceGmNondecreasing) {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = random_request(rng);
    for (const auto& s : r.sources) {
      double prev = source_gm(r, s, 1);
      double prev_delta = kInf;
      for (std::int64_t k = 2; k < 200; ++k) {
        const double gm = source_gm(r, s, k);
        EXPECT_GE(gm, prev);
        EXPECT_LE(gm - prev, prev_delta + 1e-12);
        prev_delta = gm - prev;
        prev = gm;
      }
    }
  }
}

TEST(GreedyProperties, DominantSourceNeverTrails) {
  // With the Gini term off, a source whose curves are higher and steeper for
  // every target is never passed over at equal sample counts.
  Rng rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    AllocationRequest r;
    r.sources = {"hi_src", "lo_src"};
    r.targets = {"t0", "t1", "t2"};
    r.demand = {0.5, 0.3, 0.2};
    r.alpha = 1.0;
    r.beta = 0.0;
    r.budget = rng.integer(2, 300);
    for (const auto& t : r.targets) {
      const double a = rng.uniform(0.5, 2.5);
      const double b = rng.uniform(-30.0, -3.0);
      const double c = rng.uniform(0.05, 0.6);
      const double extra = rng.uniform(0.01, 5.0);
      r.curves.add({"lo_src", t, a, b, c, 1.0});
      r.curves.add({"hi_src", t, a + extra + 0.01, b - extra, c, 1.0});
    }
    const auto plan = greedy_allocate(r);
    std::map<std::string, std::int64_t> count;
    for (const auto& row : plan.trace) {
      if (row.source == "lo_src") {
        EXPECT_GT(count["hi_src"], count["lo_src"]);
      }
      ++count[row.source];
    }
  }
}

TEST(GreedyProperties, TraceReplaysFinalState) {
  Rng rng(45);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = random_request(rng);
    const auto plan = greedy_allocate(r);
    std::map<std::string, std::int64_t> count;
    std::map<std::string, std::pair<double, double>> state;
    for (const auto& s : r.sources) state[s] = {-kInf, 1.0};
    for (const auto& row : plan.trace) {
      const auto k = ++count[row.source];
      EXPECT_EQ(row.gm, source_gm(r, row.source, k));
      EXPECT_EQ(row.gini, source_gini(r, row.source, k));
      auto& [gm, g] = state[row.source];
      double gain = 0.0;
      if (r.alpha != 0.0) gain += r.alpha * (row.gm - gm);
      if (r.beta != 0.0) gain += r.beta * (g - row.gini);
      EXPECT_EQ(row.gain, gain);
      state[row.source] = {row.gm, row.gini};
    }
    for (const auto& s : plan.sources) {
      EXPECT_EQ(s.samples, count[s.source]);
      EXPECT_EQ(s.gm, state[s.source].first);
      EXPECT_EQ(s.gini, state[s.source].second);
    }
  }
}

}  // namespace
}  // namespace dei
