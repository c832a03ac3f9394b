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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "dei/allocator.h"
#include "dei/cli.h"
#include "dei/curves.h"
#include "dei/efficiency.h"
#include "dei/io.h"
#include "dei/lang_metrics.h"
#include "dei/text_format.h"
#include "test_support.h"

namespace dei {
namespace {

using testing::data_dir;
using testing::Rng;

constexpr double kInf = std::numeric_limits<double>::infinity();

// A failed check records its message; the criterion keeps running so the
// report shows every deviation.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& what) { notes_.push_back(what); }
  bool ok() const { return failures_.empty(); }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Check&)> body;
};

// ---- 1 ------------------------------------------------------------------

void gini_structural(Check& check) {
  const DataBundle bundle = load_bundle(data_dir());
  const PerformanceTable perf = load_performance(
      data_dir() / "fixtures/perf_structural.csv", ScoreScale::kPercent);
  const Scorecard card = dei_scorecard(perf, bundle.speakers, bundle.tasks,
                                       bundle.universe, ScorecardOptions{});
  const std::map<std::string, std::pair<double, double>> want{
      {"ner", {0.565, 0.59}},
      {"pos", {0.739, 0.76}},
      {"nli", {0.870, 0.88}},
      {"qa", {0.826, 0.83}}};
  for (const auto& row : card.rows) {
    if (row.model != "muril_base") continue;
    const auto [closed_form, paper] = want.at(row.task);
    check.expect(std::abs(row.gini - closed_form) < 5e-4,
                 fmt::format("{} Gini {:.4f} != {:.3f}", row.task, row.gini,
                             closed_form));
    check.expect(std::abs(row.gini - paper) <= 0.03,
                 fmt::format("{} Gini {:.4f} not within 0.03 of paper {}",
                             row.task, row.gini, paper));
    check.note(fmt::format("{} {:.4f} (paper {})", row.task, row.gini, paper));
  }
  check.expect(card.rows.size() == 12, "expected 12 scorecard rows");
}

// ---- 2 ------------------------------------------------------------------

void global_metric_structural(Check& check) {
  const DataBundle bundle = load_bundle(data_dir());
  const PerformanceTable perf = load_performance(
      data_dir() / "fixtures/perf_structural.csv", ScoreScale::kPercent);
  for (const auto& [tau, expected, paper] :
       {std::tuple{1.0, 70.7, 69.6}, std::tuple{0.0, 34.6, 33.4}}) {
    ScorecardOptions opts;
    opts.demand.tau = tau;
    const Scorecard card =
        dei_scorecard(perf, bundle.speakers, bundle.tasks, bundle.universe,
                      opts);
    for (const auto& row : card.rows) {
      if (row.task != "ner" || row.model != "muril_base") continue;
      const double m = 100.0 * row.m_tau;
      check.expect(std::abs(m - expected) < 0.05,
                   fmt::format("M_{} = {:.2f}, expected {}", tau, m, expected));
      check.expect(std::abs(m - paper) <= 2.0,
                   fmt::format("M_{} = {:.2f} not within 2.0 of paper {}", tau,
                               m, paper));
      check.note(fmt::format("M_{:g} {:.2f} (paper {})", tau, m, paper));
    }
  }
}

// ---- 3 ------------------------------------------------------------------

void gini_properties(Check& check) {
  constexpr int kTrials = 1000;
  Rng rng(2024);
  int bad[7] = {};
  int oracle_bad = 0;
  for (int t = 0; t < kTrials; ++t) {
    // Oracle equivalence, n <= 12.
    {
      const auto v = rng.nonnegative_vector(1, 12);
      const double g = gini(v);
      if (std::abs(g - testing::gini_mad(v)) > 1e-12 ||
          std::abs(g - testing::gini_trapezoid(v)) > 1e-12 ||
          std::abs(g - gini_from_lorenz(lorenz_points(v))) > 1e-12) {
        ++oracle_bad;
      }
    }
    // (i) Robin Hood.
    {
      auto v = rng.nonnegative_vector(2, 20);
      std::size_t rich = 0, poor = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > v[rich]) rich = i;
        if (v[i] < v[poor]) poor = i;
      }
      if (v[rich] == v[poor]) {
        rich = 0;
        poor = 1;
        v[rich] += 1.0;
      }
      const double before = gini(v);
      const double delta = rng.uniform(0.05, 0.5) * (v[rich] - v[poor]);
      v[rich] -= delta;
      v[poor] += delta;
      if (!(gini(v) < before)) ++bad[1];
    }
    // (ii) Scale invariance.
    {
      const auto v = rng.nonnegative_vector(1, 20);
      auto w = v;
      for (auto& x : w) x *= 8.0;
      auto u = v;
      const double k = rng.uniform(1e-3, 1e3);
      for (auto& x : u) x *= k;
      if (gini(w) != gini(v) || std::abs(gini(u) - gini(v)) > 1e-12) ++bad[2];
    }
    // (iii) Rising tide.
    {
      auto v = rng.nonnegative_vector(2, 20);
      v[0] = v[1] + 1.0;  // not constant
      const double before = gini(v);
      const double c = rng.uniform(0.01, 50.0);
      for (auto& x : v) x += c;
      if (!(gini(v) < before)) ++bad[3];
    }
    // (iv) Cloning.
    {
      const auto v = rng.nonnegative_vector(1, 20);
      auto twice = v;
      twice.insert(twice.end(), v.begin(), v.end());
      if (std::abs(gini(twice) - gini(v)) > 1e-12) ++bad[4];
    }
    // (v) Bill Gates.
    {
      auto v = rng.nonnegative_vector(2, 10);
      for (auto& x : v) x = std::min(x, 1.0);
      const double n = static_cast<double>(v.size());
      const int idx = rng.integer(0, static_cast<int>(v.size()) - 1);
      // Strictness needs some other entry above zero.
      v[(idx + 1) % v.size()] = std::max(v[(idx + 1) % v.size()], 0.5);
      v[idx] = 1e3;
      const double g3 = gini(v);
      v[idx] = 1e6;
      const double g6 = gini(v);
      if (!(g6 > g3) || std::abs(g6 - (n - 1.0) / n) > 1e-3) ++bad[5];
    }
    // (vi) Babies.
    {
      auto v = rng.nonnegative_vector(1, 20);
      const double before = gini(v);
      v.push_back(0.0);
      if (!(gini(v) > before)) ++bad[6];
    }
  }
  check.expect(oracle_bad == 0,
               fmt::format("oracle equivalence failed on {} vectors",
                           oracle_bad));
  const char* names[] = {"", "Robin Hood", "scale", "rising tide", "cloning",
                         "Bill Gates", "babies"};
  for (int p = 1; p <= 6; ++p) {
    check.expect(bad[p] == 0, fmt::format("{} failed on {} of {} vectors",
                                          names[p], bad[p], kTrials));
  }
  check.note(fmt::format("6 properties x {} vectors, oracles x {}", kTrials,
                         kTrials));
}

// ---- 4 ------------------------------------------------------------------

void curve_recovery(Check& check) {
  Rng rng(4);
  double worst = 0.0;
  double worst_r2 = 1.0;
  for (int i = 0; i < 100; ++i) {
    const LearningCurve truth{"s",
                              "t",
                              rng.uniform(0.5, 2.5),
                              rng.uniform(-30.0, -3.0),
                              rng.uniform(0.05, 0.6),
                              1.0};
    const auto fit = fit_power_law(testing::sample_curve(truth, 30, 320));
    for (const auto& [got, want] :
         {std::pair{fit.a, truth.a}, std::pair{fit.b, truth.b},
          std::pair{fit.c, truth.c}}) {
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
    worst_r2 = std::min(worst_r2, fit.r_squared);
  }
  check.expect(worst < 1e-3,
               fmt::format("worst relative error {:.3g} >= 1e-3", worst));
  check.expect(worst_r2 >= 1.0 - 1e-9,
               fmt::format("min R^2 {:.12f} < 1 - 1e-9", worst_r2));
  check.note(fmt::format("100 instances, worst rel err {:.2g}, min R^2 "
                         "1 - {:.1g}",
                         worst, 1.0 - worst_r2));
}

// ---- 5 ------------------------------------------------------------------

AllocationRequest muril_request(const DataBundle& bundle, std::int64_t budget,
                                double alpha, double beta) {
  AllocationRequest r;
  r.budget = budget;
  r.sources = {"bn", "en", "hi", "ml", "mr", "ta", "ur"};
  std::set<std::string> targets;
  for (const auto& [key, _] : bundle.muril_curves.curves()) {
    targets.insert(key.second);
  }
  r.targets.assign(targets.begin(), targets.end());
  r.curves = bundle.muril_curves;
  r.demand = demand(bundle.speakers, LanguageUniverse(r.targets), {1.0});
  r.alpha = alpha;
  r.beta = beta;
  r.missing_policy = MissingCurvePolicy::kPermissive;
  return r;
}

std::string vector_text(const AllocationPlan& plan) {
  std::string out;
  for (const auto& s : plan.sources) {
    out += fmt::format("{}{}={}", out.empty() ? "" : " ", s.source, s.samples);
  }
  return out;
}

void greedy_uniformity(Check& check) {
  const DataBundle bundle = load_bundle(data_dir());
  for (std::int64_t budget : {1000, 5000}) {
    const auto plan = greedy_allocate(muril_request(bundle, budget, 1.0, 0.0));
    const double center = static_cast<double>(budget) / 7.0;
    for (const auto& s : plan.sources) {
      check.expect(std::abs(s.samples - center) <= 0.25 * center,
                   fmt::format("X={}: {}={} outside [{:.1f}, {:.1f}]", budget,
                               s.source, s.samples, 0.75 * center,
                               1.25 * center));
    }
    check.expect(plan.total() == budget, "budget not exhausted");
    check.note(fmt::format("X={} (alpha=1, beta=0): {}", budget,
                           vector_text(plan)));
  }
  for (std::int64_t budget : {1000, 5000}) {
    const auto plan = greedy_allocate(muril_request(bundle, budget, 1.0, 1.0));
    check.note(fmt::format("info, not scored: X={} alpha=beta=1: {}", budget,
                           vector_text(plan)));
  }
}

// ---- 6 ------------------------------------------------------------------

void hand_trace(Check& check) {
  AllocationRequest r;
  r.budget = 10;
  r.sources = {"a", "b"};
  r.targets = {"t1", "t2"};
  r.demand = {0.5, 0.5};
  r.curves.add({"a", "t1", 3.0, -2.0, 1.0, 1.0});
  r.curves.add({"a", "t2", 3.0, -2.0, 1.0, 1.0});
  r.curves.add({"b", "t1", 4.0, -3.0, 1.0, 1.0});
  r.curves.add({"b", "t2", 1.5, 0.0, 1.0, 1.0});
  // Worked by hand: a predicts 3 - 2/k on both targets (Gini 0); b predicts
  // (4 - 3/k, 1.5).
  const std::vector<std::pair<std::string, double>> expected{
      {"a", kInf},       {"b", kInf},      {"a", 1.0},
      {"b", 29.0 / 40},  {"a", 1.0 / 3},   {"b", 5.0 / 24},
      {"a", 1.0 / 6},    {"b", 49.0 / 456}, {"a", 1.0 / 10},
      {"a", 1.0 / 15}};
  const auto plan = greedy_allocate(r);
  check.expect(plan.trace.size() == expected.size(), "trace length");
  for (std::size_t i = 0; i < std::min(plan.trace.size(), expected.size());
       ++i) {
    const auto& row = plan.trace[i];
    const bool gain_ok = std::isinf(expected[i].second)
                             ? row.gain == expected[i].second
                             : std::abs(row.gain - expected[i].second) < 1e-12;
    check.expect(row.source == expected[i].first && gain_ok,
                 fmt::format("step {}: got {} gain {}, expected {} gain {}",
                             i + 1, row.source, row.gain, expected[i].first,
                             expected[i].second));
  }
  check.expect(plan.samples_for("a") == 6 && plan.samples_for("b") == 4,
               "final allocation should be a=6 b=4");
  check.note("10 steps, a=6 b=4");
}

// ---- 7 ------------------------------------------------------------------

void efficiency_spot_check(Check& check) {
  const DataBundle bundle = load_bundle(data_dir());
  const EfficiencyConfig cfg;
  ModelGoods muril;
  for (const auto& g : bundle.goods) {
    if (g.model == "muril_base" && g.task == "qa") muril = g;
  }
  muril.performance = bundle.baseline_perf.at({"muril_base", "qa"});
  const double e = efficiency_score(muril, bundle.printed_amrs, cfg);
  const double paper = *bundle.reference("baseline", "efficiency", "en",
                                         "muril_base", "qa");
  check.expect(std::abs(e - 79.4) < 0.05,
               fmt::format("efficiency {:.3f}, expected 79.4", e));
  check.expect(std::abs(e - paper) <= 2.0,
               fmt::format("efficiency {:.2f} not within 2.0 of paper {}", e,
                           paper));
  check.note(fmt::format("MuRIL_base QA {:.2f} (paper {})", e, paper));

  // Computed-AMRS path: invariants only.
  const AmrsTable computed = compute_amrs_table(bundle.goods, cfg);
  for (const auto& g : bundle.goods) {
    auto better = g;
    better.performance += 1.0;
    check.expect(efficiency_score(better, computed, cfg) >
                     efficiency_score(g, computed, cfg),
                 "efficiency not increasing in performance for " + g.model);
  }
  std::vector<ModelGoods> pair;
  for (const auto& g : bundle.goods) {
    if (g.group == "global" && g.task == "ner") pair.push_back(g);
  }
  const AmrsTable two = compute_amrs_table(pair, cfg);
  const double dp = std::abs(pair[0].performance - pair[1].performance);
  check.expect(*two.find({"global", "ner", Good::kThroughput}) ==
                   std::abs(pair[0].throughput - pair[1].throughput) / dp,
               "two-model AMRS differs from the pairwise MRS");
  auto scaled = bundle.goods;
  for (auto& g : scaled) g.performance *= 2.0;
  const AmrsTable half = compute_amrs_table(scaled, cfg);
  for (const auto& [key, v] : computed.entries()) {
    check.expect(std::abs(*half.find(key) - v / 2.0) <= 1e-12 * v,
                 "AMRS does not scale as 1/k with performance");
  }
}

// ---- 8 ------------------------------------------------------------------

std::map<std::string, std::string> run_pipeline(const fs::path& dir,
                                                Check& check) {
  auto p = [&](const char* name) { return (dir / name).string(); };
  auto d = [&](const char* name) { return (data_dir() / name).string(); };
  const std::vector<std::vector<std::string>> commands{
      {"metrics", "--perf", d("fixtures/perf_structural.csv"), "--speakers",
       d("speakers.csv"), "--tasks", d("tasks.csv"), "--out", p("card.csv"),
       "--lorenz-out", p("lorenz.csv")},
      {"efficiency", "--goods", d("goods.csv"), "--amrs-override",
       d("amrs_paper.csv"), "--perf-override", d("perf_baseline.csv"), "--out",
       p("eff.csv"), "--amrs-out", p("amrs.csv")},
      {"fit", "--trajectories", d("fixtures/trajectories_synthetic.csv"),
       "--out", p("fit.txt"), "--samples-out", p("samples.csv")},
      {"allocate", "--curves", d("curves_muril_large.txt"), "--speakers",
       d("speakers.csv"), "--budget", "1000", "--missing", "permissive",
       "--plan-out", p("plan.txt"), "--trace-out", p("trace.csv"),
       "--eval-out", p("eval.txt")},
      {"report", "--scorecard", p("card.csv"), "--lorenz", p("lorenz.csv"),
       "--efficiency", p("eff.csv"), "--amrs", p("amrs.csv"), "--curves",
       p("fit.txt"), "--plan", p("plan.txt"), "--trace", p("trace.csv"),
       "--evaluation", p("eval.txt"), "--out", p("report.md")}};
  for (const auto& args : commands) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    check.expect(code == 0,
                 fmt::format("{} exited {}: {}", args[0], code, err.str()));
  }
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    files[entry.path().filename().string()] =
        testing::slurp(entry.path());
  }
  return files;
}

template <typename T, typename Format, typename Parse>
void round_trip(Check& check, const std::string& name, const T& value,
                Format format, Parse parse) {
  const std::string once = format(value);
  const std::string twice = format(parse(once));
  check.expect(once == twice, name + " changed on save -> load -> save");
}

void determinism_and_round_trip(Check& check) {
  testing::TempDir dir;
  const auto first = run_pipeline(dir.path(), check);
  const auto second = run_pipeline(dir.path(), check);
  check.expect(first.size() == 10, fmt::format("{} output files, expected 10",
                                               first.size()));
  check.expect(first == second, "pipeline outputs differ between runs");

  const DataBundle b = load_bundle(data_dir());
  round_trip(check, "speakers", b.speakers, format_speakers,
             [](const std::string& s) { return parse_speakers(s, "rt"); });
  round_trip(check, "tasks", b.tasks, format_tasks,
             [](const std::string& s) { return parse_tasks(s, "rt"); });
  round_trip(check, "universe", b.universe, format_universe,
             [](const std::string& s) { return parse_universe(s, "rt"); });
  round_trip(check, "goods", b.goods, format_goods,
             [](const std::string& s) { return parse_goods(s, "rt"); });
  round_trip(check, "amrs", b.printed_amrs, format_amrs,
             [](const std::string& s) { return parse_amrs(s, "rt"); });
  round_trip(check, "muril curves", b.muril_curves, format_curve_registry,
             [](const std::string& s) {
               return parse_curve_registry(s, "rt");
             });
  round_trip(check, "xlmr curves", b.xlmr_curves, format_curve_registry,
             [](const std::string& s) {
               return parse_curve_registry(s, "rt");
             });
  round_trip(check, "performance",
             load_performance(data_dir() / "fixtures/perf_structural.csv",
                              ScoreScale::kPercent),
             format_performance, [](const std::string& s) {
               return parse_performance(s, "rt", ScoreScale::kPercent);
             });
  round_trip(check, "trajectories",
             load_trajectories(data_dir() /
                               "fixtures/trajectories_synthetic.csv"),
             format_trajectories, [](const std::string& s) {
               return parse_trajectories(s, "rt");
             });
  const auto plan = greedy_allocate(muril_request(b, 300, 1.0, 1.0));
  const std::string plan_text = format_plan(plan);
  const std::string trace_text = format_trace(plan);
  const auto back = parse_plan(plan_text, "rt", std::string_view(trace_text));
  check.expect(format_plan(back) == plan_text &&
                   format_trace(back) == trace_text,
               "plan or trace changed on save -> load -> save");
  const auto eval =
      evaluate_plan(plan, muril_request(b, 300, 1.0, 1.0), EvaluationOptions{});
  round_trip(check, "evaluation", eval, format_evaluation,
             [](const std::string& s) { return parse_evaluation(s, "rt"); });
  check.note("10 pipeline files identical; 11 types round-trip");
}

}  // namespace
}  // namespace dei

int main() {
  using namespace dei;
  const std::vector<Criterion> criteria{
      {1, "Gini structural reproduction", 1.0, gini_structural},
      {2, "global metric structural consistency", 1.0,
       global_metric_structural},
      {3, "Gini property suite", 10.0, gini_properties},
      {4, "curve-fit recovery", 30.0, curve_recovery},
      {5, "greedy near-uniformity", 30.0, greedy_uniformity},
      {6, "greedy hand-trace oracle", 1.0, hand_trace},
      {7, "efficiency spot check", 1.0, efficiency_spot_check},
      {8, "determinism and round-trip", 10.0, determinism_and_round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    check.expect(seconds < c.limit_seconds,
                 fmt::format("took {:.2f} s, limit {} s", seconds,
                             c.limit_seconds));
    std::string detail;
    for (const auto& n : check.notes()) detail += (detail.empty() ? "" : "; ") + n;
    for (const auto& f : check.failures()) {
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + f;
    }
    std::cout << fmt::format("{} [{}] {} ({:.3f} s): {}\n",
                             check.ok() ? "PASS" : "FAIL", c.id, c.name,
                             seconds, detail);
    if (!check.ok()) ++failed;
  }
  std::cout << fmt::format("{} of {} criteria passed\n",
                           criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
