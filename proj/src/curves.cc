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

#include "dei/curves.h"

#include <fmt/format.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <set>

#include "dei/errors.h"

namespace dei {
namespace {

constexpr int kGridPoints = 200;
constexpr int kRefinementRounds = 3;
constexpr int kRefinementPoints = 21;  // spans +-1 coarse step at step / 10

bool all_scores_equal(std::span<const TrajectoryPoint> points) {
  return std::all_of(points.begin(), points.end(), [&](const auto& p) {
    return p.score == points.front().score;
  });
}

struct Candidate {
  double c = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

}  // namespace

double predict(const LearningCurve& curve, std::int64_t samples) {
  if (samples < 1) {
    throw ConfigError(
        fmt::format("prediction needs at least 1 sample, got {}", samples));
  }
  return curve.a +
         curve.b * std::pow(static_cast<double>(samples), -curve.c);
}

LinearFit fit_fixed_exponent(std::span<const TrajectoryPoint> points,
                             double c) {
  if (points.empty()) throw DataError("cannot fit an empty trajectory");
  const double n = static_cast<double>(points.size());
  std::vector<double> z(points.size());
  double z_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    z[i] = c == 0.0 ? 1.0 : std::pow(static_cast<double>(points[i].samples), -c);
    z_mean += z[i];
    y_mean += points[i].score;
  }
  z_mean /= n;
  y_mean /= n;

  double szz = 0.0;
  double szy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    szz += (z[i] - z_mean) * (z[i] - z_mean);
    szy += (z[i] - z_mean) * (points[i].score - y_mean);
  }

  LinearFit fit;
  if (szz > 0.0) {
    fit.b = szy / szz;
    fit.a = y_mean - fit.b * z_mean;
  } else {
    fit.a = y_mean;
    fit.b = 0.0;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = points[i].score - (fit.a + fit.b * z[i]);
    fit.sse += r * r;
  }
  return fit;
}

LearningCurve fit_power_law(std::span<const TrajectoryPoint> points,
                            ExponentRange range) {
  if (points.size() < 3) {
    throw DataError(fmt::format(
        "power-law fit needs at least 3 points, got {}", points.size()));
  }
  if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.lo < 0.0 ||
      range.lo > range.hi) {
    throw ConfigError(fmt::format("invalid exponent range [{}, {}]", range.lo,
                                  range.hi));
  }
  const std::string& source = points.front().source;
  const std::string& target = points.front().target;
  std::set<std::int64_t> counts;
  for (const auto& p : points) {
    if (p.source != source || p.target != target) {
      throw DataError(fmt::format("trajectory mixes pairs {}->{} and {}->{}",
                                  source, target, p.source, p.target));
    }
    if (p.samples < 1) {
      throw DataError(fmt::format("{}->{}: sample count {} is below 1", source,
                                  target, p.samples));
    }
    counts.insert(p.samples);
  }
  if (counts.size() < 2) {
    throw DataError(fmt::format(
        "{}->{}: all points share one sample count", source, target));
  }

  LearningCurve curve{source, target};
  if (all_scores_equal(points)) {
    curve.a = points.front().score;
    curve.b = 0.0;
    curve.c = 0.0;
    curve.r_squared = 1.0;
    return curve;
  }

  auto sse_at = [&](double c) { return fit_fixed_exponent(points, c).sse; };
  auto scan = [&](double lo, double hi, int steps, Candidate best) {
    for (int k = 0; k < steps; ++k) {
      const double c =
          steps == 1 ? lo : lo + (hi - lo) * k / static_cast<double>(steps - 1);
      const double sse = sse_at(c);
      if (sse < best.sse) best = {c, sse};
    }
    return best;
  };

  Candidate best = scan(range.lo, range.hi, kGridPoints, {});
  double step = (range.hi - range.lo) / (kGridPoints - 1);
  for (int round = 0; round < kRefinementRounds && step > 0.0; ++round) {
    const double lo = std::max(range.lo, best.c - step);
    const double hi = std::min(range.hi, best.c + step);
    best = scan(lo, hi, kRefinementPoints, best);
    step /= 10.0;
  }
  if (step > 0.0) {
    const double lo = std::max(range.lo, best.c - step * 10.0);
    const double hi = std::min(range.hi, best.c + step * 10.0);
    const auto [c, sse] = boost::math::tools::brent_find_minima(
        sse_at, lo, hi, std::numeric_limits<double>::digits / 2);
    if (sse < best.sse) best = {c, sse};
  }

  const LinearFit fit = fit_fixed_exponent(points, best.c);
  curve.a = fit.a;
  curve.b = fit.b;
  curve.c = best.c;
  curve.r_squared = r_squared(points, curve);
  return curve;
}

double sum_squared_error(std::span<const TrajectoryPoint> points,
                         const LearningCurve& curve) {
  double sse = 0.0;
  for (const auto& p : points) {
    const double r = p.score - predict(curve, p.samples);
    sse += r * r;
  }
  return sse;
}

double r_squared(std::span<const TrajectoryPoint> points,
                 const LearningCurve& curve) {
  if (points.size() < 2) {
    throw DataError(fmt::format("R^2 needs at least 2 points, got {}",
                                points.size()));
  }
  const double ss_res = sum_squared_error(points, curve);
  if (all_scores_equal(points)) {
    if (ss_res == 0.0) return 1.0;
    throw ComputationError(
        "R^2 undefined: scores are constant but the curve does not fit them");
  }
  double mean = 0.0;
  for (const auto& p : points) mean += p.score;
  mean /= static_cast<double>(points.size());
  double ss_tot = 0.0;
  for (const auto& p : points) ss_tot += (p.score - mean) * (p.score - mean);
  return 1.0 - ss_res / ss_tot;
}

void CurveRegistry::add(LearningCurve curve) {
  if (!std::isfinite(curve.a) || !std::isfinite(curve.b) ||
      !std::isfinite(curve.c) || curve.c < 0.0) {
    throw DataError(fmt::format(
        "curve {}->{}: coefficients must be finite with c >= 0", curve.source,
        curve.target));
  }
  Key key{curve.source, curve.target};
  if (curves_.count(key) || missing_.count(key)) {
    throw DataError(fmt::format("duplicate curve for pair {}->{}", key.first,
                                key.second));
  }
  curves_.emplace(std::move(key), std::move(curve));
}

void CurveRegistry::mark_missing(MissingCurve missing) {
  Key key{missing.source, missing.target};
  if (curves_.count(key) || missing_.count(key)) {
    throw DataError(fmt::format("duplicate curve for pair {}->{}", key.first,
                                key.second));
  }
  missing_.emplace(std::move(key), std::move(missing));
}

const LearningCurve* CurveRegistry::find(const std::string& source,
                                         const std::string& target) const {
  auto it = curves_.find({source, target});
  return it == curves_.end() ? nullptr : &it->second;
}

bool CurveRegistry::is_marked_missing(const std::string& source,
                                      const std::string& target) const {
  return missing_.count({source, target}) > 0;
}

}  // namespace dei
