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

// Power-law learning curves f(x) = a + b * x^(-c): predicted score after
// fine-tuning on x instances of a source language, measured on a target
// language.

#ifndef DEI_CURVES_H_
#define DEI_CURVES_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dei {

struct TrajectoryPoint {
  std::string source;
  std::string target;
  std::int64_t samples = 1;
  double score = 0.0;  // [0, 1] scale

  friend bool operator==(const TrajectoryPoint&,
                         const TrajectoryPoint&) = default;
};

struct LearningCurve {
  std::string source;
  std::string target;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double r_squared = 1.0;

  friend bool operator==(const LearningCurve&, const LearningCurve&) = default;
};

// a + b * samples^(-c). Throws ConfigError for samples < 1.
double predict(const LearningCurve& curve, std::int64_t samples);

struct ExponentRange {
  double lo = 0.0;
  double hi = 2.0;
};

struct LinearFit {
  double a = 0.0;
  double b = 0.0;
  double sse = 0.0;
};

// Ordinary least squares for (a, b) with the exponent held fixed. Needs two
// distinct sample counts unless c == 0, where the model degenerates to a
// constant and b is reported as 0.
LinearFit fit_fixed_exponent(std::span<const TrajectoryPoint> points,
                             double c);

// Least-squares fit over c in `range`: (a, b) are solved in closed form for
// each candidate exponent, c is located on a 200-point grid, refined three
// times by a factor of 10, and finally polished with Brent's method inside
// the last bracket. Requires >= 3 points with >= 2 distinct sample counts.
// Constant data yields (mean, 0, 0) with R^2 = 1.
LearningCurve fit_power_law(std::span<const TrajectoryPoint> points,
                            ExponentRange range = {});

double sum_squared_error(std::span<const TrajectoryPoint> points,
                         const LearningCurve& curve);

// 1 - SS_res / SS_tot. For constant data returns 1 when the residual is
// zero and throws ComputationError otherwise.
double r_squared(std::span<const TrajectoryPoint> points,
                 const LearningCurve& curve);

// A pair listed without coefficients; the fit quality may still be known.
struct MissingCurve {
  std::string source;
  std::string target;
  std::optional<double> r_squared;

  friend bool operator==(const MissingCurve&, const MissingCurve&) = default;
};

// (source, target) -> curve, plus pairs explicitly marked absent.
class CurveRegistry {
 public:
  using Key = std::pair<std::string, std::string>;

  // Throws DataError if the pair is already present or marked missing.
  void add(LearningCurve curve);
  void mark_missing(MissingCurve missing);

  // nullptr when absent or missing.
  const LearningCurve* find(const std::string& source,
                            const std::string& target) const;
  bool is_marked_missing(const std::string& source,
                         const std::string& target) const;

  const std::map<Key, LearningCurve>& curves() const { return curves_; }
  const std::map<Key, MissingCurve>& missing() const { return missing_; }
  std::size_t size() const { return curves_.size(); }

  friend bool operator==(const CurveRegistry&, const CurveRegistry&) = default;

 private:
  std::map<Key, LearningCurve> curves_;
  std::map<Key, MissingCurve> missing_;
};

}  // namespace dei

#endif  // DEI_CURVES_H_
