// Copyright 2026 The phasebal Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasebal/errors.hpp"
#include "phasebal/feeder.hpp"

namespace phasebal {

// Rounds to the nearest integer, ties away from zero.
inline std::int64_t round_kw(double kw) { return std::llround(kw); }

struct TriangularMF {
  std::string label;
  double left = 0.0;
  double apex = 0.0;
  double right = 0.0;

  TriangularMF() = default;
  TriangularMF(std::string label_, double left_, double apex_, double right_)
      : label(std::move(label_)), left(left_), apex(apex_), right(right_) {
    if (!(left <= apex && apex <= right && left < right)) {
      throw InvalidArgument("term " + label +
                            ": need left <= apex <= right and left < right");
    }
  }

  bool symmetric() const { return apex - left == right - apex; }

  friend bool operator==(const TriangularMF&, const TriangularMF&) = default;
};

inline double membership_at(const TriangularMF& mf, double x) {
  if (x == mf.apex) return 1.0;
  if (x < mf.left || x > mf.right) return 0.0;
  if (x < mf.apex) return (x - mf.left) / (mf.apex - mf.left);
  return (mf.right - x) / (mf.right - mf.apex);
}

struct Universe {
  double min = 0.0;
  double max = 0.0;

  bool contains(double x) const { return x >= min && x <= max; }
  friend bool operator==(const Universe&, const Universe&) = default;
};

class LinguisticVariable {
 public:
  LinguisticVariable() = default;

  // Terms must lie inside the universe and jointly cover it without gaps.
  LinguisticVariable(std::string name, Universe universe,
                     std::vector<TriangularMF> terms)
      : name_(std::move(name)), universe_(universe), terms_(std::move(terms)) {
    if (!(universe_.min < universe_.max)) {
      throw InvalidArgument("variable " + name_ + ": empty universe");
    }
    if (terms_.empty()) {
      throw InvalidArgument("variable " + name_ + ": no terms");
    }
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const TriangularMF& t = terms_[i];
      if (t.left < universe_.min || t.right > universe_.max) {
        throw InvalidArgument("variable " + name_ + ": term " + t.label +
                              " extends outside the universe");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (terms_[j].label == t.label) {
          throw InvalidArgument("variable " + name_ + ": duplicate term " +
                                t.label);
        }
      }
    }
    std::vector<const TriangularMF*> by_left;
    for (const auto& t : terms_) by_left.push_back(&t);
    std::sort(by_left.begin(), by_left.end(),
              [](const auto* a, const auto* b) { return a->left < b->left; });
    double reach = universe_.min;
    if (by_left.front()->left > universe_.min) {
      throw InvalidArgument("variable " + name_ +
                            ": terms leave the lower universe edge uncovered");
    }
    for (const TriangularMF* t : by_left) {
      if (t->left > reach) {
        throw InvalidArgument("variable " + name_ + ": gap in coverage before " +
                              t->label);
      }
      reach = std::max(reach, t->right);
    }
    if (reach < universe_.max) {
      throw InvalidArgument("variable " + name_ +
                            ": terms leave the upper universe edge uncovered");
    }
  }

  const std::string& name() const { return name_; }
  const Universe& universe() const { return universe_; }
  const std::vector<TriangularMF>& terms() const { return terms_; }

  std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].label == label) return i;
    }
    return std::nullopt;
  }

 private:
  std::string name_;
  Universe universe_;
  std::vector<TriangularMF> terms_;
};

struct Rule {
  std::string if_term;
  std::string then_term;

  friend bool operator==(const Rule&, const Rule&) = default;
};

using RuleSet = std::vector<Rule>;

// Single-input single-output Mamdani controller: min implication, max
// aggregation, centroid defuzzification.
class FuzzyController {
 public:
  static constexpr std::size_t kDefaultResolution = 10001;
  static constexpr std::size_t kMinResolution = 1000;

  FuzzyController(LinguisticVariable input, LinguisticVariable output,
                  RuleSet rules,
                  std::size_t integration_resolution = kDefaultResolution)
      : input_(std::move(input)),
        output_(std::move(output)),
        rules_(std::move(rules)),
        resolution_(integration_resolution) {
    if (resolution_ < kMinResolution) {
      throw InvalidArgument("integration resolution must be at least " +
                            std::to_string(kMinResolution));
    }
    if (rules_.empty()) throw InvalidArgument("rule set is empty");
    for (const Rule& r : rules_) {
      auto in = input_.find(r.if_term);
      auto out = output_.find(r.then_term);
      if (!in) {
        throw InvalidArgument("rule references unknown input term " +
                              r.if_term);
      }
      if (!out) {
        throw InvalidArgument("rule references unknown output term " +
                              r.then_term);
      }
      bound_.push_back({*in, *out});
    }
  }

  const LinguisticVariable& input() const { return input_; }
  const LinguisticVariable& output() const { return output_; }
  const RuleSet& rules() const { return rules_; }
  std::size_t integration_resolution() const { return resolution_; }

  // Antecedent/consequent term indices for rule i.
  std::pair<std::size_t, std::size_t> rule_terms(std::size_t i) const {
    return bound_.at(i);
  }

 private:
  LinguisticVariable input_;
  LinguisticVariable output_;
  RuleSet rules_;
  std::size_t resolution_;
  std::vector<std::pair<std::size_t, std::size_t>> bound_;
};

namespace detail {

// Centroid of a triangle clipped at height h in (0, 1].
inline double clipped_triangle_centroid(const TriangularMF& mf, double h) {
  if (mf.symmetric()) return mf.apex;
  // Trapezoid (a,0) (b1,h) (b2,h) (c,0), polygon centroid formula.
  const double a = mf.left, c = mf.right;
  const double b1 = a + h * (mf.apex - a);
  const double b2 = c - h * (c - mf.apex);
  const double xs[4] = {a, b1, b2, c};
  const double ys[4] = {0.0, h, h, 0.0};
  double area2 = 0.0, cx = 0.0;
  for (int i = 0; i < 4; ++i) {
    const int j = (i + 1) % 4;
    const double cross = xs[i] * ys[j] - xs[j] * ys[i];
    area2 += cross;
    cx += (xs[i] + xs[j]) * cross;
  }
  return cx / (3.0 * area2);
}

}  // namespace detail

inline double infer_change(const FuzzyController& ctrl, double load) {
  const Universe& in_u = ctrl.input().universe();
  if (!in_u.contains(load)) {
    throw OutOfUniverse(load, in_u.min, in_u.max);
  }
  const auto& in_terms = ctrl.input().terms();
  const auto& out_terms = ctrl.output().terms();
  const std::size_t nrules = ctrl.rules().size();

  // Firing strength per consequent term (max over rules sharing it).
  std::vector<double> clip(out_terms.size(), 0.0);
  for (std::size_t r = 0; r < nrules; ++r) {
    const auto [in, out] = ctrl.rule_terms(r);
    clip[out] = std::max(clip[out], membership_at(in_terms[in], load));
  }

  std::size_t active = 0, last = 0;
  for (std::size_t t = 0; t < clip.size(); ++t) {
    if (clip[t] > 0.0) {
      ++active;
      last = t;
    }
  }

  if (active == 0) {
    // Nothing fires: fall back to the rule whose antecedent apex is nearest.
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < nrules; ++r) {
      const double d = std::abs(in_terms[ctrl.rule_terms(r).first].apex - load);
      if (d < best_dist) {
        best_dist = d;
        best = r;
      }
    }
    return out_terms[ctrl.rule_terms(best).second].apex;
  }
  if (active == 1) {
    return detail::clipped_triangle_centroid(out_terms[last], clip[last]);
  }

  const Universe& out_u = ctrl.output().universe();
  const std::size_t n = ctrl.integration_resolution();
  const double dy = (out_u.max - out_u.min) / static_cast<double>(n);
  double moment = 0.0, area = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double y = out_u.min + (static_cast<double>(k) + 0.5) * dy;
    double mu = 0.0;
    for (std::size_t t = 0; t < out_terms.size(); ++t) {
      if (clip[t] > 0.0) {
        mu = std::max(mu, std::min(clip[t], membership_at(out_terms[t], y)));
      }
    }
    moment += mu * y;
    area += mu;
  }
  return moment / area;
}

using ChangeTriple = std::array<std::int64_t, kNumPhases>;

// Rounded per-phase change suggestion for the three phase totals.
inline ChangeTriple suggest_changes(const FuzzyController& ctrl,
                                    const PhaseTotals& totals) {
  ChangeTriple out{};
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    try {
      out[p] = round_kw(infer_change(ctrl, totals[p]));
    } catch (const OutOfUniverse& e) {
      const Universe& u = ctrl.input().universe();
      throw OutOfUniverse(e.load(), u.min, u.max, static_cast<int>(p));
    }
  }
  return out;
}

// Symmetric triangles centred on the kW ranges of the reference controller.
inline FuzzyController default_controller() {
  auto mid = [](std::string label, double lo, double hi) {
    return TriangularMF(std::move(label), lo, (lo + hi) / 2.0, hi);
  };
  LinguisticVariable load("Load", {0.0, 300.0},
                          {
                              mid("VLL", 0, 50),
                              mid("LL", 35, 85),
                              mid("MLL", 65, 115),
                              mid("PL", 100, 150),
                              mid("SOL", 125, 175),
                              mid("MOL", 165, 215),
                              mid("OL", 200, 250),
                              mid("HOL", 235, 300),
                          });
  LinguisticVariable change("Change", {-150.0, 150.0},
                            {
                                mid("HS", -150, -85),
                                mid("S", -100, -50),
                                mid("MS", -65, -15),
                                mid("SS", -50, 25),
                                mid("PA", 0, 50),
                                mid("MA", 35, 85),
                                mid("LA", 65, 115),
                                mid("VLA", 100, 150),
                            });
  RuleSet rules{{"VLL", "VLA"}, {"LL", "LA"}, {"MLL", "MA"}, {"PL", "PA"},
                {"SOL", "SS"},  {"MOL", "MS"}, {"OL", "S"},   {"HOL", "HS"}};
  return FuzzyController(std::move(load), std::move(change), std::move(rules));
}

}  // namespace phasebal
