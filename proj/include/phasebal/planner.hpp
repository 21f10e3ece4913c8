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
#include <concepts>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phasebal/errors.hpp"
#include "phasebal/feeder.hpp"
#include "phasebal/format.hpp"
#include "phasebal/fuzzy.hpp"

namespace phasebal {

struct ChangeSuggestion {
  ChangeTriple delta{};
  bool corrected = false;

  std::int64_t sum() const { return delta[0] + delta[1] + delta[2]; }
  friend bool operator==(const ChangeSuggestion&,
                         const ChangeSuggestion&) = default;
};

// One load point leaving a releasing phase.
struct ChangeEntry {
  std::size_t source_phase = 0;  // 0-based
  std::size_t point_index = 0;   // position in the source phase
  double power = 0.0;            // kW

  friend bool operator==(const ChangeEntry&, const ChangeEntry&) = default;
};

struct ChangeVector {
  std::vector<ChangeEntry> entries;
  // Per releasing phase: |selected sum - requested release| in kW.
  PhaseVector deviation{};

  double total() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.power;
    return s;
  }
};

struct Move {
  std::size_t source_phase = 0;
  std::size_t point_index = 0;
  std::size_t dest_phase = 0;
  double power = 0.0;

  friend bool operator==(const Move&, const Move&) = default;
};

struct BalancePlan {
  std::vector<Move> moves;
  PhaseVector released_per_phase{};
  PhaseVector received_per_phase{};

  friend bool operator==(const BalancePlan&, const BalancePlan&) = default;
};

struct Feasibility {
  bool feasible = true;
  std::string reason;
  // 0-based offending phase, when the failure is tied to one.
  std::optional<std::size_t> phase;

  explicit operator bool() const { return feasible; }
};

inline Feasibility feasibility_check(const FeederSnapshot& snapshot,
                                     const ChangeSuggestion& suggestion) {
  bool any_neg = false, any_pos = false;
  for (auto d : suggestion.delta) {
    any_neg = any_neg || d < 0;
    any_pos = any_pos || d > 0;
  }
  if (!any_neg && !any_pos) {
    return {false, "no-op: suggested change is zero on every phase", {}};
  }
  if (!any_neg || !any_pos) {
    return {false,
            "suggested change is monotone in sign; no load can be exchanged",
            {}};
  }
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    const std::int64_t d = suggestion.delta[p];
    if (d == 0) continue;
    const auto points = snapshot.phase(p);
    const std::string name = "phase " + std::to_string(p + 1);
    if (points.empty()) {
      if (d < 0) return {false, name + " has no load points to release", p};
      continue;
    }
    const double min_point = *std::min_element(points.begin(), points.end());
    const double magnitude = std::abs(static_cast<double>(d));
    if (!(magnitude > min_point)) {
      return {false,
              name + ": change of " + detail::format_number(magnitude) +
                  " kW does not exceed the minimum load point " +
                  detail::format_number(min_point) + " kW",
              p};
    }
    if (d < 0 && std::accumulate(points.begin(), points.end(), 0.0) <= 0.0) {
      return {false, name + " carries no load to release", p};
    }
  }
  return {};
}

// Number of load points needed to carry change_kw, given the phase's mean
// point size. Clamped to [1, points.size()].
inline std::size_t points_to_move(double change_kw,
                                  std::span<const double> phase_points) {
  if (phase_points.empty()) {
    throw InvalidArgument("points_to_move: phase has no load points");
  }
  if (!(change_kw > 0.0)) {
    throw InvalidArgument("points_to_move: change must be positive");
  }
  const double total =
      std::accumulate(phase_points.begin(), phase_points.end(), 0.0);
  if (!(total > 0.0)) {
    throw InvalidArgument("points_to_move: phase carries no load");
  }
  const double mean = total / static_cast<double>(phase_points.size());
  const auto n = round_kw(change_kw / mean);
  return static_cast<std::size_t>(
      std::clamp<std::int64_t>(n, 1, static_cast<std::int64_t>(phase_points.size())));
}

struct SubsetSelection {
  std::vector<std::size_t> indices;  // ascending
  double sum = 0.0;                  // kW, original units
  double deviation = 0.0;            // |sum - target|, original units
};

// Chooses exactly n points whose sum is as close as possible to target.
// Points and target are scaled by `scale` and rounded to an integer lattice;
// optimality is exact on that lattice. Among optimal subsets the
// lexicographically smallest ascending index sequence is returned.
inline SubsetSelection select_subset(std::span<const double> points,
                                     std::size_t n, double target,
                                     double scale = 1.0) {
  const std::size_t m = points.size();
  if (n > m) {
    throw InvalidArgument("select_subset: cannot choose " + std::to_string(n) +
                          " of " + std::to_string(m) + " points");
  }
  if (!(target >= 0.0) || !std::isfinite(target)) {
    throw InvalidArgument("select_subset: target must be non-negative");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("select_subset: scale must be positive");
  }

  std::vector<std::int64_t> w(m);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(points[i] >= 0.0)) {
      throw InvalidArgument("select_subset: points must be non-negative");
    }
    w[i] = round_kw(points[i] * scale);
    total += w[i];
  }
  const std::int64_t goal = round_kw(target * scale);

  // reach[i][c][s]: some c points among i..m-1 sum to s.
  const std::size_t width = static_cast<std::size_t>(total) + 1;
  const std::size_t plane = (n + 1) * width;
  std::vector<std::uint8_t> reach((m + 1) * plane, 0);
  auto at = [&](std::size_t i, std::size_t c, std::int64_t s) -> std::uint8_t& {
    return reach[i * plane + c * width + static_cast<std::size_t>(s)];
  };
  at(m, 0, 0) = 1;
  std::int64_t suffix = 0;
  for (std::size_t i = m; i-- > 0;) {
    suffix += w[i];
    const std::size_t avail = m - i;
    for (std::size_t c = 0; c <= std::min(n, avail); ++c) {
      for (std::int64_t s = 0; s <= suffix; ++s) {
        std::uint8_t v = at(i + 1, c, s);
        if (!v && c > 0 && s >= w[i]) v = at(i + 1, c - 1, s - w[i]);
        at(i, c, s) = v;
      }
    }
  }

  std::int64_t best_dev = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t s = 0; s <= total; ++s) {
    if (at(0, n, s)) best_dev = std::min(best_dev, std::abs(s - goal));
  }

  std::vector<std::int64_t> viable;
  for (std::int64_t s : {goal - best_dev, goal + best_dev}) {
    if (s >= 0 && s <= total && at(0, n, s) &&
        std::find(viable.begin(), viable.end(), s) == viable.end()) {
      viable.push_back(s);
    }
  }

  // Greedy reconstruction: take the smallest index that still admits an
  // optimal completion.
  SubsetSelection out;
  std::size_t need = n;
  for (std::size_t i = 0; i < m && need > 0; ++i) {
    std::vector<std::int64_t> with;
    for (std::int64_t s : viable) {
      if (s >= w[i] && at(i + 1, need - 1, s - w[i])) with.push_back(s - w[i]);
    }
    if (!with.empty()) {
      out.indices.push_back(i);
      viable = std::move(with);
      --need;
      continue;
    }
    std::vector<std::int64_t> without;
    for (std::int64_t s : viable) {
      if (at(i + 1, need, s)) without.push_back(s);
    }
    viable = std::move(without);
  }

  for (std::size_t i : out.indices) out.sum += points[i];
  out.deviation = std::abs(out.sum - target);
  return out;
}

// Default selector: the exact lattice DP above.
struct DpSubsetSelector {
  double scale = 1.0;

  SubsetSelection operator()(std::span<const double> points, std::size_t n,
                             double target) const {
    return select_subset(points, n, target, scale);
  }
};

// Anything callable as (points, n, target) -> SubsetSelection.
template <class S>
concept SubsetSelector =
    requires(const S& s, std::span<const double> pts, std::size_t n, double t) {
      { s(pts, n, t) } -> std::convertible_to<SubsetSelection>;
    };

// Selects the load points leaving every releasing phase.
template <SubsetSelector Selector = DpSubsetSelector>
ChangeVector determine(const FeederSnapshot& snapshot,
                       const ChangeSuggestion& suggestion,
                       const Selector& selector = {}) {
  ChangeVector cv;
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    const std::int64_t d = suggestion.delta[p];
    if (d >= 0) continue;
    const auto points = snapshot.phase(p);
    const double release = static_cast<double>(-d);

    std::vector<std::size_t> candidates;
    std::vector<double> powers;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (points[k] > 0.0) {
        candidates.push_back(k);
        powers.push_back(points[k]);
      }
    }
    if (candidates.empty()) {
      cv.deviation[p] = release;
      continue;
    }
    const std::size_t n =
        std::min(points_to_move(release, points), candidates.size());
    const SubsetSelection sel = selector(powers, n, release);
    for (std::size_t j : sel.indices) {
      cv.entries.push_back({p, candidates[j], powers[j]});
    }
    cv.deviation[p] = sel.deviation;
  }
  return cv;
}

// Assigns every change-vector entry to a receiving phase. With two receivers
// the first (in phase order) gets a selected subset, the second the rest.
template <SubsetSelector Selector = DpSubsetSelector>
BalancePlan distribute(const ChangeVector& change_vector,
                       const ChangeSuggestion& suggestion,
                       const Selector& selector = {}) {
  std::vector<std::size_t> receivers;
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    if (suggestion.delta[p] > 0) receivers.push_back(p);
  }
  if (receivers.empty()) {
    throw InvalidArgument("distribute: suggestion has no receiving phase");
  }
  if (receivers.size() == kNumPhases) {
    throw InvalidArgument("distribute: suggestion has no releasing phase");
  }

  const auto& entries = change_vector.entries;
  std::vector<std::size_t> dest(entries.size(), receivers.back());
  if (receivers.size() == 2 && !entries.empty()) {
    std::vector<double> powers;
    powers.reserve(entries.size());
    for (const auto& e : entries) powers.push_back(e.power);
    const double first_target =
        static_cast<double>(suggestion.delta[receivers.front()]);
    const std::size_t n = points_to_move(first_target, powers);
    for (std::size_t j : selector(powers, n, first_target).indices) {
      dest[j] = receivers.front();
    }
  }

  BalancePlan plan;
  for (std::size_t j = 0; j < entries.size(); ++j) {
    const ChangeEntry& e = entries[j];
    plan.moves.push_back({e.source_phase, e.point_index, dest[j], e.power});
    plan.released_per_phase[e.source_phase] += e.power;
    plan.received_per_phase[dest[j]] += e.power;
  }
  return plan;
}

}  // namespace phasebal
