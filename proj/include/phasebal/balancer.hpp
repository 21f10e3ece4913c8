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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phasebal/errors.hpp"
#include "phasebal/feeder.hpp"
#include "phasebal/fuzzy.hpp"
#include "phasebal/planner.hpp"

namespace phasebal {

struct ErrorCorrection {
  std::int64_t average_error = 0;
  ChangeTriple error_vector{};
  ChangeTriple corrected{};
};

// Spreads the residual of the rounded fuzzy output over the three phases so
// the corrected change sums to zero.
inline ErrorCorrection error_correct(const ChangeTriple& raw) {
  const std::int64_t sum = raw[0] + raw[1] + raw[2];
  ErrorCorrection ec;
  ec.average_error = round_kw(static_cast<double>(sum) / 3.0);
  ec.error_vector = {ec.average_error, ec.average_error,
                     sum - 2 * ec.average_error};
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    ec.corrected[p] = raw[p] - ec.error_vector[p];
  }
  return ec;
}

// Moves each planned point to the end of its destination phase. Points that
// stay keep their relative order.
inline FeederSnapshot apply_plan(const FeederSnapshot& snapshot,
                                 const BalancePlan& plan) {
  std::array<std::vector<bool>, kNumPhases> taken;
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    taken[p].assign(snapshot.phase(p).size(), false);
  }
  for (const Move& mv : plan.moves) {
    if (mv.source_phase >= kNumPhases || mv.dest_phase >= kNumPhases) {
      throw InvalidArgument("apply_plan: phase index out of range");
    }
    if (mv.source_phase == mv.dest_phase) {
      throw InvalidArgument("apply_plan: move keeps point on its own phase");
    }
    const auto src = snapshot.phase(mv.source_phase);
    const std::string where = "phase " + std::to_string(mv.source_phase + 1) +
                              " point " + std::to_string(mv.point_index + 1);
    if (mv.point_index >= src.size()) {
      throw InvalidArgument("apply_plan: dangling index " + where);
    }
    if (taken[mv.source_phase][mv.point_index]) {
      throw InvalidArgument("apply_plan: " + where + " moved twice");
    }
    if (src[mv.point_index] != mv.power) {
      throw InvalidArgument("apply_plan: " + where +
                            " does not carry the planned load");
    }
    taken[mv.source_phase][mv.point_index] = true;
  }

  std::array<FeederSnapshot::Phase, kNumPhases> phases;
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    const auto src = snapshot.phase(p);
    for (std::size_t k = 0; k < src.size(); ++k) {
      if (!taken[p][k]) phases[p].push_back(src[k]);
    }
  }
  for (const Move& mv : plan.moves) {
    phases[mv.dest_phase].push_back(mv.power);
  }
  return FeederSnapshot(std::move(phases));
}

struct BalancerConfig {
  double unbalance_threshold = 10.0;  // kW
  std::size_t max_iterations = 10;
  FuzzyController controller = default_controller();
  double integer_scale = 1.0;

  void validate() const {
    if (!(unbalance_threshold > 0.0)) {
      throw InvalidArgument("unbalance threshold must be positive");
    }
    if (max_iterations < 1) {
      throw InvalidArgument("max_iterations must be at least 1");
    }
    if (!(integer_scale > 0.0)) {
      throw InvalidArgument("integer scale must be positive");
    }
  }
};

struct IterationRecord {
  PhaseTotals totals_before;
  double unbalance_before = 0.0;
  ChangeTriple suggestion_raw{};
  std::int64_t average_error = 0;
  ChangeTriple error_vector{};
  ChangeSuggestion suggestion_corrected;
  BalancePlan plan;
  // Set when the corrected suggestion could not be executed.
  std::optional<std::string> infeasible_reason;
  PhaseTotals totals_after;
  double unbalance_after = 0.0;
};

enum class BalanceStatus {
  kBalanced,
  kAlreadyBalanced,
  kInfeasible,
  kIterationCap,
  kOverCapacity,
};

inline std::string_view to_string(BalanceStatus s) {
  switch (s) {
    case BalanceStatus::kBalanced:
      return "balanced";
    case BalanceStatus::kAlreadyBalanced:
      return "already-balanced";
    case BalanceStatus::kInfeasible:
      return "infeasible";
    case BalanceStatus::kIterationCap:
      return "iteration-cap";
    case BalanceStatus::kOverCapacity:
      return "over-capacity";
  }
  return "unknown";
}

struct BalanceReport {
  FeederSnapshot initial;
  PhaseTotals initial_totals;
  double initial_unbalance = 0.0;
  std::vector<IterationRecord> iterations;
  BalanceStatus status = BalanceStatus::kAlreadyBalanced;
  std::string reason;  // non-empty for infeasible and over-capacity
  FeederSnapshot final_snapshot;
  PhaseTotals final_totals;
  double final_unbalance = 0.0;
};

// Runs threshold gate, fuzzy suggestion, error correction, planning and
// execution until the feeder is balanced or a terminal condition is hit.
// The subset selector used by the planner can be replaced (tests swap in an
// exhaustive one); by default it is the lattice DP at config.integer_scale.
template <SubsetSelector Selector>
BalanceReport balance(const FeederSnapshot& snapshot,
                      const BalancerConfig& config, const Selector& selector) {
  config.validate();
  const Universe& universe = config.controller.input().universe();

  BalanceReport report;
  report.initial = snapshot;
  report.initial_totals = phase_totals(snapshot);
  report.initial_unbalance = avg_unbalance(report.initial_totals);

  FeederSnapshot current = snapshot;
  for (std::size_t iter = 0;; ++iter) {
    const PhaseTotals totals = phase_totals(current);
    const double unbalance = avg_unbalance(totals);
    if (unbalance < config.unbalance_threshold) {
      report.status = iter == 0 ? BalanceStatus::kAlreadyBalanced
                                : BalanceStatus::kBalanced;
      break;
    }
    if (iter == config.max_iterations) {
      report.status = BalanceStatus::kIterationCap;
      break;
    }
    std::optional<std::size_t> outside;
    for (std::size_t p = 0; p < kNumPhases && !outside; ++p) {
      if (!universe.contains(totals[p])) outside = p;
    }
    if (outside) {
      report.status = BalanceStatus::kOverCapacity;
      report.reason = OutOfUniverse(totals[*outside], universe.min,
                                    universe.max, static_cast<int>(*outside))
                          .what();
      break;
    }

    IterationRecord rec;
    rec.totals_before = totals;
    rec.unbalance_before = unbalance;
    rec.suggestion_raw = suggest_changes(config.controller, totals);
    const ErrorCorrection ec = error_correct(rec.suggestion_raw);
    rec.average_error = ec.average_error;
    rec.error_vector = ec.error_vector;
    rec.suggestion_corrected = {ec.corrected, true};

    const Feasibility feas = feasibility_check(current, rec.suggestion_corrected);
    if (!feas) {
      rec.infeasible_reason = feas.reason;
      rec.totals_after = totals;
      rec.unbalance_after = unbalance;
      report.iterations.push_back(std::move(rec));
      report.status = BalanceStatus::kInfeasible;
      report.reason = feas.reason;
      break;
    }

    const ChangeVector cv = determine(current, rec.suggestion_corrected, selector);
    rec.plan = distribute(cv, rec.suggestion_corrected, selector);
    current = apply_plan(current, rec.plan);
    rec.totals_after = phase_totals(current);
    rec.unbalance_after = avg_unbalance(rec.totals_after);
    report.iterations.push_back(std::move(rec));
  }

  report.final_snapshot = current;
  report.final_totals = phase_totals(current);
  report.final_unbalance = avg_unbalance(report.final_totals);
  return report;
}

inline BalanceReport balance(const FeederSnapshot& snapshot,
                             const BalancerConfig& config) {
  return balance(snapshot, config, DpSubsetSelector{config.integer_scale});
}

}  // namespace phasebal
