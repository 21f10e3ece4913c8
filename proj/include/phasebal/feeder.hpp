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

#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phasebal/errors.hpp"

namespace phasebal {

inline constexpr std::size_t kNumPhases = 3;

// Per-phase kW values (phase totals, change vectors in kW, ...).
using PhaseVector = std::array<double, kNumPhases>;

// Three phase conductors, each carrying a list of single-phase load points
// (kW). Immutable once constructed.
class FeederSnapshot {
 public:
  using Phase = std::vector<double>;

  FeederSnapshot() = default;

  explicit FeederSnapshot(std::array<Phase, kNumPhases> phases)
      : phases_(std::move(phases)) {
    double total = 0.0;
    for (std::size_t p = 0; p < kNumPhases; ++p) {
      for (std::size_t k = 0; k < phases_[p].size(); ++k) {
        const double kw = phases_[p][k];
        if (!std::isfinite(kw) || kw < 0.0) {
          throw InvalidArgument("phase " + std::to_string(p + 1) + " point " +
                                std::to_string(k + 1) +
                                ": load must be a finite non-negative kW value");
        }
        total += kw;
      }
    }
    if (!std::isfinite(total)) {
      throw InvalidArgument("total system load is not finite");
    }
  }

  FeederSnapshot(Phase phase1, Phase phase2, Phase phase3)
      : FeederSnapshot(std::array<Phase, kNumPhases>{
            std::move(phase1), std::move(phase2), std::move(phase3)}) {}

  std::span<const double> phase(std::size_t p) const { return phases_.at(p); }
  const std::array<Phase, kNumPhases>& phases() const { return phases_; }

  std::size_t point_count() const {
    return phases_[0].size() + phases_[1].size() + phases_[2].size();
  }

  friend bool operator==(const FeederSnapshot&, const FeederSnapshot&) = default;

 private:
  std::array<Phase, kNumPhases> phases_;
};

struct PhaseTotals {
  PhaseVector totals{};

  double operator[](std::size_t p) const { return totals[p]; }
  double system_total() const { return totals[0] + totals[1] + totals[2]; }

  friend bool operator==(const PhaseTotals&, const PhaseTotals&) = default;
};

inline PhaseTotals phase_totals(const FeederSnapshot& snapshot) {
  PhaseTotals out;
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    const auto points = snapshot.phase(p);
    out.totals[p] = std::accumulate(points.begin(), points.end(), 0.0);
  }
  return out;
}

// Mean pairwise absolute difference of the three phase totals.
inline double avg_unbalance(const PhaseTotals& t) {
  return (std::abs(t[0] - t[1]) + std::abs(t[1] - t[2]) +
          std::abs(t[2] - t[0])) /
         3.0;
}

inline double avg_unbalance(const FeederSnapshot& snapshot) {
  return avg_unbalance(phase_totals(snapshot));
}

struct Branch {
  double r = 0.0;      // ohm
  double p = 0.0;      // kW
  double q = 0.0;      // kVAr
  double v_mag = 1.0;  // V
};

// Branch data for the loss diagnostic. Validated at construction.
class BranchParams {
 public:
  BranchParams() = default;

  explicit BranchParams(std::vector<Branch> branches)
      : branches_(std::move(branches)) {
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      const Branch& b = branches_[i];
      if (!(b.r >= 0.0)) {
        throw InvalidArgument("branch " + std::to_string(i + 1) +
                              ": resistance must be non-negative");
      }
      if (!(b.v_mag > 0.0)) {
        throw InvalidArgument("branch " + std::to_string(i + 1) +
                              ": voltage magnitude must be positive");
      }
    }
  }

  std::span<const Branch> branches() const { return branches_; }

 private:
  std::vector<Branch> branches_;
};

// Sum of r * (P^2 + Q^2) / |V|^2 over all branches.
inline double total_power_loss(const BranchParams& params) {
  double loss = 0.0;
  for (const Branch& b : params.branches()) {
    loss += b.r * (b.p * b.p + b.q * b.q) / (b.v_mag * b.v_mag);
  }
  return loss;
}

}  // namespace phasebal
