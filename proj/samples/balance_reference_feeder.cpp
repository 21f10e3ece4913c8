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

// Balances the bundled 50-point reference feeder and prints each iteration.

#include <iostream>

#include "phasebal/phasebal.hpp"

int main() {
  using namespace phasebal;

  const FeederSnapshot feeder = reference_feeder();
  const BalanceReport report = balance(feeder, BalancerConfig{});

  std::cout << "initial totals: " << report.initial_totals[0] << " "
            << report.initial_totals[1] << " " << report.initial_totals[2]
            << " (unbalance " << report.initial_unbalance << " kW)\n";
  for (const IterationRecord& it : report.iterations) {
    const auto& d = it.suggestion_corrected.delta;
    std::cout << "  change " << d[0] << " " << d[1] << " " << d[2] << ", "
              << it.plan.moves.size() << " points moved -> "
              << it.totals_after[0] << " " << it.totals_after[1] << " "
              << it.totals_after[2] << "\n";
  }
  std::cout << "status: " << to_string(report.status) << ", final unbalance "
            << report.final_unbalance << " kW\n";
  return 0;
}
