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
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phasebal/balancer.hpp"
#include "phasebal/errors.hpp"
#include "phasebal/io.hpp"

namespace phasebal {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotBalanced = 2;

inline int exit_code(BalanceStatus status) {
  switch (status) {
    case BalanceStatus::kBalanced:
    case BalanceStatus::kAlreadyBalanced:
      return kExitOk;
    case BalanceStatus::kInfeasible:
    case BalanceStatus::kIterationCap:
    case BalanceStatus::kOverCapacity:
      return kExitNotBalanced;
  }
  return kExitNotBalanced;
}

namespace detail {

inline std::string fixed2(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(2) << v;
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

inline FuzzyController load_controller(const std::string& path) {
  if (path.empty()) return embedded_default_controller();
  return parse_controller(read_file(path));
}

}  // namespace detail

// Entry point shared by the phasebal binary and the tests. args[0] is the
// program name.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"Three-phase feeder load balancing with a fuzzy controller",
               "phasebal"};
  app.require_subcommand(1);

  std::string input, controller, report_path, moves_path, surface_out;
  double threshold = 10.0, load = 0.0, step = 1.0, scale = 1.0;
  std::size_t max_iter = 10;

  auto* bal = app.add_subcommand("balance", "Balance a feeder CSV");
  bal->add_option("--input", input, "Feeder CSV")->required();
  bal->add_option("--controller", controller, "Controller definition file");
  bal->add_option("--threshold", threshold, "Unbalance threshold (kW)")
      ->capture_default_str();
  bal->add_option("--max-iter", max_iter, "Iteration cap")
      ->capture_default_str();
  bal->add_option("--scale", scale, "Integer scale for subset selection")
      ->capture_default_str();
  bal->add_option("--report", report_path, "Write JSON report here");
  bal->add_option("--emit-moves", moves_path, "Write move list CSV here");

  auto* inf = app.add_subcommand("infer", "Defuzzified change for one load");
  inf->add_option("--controller", controller, "Controller definition file");
  inf->add_option("--load", load, "Phase load (kW)")->required();

  auto* unb = app.add_subcommand("unbalance", "Average unbalance of a feeder");
  unb->add_option("--input", input, "Feeder CSV")->required();

  auto* surf = app.add_subcommand("surface", "Sample the controller curve");
  surf->add_option("--controller", controller, "Controller definition file");
  surf->add_option("--step", step, "Sampling step (kW)")->capture_default_str();
  surf->add_option("--out", surface_out, "Output CSV")->required();

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(),
                                args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "phasebal: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*bal) {
      BalancerConfig cfg{threshold, max_iter, detail::load_controller(controller),
                         scale};
      const FeederSnapshot feeder = parse_feeder_csv(read_file(input));
      const BalanceReport report = balance(feeder, cfg);
      if (!report_path.empty()) {
        detail::write_text_file(report_path, write_report(report));
      }
      if (!moves_path.empty()) {
        detail::write_text_file(moves_path, write_moves_csv(report));
      }
      out << "status: " << to_string(report.status) << "\n"
          << "initial unbalance: " << detail::fixed2(report.initial_unbalance)
          << " kW\n"
          << "final unbalance: " << detail::fixed2(report.final_unbalance)
          << " kW\n"
          << "iterations: " << report.iterations.size() << "\n";
      if (!report.reason.empty()) out << "reason: " << report.reason << "\n";
      return exit_code(report.status);
    }
    if (*inf) {
      const FuzzyController ctrl = detail::load_controller(controller);
      out << detail::fixed2(infer_change(ctrl, load)) << "\n";
      return kExitOk;
    }
    if (*unb) {
      const FeederSnapshot feeder = parse_feeder_csv(read_file(input));
      out << detail::fixed2(avg_unbalance(feeder)) << "\n";
      return kExitOk;
    }
    if (*surf) {
      if (!(step > 0.0)) throw InvalidArgument("--step must be positive");
      const FuzzyController ctrl = detail::load_controller(controller);
      const Universe& u = ctrl.input().universe();
      std::string csv = "load,change\n";
      const auto count =
          static_cast<std::size_t>(std::floor((u.max - u.min) / step + 1e-9));
      for (std::size_t i = 0; i <= count; ++i) {
        const double x = std::min(u.max, u.min + static_cast<double>(i) * step);
        csv += detail::format_number(x) + "," +
               detail::format_number(infer_change(ctrl, x)) + "\n";
      }
      detail::write_text_file(surface_out, csv);
      out << "wrote " << count + 1 << " samples to " << surface_out << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "phasebal: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace phasebal
