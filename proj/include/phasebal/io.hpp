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

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "phasebal/balancer.hpp"
#include "phasebal/embedded_data.hpp"
#include "phasebal/errors.hpp"
#include "phasebal/feeder.hpp"
#include "phasebal/format.hpp"
#include "phasebal/fuzzy.hpp"
#include "phasebal/planner.hpp"

namespace phasebal {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

inline bool parse_number(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Feeder CSV: header `phase1,phase2,phase3`, one load point per row. An empty
// cell means that phase has no point on this row (phases may differ in length).

inline FeederSnapshot parse_feeder_csv(std::string_view text) {
  using Kind = ParseError::Kind;
  const auto lines = detail::split_lines(text);
  if (lines.empty() ||
      detail::trim(lines.front()) != std::string_view("phase1,phase2,phase3")) {
    throw ParseError(Kind::kMissingHeader, 1,
                     "expected header 'phase1,phase2,phase3'");
  }
  std::array<FeederSnapshot::Phase, kNumPhases> phases;
  std::size_t rows = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = detail::trim(lines[i]);
    if (line.empty()) {
      throw ParseError(Kind::kWrongColumnCount, lineno,
                       "blank row; expected 3 fields");
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != kNumPhases) {
      throw ParseError(Kind::kWrongColumnCount, lineno,
                       "expected 3 fields, found " +
                           std::to_string(fields.size()));
    }
    bool any = false;
    for (std::size_t p = 0; p < kNumPhases; ++p) {
      const auto cell = detail::trim(fields[p]);
      if (cell.empty()) continue;
      double kw = 0.0;
      if (!detail::parse_number(cell, kw)) {
        throw ParseError(Kind::kNonNumeric, lineno,
                         "field " + std::to_string(p + 1) + " '" +
                             std::string(cell) + "' is not a number");
      }
      if (kw < 0.0) {
        throw ParseError(Kind::kNegativeValue, lineno,
                         "field " + std::to_string(p + 1) +
                             " is negative; loads must be >= 0 kW");
      }
      phases[p].push_back(kw);
      any = true;
    }
    if (!any) {
      throw ParseError(Kind::kWrongColumnCount, lineno, "row has no values");
    }
    ++rows;
  }
  if (rows == 0) {
    throw ParseError(Kind::kEmptyBody, lines.size() + 1,
                     "no load-point rows after the header");
  }
  return FeederSnapshot(std::move(phases));
}

inline std::string write_feeder_csv(const FeederSnapshot& snapshot) {
  std::string out = "phase1,phase2,phase3\n";
  std::size_t rows = 0;
  for (std::size_t p = 0; p < kNumPhases; ++p) {
    rows = std::max(rows, snapshot.phase(p).size());
  }
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t p = 0; p < kNumPhases; ++p) {
      if (p) out += ',';
      const auto pts = snapshot.phase(p);
      if (r < pts.size()) out += detail::format_number(pts[r]);
    }
    out += '\n';
  }
  return out;
}

inline FeederSnapshot reference_feeder() {
  return parse_feeder_csv(data::kReferenceFeederCsv);
}

// ---------------------------------------------------------------------------
// Controller text format:
//
//   # comment
//   variable <name> <min> <max>        first = input, second = output
//   term <label> <left> <apex> <right> belongs to the last variable
//   rule <input-label> -> <output-label>
//   resolution <samples>               optional, default 10001

inline FuzzyController parse_controller(std::string_view text) {
  using Kind = ParseError::Kind;
  struct VarDecl {
    std::string name;
    Universe universe;
    std::vector<TriangularMF> terms;
    std::size_t line = 0;
  };
  std::vector<VarDecl> vars;
  RuleSet rules;
  std::size_t resolution = FuzzyController::kDefaultResolution;

  const auto lines = detail::split_lines(text);
  auto number = [](std::string_view tok, std::size_t lineno) {
    double v = 0.0;
    if (!detail::parse_number(tok, v)) {
      throw ParseError(Kind::kNonNumeric, lineno,
                       "'" + std::string(tok) + "' is not a number");
    }
    return v;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    auto line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    const std::string_view kw = tok[0];
    try {
      if (kw == "variable") {
        if (tok.size() != 4) {
          throw ParseError(Kind::kSyntax, lineno,
                           "expected: variable <name> <min> <max>");
        }
        if (vars.size() == 2) {
          throw ParseError(Kind::kSyntax, lineno,
                           "only an input and an output variable are allowed");
        }
        vars.push_back({std::string(tok[1]),
                        {number(tok[2], lineno), number(tok[3], lineno)},
                        {},
                        lineno});
      } else if (kw == "term") {
        if (tok.size() != 5) {
          throw ParseError(Kind::kSyntax, lineno,
                           "expected: term <label> <left> <apex> <right>");
        }
        if (vars.empty()) {
          throw ParseError(Kind::kSyntax, lineno,
                           "term declared before any variable");
        }
        vars.back().terms.emplace_back(std::string(tok[1]),
                                       number(tok[2], lineno),
                                       number(tok[3], lineno),
                                       number(tok[4], lineno));
      } else if (kw == "rule") {
        if (tok.size() != 4 || tok[2] != "->") {
          throw ParseError(Kind::kSyntax, lineno,
                           "expected: rule <input-term> -> <output-term>");
        }
        rules.push_back({std::string(tok[1]), std::string(tok[3])});
      } else if (kw == "resolution") {
        const double v = tok.size() == 2 ? number(tok[1], lineno) : -1.0;
        if (v < 1.0 || v != std::floor(v)) {
          throw ParseError(Kind::kSyntax, lineno,
                           "expected: resolution <positive integer>");
        }
        resolution = static_cast<std::size_t>(v);
      } else {
        throw ParseError(Kind::kSyntax, lineno,
                         "unknown directive '" + std::string(kw) + "'");
      }
    } catch (const InvalidArgument& e) {
      throw ParseError(Kind::kSyntax, lineno, e.what());
    }
  }
  if (vars.size() != 2) {
    throw ParseError(Kind::kSyntax, 0,
                     "controller needs an input and an output variable");
  }
  try {
    LinguisticVariable input(vars[0].name, vars[0].universe,
                             std::move(vars[0].terms));
    LinguisticVariable output(vars[1].name, vars[1].universe,
                              std::move(vars[1].terms));
    return FuzzyController(std::move(input), std::move(output),
                           std::move(rules), resolution);
  } catch (const InvalidArgument& e) {
    throw ParseError(Kind::kSyntax, 0, std::string("invalid controller: ") +
                                           e.what());
  }
}

inline std::string write_controller(const FuzzyController& ctrl) {
  std::string out;
  for (const LinguisticVariable* v : {&ctrl.input(), &ctrl.output()}) {
    out += "variable " + v->name() + " " +
           detail::format_number(v->universe().min) + " " +
           detail::format_number(v->universe().max) + "\n";
    for (const auto& t : v->terms()) {
      out += "term " + t.label + " " + detail::format_number(t.left) + " " +
             detail::format_number(t.apex) + " " +
             detail::format_number(t.right) + "\n";
    }
  }
  for (const auto& r : ctrl.rules()) {
    out += "rule " + r.if_term + " -> " + r.then_term + "\n";
  }
  out += "resolution " + std::to_string(ctrl.integration_resolution()) + "\n";
  return out;
}

inline FuzzyController embedded_default_controller() {
  return parse_controller(data::kDefaultControllerText);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// JSON report.

namespace detail {

inline nlohmann::ordered_json kw_value(double v) {
  if (v == std::floor(v) && std::abs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

inline nlohmann::ordered_json unbalance_value(double v) {
  const double r = std::round(v * 100.0) / 100.0;
  return kw_value(r);
}

inline nlohmann::ordered_json kw_array(const PhaseVector& v) {
  auto a = nlohmann::ordered_json::array();
  for (double x : v) a.push_back(kw_value(x));
  return a;
}

inline nlohmann::ordered_json int_array(const ChangeTriple& v) {
  auto a = nlohmann::ordered_json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const BalanceReport& report) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["status"] = std::string(to_string(report.status));
  if (!report.reason.empty()) doc["reason"] = report.reason;
  doc["initial_totals"] = detail::kw_array(report.initial_totals.totals);
  doc["initial_unbalance"] = detail::unbalance_value(report.initial_unbalance);
  auto iterations = ordered_json::array();
  for (const IterationRecord& rec : report.iterations) {
    ordered_json it;
    it["totals_before"] = detail::kw_array(rec.totals_before.totals);
    it["fuzzy_raw"] = detail::int_array(rec.suggestion_raw);
    it["avg_error"] = rec.average_error;
    it["error_vector"] = detail::int_array(rec.error_vector);
    it["fuzzy_corrected"] = detail::int_array(rec.suggestion_corrected.delta);
    auto moves = ordered_json::array();
    for (const Move& mv : rec.plan.moves) {
      ordered_json m;
      m["from"] = mv.source_phase + 1;
      m["index"] = mv.point_index + 1;
      m["to"] = mv.dest_phase + 1;
      m["kw"] = detail::kw_value(mv.power);
      moves.push_back(std::move(m));
    }
    it["moves"] = std::move(moves);
    it["totals_after"] = detail::kw_array(rec.totals_after.totals);
    it["unbalance_after"] = detail::unbalance_value(rec.unbalance_after);
    if (rec.infeasible_reason) it["infeasible_reason"] = *rec.infeasible_reason;
    iterations.push_back(std::move(it));
  }
  doc["iterations"] = std::move(iterations);
  doc["final_totals"] = detail::kw_array(report.final_totals.totals);
  doc["final_unbalance"] = detail::unbalance_value(report.final_unbalance);
  return doc;
}

inline std::string write_report(const BalanceReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

// Recovers the per-iteration plans recorded in a JSON report, so they can be
// replayed with apply_plan against the original feeder.
inline std::vector<BalancePlan> plans_from_report(std::string_view json_text) {
  std::vector<BalancePlan> plans;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    for (const auto& it : doc.at("iterations")) {
      BalancePlan plan;
      for (const auto& m : it.at("moves")) {
        Move mv;
        mv.source_phase = m.at("from").get<std::size_t>() - 1;
        mv.point_index = m.at("index").get<std::size_t>() - 1;
        mv.dest_phase = m.at("to").get<std::size_t>() - 1;
        mv.power = m.at("kw").get<double>();
        plan.released_per_phase.at(mv.source_phase) += mv.power;
        plan.received_per_phase.at(mv.dest_phase) += mv.power;
        plan.moves.push_back(mv);
      }
      plans.push_back(std::move(plan));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseError::Kind::kSyntax, 0,
                     std::string("malformed report: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ParseError(ParseError::Kind::kSyntax, 0,
                     std::string("malformed report: ") + e.what());
  }
  return plans;
}

// One CSV row per move: iteration,from,index,to,kw (1-based).
inline std::string write_moves_csv(const BalanceReport& report) {
  std::string out = "iteration,from,index,to,kw\n";
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    for (const Move& mv : report.iterations[i].plan.moves) {
      out += std::to_string(i + 1) + "," + std::to_string(mv.source_phase + 1) +
             "," + std::to_string(mv.point_index + 1) + "," +
             std::to_string(mv.dest_phase + 1) + "," +
             detail::format_number(mv.power) + "\n";
    }
  }
  return out;
}

}  // namespace phasebal
