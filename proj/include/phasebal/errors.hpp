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
#include <stdexcept>
#include <string>

namespace phasebal {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value violates a type invariant (negative kW, bad membership geometry...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The fuzzy controller was asked about a load outside its input universe.
class OutOfUniverse : public Error {
 public:
  OutOfUniverse(double load, double lo, double hi, int phase = -1)
      : Error(Describe(load, lo, hi, phase)), load_(load), phase_(phase) {}

  double load() const { return load_; }
  // Zero-based phase index, or -1 when the error is not tied to a phase.
  int phase() const { return phase_; }

 private:
  static std::string Describe(double load, double lo, double hi, int phase) {
    std::string msg = "load " + std::to_string(load) + " kW";
    if (phase >= 0) msg += " on phase " + std::to_string(phase + 1);
    msg += " is outside the controller universe [" + std::to_string(lo) +
           ", " + std::to_string(hi) + "]";
    return msg;
  }

  double load_;
  int phase_;
};

// Malformed text input. Carries the 1-based line number of the offending line
// (0 when the problem is not attributable to a single line).
class ParseError : public Error {
 public:
  enum class Kind {
    kMissingHeader,
    kWrongColumnCount,
    kNonNumeric,
    kNegativeValue,
    kEmptyBody,
    kSyntax,
  };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : Error(Format(line, what)), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  static std::string Format(std::size_t line, const std::string& what) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ": " + what;
  }

  Kind kind_;
  std::size_t line_;
};

}  // namespace phasebal
