// Copyright 2026 The qmf Authors
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

#ifndef QMF_MACHINE_HPP
#define QMF_MACHINE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmf/amplitude.hpp"
#include "qmf/errors.hpp"

namespace qmf {

inline const std::string kLeftEnd = "#";
inline const std::string kRightEnd = "$";

/// Reserved padding symbols of the QTM -> QMCM construction.
inline const std::vector<std::string>& reserved_padding() {
  static const std::vector<std::string> p{"B2", "B3", "B4"};
  return p;
}

inline bool is_reserved_symbol(const std::string& s) {
  return s == kLeftEnd || s == kRightEnd ||
         std::find(reserved_padding().begin(), reserved_padding().end(), s) != reserved_padding().end();
}

/// Finite control shared by the counter and stack families.
struct Control {
  std::vector<std::string> states;
  int initial = 0;
  int accept = 0;
  int reject = 0;
  std::vector<std::string> input_alphabet;
  std::vector<std::string> padding;  // subset of reserved_padding()
  bool complete_with_identity = false;

  int state_index(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw DomainError("unknown state '" + name + "'");
    return static_cast<int>(it - states.begin());
  }

  /// Symbols the machine may read: #, $, the input alphabet and declared padding.
  bool readable(const std::string& s) const {
    return s == kLeftEnd || s == kRightEnd ||
           std::find(input_alphabet.begin(), input_alphabet.end(), s) != input_alphabet.end() ||
           std::find(padding.begin(), padding.end(), s) != padding.end();
  }

  std::vector<std::string> readable_symbols() const {
    std::vector<std::string> v{kLeftEnd};
    v.insert(v.end(), input_alphabet.begin(), input_alphabet.end());
    v.insert(v.end(), padding.begin(), padding.end());
    v.push_back(kRightEnd);
    return v;
  }
};

/// Inclusive integer interval; `hi` absent means unbounded above.
struct Range {
  std::int64_t lo = 0;
  std::optional<std::int64_t> hi;

  bool contains(std::int64_t v) const { return v >= lo && (!hi || v <= *hi); }
  bool bounded() const { return hi.has_value(); }
  friend bool operator==(const Range&, const Range&) = default;
};

struct Variable {
  std::string name;
  Range range;
  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Reference to a source-bound variable plus a constant offset.
struct VarRef {
  std::string name;
  std::int64_t offset = 0;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

using CounterPattern = std::variant<std::int64_t, Variable>;
using CounterTarget = std::variant<std::int64_t, VarRef>;

struct CounterRule {
  int state = 0;
  std::string symbol;
  std::vector<CounterPattern> source;
  int target_state = 0;
  std::vector<CounterTarget> target;
  Amplitude amplitude{1.0, 0.0};
};

/// Stack pattern: literal top segment (top-first). When `top` ends in Z0 the
/// stack must equal it exactly; otherwise the rest below `top` is free, with
/// the total height (symbols above Z0) constrained to `height`.
struct StackPattern {
  std::vector<std::int64_t> top;
  Range height{0, std::nullopt};

  bool exact() const { return !top.empty() && top.back() == 0; }
  friend bool operator==(const StackPattern&, const StackPattern&) = default;
};

/// Replacement for the matched top segment; the rest is carried over.
struct StackTarget {
  std::vector<std::int64_t> top;
  friend bool operator==(const StackTarget&, const StackTarget&) = default;
};

struct StackRule {
  int state = 0;
  std::string symbol;
  std::vector<StackPattern> source;
  int target_state = 0;
  std::vector<StackTarget> target;
  Amplitude amplitude{1.0, 0.0};
};

struct CounterMachine {
  Control control;
  int counters = 1;
  std::vector<std::int64_t> allowed_deltas{-1, 0, 1};
  std::vector<CounterRule> rules;

  std::int64_t max_abs_delta() const {
    std::int64_t m = 0;
    for (auto d : allowed_deltas) m = std::max(m, d < 0 ? -d : d);
    return m;
  }
};

struct StackMachine {
  Control control;
  int stacks = 1;
  std::vector<std::string> stack_alphabet{"Z0"};  // index 0 is the bottom symbol
  std::vector<StackRule> rules;

  std::int64_t symbol_index(const std::string& s) const {
    auto it = std::find(stack_alphabet.begin(), stack_alphabet.end(), s);
    if (it == stack_alphabet.end()) throw DomainError("unknown stack symbol '" + s + "'");
    return it - stack_alphabet.begin();
  }
};

enum class Move : int { L = -1, R = 1 };

struct TapeRule {
  int state = 0;
  int read = 0;   // tape symbol index, 0 is the blank
  int write = 0;
  int next = 0;
  Move move = Move::R;
  Amplitude amplitude{1.0, 0.0};
};

struct TuringMachine {
  std::vector<std::string> states;
  int initial = 0;
  int accept = 0;
  int reject = 0;
  std::vector<std::string> tape_alphabet{"B"};  // index 0 is the blank
  std::vector<TapeRule> rules;

  /// Input alphabet: tape alphabet without the blank.
  std::vector<std::string> input_alphabet() const {
    return {tape_alphabet.begin() + 1, tape_alphabet.end()};
  }
  int symbol_index(const std::string& s) const {
    auto it = std::find(tape_alphabet.begin(), tape_alphabet.end(), s);
    if (it == tape_alphabet.end()) throw DomainError("unknown tape symbol '" + s + "'");
    return static_cast<int>(it - tape_alphabet.begin());
  }
  int state_index(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw DomainError("unknown state '" + name + "'");
    return static_cast<int>(it - states.begin());
  }
};

using MachineDescription = std::variant<TuringMachine, CounterMachine, StackMachine>;

/// Truncation window plus numeric tolerance.
struct SimulationBounds {
  std::int64_t n_max = 16;   // max counter value
  std::int64_t d_max = 8;    // max stack height above Z0
  std::int64_t radius = 4;   // tape window [-radius, radius]
  double tol = kDefaultTol;

  void check() const {
    if (n_max <= 0 || d_max <= 0 || radius <= 0) throw DomainError("bounds must be positive");
    if (!(tol > 0.0 && tol < 1e-3)) throw DomainError("tol must lie in (0, 1e-3)");
  }
};

}  // namespace qmf

#endif  // QMF_MACHINE_HPP
