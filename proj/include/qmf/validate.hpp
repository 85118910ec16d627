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

#ifndef QMF_VALIDATE_HPP
#define QMF_VALIDATE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qmf/config.hpp"
#include "qmf/machine.hpp"

namespace qmf {

/// One structural problem. `rule` is -1 for machine-level problems.
struct Violation {
  long rule = -1;
  std::string clause;
  std::string message;
};

namespace detail {

inline void check_control(const Control& c, std::vector<Violation>& out) {
  const auto n = static_cast<int>(c.states.size());
  if (n == 0) out.push_back({-1, "states", "machine has no states"});
  for (int s : {c.initial, c.accept, c.reject}) {
    if (s < 0 || s >= n) out.push_back({-1, "states", "distinguished state index out of range"});
  }
  std::set<std::string> seen;
  for (const auto& s : c.states) {
    if (!seen.insert(s).second) out.push_back({-1, "states", "duplicate state '" + s + "'"});
  }
  seen.clear();
  for (const auto& a : c.input_alphabet) {
    if (is_reserved_symbol(a)) out.push_back({-1, "reserved-symbol", "input symbol '" + a + "' is reserved"});
    if (a.empty()) out.push_back({-1, "symbol", "empty input symbol"});
    if (!seen.insert(a).second) out.push_back({-1, "symbol", "duplicate input symbol '" + a + "'"});
  }
  for (const auto& p : c.padding) {
    const auto& r = reserved_padding();
    if (std::find(r.begin(), r.end(), p) == r.end()) {
      out.push_back({-1, "reserved-symbol", "'" + p + "' is not a padding symbol (B2, B3, B4)"});
    }
  }
}

inline void check_rule_head(const Control& c, long i, int state, int target_state, const std::string& symbol,
                            Amplitude amp, std::vector<Violation>& out) {
  const auto n = static_cast<int>(c.states.size());
  if (state < 0 || state >= n || target_state < 0 || target_state >= n) {
    out.push_back({i, "states", "rule refers to an unknown state"});
  }
  if (!c.readable(symbol)) out.push_back({i, "symbol", "rule reads undeclared symbol '" + symbol + "'"});
  if (!is_finite(amp)) out.push_back({i, "amplitude", "amplitude is not finite"});
}

/// Every value of the closed interval [lo, hi] lies in `d`.
inline bool interval_within(std::int64_t lo, std::int64_t hi, const std::set<std::int64_t>& d) {
  if (hi - lo > static_cast<std::int64_t>(d.size())) return false;
  for (auto v = lo; v <= hi; ++v) {
    if (!d.count(v)) return false;
  }
  return true;
}

}  // namespace detail

inline std::vector<Violation> validate(const CounterMachine& m) {
  std::vector<Violation> out;
  detail::check_control(m.control, out);
  if (m.counters < 1) out.push_back({-1, "counters", "need at least one counter"});
  const std::set<std::int64_t> d(m.allowed_deltas.begin(), m.allowed_deltas.end());
  if (!d.count(0)) out.push_back({-1, "allowed-deltas", "allowed deltas must contain 0"});

  for (std::size_t ri = 0; ri < m.rules.size(); ++ri) {
    const auto& r = m.rules[ri];
    const auto i = static_cast<long>(ri);
    detail::check_rule_head(m.control, i, r.state, r.target_state, r.symbol, r.amplitude, out);
    const auto k = static_cast<std::size_t>(m.counters);
    if (r.source.size() != k || r.target.size() != k) {
      out.push_back({i, "arity", "rule must have one source and one target entry per counter"});
      continue;
    }
    std::map<std::string, std::pair<std::size_t, Range>> vars;
    for (std::size_t j = 0; j < k; ++j) {
      if (const auto* lit = std::get_if<std::int64_t>(&r.source[j])) {
        if (*lit < 0) out.push_back({i, "nonnegative", "negative source literal on counter " + std::to_string(j)});
        continue;
      }
      const auto& v = std::get<Variable>(r.source[j]);
      if (v.range.lo < 0) out.push_back({i, "nonnegative", "variable '" + v.name + "' ranges below 0"});
      if (v.range.hi && *v.range.hi < v.range.lo) out.push_back({i, "range", "empty range for '" + v.name + "'"});
      if (!vars.emplace(v.name, std::make_pair(j, v.range)).second) {
        out.push_back({i, "unbound-variable", "variable '" + v.name + "' bound twice"});
      }
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto& tgt = r.target[j];
      // Source value interval on coordinate j.
      std::int64_t slo = 0;
      std::optional<std::int64_t> shi;
      if (const auto* lit = std::get_if<std::int64_t>(&r.source[j])) {
        slo = *lit;
        shi = *lit;
      } else {
        const auto& rg = std::get<Variable>(r.source[j]).range;
        slo = rg.lo;
        shi = rg.hi;
      }
      if (const auto* lit = std::get_if<std::int64_t>(&tgt)) {
        if (*lit < 0) out.push_back({i, "nonnegative", "negative target literal on counter " + std::to_string(j)});
        if (!shi || !detail::interval_within(*lit - *shi, *lit - slo, d)) {
          out.push_back({i, "allowed-deltas", "counter " + std::to_string(j) + " change not in allowed deltas"});
        }
        continue;
      }
      const auto& ref = std::get<VarRef>(tgt);
      auto it = vars.find(ref.name);
      if (it == vars.end()) {
        out.push_back({i, "unbound-variable", "target uses unbound variable '" + ref.name + "'"});
        continue;
      }
      const auto& [coord, rg] = it->second;
      if (rg.lo + ref.offset < 0) {
        out.push_back({i, "nonnegative", "target '" + ref.name + "' can go below 0 on counter " + std::to_string(j)});
      }
      bool ok = false;
      if (coord == j) {
        ok = d.count(ref.offset) != 0;
      } else if (rg.hi && shi) {
        ok = detail::interval_within(rg.lo + ref.offset - *shi, *rg.hi + ref.offset - slo, d);
      }
      if (!ok) out.push_back({i, "allowed-deltas", "counter " + std::to_string(j) + " change not in allowed deltas"});
    }
  }
  return out;
}

namespace detail {

inline bool has_interior_bottom(const std::vector<std::int64_t>& s, bool exact) {
  const auto n = exact ? s.size() - 1 : s.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] == kBottomSymbol) return true;
  }
  return false;
}

/// Definition-1 legality for one stack: equal, push one X, or pop one X.
inline bool legal_stack_change(const std::vector<std::int64_t>& src, const std::vector<std::int64_t>& dst) {
  if (src == dst) return true;
  if (dst.size() == src.size() + 1) {
    return dst[0] != kBottomSymbol && std::equal(src.begin(), src.end(), dst.begin() + 1);
  }
  if (src.size() == dst.size() + 1) {
    return src[0] != kBottomSymbol && std::equal(dst.begin(), dst.end(), src.begin() + 1);
  }
  return false;
}

}  // namespace detail

inline std::vector<Violation> validate(const StackMachine& m) {
  std::vector<Violation> out;
  detail::check_control(m.control, out);
  if (m.stacks < 1) out.push_back({-1, "stacks", "need at least one stack"});
  if (m.stack_alphabet.empty()) out.push_back({-1, "stack-alphabet", "stack alphabet must contain Z0"});
  const auto g = static_cast<std::int64_t>(m.stack_alphabet.size());

  for (std::size_t ri = 0; ri < m.rules.size(); ++ri) {
    const auto& r = m.rules[ri];
    const auto i = static_cast<long>(ri);
    detail::check_rule_head(m.control, i, r.state, r.target_state, r.symbol, r.amplitude, out);
    const auto k = static_cast<std::size_t>(m.stacks);
    if (r.source.size() != k || r.target.size() != k) {
      out.push_back({i, "arity", "rule must have one source and one target entry per stack"});
      continue;
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto& src = r.source[j];
      const auto& dst = r.target[j].top;
      const auto sj = " on stack " + std::to_string(j);
      bool symbols_ok = true;
      for (const auto* s : {&src.top, &dst}) {
        for (auto x : *s) symbols_ok = symbols_ok && x >= 0 && x < g;
      }
      if (!symbols_ok) {
        out.push_back({i, "symbol", "unknown stack symbol" + sj});
        continue;
      }
      const bool exact = src.exact();
      const bool dst_exact = !dst.empty() && dst.back() == kBottomSymbol;
      if (detail::has_interior_bottom(src.top, exact) || detail::has_interior_bottom(dst, dst_exact)) {
        out.push_back({i, "z0-clause", "Z0 may only appear as the bottom symbol" + sj});
        continue;
      }
      if (exact != dst_exact) {
        out.push_back({i, "z0-clause", "Z0 may not be popped or pushed" + sj});
        continue;
      }
      if (!exact) {
        if (src.height.lo < static_cast<std::int64_t>(src.top.size()) ||
            (src.height.hi && *src.height.hi < src.height.lo)) {
          out.push_back({i, "range", "height range inconsistent with matched top" + sj});
        }
      }
      if (!detail::legal_stack_change(src.top, dst)) {
        const bool bottom_only = exact && src.top.size() == 1;
        out.push_back({i, bottom_only ? "z0-clause" : "legality",
                       bottom_only ? "from Z0 only Z0 or Z.Z0 may follow" + sj
                                   : "stack change is not keep, push one or pop one" + sj});
      }
    }
  }
  return out;
}

inline std::vector<Violation> validate(const TuringMachine& m) {
  std::vector<Violation> out;
  const auto n = static_cast<int>(m.states.size());
  if (n == 0) out.push_back({-1, "states", "machine has no states"});
  for (int s : {m.initial, m.accept, m.reject}) {
    if (s < 0 || s >= n) out.push_back({-1, "states", "distinguished state index out of range"});
  }
  if (m.tape_alphabet.empty()) out.push_back({-1, "blank", "tape alphabet must contain the blank"});
  for (const auto& a : m.tape_alphabet) {
    if (is_reserved_symbol(a)) out.push_back({-1, "reserved-symbol", "tape symbol '" + a + "' is reserved"});
  }
  const auto g = static_cast<int>(m.tape_alphabet.size());
  for (std::size_t ri = 0; ri < m.rules.size(); ++ri) {
    const auto& r = m.rules[ri];
    const auto i = static_cast<long>(ri);
    if (r.state < 0 || r.state >= n || r.next < 0 || r.next >= n) {
      out.push_back({i, "states", "rule refers to an unknown state"});
    }
    if (r.read < 0 || r.read >= g || r.write < 0 || r.write >= g) {
      out.push_back({i, "symbol", "rule uses an unknown tape symbol"});
    }
    if (r.move != Move::L && r.move != Move::R) out.push_back({i, "direction", "head must move L or R"});
    if (!is_finite(r.amplitude)) out.push_back({i, "amplitude", "amplitude is not finite"});
  }
  return out;
}

inline std::vector<Violation> validate(const MachineDescription& m) {
  return std::visit([](const auto& x) { return validate(x); }, m);
}

}  // namespace qmf

#endif  // QMF_VALIDATE_HPP
