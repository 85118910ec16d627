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

#ifndef QMF_TRANSPILE_THM5_HPP
#define QMF_TRANSPILE_THM5_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qmf/config.hpp"
#include "qmf/errors.hpp"
#include "qmf/machine.hpp"
#include "qmf/transpile_lemmas.hpp"

namespace qmf {

inline constexpr std::int64_t kStackX = 1;

/// Counter value n as a stack: n copies of X above Z0, top first.
inline std::vector<std::int64_t> unary_stack(std::int64_t n) {
  if (n < 0) throw DomainError("unary_stack: negative counter value");
  std::vector<std::int64_t> s(static_cast<std::size_t>(n), kStackX);
  s.push_back(kBottomSymbol);
  return s;
}

namespace detail {

/// Substitutes `value` for variable `name` throughout a counter rule.
inline CounterRule substitute(const CounterRule& r, const std::string& name, std::int64_t value) {
  CounterRule out = r;
  for (auto& p : out.source) {
    if (const auto* v = std::get_if<Variable>(&p); v && v->name == name) p = value;
  }
  for (auto& t : out.target) {
    if (const auto* ref = std::get_if<VarRef>(&t); ref && ref->name == name) t = value + ref->offset;
  }
  return out;
}

/// Rewrites a rule until every variable sits on its own coordinate and is
/// referenced only there ("clean"); other variables are enumerated.
inline std::vector<CounterRule> literalize(const CounterRule& r, std::size_t index) {
  std::map<std::string, int> refs;
  for (const auto& t : r.target) {
    if (const auto* ref = std::get_if<VarRef>(&t)) ++refs[ref->name];
  }
  for (std::size_t j = 0; j < r.source.size(); ++j) {
    const auto* v = std::get_if<Variable>(&r.source[j]);
    if (v == nullptr) continue;
    const auto* own = std::get_if<VarRef>(&r.target[j]);
    const bool clean = own != nullptr && own->name == v->name && refs[v->name] == 1;
    if (clean) continue;
    if (!v->range.bounded()) {
      throw DomainError("thm5_transform: rule " + std::to_string(index) + " moves unbounded variable '" + v->name +
                        "' across counters");
    }
    std::vector<CounterRule> out;
    for (auto x = v->range.lo; x <= *v->range.hi; ++x) {
      auto sub = literalize(substitute(r, v->name, x), index);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  return {r};
}

}  // namespace detail

/// Theorem 5: a counter machine counting with {-1, 0, 1} becomes a stack
/// machine with one stack per counter over {Z0, X}; counter value n is the
/// stack X^n Z0 and each rule pushes X, pops X or keeps the stack.
inline TranspileResult thm5_transform(const CounterMachine& m) {
  for (auto d : m.allowed_deltas) {
    if (d < -1 || d > 1) {
      throw DomainError("thm5_transform: allowed deltas must be within {-1, 0, 1}; apply lemma2_transform first");
    }
  }
  StackMachine out;
  out.control = m.control;
  out.stacks = m.counters;
  out.stack_alphabet = {"Z0", "X"};
  for (std::size_t ri = 0; ri < m.rules.size(); ++ri) {
    for (const auto& r : detail::literalize(m.rules[ri], ri)) {
      StackRule sr;
      sr.state = r.state;
      sr.symbol = r.symbol;
      sr.target_state = r.target_state;
      sr.amplitude = r.amplitude;
      bool feasible = true;
      for (std::size_t j = 0; j < r.source.size(); ++j) {
        if (const auto* lit = std::get_if<std::int64_t>(&r.source[j])) {
          const auto t = std::get<std::int64_t>(r.target[j]);
          if (*lit < 0 || t < 0) feasible = false;
          if (!feasible) break;
          sr.source.push_back(StackPattern{unary_stack(*lit), Range{*lit, *lit}});
          sr.target.push_back(StackTarget{unary_stack(t)});
          continue;
        }
        const auto& v = std::get<Variable>(r.source[j]);
        const auto off = std::get<VarRef>(r.target[j]).offset;
        const auto lo = std::max<std::int64_t>(v.range.lo, off < 0 ? -off : 0);
        if (v.range.hi && *v.range.hi < lo) {
          feasible = false;
          break;
        }
        sr.source.push_back(StackPattern{std::vector<std::int64_t>(static_cast<std::size_t>(lo), kStackX),
                                         Range{lo, v.range.hi}});
        sr.target.push_back(StackTarget{std::vector<std::int64_t>(static_cast<std::size_t>(lo + off), kStackX)});
      }
      if (feasible) out.rules.push_back(std::move(sr));
    }
  }
  auto prov = detail::base_provenance("thm5", m);
  prov["stacks"] = out.stacks;
  prov["stack_alphabet"] = out.stack_alphabet;
  prov["encoding"] = "counter value n -> X^n Z0 (top first)";
  prov["target_rules"] = out.rules.size();
  return {out, prov};
}

}  // namespace qmf

#endif  // QMF_TRANSPILE_THM5_HPP
