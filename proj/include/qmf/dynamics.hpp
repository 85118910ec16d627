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

#ifndef QMF_DYNAMICS_HPP
#define QMF_DYNAMICS_HPP

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qmf/config.hpp"
#include "qmf/machine.hpp"
#include "qmf/sparse_operator.hpp"

namespace qmf {

namespace detail {

inline void merge_into(Column& col, const ConfigKey& k, Amplitude a) {
  for (auto& [t, v] : col) {
    if (t == k) {
      v += a;
      return;
    }
  }
  col.emplace_back(k, a);
}

/// Cartesian enumeration over bounded ranges; `fn` receives the value vector.
template <class Fn>
void for_each_assignment(const std::vector<Range>& ranges, std::vector<std::int64_t>& values,
                         std::size_t pos, Fn&& fn) {
  if (pos == ranges.size()) {
    fn(values);
    return;
  }
  for (std::int64_t v = ranges[pos].lo; v <= *ranges[pos].hi; ++v) {
    values[pos] = v;
    for_each_assignment(ranges, values, pos + 1, fn);
  }
}

}  // namespace detail

/// Per-symbol evolution of a counter machine, obtained directly from its rule
/// schemas. image() is a column of V_sigma, preimage() a column of V'_sigma
/// (with unconjugated amplitudes).
class CounterDynamics {
 public:
  struct Src {
    bool is_var = false;
    std::int64_t literal = 0;
    int var = -1;
    Range range;
  };
  struct Tgt {
    bool is_var = false;
    std::int64_t literal = 0;
    int var = -1;
    std::int64_t offset = 0;
  };
  struct Compiled {
    int state = 0;
    int target_state = 0;
    std::string symbol;
    std::vector<Src> src;
    std::vector<Tgt> tgt;
    std::vector<Range> var_ranges;
    std::vector<int> var_coord;  // coordinate binding each variable
    Amplitude amplitude;
  };

  static constexpr Family family = Family::Counter;

  // Holds a pointer to the machine, so temporaries are refused.
  explicit CounterDynamics(CounterMachine&&) = delete;
  explicit CounterDynamics(const CounterMachine& m) : m_(&m) {
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
      compiled_.push_back(compile(m.rules[i], i));
      const auto& c = compiled_.back();
      forward_[{c.state, c.symbol}].push_back(i);
      backward_[{c.target_state, c.symbol}].push_back(i);
    }
  }

  const CounterMachine& machine() const { return *m_; }
  const Control& control() const { return m_->control; }
  const std::vector<Compiled>& compiled() const { return compiled_; }

  ConfigKey initial() const {
    return counter_config(m_->control.initial, std::vector<std::int64_t>(static_cast<std::size_t>(m_->counters), 0));
  }

  bool matches(const Compiled& r, const ConfigKey& c, std::vector<std::int64_t>& vals) const {
    if (c.state != r.state || c.cells.size() != r.src.size()) return false;
    vals.assign(r.var_ranges.size(), 0);
    for (std::size_t j = 0; j < r.src.size(); ++j) {
      const auto& s = r.src[j];
      const auto v = c.cells[j];
      if (s.is_var) {
        if (!s.range.contains(v)) return false;
        vals[static_cast<std::size_t>(s.var)] = v;
      } else if (v != s.literal) {
        return false;
      }
    }
    return true;
  }

  ConfigKey target_of(const Compiled& r, const std::vector<std::int64_t>& vals) const {
    ConfigKey t{Family::Counter, r.target_state, std::vector<std::int64_t>(r.tgt.size())};
    for (std::size_t j = 0; j < r.tgt.size(); ++j) {
      const auto& e = r.tgt[j];
      t.cells[j] = e.is_var ? vals[static_cast<std::size_t>(e.var)] + e.offset : e.literal;
    }
    return t;
  }

  bool has_rule(const ConfigKey& c, const std::string& symbol) const {
    auto it = forward_.find({c.state, symbol});
    if (it == forward_.end()) return false;
    std::vector<std::int64_t> vals;
    for (auto i : it->second) {
      if (matches(compiled_[i], c, vals)) return true;
    }
    return false;
  }

  Column image(const ConfigKey& c, const std::string& symbol) const {
    Column col;
    bool any = false;
    if (auto it = forward_.find({c.state, symbol}); it != forward_.end()) {
      std::vector<std::int64_t> vals;
      for (auto i : it->second) {
        const auto& r = compiled_[i];
        if (!matches(r, c, vals)) continue;
        any = true;
        detail::merge_into(col, target_of(r, vals), r.amplitude);
      }
    }
    if (!any && m_->control.complete_with_identity) col.emplace_back(c, 1.0);
    return col;
  }

  /// All (source, delta(source -> c)) pairs.
  Column preimage(const ConfigKey& c, const std::string& symbol) const {
    Column col;
    if (auto it = backward_.find({c.state, symbol}); it != backward_.end()) {
      for (auto i : it->second) {
        const auto& r = compiled_[i];
        if (c.cells.size() != r.tgt.size()) continue;
        std::vector<std::int64_t> vals(r.var_ranges.size(), 0);
        std::vector<bool> fixed(r.var_ranges.size(), false);
        bool ok = true;
        for (std::size_t j = 0; j < r.tgt.size() && ok; ++j) {
          const auto& e = r.tgt[j];
          if (!e.is_var) {
            ok = c.cells[j] == e.literal;
            continue;
          }
          const auto v = c.cells[j] - e.offset;
          auto u = static_cast<std::size_t>(e.var);
          if (fixed[u]) {
            ok = vals[u] == v;
          } else {
            ok = r.var_ranges[u].contains(v);
            vals[u] = v;
            fixed[u] = true;
          }
        }
        if (!ok) continue;
        std::vector<Range> free_ranges;
        std::vector<std::size_t> free_vars;
        for (std::size_t u = 0; u < fixed.size(); ++u) {
          if (fixed[u]) continue;
          if (!r.var_ranges[u].bounded()) {
            throw DomainError("preimage: variable free in target is unbounded in rule " + std::to_string(i));
          }
          free_ranges.push_back(r.var_ranges[u]);
          free_vars.push_back(u);
        }
        std::vector<std::int64_t> fv(free_ranges.size());
        detail::for_each_assignment(free_ranges, fv, 0, [&](const std::vector<std::int64_t>& a) {
          for (std::size_t f = 0; f < a.size(); ++f) vals[free_vars[f]] = a[f];
          ConfigKey s{Family::Counter, r.state, std::vector<std::int64_t>(r.src.size())};
          for (std::size_t j = 0; j < r.src.size(); ++j) {
            s.cells[j] = r.src[j].is_var ? vals[static_cast<std::size_t>(r.src[j].var)] : r.src[j].literal;
          }
          detail::merge_into(col, s, r.amplitude);
        });
      }
    }
    if (m_->control.complete_with_identity && !has_rule(c, symbol)) detail::merge_into(col, c, 1.0);
    return col;
  }

  bool in_window(const ConfigKey& c, const SimulationBounds& b) const {
    for (auto v : c.cells) {
      if (v < 0 || v > b.n_max) return false;
    }
    return true;
  }

  std::int64_t margin() const { return std::max<std::int64_t>(1, m_->max_abs_delta()); }

  std::vector<ConfigKey> window_basis(const SimulationBounds& b) const {
    std::vector<ConfigKey> out;
    std::vector<Range> ranges(static_cast<std::size_t>(m_->counters), Range{0, b.n_max});
    std::vector<std::int64_t> vals(ranges.size());
    for (int q = 0; q < static_cast<int>(m_->control.states.size()); ++q) {
      detail::for_each_assignment(ranges, vals, 0, [&](const std::vector<std::int64_t>& v) {
        out.push_back(counter_config(q, v));
      });
    }
    return out;
  }

  std::string describe(const ConfigKey& c) const {
    std::ostringstream os;
    os << '(' << m_->control.states.at(static_cast<std::size_t>(c.state));
    for (std::size_t j = 0; j < c.cells.size(); ++j) os << (j == 0 ? "; " : ",") << c.cells[j];
    os << ')';
    return os.str();
  }

  /// Largest coordinate value any rule instance touches, or nullopt if unbounded.
  std::optional<std::int64_t> support_bound() const {
    std::int64_t m = 0;
    for (const auto& r : compiled_) {
      for (const auto& s : r.src) {
        if (!s.is_var) {
          m = std::max(m, s.literal);
        } else if (!s.range.bounded()) {
          return std::nullopt;
        } else {
          m = std::max(m, *s.range.hi);
        }
      }
      for (const auto& e : r.tgt) {
        if (!e.is_var) {
          m = std::max(m, e.literal);
        } else {
          const auto& rg = r.var_ranges[static_cast<std::size_t>(e.var)];
          if (!rg.bounded()) return std::nullopt;
          m = std::max(m, *rg.hi + e.offset);
        }
      }
    }
    return m;
  }

 private:
  static Compiled compile(const CounterRule& rule, std::size_t index) {
    Compiled c;
    c.state = rule.state;
    c.target_state = rule.target_state;
    c.symbol = rule.symbol;
    c.amplitude = rule.amplitude;
    std::map<std::string, int> vars;
    for (std::size_t j = 0; j < rule.source.size(); ++j) {
      Src s;
      if (const auto* lit = std::get_if<std::int64_t>(&rule.source[j])) {
        s.literal = *lit;
      } else {
        const auto& v = std::get<Variable>(rule.source[j]);
        if (vars.count(v.name)) {
          throw DomainError("rule " + std::to_string(index) + ": variable '" + v.name + "' bound twice");
        }
        s.is_var = true;
        s.var = static_cast<int>(c.var_ranges.size());
        s.range = v.range;
        vars[v.name] = s.var;
        c.var_ranges.push_back(v.range);
        c.var_coord.push_back(static_cast<int>(j));
      }
      c.src.push_back(s);
    }
    for (const auto& t : rule.target) {
      Tgt e;
      if (const auto* lit = std::get_if<std::int64_t>(&t)) {
        e.literal = *lit;
      } else {
        const auto& ref = std::get<VarRef>(t);
        auto it = vars.find(ref.name);
        if (it == vars.end()) {
          throw DomainError("rule " + std::to_string(index) + ": target uses unbound variable '" + ref.name + "'");
        }
        e.is_var = true;
        e.var = it->second;
        e.offset = ref.offset;
      }
      c.tgt.push_back(e);
    }
    return c;
  }

  const CounterMachine* m_;
  std::vector<Compiled> compiled_;
  std::map<std::pair<int, std::string>, std::vector<std::size_t>> forward_;
  std::map<std::pair<int, std::string>, std::vector<std::size_t>> backward_;
};

/// Per-symbol evolution of a stack machine.
class StackDynamics {
 public:
  static constexpr Family family = Family::Stack;

  explicit StackDynamics(StackMachine&&) = delete;
  explicit StackDynamics(const StackMachine& m) : m_(&m) {
    for (std::size_t i = 0; i < m.rules.size(); ++i) {
      const auto& r = m.rules[i];
      forward_[{r.state, r.symbol}].push_back(i);
      backward_[{r.target_state, r.symbol}].push_back(i);
    }
  }

  const StackMachine& machine() const { return *m_; }
  const Control& control() const { return m_->control; }

  ConfigKey initial() const {
    return ConfigKey{Family::Stack, m_->control.initial,
                     std::vector<std::int64_t>(static_cast<std::size_t>(m_->stacks), kBottomSymbol)};
  }

  static bool match_one(const StackPattern& p, std::span<const std::int64_t> stack) {
    if (p.exact()) return std::equal(stack.begin(), stack.end(), p.top.begin(), p.top.end());
    if (stack.size() < p.top.size() + 1) return false;
    if (!std::equal(p.top.begin(), p.top.end(), stack.begin())) return false;
    return p.height.contains(static_cast<std::int64_t>(stack.size()) - 1);
  }

  bool matches(const StackRule& r, const ConfigKey& c) const {
    if (c.state != r.state) return false;
    auto stacks = split_stacks(c);
    if (stacks.size() != r.source.size()) return false;
    for (std::size_t j = 0; j < stacks.size(); ++j) {
      if (!match_one(r.source[j], stacks[j])) return false;
    }
    return true;
  }

  ConfigKey target_of(const StackRule& r, const ConfigKey& c) const {
    auto stacks = split_stacks(c);
    ConfigKey t{Family::Stack, r.target_state, {}};
    for (std::size_t j = 0; j < stacks.size(); ++j) {
      const auto& top = r.target[j].top;
      t.cells.insert(t.cells.end(), top.begin(), top.end());
      if (!r.source[j].exact()) {
        t.cells.insert(t.cells.end(), stacks[j].begin() + static_cast<std::ptrdiff_t>(r.source[j].top.size()),
                       stacks[j].end());
      }
    }
    return t;
  }

  bool has_rule(const ConfigKey& c, const std::string& symbol) const {
    auto it = forward_.find({c.state, symbol});
    if (it == forward_.end()) return false;
    for (auto i : it->second) {
      if (matches(m_->rules[i], c)) return true;
    }
    return false;
  }

  Column image(const ConfigKey& c, const std::string& symbol) const {
    Column col;
    bool any = false;
    if (auto it = forward_.find({c.state, symbol}); it != forward_.end()) {
      for (auto i : it->second) {
        const auto& r = m_->rules[i];
        if (!matches(r, c)) continue;
        any = true;
        detail::merge_into(col, target_of(r, c), r.amplitude);
      }
    }
    if (!any && m_->control.complete_with_identity) col.emplace_back(c, 1.0);
    return col;
  }

  Column preimage(const ConfigKey& c, const std::string& symbol) const {
    Column col;
    if (auto it = backward_.find({c.state, symbol}); it != backward_.end()) {
      auto stacks = split_stacks(c);
      for (auto i : it->second) {
        const auto& r = m_->rules[i];
        if (stacks.size() != r.target.size()) continue;
        ConfigKey s{Family::Stack, r.state, {}};
        bool ok = true;
        for (std::size_t j = 0; j < stacks.size() && ok; ++j) {
          const auto& src = r.source[j];
          const auto& top = r.target[j].top;
          const auto& st = stacks[j];
          if (src.exact()) {
            ok = std::equal(st.begin(), st.end(), top.begin(), top.end());
            if (ok) s.cells.insert(s.cells.end(), src.top.begin(), src.top.end());
            continue;
          }
          if (st.size() < top.size() + 1 || !std::equal(top.begin(), top.end(), st.begin())) {
            ok = false;
            continue;
          }
          const auto rest_begin = st.begin() + static_cast<std::ptrdiff_t>(top.size());
          const auto height = static_cast<std::int64_t>(src.top.size() + static_cast<std::size_t>(st.end() - rest_begin)) - 1;
          ok = src.height.contains(height);
          s.cells.insert(s.cells.end(), src.top.begin(), src.top.end());
          s.cells.insert(s.cells.end(), rest_begin, st.end());
        }
        if (ok) detail::merge_into(col, s, r.amplitude);
      }
    }
    if (m_->control.complete_with_identity && !has_rule(c, symbol)) detail::merge_into(col, c, 1.0);
    return col;
  }

  bool in_window(const ConfigKey& c, const SimulationBounds& b) const {
    for (auto s : split_stacks(c)) {
      if (static_cast<std::int64_t>(s.size()) - 1 > b.d_max) return false;
    }
    return true;
  }

  std::int64_t margin() const { return 1; }

  /// All stack contents of height <= d_max, per stack, for every state.
  std::vector<ConfigKey> window_basis(const SimulationBounds& b) const {
    std::vector<std::vector<std::int64_t>> single;
    const auto syms = static_cast<std::int64_t>(m_->stack_alphabet.size());
    std::vector<std::vector<std::int64_t>> frontier{{kBottomSymbol}};
    for (std::int64_t h = 0; h <= b.d_max; ++h) {
      single.insert(single.end(), frontier.begin(), frontier.end());
      std::vector<std::vector<std::int64_t>> next;
      for (const auto& s : frontier) {
        for (std::int64_t x = 1; x < syms; ++x) {
          std::vector<std::int64_t> t{x};
          t.insert(t.end(), s.begin(), s.end());
          next.push_back(std::move(t));
        }
      }
      frontier = std::move(next);
    }
    std::vector<ConfigKey> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(m_->stacks), 0);
    for (int q = 0; q < static_cast<int>(m_->control.states.size()); ++q) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        ConfigKey k{Family::Stack, q, {}};
        for (auto i : idx) k.cells.insert(k.cells.end(), single[i].begin(), single[i].end());
        out.push_back(std::move(k));
        std::size_t p = 0;
        while (p < idx.size() && ++idx[p] == single.size()) idx[p++] = 0;
        if (p == idx.size()) break;
      }
    }
    return out;
  }

  std::string describe(const ConfigKey& c) const {
    std::ostringstream os;
    os << '(' << m_->control.states.at(static_cast<std::size_t>(c.state));
    bool first = true;
    for (auto s : split_stacks(c)) {
      os << (first ? "; " : ",");
      first = false;
      for (auto x : s) os << m_->stack_alphabet.at(static_cast<std::size_t>(x));
    }
    os << ')';
    return os.str();
  }

  /// Largest stack height any rule instance touches, or nullopt if unbounded.
  std::optional<std::int64_t> support_bound() const {
    std::int64_t m = 0;
    for (const auto& r : m_->rules) {
      for (std::size_t j = 0; j < r.source.size(); ++j) {
        const auto& p = r.source[j];
        if (p.exact()) {
          m = std::max<std::int64_t>(m, static_cast<std::int64_t>(p.top.size()) - 1);
          m = std::max<std::int64_t>(m, static_cast<std::int64_t>(r.target[j].top.size()) - 1);
          continue;
        }
        if (!p.height.bounded()) return std::nullopt;
        const auto grow = static_cast<std::int64_t>(r.target[j].top.size()) - static_cast<std::int64_t>(p.top.size());
        m = std::max(m, *p.height.hi + std::max<std::int64_t>(0, grow));
      }
    }
    return m;
  }

 private:
  const StackMachine* m_;
  std::map<std::pair<int, std::string>, std::vector<std::size_t>> forward_;
  std::map<std::pair<int, std::string>, std::vector<std::size_t>> backward_;
};

template <class D>
concept SymbolDynamics = requires(const D& d, const ConfigKey& c, const std::string& s, const SimulationBounds& b) {
  { d.image(c, s) } -> std::same_as<Column>;
  { d.preimage(c, s) } -> std::same_as<Column>;
  { d.initial() } -> std::same_as<ConfigKey>;
  { d.in_window(c, b) } -> std::same_as<bool>;
  { d.window_basis(b) } -> std::same_as<std::vector<ConfigKey>>;
  { d.describe(c) } -> std::same_as<std::string>;
  { d.control() } -> std::same_as<const Control&>;
};

}  // namespace qmf

#endif  // QMF_DYNAMICS_HPP
