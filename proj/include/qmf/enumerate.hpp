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

#ifndef QMF_ENUMERATE_HPP
#define QMF_ENUMERATE_HPP

#include <algorithm>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "qmf/dynamics.hpp"
#include "qmf/errors.hpp"
#include "qmf/machine.hpp"

namespace qmf {

/// A grounded transition: source --symbol--> target with amplitude.
struct ExplicitRule {
  std::string symbol;
  ConfigKey source;
  ConfigKey target;
  Amplitude amplitude;
};

namespace detail {

inline void sort_rules(std::vector<ExplicitRule>& v) {
  std::stable_sort(v.begin(), v.end(), [](const ExplicitRule& a, const ExplicitRule& b) {
    return std::tie(a.source.state, a.source.cells, a.symbol, a.target) <
           std::tie(b.source.state, b.source.cells, b.symbol, b.target);
  });
}

inline Range clip(const Range& r, std::int64_t hi, const std::string& what) {
  if (!r.bounded()) throw DomainError("enumerate_rules: unbounded range for " + what);
  return Range{std::max<std::int64_t>(r.lo, 0), std::min(*r.hi, hi)};
}

/// Every stack string (top-first, ending in Z0) with `top` as prefix and
/// height inside `h`.
inline std::vector<std::vector<std::int64_t>> stacks_matching(const StackPattern& p, const Range& h,
                                                              std::int64_t symbols) {
  if (p.exact()) return {p.top};
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::vector<std::int64_t>> rests{{kBottomSymbol}};
  const auto base = static_cast<std::int64_t>(p.top.size());
  for (std::int64_t extra = 0; base + extra <= *h.hi; ++extra) {
    if (base + extra >= h.lo) {
      for (const auto& rest : rests) {
        auto s = p.top;
        s.insert(s.end(), rest.begin(), rest.end());
        out.push_back(std::move(s));
      }
    }
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& rest : rests) {
      for (std::int64_t x = 1; x < symbols; ++x) {
        std::vector<std::int64_t> t{x};
        t.insert(t.end(), rest.begin(), rest.end());
        next.push_back(std::move(t));
      }
    }
    rests = std::move(next);
  }
  return out;
}

}  // namespace detail

/// Grounds every schema over the window; instances whose source or target
/// leaves the window are dropped. Ordered by (state, coordinates, symbol).
inline std::vector<ExplicitRule> enumerate_rules(const CounterMachine& m, const SimulationBounds& b) {
  CounterDynamics dyn(m);
  std::vector<ExplicitRule> out;
  for (const auto& r : dyn.compiled()) {
    std::vector<Range> ranges;
    for (std::size_t u = 0; u < r.var_ranges.size(); ++u) {
      ranges.push_back(detail::clip(r.var_ranges[u], b.n_max, "counter variable"));
      if (ranges.back().lo > *ranges.back().hi) ranges.clear();
      if (ranges.empty()) break;
    }
    if (ranges.size() != r.var_ranges.size()) continue;
    std::vector<std::int64_t> vals(ranges.size());
    detail::for_each_assignment(ranges, vals, 0, [&](const std::vector<std::int64_t>& v) {
      ConfigKey s{Family::Counter, r.state, std::vector<std::int64_t>(r.src.size())};
      for (std::size_t j = 0; j < r.src.size(); ++j) {
        s.cells[j] = r.src[j].is_var ? v[static_cast<std::size_t>(r.src[j].var)] : r.src[j].literal;
      }
      auto t = dyn.target_of(r, v);
      if (!dyn.in_window(s, b) || !dyn.in_window(t, b)) return;
      out.push_back({r.symbol, std::move(s), std::move(t), r.amplitude});
    });
  }
  detail::sort_rules(out);
  return out;
}

inline std::vector<ExplicitRule> enumerate_rules(const StackMachine& m, const SimulationBounds& b) {
  StackDynamics dyn(m);
  const auto syms = static_cast<std::int64_t>(m.stack_alphabet.size());
  std::vector<ExplicitRule> out;
  for (const auto& r : m.rules) {
    std::vector<std::vector<std::vector<std::int64_t>>> choices;
    bool empty = false;
    for (const auto& p : r.source) {
      // An open height means "whatever lies below"; the window bounds it.
      const Range h = p.exact() ? Range{0, 0}
                                : detail::clip(Range{p.height.lo, p.height.hi.value_or(b.d_max)}, b.d_max, "stack height");
      choices.push_back(detail::stacks_matching(p, h, syms));
      empty = empty || choices.back().empty();
    }
    if (empty) continue;
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
      ConfigKey s{Family::Stack, r.state, {}};
      for (std::size_t j = 0; j < idx.size(); ++j) {
        s.cells.insert(s.cells.end(), choices[j][idx[j]].begin(), choices[j][idx[j]].end());
      }
      auto t = dyn.target_of(r, s);
      if (dyn.in_window(s, b) && dyn.in_window(t, b)) out.push_back({r.symbol, std::move(s), std::move(t), r.amplitude});
      std::size_t p = 0;
      while (p < idx.size() && ++idx[p] == choices[p].size()) idx[p++] = 0;
      if (p == idx.size()) break;
    }
  }
  detail::sort_rules(out);
  return out;
}

/// "# x $" as a symbol sequence.
inline std::vector<std::string> endmarked(const std::vector<std::string>& x) {
  std::vector<std::string> s{kLeftEnd};
  s.insert(s.end(), x.begin(), x.end());
  s.push_back(kRightEnd);
  return s;
}

/// Configurations with nonzero amplitude along a run. layers[p] holds the
/// configurations present before the symbol at position p is read (# is
/// position 0); the last layer is the final support.
struct ReachableSet {
  std::vector<std::string> symbols;
  std::vector<std::vector<ConfigKey>> layers;

  std::set<ConfigKey> all() const {
    std::set<ConfigKey> s;
    for (const auto& l : layers) s.insert(l.begin(), l.end());
    return s;
  }
};

/// Support closure of the run on "# x $". Cancellation is ignored (the
/// closure over-approximates), which keeps it a purely structural query.
template <SymbolDynamics D>
ReachableSet reachable_configs(const D& dyn, const std::vector<std::string>& x, const SimulationBounds& b) {
  ReachableSet out;
  out.symbols = endmarked(x);
  std::set<ConfigKey> cur{dyn.initial()};
  for (std::size_t p = 0; p < out.symbols.size(); ++p) {
    out.layers.emplace_back(cur.begin(), cur.end());
    const auto& sym = out.symbols[p];
    if (!dyn.control().readable(sym)) throw DomainError("symbol '" + sym + "' is not in the machine's alphabet");
    std::set<ConfigKey> next;
    for (const auto& c : cur) {
      for (const auto& [t, a] : dyn.image(c, sym)) {
        if (std::abs(a) < kPruneThreshold) continue;
        if (!dyn.in_window(t, b)) {
          throw WindowLeak("window leak at step " + std::to_string(p) + ": " + dyn.describe(c) + " -> " +
                               dyn.describe(t),
                           dyn.describe(t), static_cast<long>(p));
        }
        next.insert(t);
      }
    }
    cur = std::move(next);
  }
  out.layers.emplace_back(cur.begin(), cur.end());
  return out;
}

inline ReachableSet reachable_configs(const CounterMachine& m, const std::vector<std::string>& x,
                                      const SimulationBounds& b) {
  return reachable_configs(CounterDynamics(m), x, b);
}

inline ReachableSet reachable_configs(const StackMachine& m, const std::vector<std::string>& x,
                                      const SimulationBounds& b) {
  return reachable_configs(StackDynamics(m), x, b);
}

}  // namespace qmf

#endif  // QMF_ENUMERATE_HPP
