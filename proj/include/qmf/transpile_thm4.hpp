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

#ifndef QMF_TRANSPILE_THM4_HPP
#define QMF_TRANSPILE_THM4_HPP

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmf/dynamics.hpp"
#include "qmf/errors.hpp"
#include "qmf/machine.hpp"
#include "qmf/qtm.hpp"
#include "qmf/superposition.hpp"
#include "qmf/transpile_lemmas.hpp"

// QTM -> (2t+2)-counter machine.
//
// Counters 1..2t+1 are tape cells -t..t (counter j holds e(tau(j-t-1))), and
// counter 2t+2 is the head position plus t+1. A tape symbol s with index i in
// the tape alphabet (blank first) is encoded as e(s) = i+1, so r = |tape| + 1.
//
// The preprocessing symbols move a "cursor" through nodes (lane, position):
// lane A is the auxiliary state q0, lane D the auxiliary state q0', lane E the
// QTM's initial state p0. Every operator below permutes nodes along a closed
// cycle and applies a bijection to the cells on each step, with every cell
// constrained to [0, r-1]; everything else is fixed by identity completion.
// Hence each operator is a permutation and W-F by construction.
//
//   #      (q0, 0..0, pos 0) <-> (q0, 0..0, pos 1)
//   sigma  A1 -> ... -> A(2t+2) -> D(2t+1) -> ... -> D1 -> A1;
//          A_p -> A_p+1 adds e(sigma) mod r to cell p            (l = 1 each)
//   B2     A(2t+2) -> ... -> A1 -> D1 -> ... -> D(2t+1) -> A(2t+2);
//          A_p -> A_p-1 swaps cells p-1 and p-1+t when p <= t+2  (l2(k) = k)
//   B3     A1 -> ... -> A(2t+2) -> D(2t+1) -> ... -> D(t+1) -> E(t+1)
//          -> ... -> E1 -> A1; A_p -> A_p+1 swaps 0 and e(B) on cell p
//                                                                (l3 = 3t+3)
//   B4     one QTM step: (p, cell i = e(s), pos i) -> (q, cell i = e(s'),
//          pos i+d) for every QTM rule and i in 1..2t+1; other cells in
//          [1, r-1]                                               (l4 = t)
//   $      identity
//
// After "# x B2^k B3^(3t+3)" the machine sits in (p0, g(initial tape), t+1),
// i.e. the QTM's initial configuration under g; each B4 is one QTM step.

namespace qmf {

/// Padded input "# x B2^l2 B3^l3 B4^l4 $" and its exponents.
struct EncodedInput {
  std::vector<std::string> original;
  std::vector<std::string> symbols;  // without the endmarkers
  std::int64_t l2 = 0;
  std::int64_t l3 = 0;
  std::int64_t l4 = 0;

  /// Length including both endmarkers.
  std::size_t length() const { return symbols.size() + 2; }
};

struct Thm4Artifacts {
  CounterMachine machine;
  TuringMachine source;
  std::int64_t n = 0;
  std::int64_t t = 0;
  std::int64_t r = 0;
  std::vector<std::int64_t> e;  // by tape-symbol index
  int q0 = 0;                   // auxiliary states in `machine`
  int q0_prime = 0;
  nlohmann::ordered_json provenance;

  std::int64_t l2(std::int64_t k) const { return k; }
  std::int64_t l3(std::int64_t) const { return 3 * t + 3; }
  std::int64_t l4(std::int64_t) const { return t; }

  /// Published slowdown certificate: length <= c1*k + c2*t + c3 <= 4(n+t)+5.
  static constexpr std::int64_t c1 = 2;
  static constexpr std::int64_t c2 = 4;
  static constexpr std::int64_t c3 = 5;

  std::int64_t cells() const { return 2 * t + 1; }
  std::size_t pos_index() const { return static_cast<std::size_t>(2 * t + 1); }

  /// g: tape configuration over [-t, t] -> counter configuration.
  ConfigKey g(const ConfigKey& tape_config) const {
    if (tape_config.family != Family::Tape ||
        static_cast<std::int64_t>(tape_config.cells.size()) != cells() + 1) {
      throw DomainError("g: expects a tape configuration over [-t, t]");
    }
    ConfigKey c{Family::Counter, tape_config.state, std::vector<std::int64_t>(static_cast<std::size_t>(2 * t + 2))};
    for (std::int64_t j = 0; j < cells(); ++j) {
      c.cells[static_cast<std::size_t>(j)] = e.at(static_cast<std::size_t>(tape_config.cells[static_cast<std::size_t>(j)]));
    }
    c.cells[pos_index()] = tape_config.cells.back() + t + 1;
    return c;
  }
};

/// Pads x for the Theorem 4 machine; requires |x| <= n.
inline EncodedInput thm4_encode_input(const std::vector<std::string>& x, const Thm4Artifacts& a) {
  const auto k = static_cast<std::int64_t>(x.size());
  if (k > a.n) throw DomainError("thm4_encode_input: |x| = " + std::to_string(k) + " exceeds n = " + std::to_string(a.n));
  EncodedInput in;
  in.original = x;
  in.l2 = a.l2(k);
  in.l3 = a.l3(k);
  in.l4 = a.l4(k);
  in.symbols = x;
  in.symbols.insert(in.symbols.end(), static_cast<std::size_t>(in.l2), "B2");
  in.symbols.insert(in.symbols.end(), static_cast<std::size_t>(in.l3), "B3");
  in.symbols.insert(in.symbols.end(), static_cast<std::size_t>(in.l4), "B4");
  return in;
}

namespace detail {

/// Emits the rules of one node step. `cells` gives the per-cell source
/// pattern and target for the cells that change; unspecified cells are free
/// variables over `free` and are copied.
class Thm4Emitter {
 public:
  Thm4Emitter(CounterMachine& m, std::int64_t t, std::int64_t r) : m_(m), t_(t), r_(r) {}

  struct CellOp {
    std::int64_t cell = 0;  // 1-based
    CounterPattern source;
    CounterTarget target;
  };

  void emit(const std::string& symbol, int from, std::int64_t from_pos, int to, std::int64_t to_pos,
            const std::vector<CellOp>& ops, Range free, Amplitude amp = 1.0) {
    CounterRule rule;
    rule.state = from;
    rule.symbol = symbol;
    rule.target_state = to;
    rule.amplitude = amp;
    for (std::int64_t j = 1; j <= 2 * t_ + 1; ++j) {
      auto it = std::find_if(ops.begin(), ops.end(), [&](const CellOp& o) { return o.cell == j; });
      if (it != ops.end()) {
        rule.source.push_back(it->source);
        rule.target.push_back(it->target);
      } else {
        rule.source.emplace_back(Variable{var(j), free});
        rule.target.emplace_back(VarRef{var(j), 0});
      }
    }
    rule.source.emplace_back(from_pos);
    rule.target.emplace_back(to_pos);
    m_.rules.push_back(std::move(rule));
  }

  /// A plain node move: cells untouched.
  void move(const std::string& symbol, int from, std::int64_t from_pos, int to, std::int64_t to_pos) {
    emit(symbol, from, from_pos, to, to_pos, {}, cell_range());
  }

  /// Node move adding `add` modulo r to cell p (two schemas).
  void move_add(const std::string& symbol, int from, std::int64_t from_pos, int to, std::int64_t to_pos,
                std::int64_t p, std::int64_t add) {
    const auto v = var(p);
    emit(symbol, from, from_pos, to, to_pos, {{p, Variable{v, Range{0, r_ - 1 - add}}, VarRef{v, add}}}, cell_range());
    if (add > 0) {
      emit(symbol, from, from_pos, to, to_pos, {{p, Variable{v, Range{r_ - add, r_ - 1}}, VarRef{v, add - r_}}},
           cell_range());
    }
  }

  /// Node move exchanging the contents of cells a and b.
  void move_swap(const std::string& symbol, int from, std::int64_t from_pos, int to, std::int64_t to_pos,
                 std::int64_t a, std::int64_t b) {
    emit(symbol, from, from_pos, to, to_pos,
         {{a, Variable{var(a), cell_range()}, VarRef{var(b), 0}}, {b, Variable{var(b), cell_range()}, VarRef{var(a), 0}}},
         cell_range());
  }

  /// Node move exchanging the values 0 and `code` on cell p.
  void move_fill(const std::string& symbol, int from, std::int64_t from_pos, int to, std::int64_t to_pos,
                 std::int64_t p, std::int64_t code) {
    emit(symbol, from, from_pos, to, to_pos, {{p, CounterPattern{std::int64_t{0}}, CounterTarget{code}}}, cell_range());
    emit(symbol, from, from_pos, to, to_pos, {{p, CounterPattern{code}, CounterTarget{std::int64_t{0}}}}, cell_range());
    // Every other value is carried over unchanged.
    std::vector<Range> rest;
    if (code > 1) rest.push_back(Range{1, code - 1});
    if (code < r_ - 1) rest.push_back(Range{code + 1, r_ - 1});
    for (const auto& rg : rest) {
      emit(symbol, from, from_pos, to, to_pos, {{p, Variable{var(p), rg}, VarRef{var(p), 0}}}, cell_range());
    }
  }

  Range cell_range() const { return Range{0, r_ - 1}; }
  static std::string var(std::int64_t j) { return "c" + std::to_string(j); }

 private:
  CounterMachine& m_;
  std::int64_t t_;
  std::int64_t r_;
};

inline std::string fresh_state(const std::vector<std::string>& states, std::string name) {
  while (std::find(states.begin(), states.end(), name) != states.end()) name += "_";
  return name;
}

}  // namespace detail

/// Theorem 4: builds the (2t+2)-counter machine simulating `m` on inputs of
/// length <= n for t steps.
inline Thm4Artifacts thm4_transform(const TuringMachine& m, std::int64_t n, std::int64_t t) {
  if (t < 1) throw DomainError("thm4_transform: t must be at least 1");
  if (n < 0 || n > t + 1) throw DomainError("thm4_transform: requires 0 <= n <= t+1");
  for (const auto& s : m.tape_alphabet) {
    if (is_reserved_symbol(s)) throw DomainError("thm4_transform: tape symbol '" + s + "' collides with a reserved symbol");
  }
  Thm4Artifacts a;
  a.source = m;
  a.n = n;
  a.t = t;
  a.r = static_cast<std::int64_t>(m.tape_alphabet.size()) + 1;
  for (std::size_t i = 0; i < m.tape_alphabet.size(); ++i) a.e.push_back(static_cast<std::int64_t>(i) + 1);
  const auto r = a.r;
  const auto blank_code = a.e[0];

  CounterMachine& cm = a.machine;
  cm.control.states = m.states;
  const auto q0_name = detail::fresh_state(m.states, "q0");
  cm.control.states.push_back(q0_name);
  const auto q0p_name = detail::fresh_state(cm.control.states, "q0'");
  cm.control.states.push_back(q0p_name);
  a.q0 = static_cast<int>(m.states.size());
  a.q0_prime = a.q0 + 1;
  cm.control.initial = a.q0;
  cm.control.accept = m.accept;
  cm.control.reject = m.reject;
  cm.control.input_alphabet = m.input_alphabet();
  cm.control.padding = reserved_padding();
  cm.control.complete_with_identity = true;
  cm.counters = static_cast<int>(2 * t + 2);
  cm.allowed_deltas.clear();
  for (std::int64_t d = -r; d <= r; ++d) cm.allowed_deltas.push_back(d);

  detail::Thm4Emitter em(cm, t, r);
  const int A = a.q0;
  const int D = a.q0_prime;
  const int E = m.initial;
  const auto top = 2 * t + 2;  // largest position value
  const auto C = 2 * t + 1;    // number of cells

  // #: (q0, zeros, 0) <-> (q0, zeros, 1).
  {
    std::vector<detail::Thm4Emitter::CellOp> zeros;
    for (std::int64_t j = 1; j <= C; ++j) zeros.push_back({j, CounterPattern{std::int64_t{0}}, CounterTarget{std::int64_t{0}}});
    em.emit(kLeftEnd, A, 0, A, 1, zeros, em.cell_range());
    em.emit(kLeftEnd, A, 1, A, 0, zeros, em.cell_range());
  }

  // Input symbols: write e(sigma) into the cell under the cursor.
  for (std::size_t si = 1; si < m.tape_alphabet.size(); ++si) {
    const auto& s = m.tape_alphabet[si];
    for (std::int64_t p = 1; p <= C; ++p) em.move_add(s, A, p, A, p + 1, p, a.e[si]);
    em.move(s, A, top, D, C);
    for (std::int64_t p = C; p >= 2; --p) em.move(s, D, p, D, p - 1);
    em.move(s, D, 1, A, 1);
  }

  // B2: shift the input block from cells 1..k to t+1..t+k.
  for (std::int64_t p = top; p >= 2; --p) {
    if (p <= t + 2) {
      em.move_swap("B2", A, p, A, p - 1, p - 1, p - 1 + t);
    } else {
      em.move("B2", A, p, A, p - 1);
    }
  }
  em.move("B2", A, 1, D, 1);
  for (std::int64_t p = 1; p <= C - 1; ++p) em.move("B2", D, p, D, p + 1);
  em.move("B2", D, C, A, top);

  // B3: blank-fill every empty cell, then park the head at cell 0 in p0.
  for (std::int64_t p = 1; p <= C; ++p) em.move_fill("B3", A, p, A, p + 1, p, blank_code);
  em.move("B3", A, top, D, C);
  for (std::int64_t p = C; p >= t + 2; --p) em.move("B3", D, p, D, p - 1);
  em.move("B3", D, t + 1, E, t + 1);
  for (std::int64_t p = t + 1; p >= 2; --p) em.move("B3", E, p, E, p - 1);
  em.move("B3", E, 1, A, 1);

  // B4: one QTM step per symbol.
  for (const auto& rule : m.rules) {
    for (std::int64_t i = 1; i <= C; ++i) {
      em.emit("B4", rule.state, i, rule.next, i + static_cast<std::int64_t>(rule.move),
              {{i, CounterPattern{a.e.at(static_cast<std::size_t>(rule.read))},
                CounterTarget{a.e.at(static_cast<std::size_t>(rule.write))}}},
              Range{1, r - 1}, rule.amplitude);
    }
  }

  auto& p = a.provenance;
  p["stage"] = "thm4";
  p["n"] = n;
  p["t"] = t;
  p["r"] = r;
  nlohmann::ordered_json etab;
  for (std::size_t i = 0; i < m.tape_alphabet.size(); ++i) etab[m.tape_alphabet[i]] = a.e[i];
  p["e"] = etab;
  p["auxiliary_states"] = {q0_name, q0p_name};
  p["counters"] = cm.counters;
  p["counter_convention"] = "tape cell j <-> counter j+t+1; counter 2t+2 holds head+t+1";
  p["l2"] = "k";
  p["l3"] = 3 * t + 3;
  p["l4"] = t;
  p["encoded_length"] = "2k + 4t + 5";
  p["slowdown_certificate"] = {{"c1", Thm4Artifacts::c1},
                               {"c2", Thm4Artifacts::c2},
                               {"c3", Thm4Artifacts::c3},
                               {"bound", "length <= c1*k + c2*t + c3 <= 4(n+t)+5"},
                               {"max_length", Thm4Artifacts::c1 * n + Thm4Artifacts::c2 * t + Thm4Artifacts::c3}};
  p["target_rules"] = cm.rules.size();
  return a;
}

/// Largest entrywise difference between V_B4 g(c) and g(U c) over the
/// reachable non-final QTM configurations within t steps of `inputs`.
struct IntertwiningReport {
  std::size_t configs = 0;
  double max_deviation = 0.0;
  std::string worst;
};

inline IntertwiningReport thm4_intertwining(const Thm4Artifacts& a, const std::vector<std::vector<std::string>>& inputs) {
  QtmDynamics qd(a.source, a.t);
  CounterDynamics cd(a.machine);
  std::set<ConfigKey> reach;
  for (const auto& x : inputs) {
    std::set<ConfigKey> cur{qd.initial(x)};
    for (std::int64_t step = 0; step < a.t; ++step) {
      std::set<ConfigKey> next;
      for (const auto& c : cur) {
        if (qd.is_final(c)) continue;
        reach.insert(c);
        for (const auto& [k, amp] : qd.image(c)) next.insert(k);
      }
      cur = std::move(next);
    }
  }
  IntertwiningReport rep;
  rep.configs = reach.size();
  for (const auto& c : reach) {
    Superposition lhs;
    for (const auto& [k, amp] : cd.image(a.g(c), "B4")) lhs.add(k, amp);
    Superposition rhs;
    for (const auto& [k, amp] : qd.image(c)) rhs.add(a.g(k), amp);
    std::set<ConfigKey> keys;
    for (const auto& [k, v] : lhs.entries()) keys.insert(k);
    for (const auto& [k, v] : rhs.entries()) keys.insert(k);
    for (const auto& k : keys) {
      const double d = std::abs(lhs.at(k) - rhs.at(k));
      if (d > rep.max_deviation) {
        rep.max_deviation = d;
        rep.worst = qd.describe(c);
      }
    }
  }
  return rep;
}

}  // namespace qmf

#endif  // QMF_TRANSPILE_THM4_HPP
