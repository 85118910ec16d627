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

#ifndef QMF_SAMPLES_HPP
#define QMF_SAMPLES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmf/machine.hpp"
#include "qmf/transpile_thm5.hpp"

// Hand-written machines used by the corpus, the tests and the acceptance
// binary. Unitary ("Hadamard-style") machines are built as a Hadamard on the
// control times a finite permutation of counter values, with identity
// completion outside the permuted block.

namespace qmf::samples {

inline const double kR2 = 1.0 / std::sqrt(2.0);

inline Control control(std::vector<std::string> states, std::vector<std::string> alphabet, bool complete = true) {
  Control c;
  c.states = std::move(states);
  c.initial = c.state_index("q0");
  c.accept = c.state_index("qa");
  c.reject = c.state_index("qr");
  c.input_alphabet = std::move(alphabet);
  c.complete_with_identity = complete;
  return c;
}

inline Variable var(std::string name, std::int64_t lo, std::optional<std::int64_t> hi) {
  return Variable{std::move(name), Range{lo, hi}};
}
inline VarRef ref(std::string name, std::int64_t offset = 0) { return VarRef{std::move(name), offset}; }

/// Adds a rule to a counter machine by state name.
inline void add(CounterMachine& m, const std::string& from, const std::string& sym, std::vector<CounterPattern> src,
                const std::string& to, std::vector<CounterTarget> tgt, Amplitude amp = 1.0) {
  m.rules.push_back(CounterRule{m.control.state_index(from), sym, std::move(src), m.control.state_index(to),
                                std::move(tgt), amp});
}

inline void add(StackMachine& m, const std::string& from, const std::string& sym, std::vector<StackPattern> src,
                const std::string& to, std::vector<StackTarget> tgt, Amplitude amp = 1.0) {
  m.rules.push_back(StackRule{m.control.state_index(from), sym, std::move(src), m.control.state_index(to),
                              std::move(tgt), amp});
}

/// Hadamard on {q0, q1} combined with the literal counter map n -> f(n) on
/// the listed values.
inline void hadamard_block(CounterMachine& m, const std::string& sym, const std::vector<std::int64_t>& values,
                           const std::function<std::int64_t(std::int64_t)>& f) {
  for (auto n : values) {
    add(m, "q0", sym, {n}, "q0", {f(n)}, kR2);
    add(m, "q0", sym, {n}, "q1", {f(n)}, kR2);
    add(m, "q1", sym, {n}, "q0", {f(n)}, kR2);
    add(m, "q1", sym, {n}, "q1", {f(n)}, -kR2);
  }
}

inline std::vector<std::int64_t> span(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> v;
  for (auto n = lo; n <= hi; ++n) v.push_back(n);
  return v;
}

/// No rules at all: every operator is the identity.
inline CounterMachine counter_identity() {
  CounterMachine m;
  m.control = control({"q0", "qa", "qr"}, {"a"});
  return m;
}

/// The only # rule sends q0 to qa (and back); P(x) = 1 for every x.
inline CounterMachine counter_accept_on_hash() {
  CounterMachine m;
  m.control = control({"q0", "qa", "qr"}, {"a"});
  add(m, "q0", kLeftEnd, {std::int64_t{0}}, "qa", {std::int64_t{0}});
  add(m, "qa", kLeftEnd, {std::int64_t{0}}, "q0", {std::int64_t{0}});
  return m;
}

/// Toggles the counter parity on "a" and never reaches qa.
inline CounterMachine counter_never_accept() {
  CounterMachine m;
  m.control = control({"q0", "qa", "qr"}, {"a"});
  for (auto n : span(0, 7)) add(m, "q0", "a", {n}, "q0", {n ^ 1});
  return m;
}

/// Hadamard branching with unit counter steps; K = 7.
inline CounterMachine counter_hadamard() {
  CounterMachine m;
  m.control = control({"q0", "q1", "qa", "qr"}, {"a", "b"});
  hadamard_block(m, "a", span(0, 7), [](std::int64_t n) { return n ^ 1; });
  add(m, "q0", "b", {var("n", 0, 7)}, "q1", {ref("n")});
  add(m, "q1", "b", {var("n", 0, 7)}, "q0", {ref("n")});
  add(m, "q0", kRightEnd, {var("n", 0, 7)}, "qa", {ref("n")}, kR2);
  add(m, "q0", kRightEnd, {var("n", 0, 7)}, "qr", {ref("n")}, kR2);
  add(m, "qa", kRightEnd, {var("n", 0, 7)}, "qa", {ref("n")}, kR2);
  add(m, "qa", kRightEnd, {var("n", 0, 7)}, "qr", {ref("n")}, -kR2);
  add(m, "qr", kRightEnd, {var("n", 0, 7)}, "q0", {ref("n")});
  return m;
}

namespace detail {

/// Shared $ operator of the ±3 samples: a Hadamard-like mixer for n <= 5 and
/// a plain state exchange for n in [6, 11].
inline void mixed_end(CounterMachine& m) {
  const auto lo = var("n", 0, 5);
  add(m, "q0", kRightEnd, {lo}, "qa", {ref("n")}, kR2);
  add(m, "q0", kRightEnd, {lo}, "qr", {ref("n")}, kR2);
  add(m, "q1", kRightEnd, {lo}, "qa", {ref("n")}, kR2);
  add(m, "q1", kRightEnd, {lo}, "qr", {ref("n")}, -kR2);
  add(m, "qa", kRightEnd, {lo}, "q0", {ref("n")}, kR2);
  add(m, "qa", kRightEnd, {lo}, "q1", {ref("n")}, kR2);
  add(m, "qr", kRightEnd, {lo}, "q0", {ref("n")}, kR2);
  add(m, "qr", kRightEnd, {lo}, "q1", {ref("n")}, -kR2);
  const auto hi = var("n", 6, 11);
  add(m, "q0", kRightEnd, {hi}, "qa", {ref("n")});
  add(m, "q1", kRightEnd, {hi}, "qr", {ref("n")});
  add(m, "qa", kRightEnd, {hi}, "q0", {ref("n")});
  add(m, "qr", kRightEnd, {hi}, "q1", {ref("n")});
}

inline std::int64_t block3(std::int64_t n) { return (n % 6) < 3 ? n + 3 : n - 3; }
inline std::int64_t block2(std::int64_t n) { return (n % 4) < 2 ? n + 2 : n - 2; }

}  // namespace detail

/// One counter counting with {0, ±1, ±3}: Hadamard times ±3 block swaps on
/// "a", control swap times parity flip on "b".
inline CounterMachine counter_pm3() {
  CounterMachine m;
  m.control = control({"q0", "q1", "qa", "qr"}, {"a", "b"});
  m.allowed_deltas = {-3, -1, 0, 1, 3};
  hadamard_block(m, "a", span(0, 11), detail::block3);
  for (auto n : span(0, 11)) {
    add(m, "q0", "b", {n}, "q1", {n ^ 1});
    add(m, "q1", "b", {n}, "q0", {n ^ 1});
  }
  detail::mixed_end(m);
  return m;
}

/// One counter counting with {0, ±1, ±2, ±3}.
inline CounterMachine counter_pm123() {
  CounterMachine m;
  m.control = control({"q0", "q1", "qa", "qr"}, {"a", "b"});
  m.allowed_deltas = {-3, -2, -1, 0, 1, 2, 3};
  hadamard_block(m, "a", span(0, 11), detail::block3);
  for (auto n : span(0, 11)) {
    add(m, "q0", "b", {n}, "q0", {detail::block2(n)});
    add(m, "q1", "b", {n}, "q1", {n ^ 1});
  }
  detail::mixed_end(m);
  return m;
}

/// Two counters: "a" and "b" flip the parity of counter 1 and 2; $ accepts
/// iff counter 1 is odd.
inline CounterMachine counter_two() {
  CounterMachine m;
  m.control = control({"q0", "qa", "qr"}, {"a", "b"});
  m.counters = 2;
  for (auto n : span(0, 3)) {
    add(m, "q0", "a", {n, var("y", 0, 3)}, "q0", {n ^ 1, ref("y")});
    add(m, "q0", "b", {var("x", 0, 3), n}, "q0", {ref("x"), n ^ 1});
  }
  add(m, "q0", kRightEnd, {std::int64_t{1}, var("y", 0, 3)}, "qa", {std::int64_t{1}, ref("y")});
  add(m, "qa", kRightEnd, {std::int64_t{1}, var("y", 0, 3)}, "q0", {std::int64_t{1}, ref("y")});
  return m;
}

/// Hadamard with the shift n -> n+1: an isometry that is not surjective
/// (configurations with counter 0 have no preimage). No identity completion.
inline CounterMachine counter_shift_hadamard() {
  CounterMachine m;
  m.control = control({"q0", "q1", "qa", "qr"}, {"a"}, false);
  const auto n = var("n", 0, std::nullopt);
  add(m, "q0", "a", {n}, "q0", {ref("n", 1)}, kR2);
  add(m, "q0", "a", {n}, "q1", {ref("n", 1)}, kR2);
  add(m, "q1", "a", {n}, "q0", {ref("n", 1)}, kR2);
  add(m, "q1", "a", {n}, "q1", {ref("n", 1)}, -kR2);
  add(m, "qa", "a", {n}, "qa", {ref("n", 1)});
  add(m, "qr", "a", {n}, "qr", {ref("n", 1)});
  return m;
}

// -- deliberately broken ---------------------------------------------------

/// Amplitude 0.8 on a diagonal entry.
inline CounterMachine broken_amplitude() {
  CounterMachine m;
  m.control = control({"q0", "qa", "qr"}, {"a"});
  add(m, "q0", "a", {std::int64_t{0}}, "q0", {std::int64_t{0}}, 0.8);
  return m;
}

/// A source branching to two targets with amplitude 1 each (norm 2).
inline CounterMachine broken_row_norm() {
  CounterMachine m;
  m.control = control({"q0", "qa", "qr"}, {"a"});
  add(m, "q0", "a", {var("n", 1, 4)}, "qa", {ref("n", 1)});
  add(m, "q0", "a", {var("n", 1, 4)}, "qr", {ref("n", -1)});
  return m;
}

/// Two distinct sources sharing a target.
inline CounterMachine broken_merge() {
  CounterMachine m;
  m.control = control({"q0", "qa", "qr"}, {"a"});
  add(m, "q0", "a", {std::int64_t{0}}, "qa", {std::int64_t{1}});
  add(m, "qr", "a", {std::int64_t{0}}, "qa", {std::int64_t{1}});
  return m;
}

// -- stack machines ----------------------------------------------------------

inline StackPattern exact(std::vector<std::int64_t> s) {
  const auto h = static_cast<std::int64_t>(s.size());
  s.push_back(kBottomSymbol);
  return StackPattern{std::move(s), Range{h, h}};
}
inline StackTarget put(std::vector<std::int64_t> s) {
  s.push_back(kBottomSymbol);
  return StackTarget{std::move(s)};
}
/// Any stack, left untouched.
inline StackPattern any() { return StackPattern{{}, Range{0, std::nullopt}}; }
inline StackTarget keep() { return StackTarget{{}}; }

inline StackMachine stack_identity() {
  StackMachine m;
  m.control = control({"q0", "qa", "qr"}, {"a"});
  m.stack_alphabet = {"Z0", "X"};
  return m;
}

/// Two stacks; "a" pairs heights 0<->1 and 2<->3 on stack 1, "b" does the
/// same on stack 2 under a Hadamard; $ accepts from q1.
inline StackMachine stack_push_pop() {
  StackMachine m;
  m.control = control({"q0", "q1", "qa", "qr"}, {"a", "b"});
  m.stacks = 2;
  m.stack_alphabet = {"Z0", "X"};
  const std::int64_t X = 1;
  const std::vector<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> pairs{
      {{}, {X}}, {{X}, {}}, {{X, X}, {X, X, X}}, {{X, X, X}, {X, X}}};
  for (const auto& q : {"q0", "q1"}) {
    for (const auto& [from, to] : pairs) add(m, q, "a", {exact(from), any()}, q, {put(to), keep()});
  }
  for (const auto& [from, to] : pairs) {
    add(m, "q0", "b", {any(), exact(from)}, "q0", {keep(), put(to)}, kR2);
    add(m, "q0", "b", {any(), exact(from)}, "q1", {keep(), put(to)}, kR2);
    add(m, "q1", "b", {any(), exact(from)}, "q0", {keep(), put(to)}, kR2);
    add(m, "q1", "b", {any(), exact(from)}, "q1", {keep(), put(to)}, -kR2);
  }
  add(m, "q1", kRightEnd, {any(), any()}, "qa", {keep(), keep()});
  add(m, "qa", kRightEnd, {any(), any()}, "q1", {keep(), keep()});
  return m;
}

/// The Hadamard counter machine carried over to one stack.
inline StackMachine stack_hadamard() { return thm5_transform(counter_hadamard()).stack(); }

/// Two control states pushing onto the same empty stack.
inline StackMachine broken_stack_merge() {
  StackMachine m;
  m.control = control({"q0", "q1", "qa", "qr"}, {"a"});
  m.stack_alphabet = {"Z0", "X"};
  add(m, "q0", "a", {exact({})}, "qa", {put({1})});
  add(m, "q1", "a", {exact({})}, "qa", {put({1})});
  return m;
}

// -- quantum Turing machines ---------------------------------------------------

/// Branching QTM halting exactly at step t: on "a" the first step splits
/// evenly into an accept lane and a reject lane, anything else goes to the
/// reject lane; each lane walks right t-1 cells. The closing rules on qa, qr
/// complete the local map to a unitary. P("a") = 1/2, P(eps) = P("b") = 0.
inline TuringMachine toy_qtm(std::int64_t t) {
  if (t < 1) throw DomainError("toy_qtm: t must be at least 1");
  TuringMachine m;
  m.tape_alphabet = {"B", "a", "b"};
  m.states = {"p0"};
  for (std::int64_t j = 1; j < t; ++j) m.states.push_back("A" + std::to_string(j));
  for (std::int64_t j = 1; j < t; ++j) m.states.push_back("R" + std::to_string(j));
  m.states.push_back("qa");
  m.states.push_back("qr");
  m.initial = 0;
  m.accept = m.state_index("qa");
  m.reject = m.state_index("qr");
  auto A = [&](std::int64_t j) { return j >= t ? m.accept : m.state_index("A" + std::to_string(j)); };
  auto R = [&](std::int64_t j) { return j >= t ? m.reject : m.state_index("R" + std::to_string(j)); };
  const int B = 0, a = 1, b = 2;
  auto rule = [&](int q, int s, int w, int p, Amplitude c) { m.rules.push_back(TapeRule{q, s, w, p, Move::R, c}); };
  rule(0, a, a, A(1), kR2);
  rule(0, a, a, R(1), kR2);
  rule(0, b, b, R(1), 1.0);
  rule(0, B, B, R(1), 1.0);
  for (std::int64_t j = 1; j < t; ++j) {
    for (int s : {B, a, b}) {
      rule(A(j), s, s, A(j + 1), 1.0);
      rule(R(j), s, s, R(j + 1), 1.0);
    }
  }
  rule(m.accept, a, a, A(1), kR2);
  rule(m.accept, a, a, R(1), -kR2);
  rule(m.accept, b, b, A(1), 1.0);
  rule(m.accept, B, B, A(1), 1.0);
  for (int s : {B, a, b}) rule(m.reject, s, s, 0, 1.0);
  return m;
}

/// Accepts in one step when the first cell is blank; the remaining rules
/// make the local map a permutation of (state, symbol) pairs.
inline TuringMachine qtm_blank_accept() {
  TuringMachine m;
  m.states = {"p0", "qa", "qr"};
  m.tape_alphabet = {"B", "a"};
  m.initial = 0;
  m.accept = 1;
  m.reject = 2;
  m.rules.push_back(TapeRule{0, 0, 0, 1, Move::R, 1.0});
  m.rules.push_back(TapeRule{1, 0, 0, 0, Move::R, 1.0});
  m.rules.push_back(TapeRule{0, 1, 1, 2, Move::R, 1.0});
  m.rules.push_back(TapeRule{2, 1, 1, 0, Move::R, 1.0});
  m.rules.push_back(TapeRule{1, 1, 1, 1, Move::R, 1.0});
  m.rules.push_back(TapeRule{2, 0, 0, 2, Move::R, 1.0});
  return m;
}

/// A named corpus entry; `broken` marks machines expected to fail W-F.
struct Entry {
  std::string name;
  MachineDescription machine;
  bool broken = false;
  std::string note;
};

inline std::vector<Entry> corpus() {
  return {
      {"counter_identity", counter_identity(), false, "no rules; every operator is the identity"},
      {"counter_accept_on_hash", counter_accept_on_hash(), false, "# sends q0 to qa; accepts everything"},
      {"counter_never_accept", counter_never_accept(), false, "parity flips only; never accepts"},
      {"counter_hadamard", counter_hadamard(), false, "Hadamard x parity flip, unit steps"},
      {"counter_pm3", counter_pm3(), false, "counts with {0, +-1, +-3}"},
      {"counter_pm123", counter_pm123(), false, "counts with {0, +-1, +-2, +-3}"},
      {"counter_two", counter_two(), false, "two counters; accepts iff #a is odd"},
      {"counter_shift_hadamard", counter_shift_hadamard(), true, "isometry n -> n+1, not surjective"},
      {"broken_amplitude", broken_amplitude(), true, "diagonal amplitude 0.8"},
      {"broken_row_norm", broken_row_norm(), true, "one source, two unit branches"},
      {"broken_merge", broken_merge(), true, "two sources, one target"},
      {"stack_identity", stack_identity(), false, "no rules"},
      {"stack_push_pop", stack_push_pop(), false, "push/pop pairs under a Hadamard"},
      {"stack_hadamard", stack_hadamard(), false, "counter_hadamard on one stack"},
      {"broken_stack_merge", broken_stack_merge(), true, "two states push onto the same stack"},
      {"toy_qtm_t1", toy_qtm(1), false, "branching QTM, halts at step 1"},
      {"toy_qtm_t3", toy_qtm(3), false, "branching QTM, halts at step 3"},
      {"qtm_blank_accept", qtm_blank_accept(), false, "accepts on a blank first cell"},
  };
}

}  // namespace qmf::samples

#endif  // QMF_SAMPLES_HPP
