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

#ifndef QMF_SIMULATOR_HPP
#define QMF_SIMULATOR_HPP

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "qmf/dynamics.hpp"
#include "qmf/enumerate.hpp"
#include "qmf/errors.hpp"
#include "qmf/machine.hpp"
#include "qmf/qtm.hpp"
#include "qmf/sparse_operator.hpp"
#include "qmf/superposition.hpp"

namespace qmf {

struct RunResult {
  Superposition final_state;
  double acceptance = 0.0;
  std::size_t steps = 0;
  std::vector<double> norms;               // squared norm after each step
  std::vector<Superposition> trace;        // filled only on request
  std::vector<std::string> rendered_final; // describe() of final support, sorted
  bool halting = true;                     // QTM halting convention (always true otherwise)
};

inline double acceptance_mass(const Superposition& s, int accept_state) {
  double p = 0.0;
  for (const auto& [k, a] : s.entries()) {
    if (k.state == accept_state) p += std::norm(a);
  }
  return p;
}

/// Applies the per-symbol evolution of `dyn` to `s` without materializing
/// an operator.
template <SymbolDynamics D>
Superposition apply_symbol(const D& dyn, const std::string& symbol, const Superposition& s) {
  Superposition out;
  for (const auto& [k, a] : s.entries()) {
    for (const auto& [t, amp] : dyn.image(k, symbol)) out.add(t, a * amp);
  }
  return out;
}

/// Applies V'_sigma: sum over preimages with conjugated amplitudes.
template <SymbolDynamics D>
Superposition apply_adjoint_symbol(const D& dyn, const std::string& symbol, const Superposition& s) {
  Superposition out;
  for (const auto& [k, a] : s.entries()) {
    for (const auto& [src, amp] : dyn.preimage(k, symbol)) out.add(src, a * std::conj(amp));
  }
  return out;
}

/// V_sigma as explicit columns for every configuration in `basis`. Columns
/// carry the full image, so targets may fall outside the basis.
template <SymbolDynamics D>
SparseOperator build_evolution(const D& dyn, const std::string& symbol, const std::vector<ConfigKey>& basis) {
  SparseOperator op(dyn.control().complete_with_identity);
  for (const auto& c : basis) {
    auto col = dyn.image(c, symbol);
    if (!col.empty()) op.set_column(c, col);
  }
  return op;
}

/// V'_sigma: column c' holds conj(delta(c -> c')) at every preimage c.
template <SymbolDynamics D>
SparseOperator build_adjoint_evolution(const D& dyn, const std::string& symbol, const std::vector<ConfigKey>& basis) {
  SparseOperator op(dyn.control().complete_with_identity);
  for (const auto& c : basis) {
    auto col = dyn.preimage(c, symbol);
    for (auto& [k, a] : col) a = std::conj(a);
    if (!col.empty()) op.set_column(c, col);
  }
  return op;
}

inline SparseOperator build_evolution(const CounterMachine& m, const std::string& symbol, const SimulationBounds& b) {
  CounterDynamics d(m);
  return build_evolution(d, symbol, d.window_basis(b));
}
inline SparseOperator build_evolution(const StackMachine& m, const std::string& symbol, const SimulationBounds& b) {
  StackDynamics d(m);
  return build_evolution(d, symbol, d.window_basis(b));
}
inline SparseOperator build_adjoint_evolution(const CounterMachine& m, const std::string& symbol,
                                              const SimulationBounds& b) {
  CounterDynamics d(m);
  return build_adjoint_evolution(d, symbol, d.window_basis(b));
}
inline SparseOperator build_adjoint_evolution(const StackMachine& m, const std::string& symbol,
                                              const SimulationBounds& b) {
  StackDynamics d(m);
  return build_adjoint_evolution(d, symbol, d.window_basis(b));
}

/// Runs "# x $" from the initial configuration, tracking only nonzero
/// amplitudes. A target outside the window raises WindowLeak naming the step
/// (the position of the symbol being read, # = 0).
template <SymbolDynamics D>
RunResult run_machine(const D& dyn, const std::vector<std::string>& x, const SimulationBounds& b,
                      bool keep_trace = false) {
  RunResult res;
  const auto symbols = endmarked(x);
  Superposition s = Superposition::basis(dyn.initial());
  if (keep_trace) res.trace.push_back(s);
  for (std::size_t p = 0; p < symbols.size(); ++p) {
    if (!dyn.control().readable(symbols[p])) {
      throw DomainError("symbol '" + symbols[p] + "' is not in the machine's alphabet");
    }
    s = apply_symbol(dyn, symbols[p], s);
    for (const auto& [k, a] : s.entries()) {
      if (!dyn.in_window(k, b)) {
        throw WindowLeak("window leak at step " + std::to_string(p) + " (reading '" + symbols[p] + "'): " +
                             dyn.describe(k),
                         dyn.describe(k), static_cast<long>(p));
      }
    }
    res.norms.push_back(s.norm_squared());
    if (keep_trace) res.trace.push_back(s);
  }
  res.steps = symbols.size();
  res.acceptance = acceptance_mass(s, dyn.control().accept);
  for (const auto& [k, a] : s.sorted()) res.rendered_final.push_back(dyn.describe(k));
  res.final_state = std::move(s);
  return res;
}

inline RunResult run_counter_machine(const CounterMachine& m, const std::vector<std::string>& x,
                                     const SimulationBounds& b, bool keep_trace = false) {
  return run_machine(CounterDynamics(m), x, b, keep_trace);
}

inline RunResult run_stack_machine(const StackMachine& m, const std::vector<std::string>& x,
                                   const SimulationBounds& b, bool keep_trace = false) {
  return run_machine(StackDynamics(m), x, b, keep_trace);
}

/// U_M as explicit columns over `basis` (tape configurations).
inline SparseOperator qtm_step_operator(const TuringMachine& m, const SimulationBounds& b,
                                        const std::vector<ConfigKey>& basis) {
  QtmDynamics d(m, b.radius);
  SparseOperator op;
  for (const auto& c : basis) op.set_column(c, d.image(c));
  return op;
}

/// U_M over the whole window; refuses windows with more than 10^6 configurations.
inline SparseOperator qtm_step_operator(const TuringMachine& m, const SimulationBounds& b) {
  const auto cells = 2 * b.radius + 1;
  double size = static_cast<double>(m.states.size()) * static_cast<double>(cells);
  for (std::int64_t i = 0; i < cells; ++i) size *= static_cast<double>(m.tape_alphabet.size());
  if (size > 1e6) throw DomainError("qtm_step_operator: window too large to materialize");
  QtmDynamics d(m, b.radius);
  std::vector<ConfigKey> basis;
  std::vector<std::int64_t> tape(static_cast<std::size_t>(cells), 0);
  const auto g = static_cast<std::int64_t>(m.tape_alphabet.size());
  while (true) {
    for (int q = 0; q < static_cast<int>(m.states.size()); ++q) {
      for (std::int64_t h = -b.radius; h <= b.radius; ++h) basis.push_back(d.make(q, tape, h));
    }
    std::size_t p = 0;
    while (p < tape.size() && ++tape[p] == g) tape[p++] = 0;
    if (p == tape.size()) break;
  }
  return qtm_step_operator(m, b, basis);
}

/// Applies U_M t times from |q0>|tau0>|0>.
inline RunResult run_qtm(const TuringMachine& m, const std::vector<std::string>& x, std::int64_t t,
                         const SimulationBounds& b, bool keep_trace = false) {
  if (t < 0) throw DomainError("t must be nonnegative");
  QtmDynamics d(m, b.radius);
  RunResult res;
  Superposition s = Superposition::basis(d.initial(x));
  if (keep_trace) res.trace.push_back(s);
  auto any_final = [&](const Superposition& v) {
    return std::any_of(v.entries().begin(), v.entries().end(), [&](const auto& e) { return d.is_final(e.first); });
  };
  bool early_final = any_final(s);
  for (std::int64_t step = 0; step < t; ++step) {
    Superposition next;
    for (const auto& [k, a] : s.entries()) {
      Column col;
      try {
        col = d.image(k);
      } catch (const WindowLeak& e) {
        throw WindowLeak(e.what(), e.config(), static_cast<long>(step));
      }
      for (const auto& [tk, amp] : col) next.add(tk, a * amp);
    }
    s = std::move(next);
    res.norms.push_back(s.norm_squared());
    if (keep_trace) res.trace.push_back(s);
    if (step + 1 < t) early_final = early_final || any_final(s);
  }
  const bool all_final =
      !s.empty() && std::all_of(s.entries().begin(), s.entries().end(), [&](const auto& e) { return d.is_final(e.first); });
  res.halting = all_final && !early_final;
  res.steps = static_cast<std::size_t>(t);
  res.acceptance = acceptance_mass(s, m.accept);
  for (const auto& [k, a] : s.sorted()) res.rendered_final.push_back(d.describe(k));
  res.final_state = std::move(s);
  return res;
}

/// Default window for a run of `symbols` symbols (including endmarkers).
inline SimulationBounds default_bounds(const CounterMachine& m, std::size_t symbols) {
  SimulationBounds b;
  b.n_max = static_cast<std::int64_t>(symbols) * std::max<std::int64_t>(1, m.max_abs_delta()) + 1;
  return b;
}

inline SimulationBounds default_bounds(const StackMachine&, std::size_t symbols) {
  SimulationBounds b;
  b.d_max = static_cast<std::int64_t>(symbols) + 1;
  return b;
}

inline SimulationBounds default_bounds(const TuringMachine&, std::int64_t t) {
  SimulationBounds b;
  b.radius = std::max<std::int64_t>(1, t);
  return b;
}

/// Splits an input word into alphabet symbols: on whitespace/commas when
/// present, otherwise by greedy longest match.
inline std::vector<std::string> split_input(const std::string& text, std::vector<std::string> alphabet) {
  std::vector<std::string> out;
  if (text.find_first_of(" ,") != std::string::npos) {
    std::string cur;
    for (char ch : text + " ") {
      if (ch == ' ' || ch == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    return out;
  }
  std::sort(alphabet.begin(), alphabet.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool hit = false;
    for (const auto& a : alphabet) {
      if (!a.empty() && text.compare(pos, a.size(), a) == 0) {
        out.push_back(a);
        pos += a.size();
        hit = true;
        break;
      }
    }
    if (!hit) throw DomainError("input '" + text + "' is not a word over the alphabet");
  }
  return out;
}

/// All words over `alphabet` of length <= max_len, length-lexicographic.
inline std::vector<std::vector<std::string>> all_inputs(const std::vector<std::string>& alphabet, std::size_t max_len) {
  std::vector<std::vector<std::string>> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const auto end = out.size();
    for (auto i = begin; i < end; ++i) {
      for (const auto& a : alphabet) {
        auto w = out[i];
        w.push_back(a);
        out.push_back(std::move(w));
      }
    }
    begin = end;
  }
  return out;
}

inline std::string join_word(const std::vector<std::string>& x) {
  const bool spaced = std::any_of(x.begin(), x.end(), [](const auto& a) { return a.size() != 1; });
  std::string s;
  for (const auto& a : x) s += (spaced && !s.empty() ? " " : "") + a;
  return s;
}

inline nlohmann::ordered_json to_json(const RunResult& r, bool with_trace = false) {
  nlohmann::ordered_json j;
  j["probability"] = r.acceptance;
  j["steps"] = r.steps;
  j["halting"] = r.halting;
  j["norms"] = r.norms;
  nlohmann::ordered_json fin = nlohmann::ordered_json::array();
  const auto sorted = r.final_state.sorted();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    fin.push_back({{"config", i < r.rendered_final.size() ? r.rendered_final[i] : raw_config_string(sorted[i].first)},
                   {"re", sorted[i].second.real()},
                   {"im", sorted[i].second.imag()}});
  }
  j["final"] = std::move(fin);
  if (with_trace) {
    nlohmann::ordered_json tr = nlohmann::ordered_json::array();
    for (const auto& s : r.trace) {
      nlohmann::ordered_json step = nlohmann::ordered_json::array();
      for (const auto& [k, a] : s.sorted()) {
        step.push_back({{"config", raw_config_string(k)}, {"re", a.real()}, {"im", a.imag()}});
      }
      tr.push_back(std::move(step));
    }
    j["trace"] = std::move(tr);
  }
  return j;
}

}  // namespace qmf

#endif  // QMF_SIMULATOR_HPP
