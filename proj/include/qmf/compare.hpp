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


#ifndef QMF_COMPARE_HPP
#define QMF_COMPARE_HPP

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "qmf/errors.hpp"
#include "qmf/machine.hpp"
#include "qmf/simulator.hpp"
#include "qmf/transpile_thm4.hpp"

namespace qmf {

/// Maps a source input to the symbols the target machine reads (without
/// endmarkers). The identity encoder is the default.
using InputEncoder = std::function<std::vector<std::string>(const std::vector<std::string>&)>;

struct CompareOptions {
  std::optional<std::int64_t> t;      // QTM step count (required for QTMs)
  std::optional<SimulationBounds> bounds;  // overrides the per-input defaults
  InputEncoder encoder;              // applied to inputs of the second machine
  double tol = kDefaultTol;
};

struct InputComparison {
  std::vector<std::string> input;
  double p1 = 0.0;
  double p2 = 0.0;
  double diff = 0.0;
  std::string error;  // non-empty when either run failed (e.g. window leak)
};

enum class EquivalenceVerdict { Pass, Fail, Inconclusive };

struct EquivalenceReport {
  std::vector<InputComparison> rows;
  double max_diff = 0.0;
  double tol = kDefaultTol;
  EquivalenceVerdict verdict = EquivalenceVerdict::Pass;

  bool pass() const { return verdict == EquivalenceVerdict::Pass; }
};

/// Worker count: hardware concurrency capped by QMF_THREADS when set.
inline unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QMF_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Acceptance probability of `m` on symbols `x` (endmarkers added here).
inline double acceptance_of(const MachineDescription& m, const std::vector<std::string>& x, const CompareOptions& o) {
  return std::visit(
      [&](const auto& mm) -> double {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, TuringMachine>) {
          if (!o.t) throw DomainError("comparing a QTM requires t");
          return run_qtm(mm, x, *o.t, o.bounds ? *o.bounds : default_bounds(mm, *o.t)).acceptance;
        } else if constexpr (std::is_same_v<T, CounterMachine>) {
          return run_counter_machine(mm, x, o.bounds ? *o.bounds : default_bounds(mm, x.size() + 2)).acceptance;
        } else {
          return run_stack_machine(mm, x, o.bounds ? *o.bounds : default_bounds(mm, x.size() + 2)).acceptance;
        }
      },
      m);
}

/// Compares P1(x) with P2(encode(x)) over `inputs`. Runs that fail (window
/// leaks, unknown symbols) make the verdict inconclusive unless some other
/// input already fails.
inline EquivalenceReport compare_acceptance(const MachineDescription& m1, const MachineDescription& m2,
                                            const std::vector<std::vector<std::string>>& inputs,
                                            const CompareOptions& o = {}) {
  if (!(o.tol > 0.0)) throw DomainError("tol must be positive");
  EquivalenceReport rep;
  rep.tol = o.tol;
  rep.rows.resize(inputs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      auto& row = rep.rows[i];
      row.input = inputs[i];
      try {
        row.p1 = acceptance_of(m1, inputs[i], o);
        row.p2 = acceptance_of(m2, o.encoder ? o.encoder(inputs[i]) : inputs[i], o);
        row.diff = std::abs(row.p1 - row.p2);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  const unsigned workers = worker_count(inputs.size());
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  bool failed = false;
  bool errored = false;
  for (const auto& row : rep.rows) {
    if (!row.error.empty()) {
      errored = true;
      continue;
    }
    rep.max_diff = std::max(rep.max_diff, row.diff);
    if (row.diff > o.tol) failed = true;
  }
  rep.verdict = failed ? EquivalenceVerdict::Fail : errored ? EquivalenceVerdict::Inconclusive : EquivalenceVerdict::Pass;
  return rep;
}

/// Encoder padding inputs for a Theorem 4 (or pipeline) target.
inline InputEncoder thm4_encoder(const Thm4Artifacts& a) {
  return [a](const std::vector<std::string>& x) { return thm4_encode_input(x, a).symbols; };
}

inline const char* verdict_name(EquivalenceVerdict v) {
  switch (v) {
    case EquivalenceVerdict::Pass: return "pass";
    case EquivalenceVerdict::Fail: return "fail";
    case EquivalenceVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline nlohmann::ordered_json to_json(const EquivalenceReport& r) {
  nlohmann::ordered_json j;
  j["verdict"] = verdict_name(r.verdict);
  j["max_diff"] = r.max_diff;
  j["tol"] = r.tol;
  j["inputs"] = r.rows.size();
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json e;
    e["input"] = join_word(row.input);
    e["p1"] = row.p1;
    e["p2"] = row.p2;
    e["diff"] = row.diff;
    if (!row.error.empty()) e["error"] = row.error;
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace qmf

#endif  // QMF_COMPARE_HPP
