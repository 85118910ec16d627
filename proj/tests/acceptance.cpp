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


// Acceptance run: one PASS/FAIL line per criterion, each under a wall-clock
// budget. Exits non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qmf/qmf.hpp"
#include "qmf/samples.hpp"

namespace {

namespace s = qmf::samples;

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Every run performed by the equivalence sweeps, replayed for the norm check.
struct Sweep {
  std::string name;
  std::function<std::vector<double>(const std::vector<std::string>&)> norms;
  std::vector<std::vector<std::string>> inputs;
};
std::vector<Sweep> g_sweeps;

qmf::SimulationBounds window(std::int64_t n_max, std::int64_t d_max = 8) {
  qmf::SimulationBounds b;
  b.n_max = n_max;
  b.d_max = d_max;
  return b;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void register_counter(const std::string& name, const qmf::CounterMachine& m, const qmf::SimulationBounds& b,
                      std::vector<std::vector<std::string>> inputs, qmf::InputEncoder enc = {}) {
  g_sweeps.push_back({name, [m, b, enc](const auto& x) {
                        return qmf::run_counter_machine(m, enc ? enc(x) : x, b).norms;
                      }, std::move(inputs)});
}
void register_stack(const std::string& name, const qmf::StackMachine& m, const qmf::SimulationBounds& b,
                    std::vector<std::vector<std::string>> inputs, qmf::InputEncoder enc = {}) {
  g_sweeps.push_back({name, [m, b, enc](const auto& x) {
                        return qmf::run_stack_machine(m, enc ? enc(x) : x, b).norms;
                      }, std::move(inputs)});
}
void register_qtm(const std::string& name, const qmf::TuringMachine& m, std::int64_t t,
                  std::vector<std::vector<std::string>> inputs) {
  g_sweeps.push_back({name, [m, t](const auto& x) {
                        qmf::SimulationBounds b;
                        b.radius = t + 1;
                        return qmf::run_qtm(m, x, t, b).norms;
                      }, std::move(inputs)});
}

Outcome equivalence(const char* what, const qmf::EquivalenceReport& r, double tol) {
  const bool ok = r.pass() && r.max_diff <= tol;
  return {ok, std::string(what) + " " + qmf::verdict_name(r.verdict) + " over " + std::to_string(r.rows.size()) +
                  " inputs, max diff " + fmt("%.2e", r.max_diff)};
}

// 1. W-F verdicts agree with the dense-matrix oracle and with the labels.
Outcome wf_agreement() {
  int machines = 0, broken = 0, disagreements = 0, mislabelled = 0;
  auto sweep = [&](const auto& dyn, const qmf::SimulationBounds& b, bool expect_broken) {
    bool any_fail = false;
    for (const auto& sym : dyn.control().readable_symbols()) {
      const auto rec = qmf::wf_crosscheck(dyn, sym, b);
      if (!rec.agree()) ++disagreements;
      any_fail = any_fail || !rec.oracle_pass;
    }
    ++machines;
    broken += expect_broken ? 1 : 0;
    if (any_fail != expect_broken) ++mislabelled;
  };
  for (const auto& e : s::corpus()) {
    if (const auto* c = std::get_if<qmf::CounterMachine>(&e.machine)) {
      sweep(qmf::CounterDynamics(*c), window(14), e.broken);
    } else if (const auto* st = std::get_if<qmf::StackMachine>(&e.machine)) {
      sweep(qmf::StackDynamics(*st), window(14, e.name == "stack_hadamard" ? 9 : 4), e.broken);
    }
  }
  return {machines >= 10 && broken >= 3 && disagreements == 0 && mislabelled == 0,
          std::to_string(machines) + " machines (" + std::to_string(broken) + " broken), " +
              std::to_string(disagreements) + " oracle disagreements, " + std::to_string(mislabelled) +
              " wrong verdicts"};
}

// 2. <U a, b> = <a, U^dagger b> on random superpositions.
Outcome adjoint_property() {
  std::mt19937 rng(20260517);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int machines = 0;
  auto random_state = [&](const std::vector<qmf::ConfigKey>& basis) {
    qmf::Superposition v;
    std::vector<qmf::Amplitude> a(basis.size());
    double n = 0.0;
    for (auto& x : a) {
      x = {g(rng), g(rng)};
      n += std::norm(x);
    }
    for (std::size_t i = 0; i < basis.size(); ++i) v.add(basis[i], a[i] / std::sqrt(n));
    return v;
  };
  auto sweep = [&](const auto& dyn, const qmf::SimulationBounds& b) {
    const auto basis = dyn.window_basis(b);
    const auto symbols = dyn.control().readable_symbols();
    for (int trial = 0; trial < 100; ++trial) {
      const auto& sym = symbols[static_cast<std::size_t>(trial) % symbols.size()];
      const auto x = random_state(basis);
      const auto y = random_state(basis);
      const auto lhs = qmf::inner_product(qmf::apply_symbol(dyn, sym, x), y);
      const auto rhs = qmf::inner_product(x, qmf::apply_adjoint_symbol(dyn, sym, y));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    ++machines;
  };
  for (const auto& e : s::corpus()) {
    if (e.broken) continue;
    if (const auto* c = std::get_if<qmf::CounterMachine>(&e.machine)) {
      sweep(qmf::CounterDynamics(*c), window(11));
    } else if (const auto* st = std::get_if<qmf::StackMachine>(&e.machine)) {
      sweep(qmf::StackDynamics(*st), window(11, e.name == "stack_hadamard" ? 8 : 3));
    }
  }
  return {worst <= 1e-10, std::to_string(machines) + " machines x 100 pairs, max deviation " + fmt("%.2e", worst)};
}

// 3. Lemma 1 on the +-3 machine.
Outcome lemma1() {
  const auto src = s::counter_pm3();
  const auto out = qmf::lemma1_transform(src);
  const auto& dst = out.counter();
  const auto inputs = qmf::all_inputs(src.control.input_alphabet, 4);
  qmf::CompareOptions o;
  o.bounds = window(14);
  o.tol = 1e-9;
  auto res = equivalence("acceptance", qmf::compare_acceptance(src, dst, inputs, o), 1e-9);
  const bool deltas = dst.counters == 2 && dst.allowed_deltas == std::vector<std::int64_t>{-2, -1, 0, 1, 2};
  const auto wf = qmf::wf_check_counter(dst, window(6));
  register_counter("pm3", src, window(14), inputs);
  register_counter("pm3/lemma1", dst, window(14), inputs);
  res.ok = res.ok && deltas && wf.verdict() == qmf::WfVerdict::Pass;
  res.detail += std::string(", target W-F ") + (wf.verdict() == qmf::WfVerdict::Pass ? "pass" : "FAIL") +
                ", 2 counters D={0,+-1,+-2} " + (deltas ? "ok" : "WRONG");
  return res;
}

// 4. Lemma 2 on the +-1..3 machine, plus the encoding bijection.
Outcome lemma2() {
  const auto src = s::counter_pm123();
  const auto out = qmf::lemma2_transform(src);
  const auto& dst = out.counter();
  const auto inputs = qmf::all_inputs(src.control.input_alphabet, 4);
  qmf::CompareOptions o;
  o.bounds = window(14);
  o.tol = 1e-9;
  auto res = equivalence("acceptance", qmf::compare_acceptance(src, dst, inputs, o), 1e-9);
  const bool deltas = dst.counters == 3 && dst.allowed_deltas == std::vector<std::int64_t>{-1, 0, 1};
  const auto wf = qmf::wf_check_counter(dst, window(5));
  std::set<std::vector<std::int64_t>> images;
  bool bijective = true;
  for (std::int64_t n = 0; n <= 30; ++n) {
    const auto v = qmf::lemma2_encode(n, 3);
    bijective = bijective && qmf::lemma2_decode(v, 3) == n && images.insert(v).second;
  }
  register_counter("pm123/lemma2", dst, window(14), inputs);
  res.ok = res.ok && deltas && bijective && wf.verdict() == qmf::WfVerdict::Pass;
  res.detail += std::string(", target W-F ") + (wf.verdict() == qmf::WfVerdict::Pass ? "pass" : "FAIL") +
                ", bijection on [0,30] " + (bijective ? "ok" : "BROKEN");
  return res;
}

// 5. Theorem 4 on the toy QTM with n = 2, t = 3.
Outcome thm4() {
  const std::int64_t n = 2, t = 3;
  const auto src = s::toy_qtm(t);
  const auto a = qmf::thm4_transform(src, n, t);
  const auto inputs = qmf::all_inputs(src.input_alphabet(), static_cast<std::size_t>(n));
  std::vector<std::vector<std::string>> encoded;
  for (const auto& x : inputs) encoded.push_back(qmf::thm4_encode_input(x, a).symbols);

  const auto wf = qmf::wf_check_counter(a.machine, window(10), encoded);
  const auto tw = qmf::thm4_intertwining(a, inputs);
  qmf::CompareOptions o;
  o.t = t;
  o.encoder = qmf::thm4_encoder(a);
  o.bounds = window(10);
  o.tol = 1e-9;
  auto res = equivalence("acceptance", qmf::compare_acceptance(src, a.machine, inputs, o), 1e-9);
  register_qtm("toy_t3", src, t, inputs);
  register_counter("toy_t3/thm4", a.machine, window(10), inputs, qmf::thm4_encoder(a));
  const bool wf_ok = wf.verdict() == qmf::WfVerdict::Pass;
  std::size_t sources = 0;
  for (const auto& sr : wf.symbols) sources += sr.sources_tested;
  res.ok = res.ok && a.machine.counters == 8 && wf_ok && sources > 0 && tw.max_deviation <= 1e-12;
  res.detail = std::to_string(a.machine.counters) + " counters, reachable W-F " + (wf_ok ? "pass" : "FAIL") + " (" +
               std::to_string(sources) + " sources), intertwining " + fmt("%.2e", tw.max_deviation) + " over " + std::to_string(tw.configs) +
               " configs, " + res.detail;
  return res;
}

// 6. QTM -> QMCM -> unit-step QMCM -> QMSM.
Outcome pipeline() {
  const std::int64_t n = 1, t = 1;
  const auto src = s::toy_qtm(t);
  const auto p = qmf::pipeline_qtm_to_qmsm(src, n, t);
  const auto inputs = qmf::all_inputs(src.input_alphabet(), static_cast<std::size_t>(n));
  qmf::CompareOptions o;
  o.t = t;
  o.encoder = qmf::thm4_encoder(p.thm4);
  o.bounds = window(8, 8);
  o.tol = 1e-9;
  auto res = equivalence("acceptance", qmf::compare_acceptance(src, p.machine(), inputs, o), 1e-9);
  register_qtm("toy_t1", src, t, inputs);
  register_stack("toy_t1/pipeline", p.machine(), window(8, 8), inputs, qmf::thm4_encoder(p.thm4));
  const auto expected = (2 * t + 2) * (static_cast<std::int64_t>(src.input_alphabet().size()) + 2);
  res.ok = res.ok && p.machine().stacks == expected;
  res.detail = std::to_string(p.machine().stacks) + " stacks (expected " + std::to_string(expected) + "), " + res.detail;
  return res;
}

// 7. Encoded input length against the published certificate.
Outcome slowdown() {
  int cases = 0;
  std::int64_t worst_slack = std::numeric_limits<std::int64_t>::max();
  bool ok = true;
  for (const auto& e : s::corpus()) {
    const auto* m = std::get_if<qmf::TuringMachine>(&e.machine);
    if (m == nullptr) continue;
    for (std::int64_t t = 1; t + 1 <= 6; ++t) {
      for (std::int64_t n = 0; n <= t + 1; ++n) {
        const auto a = qmf::thm4_transform(*m, n, t);
        const auto published = a.provenance["slowdown_certificate"]["max_length"].get<std::int64_t>();
        ok = ok && published <= 4 * (n + t) + 5;
        for (std::int64_t k = 0; k <= n; ++k) {
          const std::vector<std::string> x(static_cast<std::size_t>(k), m->input_alphabet().front());
          const auto len = static_cast<std::int64_t>(qmf::thm4_encode_input(x, a).length());
          ok = ok && len <= published;
          worst_slack = std::min(worst_slack, 4 * (n + t) + 5 - len);
        }
        ++cases;
      }
    }
  }
  return {ok && cases > 0, std::to_string(cases) + " (machine, n, t) cases, min slack to 4(n+t)+5 = " +
                               std::to_string(worst_slack)};
}

// 8. Norm preservation over every run of the sweeps above.
Outcome norms() {
  std::size_t runs = 0, steps = 0;
  double worst = 0.0;
  std::string where;
  for (const auto& sw : g_sweeps) {
    for (const auto& x : sw.inputs) {
      for (double v : sw.norms(x)) {
        ++steps;
        if (std::abs(v - 1.0) > worst) {
          worst = std::abs(v - 1.0);
          where = sw.name + " on '" + qmf::join_word(x) + "'";
        }
      }
      ++runs;
    }
  }
  return {runs > 0 && worst <= 1e-8, std::to_string(runs) + " runs, " + std::to_string(steps) +
                                         " steps, max |norm^2 - 1| = " + fmt("%.2e", worst) +
                                         (where.empty() ? "" : " (" + where + ")")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"wf-oracle-agreement", 10, wf_agreement},
      {"adjoint-property", 10, adjoint_property},
      {"lemma1-pm3", 30, lemma1},
      {"lemma2-pm123", 30, lemma2},
      {"thm4-toy-n2-t3", 60, thm4},
      {"pipeline-end-to-end", 120, pipeline},
      {"slowdown-certificate", 1, slowdown},
      {"norm-preservation", 60, norms},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.ok && secs <= c.budget;
    failures += pass ? 0 : 1;
    std::printf("%s [%d] %-22s %6.2fs / %4.0fs  %s\n", pass ? "PASS" : "FAIL", index, c.name, secs, c.budget,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
