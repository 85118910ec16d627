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


// qmf: check, run, transpile and compare quantum abstract machines.
//
// Exit statuses
//   check      0 pass, 1 fail, 2 inconclusive only, 3 parse/validate error
//   run        0 ok, 3 parse/validate error, 4 window leak
//   transpile  0 ok, 3 parse error or stage precondition failure
//   compare    0 pass, 1 fail, 2 inconclusive, 3 parse/precondition error
//   any        64 usage error

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qmf/qmf.hpp"

namespace {

constexpr int kUsage = 64;

struct Common {
  std::string format = "text";
  std::optional<std::int64_t> nmax;
  std::optional<std::int64_t> dmax;
  std::optional<std::int64_t> radius;
  std::optional<double> tol;

  bool json() const { return format == "json"; }
  bool overridden() const { return nmax || dmax || radius || tol; }

  qmf::SimulationBounds apply(qmf::SimulationBounds b) const {
    if (nmax) b.n_max = *nmax;
    if (dmax) b.d_max = *dmax;
    if (radius) b.radius = *radius;
    if (tol) b.tol = *tol;
    b.check();
    return b;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "report format")->check(CLI::IsMember({"text", "json"}));
  app->add_option("--nmax", c.nmax, "largest counter value in the window");
  app->add_option("--dmax", c.dmax, "largest stack height in the window");
  app->add_option("--radius", c.radius, "tape window [-radius, radius]");
  app->add_option("--tol", c.tol, "numeric tolerance");
}

void print_json(const nlohmann::ordered_json& j) { std::cout << j.dump(2) << "\n"; }

/// Error report in the requested format; returns `status`.
int fail_with(const Common& c, int status, const std::string& kind, const std::string& message) {
  if (c.json()) {
    print_json({{"error", kind}, {"message", message}, {"status", status}});
  } else {
    std::cerr << kind << ": " << message << "\n";
  }
  return status;
}

std::vector<std::string> alphabet_of(const qmf::MachineDescription& m) {
  return std::visit(
      [](const auto& mm) -> std::vector<std::string> {
        using T = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<T, qmf::TuringMachine>) {
          return mm.input_alphabet();
        } else {
          auto v = mm.control.input_alphabet;
          v.insert(v.end(), mm.control.padding.begin(), mm.control.padding.end());
          return v;
        }
      },
      m);
}

std::vector<std::string> input_alphabet_of(const qmf::MachineDescription& m) {
  return std::visit(
      [](const auto& mm) -> std::vector<std::string> {
        if constexpr (std::is_same_v<std::decay_t<decltype(mm)>, qmf::TuringMachine>) {
          return mm.input_alphabet();
        } else {
          return mm.control.input_alphabet;
        }
      },
      m);
}

std::string describe_violations(const std::vector<qmf::Violation>& v) {
  std::string s;
  for (const auto& x : v) {
    s += "\n  ";
    s += x.rule >= 0 ? "rule " + std::to_string(x.rule) : std::string("machine");
    s += " [" + x.clause + "] " + x.message;
  }
  return s;
}

void print_wf_text(const qmf::WfReport& r) {
  std::cout << "verdict: " << qmf::verdict_name(r.verdict()) << " (" << r.family << ", " << r.scope
            << ", certificate " << r.certificate << ")\n";
  for (const auto& s : r.symbols) {
    std::printf("  %-4s condition I %s (dev %.3g)  condition II %s (dev %.3g)  sources %zu  targets %zu",
                s.symbol.c_str(), s.condition1 ? "pass" : "FAIL", s.deviation1, s.condition2 ? "pass" : "FAIL",
                s.deviation2, s.sources_tested, s.targets_tested);
    if (!s.inconclusive.empty()) std::printf("  inconclusive %zu", s.inconclusive.size());
    std::printf("\n");
    std::fflush(stdout);
    for (const auto& f : s.offenders) {
      std::cout << "    condition " << (f.condition == 1 ? "I" : "II") << " pair " << f.first << " ~ " << f.second
                << ": sum " << qmf::format_real_token(f.sum.real());
      if (f.sum.imag() != 0.0) std::cout << (f.sum.imag() < 0 ? " - " : " + ") << std::abs(f.sum.imag()) << "i";
      std::cout << ", expected " << f.expected << "\n";
    }
  }
}

// -- check -------------------------------------------------------------------

struct CheckArgs {
  std::string path;
  std::optional<std::size_t> all_inputs;
  std::optional<std::int64_t> t;
};

int cmd_check(const CheckArgs& a, const Common& c) {
  qmf::MachineDescription m;
  try {
    m = qmf::load_machine(a.path);
  } catch (const std::exception& e) {
    return fail_with(c, 3, "parse error", e.what());
  }
  const auto violations = qmf::validate(m);
  if (!violations.empty()) return fail_with(c, 3, "invalid machine", a.path + describe_violations(violations));

  try {
    const auto b = c.apply(qmf::SimulationBounds{});
    if (const auto* tm = std::get_if<qmf::TuringMachine>(&m)) {
      if (!a.t) return fail_with(c, kUsage, "usage error", "checking a QTM requires --t");
      auto bb = b;
      if (!c.radius) bb.radius = std::max<std::int64_t>(*a.t, 1);
      const auto inputs = qmf::all_inputs(tm->input_alphabet(), a.all_inputs.value_or(static_cast<std::size_t>(*a.t + 1)));
      const auto rep = qmf::qtm_isometry_check(*tm, inputs, *a.t, bb);
      if (c.json()) {
        print_json(qmf::to_json(rep));
      } else {
        std::cout << "verdict: " << (rep.pass ? "pass" : "fail") << " (qtm isometry on " << rep.configs
                  << " reachable configurations, max deviation " << rep.max_deviation << ")\n";
        for (const auto& f : rep.offenders) std::cout << "    pair " << f.first << " ~ " << f.second << "\n";
      }
      return rep.pass ? 0 : 1;
    }
    qmf::WfReport rep;
    if (const auto* cm = std::get_if<qmf::CounterMachine>(&m)) {
      qmf::enumerate_rules(*cm, b);
      rep = a.all_inputs ? qmf::wf_check_counter(*cm, b, qmf::all_inputs(cm->control.input_alphabet, *a.all_inputs))
                         : qmf::wf_check_counter(*cm, b);
    } else {
      const auto& sm = std::get<qmf::StackMachine>(m);
      qmf::enumerate_rules(sm, b);
      rep = a.all_inputs ? qmf::wf_check_stack(sm, b, qmf::all_inputs(sm.control.input_alphabet, *a.all_inputs))
                         : qmf::wf_check_stack(sm, b);
    }
    if (c.json()) {
      print_json(qmf::to_json(rep));
    } else {
      print_wf_text(rep);
    }
    switch (rep.verdict()) {
      case qmf::WfVerdict::Pass: return 0;
      case qmf::WfVerdict::Fail: return 1;
      case qmf::WfVerdict::Inconclusive: return 2;
    }
  } catch (const qmf::WindowLeak& e) {
    return fail_with(c, 2, "window leak", e.what());
  } catch (const qmf::DomainError& e) {
    return fail_with(c, 3, "domain error", e.what());
  }
  return 3;
}

// -- run ---------------------------------------------------------------------

struct RunArgs {
  std::string path;
  std::string input;
  std::optional<std::int64_t> t;
  bool trace = false;
};

int cmd_run(const RunArgs& a, const Common& c) {
  qmf::MachineDescription m;
  try {
    m = qmf::load_machine(a.path);
  } catch (const std::exception& e) {
    return fail_with(c, 3, "parse error", e.what());
  }
  const auto violations = qmf::validate(m);
  if (!violations.empty()) return fail_with(c, 3, "invalid machine", a.path + describe_violations(violations));
  if (std::holds_alternative<qmf::TuringMachine>(m) && !a.t) {
    return fail_with(c, kUsage, "usage error", "running a QTM requires --t");
  }
  try {
    const auto x = qmf::split_input(a.input, alphabet_of(m));
    qmf::RunResult r;
    if (const auto* tm = std::get_if<qmf::TuringMachine>(&m)) {
      r = qmf::run_qtm(*tm, x, *a.t, c.apply(qmf::default_bounds(*tm, *a.t)), a.trace);
    } else if (const auto* cm = std::get_if<qmf::CounterMachine>(&m)) {
      r = qmf::run_counter_machine(*cm, x, c.apply(qmf::default_bounds(*cm, x.size() + 2)), a.trace);
    } else {
      const auto& sm = std::get<qmf::StackMachine>(m);
      r = qmf::run_stack_machine(sm, x, c.apply(qmf::default_bounds(sm, x.size() + 2)), a.trace);
    }
    if (c.json()) {
      auto j = qmf::to_json(r, a.trace);
      j["input"] = qmf::join_word(x);
      print_json(j);
    } else {
      std::printf("%.12f\n", r.acceptance);
      if (a.trace) {
        for (std::size_t i = 0; i < r.norms.size(); ++i) std::printf("  step %zu norm^2 %.15g\n", i, r.norms[i]);
        for (const auto& s : r.rendered_final) std::cout << "  " << s << "\n";
      }
    }
    return 0;
  } catch (const qmf::WindowLeak& e) {
    if (c.json()) {
      print_json({{"error", "window leak"}, {"message", e.what()}, {"step", e.step()}, {"config", e.config()}, {"status", 4}});
    } else {
      std::cerr << "window leak at step " << e.step() << ": " << e.config() << "\n";
    }
    return 4;
  } catch (const qmf::DomainError& e) {
    return fail_with(c, 3, "domain error", e.what());
  }
}

// -- transpile ---------------------------------------------------------------

struct TranspileArgs {
  std::string stage;
  std::string path;
  std::string out;
  std::optional<std::int64_t> r;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> t;
};

std::string sidecar_path(const std::string& out) {
  const auto dot = out.rfind(".json");
  if (dot != std::string::npos && dot + 5 == out.size()) return out.substr(0, dot) + ".prov.json";
  return out + ".prov.json";
}

int cmd_transpile(const TranspileArgs& a, const Common& c) {
  qmf::MachineDescription m;
  try {
    m = qmf::load_machine(a.path);
  } catch (const std::exception& e) {
    return fail_with(c, 3, "parse error", e.what());
  }
  const auto violations = qmf::validate(m);
  if (!violations.empty()) return fail_with(c, 3, "invalid machine", a.path + describe_violations(violations));
  const bool needs_nt = a.stage == "thm4" || a.stage == "pipeline";
  if (needs_nt && (!a.n || !a.t)) return fail_with(c, kUsage, "usage error", a.stage + " requires --n and --t");

  try {
    auto counter = [&]() -> const qmf::CounterMachine& {
      if (const auto* cm = std::get_if<qmf::CounterMachine>(&m)) return *cm;
      throw qmf::DomainError(a.stage + " expects a counter machine");
    };
    auto turing = [&]() -> const qmf::TuringMachine& {
      if (const auto* tm = std::get_if<qmf::TuringMachine>(&m)) return *tm;
      throw qmf::DomainError(a.stage + " expects a QTM");
    };
    qmf::MachineDescription result;
    nlohmann::ordered_json prov;
    if (a.stage == "lemma1") {
      auto r = qmf::lemma1_transform(counter(), a.r);
      result = r.machine;
      prov = r.provenance;
    } else if (a.stage == "lemma2") {
      auto r = qmf::lemma2_transform(counter(), a.r);
      result = r.machine;
      prov = r.provenance;
    } else if (a.stage == "thm5") {
      auto r = qmf::thm5_transform(counter());
      result = r.machine;
      prov = r.provenance;
    } else if (a.stage == "thm4") {
      auto r = qmf::thm4_transform(turing(), *a.n, *a.t);
      result = r.machine;
      prov = r.provenance;
    } else {
      auto r = qmf::pipeline_qtm_to_qmsm(turing(), *a.n, *a.t);
      result = r.machine();
      prov = r.provenance;
    }
    prov["source"] = a.path;
    const auto text = qmf::emit_machine(result);
    if (a.out.empty()) {
      std::cout << text;
      return 0;
    }
    qmf::save_text(a.out, text);
    qmf::save_text(sidecar_path(a.out), prov.dump(2) + "\n");
    if (c.json()) {
      print_json({{"output", a.out}, {"provenance", sidecar_path(a.out)}, {"summary", prov}});
    } else {
      std::cout << "wrote " << a.out << " and " << sidecar_path(a.out) << "\n";
    }
    return 0;
  } catch (const qmf::DomainError& e) {
    return fail_with(c, 3, "precondition failed", e.what());
  }
}

// -- compare -----------------------------------------------------------------

struct CompareArgs {
  std::string path1;
  std::string path2;
  std::vector<std::string> inputs;
  std::optional<std::size_t> all_inputs;
  std::string encoder = "none";
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> t;
};

int cmd_compare(const CompareArgs& a, const Common& c) {
  qmf::MachineDescription m1, m2;
  try {
    m1 = qmf::load_machine(a.path1);
    m2 = qmf::load_machine(a.path2);
  } catch (const std::exception& e) {
    return fail_with(c, 3, "parse error", e.what());
  }
  try {
    qmf::CompareOptions o;
    o.t = a.t;
    if (c.tol) o.tol = *c.tol;
    if (c.nmax || c.dmax || c.radius) o.bounds = c.apply(qmf::SimulationBounds{});
    if (a.encoder == "thm4") {
      const auto* tm = std::get_if<qmf::TuringMachine>(&m1);
      if (tm == nullptr) throw qmf::DomainError("--encoder thm4 expects a QTM as the first machine");
      if (!a.n || !a.t) return fail_with(c, kUsage, "usage error", "--encoder thm4 requires --n and --t");
      o.encoder = qmf::thm4_encoder(qmf::thm4_transform(*tm, *a.n, *a.t));
    }
    if (std::holds_alternative<qmf::TuringMachine>(m1) && !a.t) {
      return fail_with(c, kUsage, "usage error", "comparing a QTM requires --t");
    }
    std::vector<std::vector<std::string>> inputs;
    for (const auto& s : a.inputs) inputs.push_back(qmf::split_input(s, input_alphabet_of(m1)));
    if (a.all_inputs || inputs.empty()) {
      const auto more = qmf::all_inputs(input_alphabet_of(m1), a.all_inputs.value_or(a.n ? *a.n : 2));
      inputs.insert(inputs.end(), more.begin(), more.end());
    }
    const auto rep = qmf::compare_acceptance(m1, m2, inputs, o);
    if (c.json()) {
      print_json(qmf::to_json(rep));
    } else {
      std::cout << "verdict: " << qmf::verdict_name(rep.verdict) << " over " << rep.rows.size()
                << " inputs, max diff " << rep.max_diff << " (tol " << rep.tol << ")\n";
      for (const auto& row : rep.rows) {
        std::printf("  %-12s %.12f %.12f", ("'" + qmf::join_word(row.input) + "'").c_str(), row.p1, row.p2);
        if (!row.error.empty()) std::printf("  error: %s", row.error.c_str());
        std::printf("\n");
      }
    }
    switch (rep.verdict) {
      case qmf::EquivalenceVerdict::Pass: return 0;
      case qmf::EquivalenceVerdict::Fail: return 1;
      case qmf::EquivalenceVerdict::Inconclusive: return 2;
    }
  } catch (const qmf::DomainError& e) {
    return fail_with(c, 3, "domain error", e.what());
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmf: quantum abstract machine checker, simulator and transpiler"};
  app.require_subcommand(1);
  Common common;

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "well-formedness check");
  c_check->add_option("machine", check.path, "machine file")->required();
  c_check->add_option("--all-inputs", check.all_inputs, "check only configurations reached by inputs of length <= L");
  c_check->add_option("--t", check.t, "QTM step count");
  add_common(c_check, common);

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "acceptance probability of one input");
  c_run->add_option("machine", run.path, "machine file")->required();
  c_run->add_option("input", run.input, "input word (symbols may be space separated)");
  c_run->add_option("--t", run.t, "QTM step count");
  c_run->add_flag("--trace", run.trace, "print per-step norms and the final support");
  add_common(c_run, common);

  TranspileArgs tr;
  auto* c_tr = app.add_subcommand("transpile", "rewrite a machine into a weaker model");
  c_tr->add_option("stage", tr.stage, "lemma1|lemma2|thm4|thm5|pipeline")
      ->required()
      ->check(CLI::IsMember({"lemma1", "lemma2", "thm4", "thm5", "pipeline"}));
  c_tr->add_option("machine", tr.path, "machine file")->required();
  c_tr->add_option("--out", tr.out, "output machine file (a .prov.json sidecar is written next to it)");
  c_tr->add_option("--r", tr.r, "radix for lemma1/lemma2");
  c_tr->add_option("--n", tr.n, "maximum input length (thm4, pipeline)");
  c_tr->add_option("--t", tr.t, "QTM step count (thm4, pipeline)");
  add_common(c_tr, common);

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "compare acceptance probabilities");
  c_cmp->add_option("machine1", cmp.path1, "source machine")->required();
  c_cmp->add_option("machine2", cmp.path2, "target machine")->required();
  c_cmp->add_option("--input", cmp.inputs, "input word (repeatable)");
  c_cmp->add_option("--all-inputs", cmp.all_inputs, "every input of length <= L");
  c_cmp->add_option("--encoder", cmp.encoder, "input encoder for the second machine")
      ->check(CLI::IsMember({"none", "thm4"}));
  c_cmp->add_option("--n", cmp.n, "thm4 encoder: maximum input length");
  c_cmp->add_option("--t", cmp.t, "QTM step count");
  add_common(c_cmp, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_check) return cmd_check(check, common);
    if (*c_run) return cmd_run(run, common);
    if (*c_tr) return cmd_transpile(tr, common);
    return cmd_compare(cmp, common);
  } catch (const qmf::DomainError& e) {
    return fail_with(common, 3, "domain error", e.what());
  }
}
