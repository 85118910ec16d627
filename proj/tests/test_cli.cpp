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


// Drives the built `qmf` binary and checks exit statuses and outputs.

#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qmf/io.hpp"
#include "qmf/samples.hpp"

namespace fs = std::filesystem;
namespace s = qmf::samples;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome qmf_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + std::string(QMF_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) o.out.append(buf.data(), n);
  const int raw = pclose(p);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

std::string corpus(const std::string& name) { return std::string(QMF_CORPUS_DIR) + "/" + name + ".json"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh scratch directory per test case.
fs::path scratch(const std::string& tag) {
  auto dir = fs::temp_directory_path() / ("qmf_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("check exit statuses follow the corpus labels") {
  for (const auto& e : s::corpus()) {
    INFO(e.name);
    std::string args = "check " + corpus(e.name);
    if (std::holds_alternative<qmf::TuringMachine>(e.machine)) args += e.name == "toy_qtm_t3" ? " --t 3" : " --t 1";
    const auto r = qmf_cli(args);
    // The shifting isometry has an unbounded target range, which the
    // enumerator rejects before any check runs.
    const int expected = e.name == "counter_shift_hadamard" ? 3 : e.broken ? 1 : 0;
    CHECK(r.status == expected);
  }
}

TEST_CASE("check reports inconclusive windows and parse errors") {
  const auto dir = scratch("check");
  qmf::CounterMachine stairs;
  stairs.control = s::control({"q0", "q1", "qa", "qr"}, {"a"});
  s::add(stairs, "q0", "a", {s::var("n", 0, 20)}, "q1", {s::ref("n", 1)});
  s::add(stairs, "q1", "a", {s::var("n", 1, 21)}, "q0", {s::ref("n", -1)});
  qmf::save_text((dir / "stairs.json").string(), qmf::emit_machine(stairs));
  CHECK(qmf_cli("check " + (dir / "stairs.json").string()).status == 2);
  CHECK(qmf_cli("check --nmax 24 " + (dir / "stairs.json").string()).status == 0);

  qmf::save_text((dir / "bad.json").string(), "{ \"kind\": \"counter\",\n  \"oops\": 1 }\n");
  const auto bad = qmf_cli("check " + (dir / "bad.json").string());
  CHECK(bad.status == 3);
  CHECK_FALSE(bad.out.empty());

  CHECK(qmf_cli("check " + (dir / "missing.json").string()).status == 3);
  CHECK(qmf_cli("frobnicate").status == 64);
  CHECK(qmf_cli("check --format yaml " + corpus("counter_identity")).status == 64);
}

TEST_CASE("check --format json") {
  const auto r = qmf_cli("check --format json " + corpus("broken_amplitude"));
  CHECK(r.status == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "fail");
}

TEST_CASE("run prints the acceptance probability") {
  auto r = qmf_cli("run " + corpus("counter_hadamard") + " ''");
  CHECK(r.status == 0);
  CHECK(r.out.find("0.500000000000") != std::string::npos);

  r = qmf_cli("run --format json " + corpus("counter_accept_on_hash") + " aaa");
  CHECK(r.status == 0);
  CHECK(nlohmann::json::parse(r.out)["probability"].get<double>() == 1.0);

  r = qmf_cli("run --t 1 " + corpus("toy_qtm_t1") + " a");
  CHECK(r.status == 0);
  CHECK(r.out.find("0.500000000000") != std::string::npos);

  r = qmf_cli("run --nmax 2 " + corpus("counter_pm3") + " aaaa");
  CHECK(r.status == 4);
  CHECK(r.out.find("window leak") != std::string::npos);

  CHECK(qmf_cli("run " + corpus("counter_hadamard") + " xyz").status == 3);

  r = qmf_cli("run " + corpus("counter_accept_on_hash") + " ''");
  CHECK(r.out == "1.000000000000\n");
  CHECK(qmf_cli("run " + corpus("toy_qtm_t1") + " a").status == 64);
}

TEST_CASE("check names the failing condition and pair") {
  const auto r = qmf_cli("check " + corpus("broken_merge"));
  CHECK(r.status == 1);
  CHECK(r.out.find("condition II pair (qa; 1) ~ (qa; 1)") != std::string::npos);
}

TEST_CASE("transpile writes a machine and a provenance sidecar") {
  const auto dir = scratch("transpile");
  const auto out = dir / "pm3_l1.json";
  auto r = qmf_cli("transpile lemma1 " + corpus("counter_pm3") + " --out " + out.string());
  REQUIRE(r.status == 0);
  REQUIRE(fs::exists(out));
  const auto prov = nlohmann::json::parse(slurp(dir / "pm3_l1.prov.json"));
  CHECK(prov["stage"] == "lemma1");
  CHECK(prov["r"] == 3);

  // Reproducible, and the output is itself a valid, W-F machine.
  const auto first = slurp(out);
  REQUIRE(qmf_cli("transpile lemma1 " + corpus("counter_pm3") + " --out " + out.string()).status == 0);
  CHECK(slurp(out) == first);
  CHECK(qmf_cli("check --nmax 6 " + out.string()).status == 0);
  CHECK(qmf_cli("compare --all-inputs 3 " + corpus("counter_pm3") + " " + out.string()).status == 0);

  const auto t4 = dir / "toy_t4.json";
  r = qmf_cli("transpile thm4 --n 1 --t 1 " + corpus("toy_qtm_t1") + " --out " + t4.string());
  REQUIRE(r.status == 0);
  const auto p4 = nlohmann::json::parse(slurp(dir / "toy_t4.prov.json"));
  CHECK(p4["slowdown_certificate"]["max_length"] == 2 * 1 + 4 * 1 + 5);
  r = qmf_cli("compare --encoder thm4 --n 1 --t 1 --all-inputs 1 " + corpus("toy_qtm_t1") + " " + t4.string());
  CHECK(r.status == 0);

  const auto pipe = dir / "toy_pipe.json";
  REQUIRE(qmf_cli("transpile pipeline --n 1 --t 1 " + corpus("toy_qtm_t1") + " --out " + pipe.string()).status == 0);
  CHECK(nlohmann::json::parse(slurp(pipe))["stacks"] == 16);
  CHECK(nlohmann::json::parse(slurp(t4))["counters"] == 4);

  CHECK(qmf_cli("transpile thm5 " + corpus("counter_pm3") + " --out " + (dir / "x.json").string()).status == 3);
}

TEST_CASE("compare statuses") {
  const auto dir = scratch("compare");
  auto perturbed = s::counter_hadamard();
  perturbed.rules[0].amplitude = 0.8;
  qmf::save_text((dir / "perturbed.json").string(), qmf::emit_machine(perturbed));

  CHECK(qmf_cli("compare --all-inputs 2 " + corpus("counter_hadamard") + " " + corpus("counter_hadamard")).status == 0);
  CHECK(qmf_cli("compare --all-inputs 2 " + corpus("counter_hadamard") + " " + corpus("stack_hadamard")).status == 0);
  const auto bad = qmf_cli("compare --format json --all-inputs 2 " + corpus("counter_hadamard") + " " +
                           (dir / "perturbed.json").string());
  CHECK(bad.status == 1);
  CHECK(nlohmann::json::parse(bad.out)["verdict"] == "fail");
  CHECK(qmf_cli("compare --nmax 1 --input aaa " + corpus("counter_pm3") + " " + corpus("counter_pm3")).status == 2);
}

TEST_CASE("QMF_THREADS does not change results") {
  const std::string args = "compare --format json --all-inputs 3 " + corpus("counter_pm123") + " " + corpus("counter_pm123");
  const auto one = qmf_cli(args, "QMF_THREADS=1 ");
  const auto many = qmf_cli(args);
  CHECK(one.status == 0);
  CHECK(one.out == many.out);
}
