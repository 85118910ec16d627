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


#include <catch_amalgamated.hpp>

#include <random>

#include "qmf/samples.hpp"
#include "qmf/simulator.hpp"
#include "qmf/sparse_operator.hpp"
#include "qmf/transpile_thm5.hpp"

using Catch::Approx;
using qmf::Amplitude;
namespace s = qmf::samples;

namespace {

qmf::SimulationBounds window(std::int64_t n_max = 14, std::int64_t d_max = 4) {
  qmf::SimulationBounds b;
  b.n_max = n_max;
  b.d_max = d_max;
  return b;
}

/// Random normalized superposition over `basis`.
qmf::Superposition random_state(const std::vector<qmf::ConfigKey>& basis, std::mt19937& rng) {
  std::normal_distribution<double> g;
  qmf::Superposition s;
  double norm = 0.0;
  std::vector<Amplitude> v(basis.size());
  for (auto& a : v) {
    a = {g(rng), g(rng)};
    norm += std::norm(a);
  }
  for (std::size_t i = 0; i < basis.size(); ++i) s.add(basis[i], v[i] / std::sqrt(norm));
  return s;
}

qmf::StackMachine stack_accept_on_hash() {
  auto m = s::stack_identity();
  s::add(m, "q0", qmf::kLeftEnd, {s::exact({})}, "qa", {s::put({})});
  s::add(m, "qa", qmf::kLeftEnd, {s::exact({})}, "q0", {s::put({})});
  return m;
}

qmf::TuringMachine one_rule_qtm() {
  qmf::TuringMachine m;
  m.states = {"q0", "qa", "qr"};
  m.tape_alphabet = {"B", "a"};
  m.accept = 1;
  m.reject = 2;
  m.rules = {{0, 0, 0, 1, qmf::Move::R, 1.0}};
  return m;
}

/// Final state of "# x $" computed with dense matrices over a window padded
/// by the machine's margin.
template <class Dyn>
Eigen::VectorXcd dense_run(const Dyn& d, const std::vector<std::string>& x, const qmf::SimulationBounds& b,
                           std::vector<qmf::ConfigKey>& basis) {
  auto wide = b;
  wide.n_max += d.margin();
  wide.d_max += d.margin();
  basis = d.window_basis(wide);
  const auto inner = d.window_basis(b);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
  v(static_cast<Eigen::Index>(std::find(basis.begin(), basis.end(), d.initial()) - basis.begin())) = 1.0;
  for (const auto& sym : qmf::endmarked(x)) v = qmf::to_matrix(qmf::build_evolution(d, sym, inner), basis) * v;
  return v;
}

}  // namespace

TEST_CASE("build_evolution: identity, Hadamard block, empty operator") {
  const auto id = s::counter_identity();
  const qmf::CounterDynamics d(id);
  const auto basis = d.window_basis(window(5));
  CHECK(qmf::to_matrix(qmf::build_evolution(id, "a", window(5)), basis).isIdentity());
  CHECK(qmf::to_matrix(qmf::build_adjoint_evolution(id, "a", window(5)), basis).isIdentity());

  const auto h = s::counter_hadamard();
  const qmf::CounterDynamics hd(h);
  const auto hb = hd.window_basis(window(7));
  const auto u = qmf::check_unitary(qmf::to_matrix(qmf::build_evolution(h, "a", window(7)), hb));
  CHECK(u.pass);

  auto bare = s::counter_identity();
  bare.control.complete_with_identity = false;
  const auto empty = qmf::build_evolution(bare, "a", window(5));
  CHECK(empty.size() == 0);
  CHECK(qmf::to_matrix(empty, qmf::CounterDynamics(bare).window_basis(window(5))).isZero());
}

TEST_CASE("adjoint property on W-F corpus machines") {
  std::mt19937 rng(2026);
  for (const auto& e : s::corpus()) {
    if (e.broken) continue;
    INFO(e.name);
    auto check = [&](const auto& dyn, const qmf::SimulationBounds& b) {
      const auto basis = dyn.window_basis(b);
      for (const auto& sym : dyn.control().readable_symbols()) {
        for (int trial = 0; trial < 5; ++trial) {
          const auto s1 = random_state(basis, rng);
          const auto s2 = random_state(basis, rng);
          const auto us1 = qmf::apply_symbol(dyn, sym, s1);
          const auto us2 = qmf::apply_symbol(dyn, sym, s2);
          const auto lhs = qmf::inner_product(us1, us2);
          const auto rhs = qmf::inner_product(s1, qmf::apply_adjoint_symbol(dyn, sym, us2));
          CHECK(std::abs(lhs - rhs) < 1e-10);
          CHECK(us1.norm_squared() == Approx(1.0).margin(1e-10));
        }
      }
    };
    if (const auto* c = std::get_if<qmf::CounterMachine>(&e.machine)) {
      check(qmf::CounterDynamics(*c), window(11));
    } else if (const auto* st = std::get_if<qmf::StackMachine>(&e.machine)) {
      check(qmf::StackDynamics(*st), window(11, e.name == "stack_hadamard" ? 8 : 3));
    }
  }
}

TEST_CASE("run_counter_machine") {
  const auto b = window();
  CHECK(qmf::run_counter_machine(s::counter_accept_on_hash(), {}, b).acceptance == 1.0);
  CHECK(qmf::run_counter_machine(s::counter_never_accept(), {"a", "a", "a"}, b).acceptance == 0.0);
  CHECK(qmf::run_counter_machine(s::counter_hadamard(), {}, b).acceptance == Approx(0.5).margin(1e-12));
  CHECK(qmf::run_counter_machine(s::counter_two(), {"a"}, b).acceptance == 1.0);
  CHECK(qmf::run_counter_machine(s::counter_two(), {"a", "b", "a"}, b).acceptance == 0.0);

  const auto r = qmf::run_counter_machine(s::counter_hadamard(), {"a", "b"}, b, true);
  CHECK(r.steps == 4);
  CHECK(r.trace.size() == 5);
  for (auto n : r.norms) CHECK(n == Approx(1.0).margin(1e-12));

  CHECK_THROWS_AS(qmf::run_counter_machine(s::counter_hadamard(), {"z"}, b), qmf::DomainError);
}

TEST_CASE("run leaks report the step") {
  // Climbs by one on '#' and on every 'a': # -> 1, a -> 2, a -> 3 leaves [0, 2].
  auto climb = s::counter_shift_hadamard();
  climb.rules.clear();
  const auto n = s::var("n", 0, std::nullopt);
  for (const auto& sym : {qmf::kLeftEnd, std::string("a")}) {
    s::add(climb, "q0", sym, {n}, "q0", {s::ref("n", 1)});
  }
  const auto b = window(2);
  try {
    qmf::run_counter_machine(climb, {"a", "a", "a"}, b);
    FAIL("no leak");
  } catch (const qmf::WindowLeak& e) {
    CHECK(e.step() == 2);
    CHECK(std::string(e.what()).find("(q0; 3)") != std::string::npos);
  }
}

TEST_CASE("run_stack_machine") {
  const auto b = window(14, 9);
  CHECK(qmf::run_stack_machine(stack_accept_on_hash(), {"a"}, b).acceptance == 1.0);
  CHECK(qmf::run_stack_machine(s::stack_identity(), {"a"}, b).acceptance == 0.0);
  const auto carried = qmf::thm5_transform(s::counter_hadamard()).stack();
  CHECK(qmf::run_stack_machine(carried, {}, b).acceptance == Approx(0.5).margin(1e-12));
  for (const auto& x : qmf::all_inputs({"a", "b"}, 3)) {
    CHECK(qmf::run_stack_machine(carried, x, b).acceptance ==
          Approx(qmf::run_counter_machine(s::counter_hadamard(), x, b).acceptance).margin(1e-12));
  }
}

TEST_CASE("sparse runs match dense matrix products on the corpus") {
  for (const auto& e : s::corpus()) {
    INFO(e.name);
    auto compare = [&](const auto& dyn, const qmf::SimulationBounds& b, auto run) {
      for (const auto& x : qmf::all_inputs(dyn.control().input_alphabet, 2)) {
        std::vector<qmf::ConfigKey> basis;
        const auto v = dense_run(dyn, x, b, basis);
        REQUIRE(basis.size() <= 10000);
        const auto r = run(x);
        for (std::size_t i = 0; i < basis.size(); ++i) {
          CHECK(std::abs(r.final_state.at(basis[i]) - v(static_cast<Eigen::Index>(i))) < 1e-10);
        }
      }
    };
    if (const auto* c = std::get_if<qmf::CounterMachine>(&e.machine)) {
      const auto b = window(12);
      compare(qmf::CounterDynamics(*c), b, [&](const auto& x) { return qmf::run_counter_machine(*c, x, b); });
    } else if (const auto* st = std::get_if<qmf::StackMachine>(&e.machine)) {
      const auto b = window(12, st->stacks == 1 ? 9 : 4);
      compare(qmf::StackDynamics(*st), b, [&](const auto& x) { return qmf::run_stack_machine(*st, x, b); });
    }
  }
}

TEST_CASE("qtm_step_operator") {
  qmf::SimulationBounds b;
  b.radius = 2;
  const auto one = one_rule_qtm();
  const qmf::QtmDynamics d(one, 2);
  const auto start = d.initial({});
  const auto out = qmf::apply(qmf::qtm_step_operator(one, b, {start}), qmf::Superposition::basis(start));
  REQUIRE(out.size() == 1);
  CHECK(out.at(d.make(1, std::vector<std::int64_t>(5, 0), 1)) == Amplitude(1.0));

  const auto toy = s::toy_qtm(1);
  const qmf::QtmDynamics td(toy, 2);
  const auto a0 = td.initial({"a"});
  const auto step = qmf::apply(qmf::qtm_step_operator(toy, b, {a0}), qmf::Superposition::basis(a0));
  const std::vector<std::int64_t> tape{0, 0, 1, 0, 0};
  CHECK(step.at(td.make(toy.accept, tape, 1)).real() == Approx(qmf::kInvSqrt2));
  CHECK(step.at(td.make(toy.reject, tape, 1)).real() == Approx(qmf::kInvSqrt2));

  qmf::TuringMachine left = one;
  left.rules = {{0, 0, 0, 1, qmf::Move::L, 1.0}};
  const qmf::QtmDynamics ld(left, 2);
  CHECK_THROWS_AS(qmf::qtm_step_operator(left, b, {ld.make(0, std::vector<std::int64_t>(5, 0), -2)}), qmf::WindowLeak);
}

TEST_CASE("qtm full-window step operator is unitary for the toy machine on a ring-free window") {
  // Every rule moves right, so columns for head < T stay inside the window
  // and are orthonormal.
  qmf::SimulationBounds b;
  b.radius = 1;
  const auto toy = s::toy_qtm(1);
  const qmf::QtmDynamics d(toy, 1);
  std::vector<qmf::ConfigKey> basis;
  for (int q = 0; q < 3; ++q) {
    for (std::int64_t a = 0; a < 3; ++a) {
      for (std::int64_t c = 0; c < 3; ++c) basis.push_back(d.make(q, {a, c, 0}, 0));
    }
  }
  const auto op = qmf::qtm_step_operator(toy, b, basis);
  std::vector<qmf::ConfigKey> targets;
  for (const auto& [k, col] : op.columns()) {
    for (const auto& [t, a] : col) targets.push_back(t);
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  std::vector<qmf::ConfigKey> all = basis;
  all.insert(all.end(), targets.begin(), targets.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const auto m = qmf::to_matrix(op, all);
  Eigen::MatrixXcd cols(m.rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    cols.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(std::find(all.begin(), all.end(), basis[j]) - all.begin()));
  }
  CHECK((cols.adjoint() * cols).isIdentity(1e-12));
}

TEST_CASE("run_qtm") {
  qmf::SimulationBounds b;
  b.radius = 3;
  const auto one = qmf::run_qtm(one_rule_qtm(), {}, 1, b);
  CHECK(one.acceptance == 1.0);
  CHECK(one.halting);

  const auto toy = s::toy_qtm(1);
  CHECK(qmf::run_qtm(toy, {"a"}, 1, b).acceptance == Approx(0.5).margin(1e-12));
  CHECK(qmf::run_qtm(toy, {"a"}, 0, b).acceptance == 0.0);
  CHECK(qmf::run_qtm(toy, {}, 1, b).acceptance == 0.0);
  CHECK(qmf::run_qtm(toy, {"b"}, 1, b).acceptance == 0.0);

  const auto toy3 = s::toy_qtm(3);
  for (const auto& x : qmf::all_inputs({"a", "b"}, 3)) {
    const auto r = qmf::run_qtm(toy3, x, 3, b);
    CHECK(r.halting);
    CHECK(r.acceptance == Approx(!x.empty() && x[0] == "a" ? 0.5 : 0.0).margin(1e-12));
    for (auto n : r.norms) CHECK(n == Approx(1.0).margin(1e-12));
  }
  // Halting too early violates the convention.
  CHECK_FALSE(qmf::run_qtm(toy, {"a"}, 2, b).halting);
}

TEST_CASE("input helpers") {
  CHECK(qmf::split_input("abba", {"a", "b"}) == std::vector<std::string>{"a", "b", "b", "a"});
  CHECK(qmf::split_input("a B2 B2", {"a", "B2"}) == std::vector<std::string>{"a", "B2", "B2"});
  CHECK(qmf::split_input("a,b", {"a", "b"}) == std::vector<std::string>{"a", "b"});
  CHECK(qmf::split_input("", {"a"}).empty());
  CHECK_THROWS_AS(qmf::split_input("ac", {"a", "b"}), qmf::DomainError);

  const auto all = qmf::all_inputs({"a", "b"}, 2);
  REQUIRE(all.size() == 7);
  CHECK(all[0].empty());
  CHECK(all[1] == std::vector<std::string>{"a"});
  CHECK(all[3] == std::vector<std::string>{"a", "a"});
  CHECK(all[6] == std::vector<std::string>{"b", "b"});

  CHECK(qmf::join_word({"a", "b"}) == "ab");
  CHECK(qmf::join_word({"a", "B2"}) == "a B2");
}
