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

#include "qmf/amplitude.hpp"
#include "qmf/config.hpp"
#include "qmf/errors.hpp"
#include "qmf/sparse_operator.hpp"
#include "qmf/superposition.hpp"

using Catch::Approx;
using qmf::Amplitude;
using qmf::ConfigKey;
using qmf::counter_config;

namespace {

const ConfigKey c0 = counter_config(0, {0});
const ConfigKey c1 = counter_config(1, {0});
const ConfigKey c2 = counter_config(2, {0});

/// Two-column Hadamard on {c1, c2}.
qmf::SparseOperator hadamard_pair() {
  qmf::SparseOperator op;
  op.set_column(c1, {{c1, qmf::kInvSqrt2}, {c2, qmf::kInvSqrt2}});
  op.set_column(c2, {{c1, qmf::kInvSqrt2}, {c2, -qmf::kInvSqrt2}});
  return op;
}

}  // namespace

TEST_CASE("basis states are orthonormal") {
  const auto a = qmf::Superposition::basis(c1);
  const auto b = qmf::Superposition::basis(c2);
  CHECK(qmf::inner_product(a, a) == Amplitude(1.0, 0.0));
  CHECK(qmf::inner_product(a, b) == Amplitude(0.0, 0.0));
}

TEST_CASE("coefficient of an equal superposition") {
  qmf::Superposition s;
  s.add(c1, qmf::kInvSqrt2);
  s.add(c2, qmf::kInvSqrt2);
  const auto ip = qmf::inner_product(s, qmf::Superposition::basis(c1));
  CHECK(ip.real() == Approx(0.70710678).margin(1e-8));
  CHECK(ip.imag() == 0.0);
}

TEST_CASE("inner product is conjugate-linear in the first argument") {
  auto a = qmf::Superposition::basis(c1, Amplitude(0.0, 1.0));
  auto b = qmf::Superposition::basis(c1, 1.0);
  CHECK(qmf::inner_product(a, b) == Amplitude(0.0, -1.0));
}

TEST_CASE("mixing configuration families is a domain error") {
  auto a = qmf::Superposition::basis(c1);
  auto b = qmf::Superposition::basis(qmf::stack_config(0, {{0}}));
  CHECK_THROWS_AS(qmf::inner_product(a, b), qmf::DomainError);
  CHECK_THROWS_AS(a.add(qmf::stack_config(0, {{0}}), 1.0), qmf::DomainError);
}

TEST_CASE("entries below the pruning threshold vanish") {
  qmf::Superposition s;
  s.add(c1, 1e-15);
  CHECK(s.empty());
  s.add(c1, 0.5);
  s.add(c1, -0.5);
  CHECK(s.empty());
}

TEST_CASE("non-finite amplitudes are rejected") {
  qmf::Superposition s;
  CHECK_THROWS_AS(s.add(c1, std::nan("")), qmf::DomainError);
}

TEST_CASE("apply: identity, single column, Hadamard twice") {
  const std::vector<ConfigKey> basis{c0, c1, c2};
  qmf::Superposition s;
  s.add(c0, Amplitude(0.6, 0.0));
  s.add(c2, Amplitude(0.0, 0.8));
  const auto id = qmf::apply(qmf::SparseOperator::identity_on(basis), s);
  CHECK(id.at(c0) == s.at(c0));
  CHECK(id.at(c2) == s.at(c2));

  qmf::SparseOperator split;
  split.set_column(c0, {{c1, qmf::kInvSqrt2}, {c2, qmf::kInvSqrt2}});
  const auto out = qmf::apply(split, qmf::Superposition::basis(c0));
  CHECK(out.size() == 2);
  CHECK(out.at(c1).real() == Approx(qmf::kInvSqrt2));
  CHECK(out.at(c2).real() == Approx(qmf::kInvSqrt2));

  const auto h = hadamard_pair();
  const auto twice = qmf::apply(h, qmf::apply(h, qmf::Superposition::basis(c1)));
  CHECK(std::abs(twice.at(c1) - Amplitude(1.0)) < 1e-12);
  CHECK(std::abs(twice.at(c2)) < 1e-12);
}

TEST_CASE("apply outside the domain is a window leak unless identity-extended") {
  qmf::SparseOperator op;
  op.set_column(c1, {{c1, 1.0}});
  CHECK_THROWS_AS(qmf::apply(op, qmf::Superposition::basis(c0)), qmf::WindowLeak);
  qmf::SparseOperator ext(true);
  CHECK(qmf::apply(ext, qmf::Superposition::basis(c0)).at(c0) == Amplitude(1.0));
}

TEST_CASE("to_matrix") {
  const std::vector<ConfigKey> basis{c0, c1, c2};
  CHECK(qmf::to_matrix(qmf::SparseOperator::identity_on(basis), basis).isIdentity());
  CHECK(qmf::to_matrix(qmf::SparseOperator{}, basis).isZero());

  const auto m = qmf::to_matrix(hadamard_pair(), {c1, c2});
  CHECK(std::abs(m(0, 0).real()) == Approx(qmf::kInvSqrt2));
  CHECK(m(1, 1).real() == Approx(-qmf::kInvSqrt2));
  CHECK((m.adjoint() * m).isIdentity(1e-12));

  qmf::SparseOperator leak;
  leak.set_column(c0, {{counter_config(0, {9}), 1.0}});
  CHECK_THROWS_AS(qmf::to_matrix(leak, basis), qmf::WindowLeak);
}

TEST_CASE("check_unitary") {
  const auto id = qmf::check_unitary(Eigen::MatrixXcd::Identity(3, 3));
  CHECK(id.pass);
  CHECK(id.deviation == 0.0);

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(2, 2);
  d(1, 1) = 0.8;
  const auto bad = qmf::check_unitary(d);
  CHECK_FALSE(bad.pass);
  CHECK(bad.deviation == Approx(0.36).margin(1e-12));
  CHECK(bad.row == 2);
  CHECK(bad.col == 2);

  const auto h = qmf::check_unitary(qmf::to_matrix(hadamard_pair(), {c1, c2}), 1e-12);
  CHECK(h.pass);

  CHECK_THROWS_AS(qmf::check_unitary(Eigen::MatrixXcd::Zero(2, 3)), qmf::DomainError);
}

TEST_CASE("apply agrees with the dense matrix-vector product") {
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  const auto op = hadamard_pair();
  const std::vector<ConfigKey> basis{c1, c2};
  const auto m = qmf::to_matrix(op, basis);
  for (int trial = 0; trial < 20; ++trial) {
    qmf::Superposition s;
    Eigen::VectorXcd v(2);
    for (Eigen::Index i = 0; i < 2; ++i) {
      v(i) = Amplitude(g(rng), g(rng));
      s.add(basis[static_cast<std::size_t>(i)], v(i));
    }
    const auto out = qmf::apply(op, s);
    const Eigen::VectorXcd w = m * v;
    for (Eigen::Index i = 0; i < 2; ++i) CHECK(std::abs(out.at(basis[static_cast<std::size_t>(i)]) - w(i)) < 1e-12);
    CHECK(out.norm_squared() == Approx(s.norm_squared()).epsilon(1e-12));
  }
}

TEST_CASE("amplitude tokens round-trip") {
  CHECK(qmf::parse_real_token("r2") == qmf::kInvSqrt2);
  CHECK(qmf::parse_real_token("-r2") == -qmf::kInvSqrt2);
  CHECK(qmf::parse_real_token("\xe2\x88\x92r2") == -qmf::kInvSqrt2);
  CHECK(qmf::format_real_token(qmf::kInvSqrt2) == "r2");
  CHECK(qmf::format_real_token(0.8) == "0.8");
  CHECK(qmf::format_real_token(-0.0) == "0");
  for (double v : {0.1, 1.0 / 3.0, -2.5e-7, 123456.789}) {
    CHECK(qmf::parse_real_token(qmf::format_real_token(v)) == v);
  }
  CHECK_THROWS_AS(qmf::parse_real_token("0.5x"), qmf::ParseError);
  CHECK_THROWS_AS(qmf::parse_real_token(""), qmf::ParseError);
}
