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

#ifndef QMF_QTM_HPP
#define QMF_QTM_HPP

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qmf/config.hpp"
#include "qmf/dynamics.hpp"
#include "qmf/errors.hpp"
#include "qmf/machine.hpp"
#include "qmf/sparse_operator.hpp"

namespace qmf {

/// Tape configurations over the window [-T, T]. cells[0 .. 2T] hold the tape
/// (cells[T + j] is tape cell j) and cells[2T + 1] holds the head position.
class QtmDynamics {
 public:
  static constexpr Family family = Family::Tape;

  QtmDynamics(TuringMachine&&, std::int64_t) = delete;
  QtmDynamics(const TuringMachine& m, std::int64_t radius) : m_(&m), radius_(radius) {
    if (radius < 0) throw DomainError("tape radius must be nonnegative");
    for (std::size_t i = 0; i < m.rules.size(); ++i) index_[{m.rules[i].state, m.rules[i].read}].push_back(i);
  }

  const TuringMachine& machine() const { return *m_; }
  std::int64_t radius() const { return radius_; }

  std::int64_t head(const ConfigKey& c) const { return c.cells.back(); }
  std::int64_t cell(const ConfigKey& c, std::int64_t j) const {
    if (j < -radius_ || j > radius_) return 0;
    return c.cells[static_cast<std::size_t>(j + radius_)];
  }

  /// |q0>|tau0>|0> with x written on cells 0..|x|-1.
  ConfigKey initial(const std::vector<std::string>& x) const {
    if (static_cast<std::int64_t>(x.size()) > radius_ + 1) {
      throw WindowLeak("input does not fit into the tape window", "input", 0);
    }
    ConfigKey c{Family::Tape, m_->initial, std::vector<std::int64_t>(static_cast<std::size_t>(2 * radius_ + 2), 0)};
    for (std::size_t i = 0; i < x.size(); ++i) {
      c.cells[static_cast<std::size_t>(radius_) + i] = m_->symbol_index(x[i]);
    }
    return c;
  }

  ConfigKey make(int state, const std::vector<std::int64_t>& tape, std::int64_t head) const {
    ConfigKey c{Family::Tape, state, tape};
    c.cells.push_back(head);
    return c;
  }

  bool is_final(const ConfigKey& c) const { return c.state == m_->accept || c.state == m_->reject; }

  /// One application of U_M. Configurations without a matching rule have an
  /// empty image.
  Column image(const ConfigKey& c) const {
    Column col;
    const auto h = head(c);
    auto it = index_.find({c.state, cell(c, h)});
    if (it == index_.end()) return col;
    for (auto i : it->second) {
      const auto& r = m_->rules[i];
      const auto nh = h + static_cast<std::int64_t>(r.move);
      if (nh < -radius_ || nh > radius_) {
        throw WindowLeak("window leak: head leaves [-" + std::to_string(radius_) + ", " + std::to_string(radius_) +
                             "] from " + describe(c),
                         describe(c));
      }
      ConfigKey t = c;
      t.state = r.next;
      t.cells[static_cast<std::size_t>(h + radius_)] = r.write;
      t.cells.back() = nh;
      detail::merge_into(col, t, r.amplitude);
    }
    return col;
  }

  std::string describe(const ConfigKey& c) const {
    std::ostringstream os;
    os << '(' << m_->states.at(static_cast<std::size_t>(c.state)) << "; ";
    for (std::int64_t j = -radius_; j <= radius_; ++j) {
      if (j != -radius_) os << ' ';
      os << m_->tape_alphabet.at(static_cast<std::size_t>(cell(c, j)));
    }
    os << "; head " << head(c) << ')';
    return os.str();
  }

 private:
  const TuringMachine* m_;
  std::int64_t radius_;
  std::map<std::pair<int, std::int64_t>, std::vector<std::size_t>> index_;
};

}  // namespace qmf

#endif  // QMF_QTM_HPP
