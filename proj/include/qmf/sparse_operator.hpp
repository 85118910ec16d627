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

#ifndef QMF_SPARSE_OPERATOR_HPP
#define QMF_SPARSE_OPERATOR_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qmf/amplitude.hpp"
#include "qmf/config.hpp"
#include "qmf/errors.hpp"
#include "qmf/superposition.hpp"

namespace qmf {

/// Raw rendering used in error messages when no machine is at hand.
inline std::string raw_config_string(const ConfigKey& k) {
  std::ostringstream os;
  os << family_name(k.family) << "(s" << k.state;
  for (auto v : k.cells) os << ',' << v;
  os << ')';
  return os.str();
}

using Column = std::vector<std::pair<ConfigKey, Amplitude>>;

/// Column-sparse linear map on a configuration family. Keys without a column
/// either map to themselves (identity_extended) or are a window leak.
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(bool identity_extended) : identity_extended_(identity_extended) {}

  /// Sets the column for `source`, merging repeated targets.
  void set_column(const ConfigKey& source, const Column& col) {
    check_family(source.family);
    Column merged;
    std::map<ConfigKey, std::size_t> where;
    for (const auto& [t, a] : col) {
      check_family(t.family);
      auto [it, fresh] = where.emplace(t, merged.size());
      if (fresh) {
        merged.emplace_back(t, a);
      } else {
        merged[it->second].second += a;
      }
    }
    columns_[source] = std::move(merged);
  }

  bool has_column(const ConfigKey& k) const { return columns_.count(k) != 0; }
  const Column* column(const ConfigKey& k) const {
    auto it = columns_.find(k);
    return it == columns_.end() ? nullptr : &it->second;
  }
  const std::map<ConfigKey, Column>& columns() const noexcept { return columns_; }
  bool identity_extended() const noexcept { return identity_extended_; }
  std::size_t size() const noexcept { return columns_.size(); }

  static SparseOperator identity_on(const std::vector<ConfigKey>& basis) {
    SparseOperator op;
    for (const auto& k : basis) op.set_column(k, {{k, 1.0}});
    return op;
  }

 private:
  void check_family(Family f) {
    if (family_ && *family_ != f) throw DomainError("operator mixes configuration families");
    family_ = f;
  }

  std::map<ConfigKey, Column> columns_;
  std::optional<Family> family_;
  bool identity_extended_ = false;
};

inline Superposition apply(const SparseOperator& op, const Superposition& s) {
  Superposition out;
  for (const auto& [k, a] : s.entries()) {
    const Column* col = op.column(k);
    if (col == nullptr) {
      if (!op.identity_extended()) {
        throw WindowLeak("window leak: no column for " + raw_config_string(k), raw_config_string(k));
      }
      out.add(k, a);
      continue;
    }
    for (const auto& [t, amp] : *col) out.add(t, a * amp);
  }
  return out;
}

/// Dense matrix with M(j, i) = amplitude basis[i] -> basis[j].
inline Eigen::MatrixXcd to_matrix(const SparseOperator& op, const std::vector<ConfigKey>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::unordered_map<ConfigKey, Eigen::Index, ConfigKeyHash> index;
  for (Eigen::Index i = 0; i < n; ++i) index.emplace(basis[static_cast<std::size_t>(i)], i);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& src = basis[static_cast<std::size_t>(i)];
    const Column* col = op.column(src);
    if (col == nullptr) {
      if (op.identity_extended()) m(i, i) = 1.0;
      continue;
    }
    for (const auto& [t, a] : *col) {
      auto it = index.find(t);
      if (it == index.end()) {
        throw WindowLeak("window leak: " + raw_config_string(src) + " maps outside the basis to " +
                             raw_config_string(t),
                         raw_config_string(t));
      }
      m(it->second, i) += a;
    }
  }
  return m;
}

struct UnitaryCheck {
  bool pass = true;
  double deviation = 0.0;  // max |(M†M - I)(i,j)| and |(MM† - I)(i,j)|
  Eigen::Index row = -1;   // 1-based indices of the worst entry, -1 if none
  Eigen::Index col = -1;
};

inline UnitaryCheck max_identity_deviation(const Eigen::MatrixXcd& g, UnitaryCheck acc = {}) {
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double d = std::abs(g(i, j) - (i == j ? Amplitude(1.0) : Amplitude(0.0)));
      if (d > acc.deviation) {
        acc.deviation = d;
        acc.row = i + 1;
        acc.col = j + 1;
      }
    }
  }
  return acc;
}

inline UnitaryCheck check_unitary(const Eigen::MatrixXcd& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) throw DomainError("check_unitary: matrix is not square");
  UnitaryCheck r = max_identity_deviation(m.adjoint() * m);
  r = max_identity_deviation(m * m.adjoint(), r);
  r.pass = r.deviation <= tol;
  return r;
}

}  // namespace qmf

#endif  // QMF_SPARSE_OPERATOR_HPP
