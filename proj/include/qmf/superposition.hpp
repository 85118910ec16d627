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

#ifndef QMF_SUPERPOSITION_HPP
#define QMF_SUPERPOSITION_HPP

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qmf/amplitude.hpp"
#include "qmf/config.hpp"
#include "qmf/errors.hpp"

namespace qmf {

/// Sparse vector over a configuration basis. All keys share one Family.
class Superposition {
 public:
  using Map = std::unordered_map<ConfigKey, Amplitude, ConfigKeyHash>;

  Superposition() = default;

  static Superposition basis(ConfigKey k, Amplitude a = 1.0) {
    Superposition s;
    s.add(std::move(k), a);
    return s;
  }

  /// Accumulates `a` into the entry for `k`; the entry is dropped if it falls
  /// below the pruning threshold.
  void add(const ConfigKey& k, Amplitude a) {
    if (!is_finite(a)) throw DomainError("non-finite amplitude");
    check_family(k.family);
    auto it = entries_.find(k);
    if (it == entries_.end()) {
      if (std::abs(a) >= kPruneThreshold) entries_.emplace(k, a);
      return;
    }
    it->second += a;
    if (std::abs(it->second) < kPruneThreshold) entries_.erase(it);
  }

  Amplitude at(const ConfigKey& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? Amplitude{} : it->second;
  }

  double norm_squared() const {
    double n = 0.0;
    for (const auto& [k, a] : entries_) n += std::norm(a);
    return n;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::optional<Family> family() const noexcept { return family_; }
  const Map& entries() const noexcept { return entries_; }

  /// Entries in ConfigKey order, for reproducible output.
  std::vector<std::pair<ConfigKey, Amplitude>> sorted() const {
    std::vector<std::pair<ConfigKey, Amplitude>> v(entries_.begin(), entries_.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  }

  Superposition& operator*=(Amplitude c) {
    for (auto& [k, a] : entries_) a *= c;
    return *this;
  }

 private:
  void check_family(Family f) {
    if (family_ && *family_ != f) throw DomainError("mixed configuration families in superposition");
    family_ = f;
  }

  Map entries_;
  std::optional<Family> family_;
};

/// <a|b>, conjugate-linear in the first argument.
inline Amplitude inner_product(const Superposition& a, const Superposition& b) {
  if (a.family() && b.family() && *a.family() != *b.family()) {
    throw DomainError("inner product across configuration families");
  }
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  Amplitude sum{};
  for (const auto& [k, v] : small.entries()) {
    auto it = large.entries().find(k);
    if (it == large.entries().end()) continue;
    sum += &small == &a ? std::conj(v) * it->second : std::conj(it->second) * v;
  }
  return sum;
}

}  // namespace qmf

#endif  // QMF_SUPERPOSITION_HPP
