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

#ifndef QMF_CONFIG_HPP
#define QMF_CONFIG_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qmf {

enum class Family : std::uint8_t { Tape, Counter, Stack };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Tape: return "tape";
    case Family::Counter: return "counter";
    case Family::Stack: return "stack";
  }
  return "?";
}

/// Stack symbol id reserved for the bottom marker Z0.
inline constexpr std::int64_t kBottomSymbol = 0;

/// A basis configuration. The `cells` layout depends on the family:
///   Counter: one value per counter.
///   Stack:   all stacks concatenated, each top-first and terminated by
///            kBottomSymbol (so Z0 doubles as the separator).
///   Tape:    tape cells for positions -T..T, followed by the head position.
struct ConfigKey {
  Family family = Family::Counter;
  int state = 0;
  std::vector<std::int64_t> cells;

  friend auto operator<=>(const ConfigKey&, const ConfigKey&) = default;
  friend bool operator==(const ConfigKey&, const ConfigKey&) = default;
};

struct ConfigKeyHash {
  std::size_t operator()(const ConfigKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.family) * 0x9e3779b97f4a7c15ULL ^
                    static_cast<std::size_t>(k.state + 1) * 0xbf58476d1ce4e5b9ULL;
    for (auto v : k.cells) {
      h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline ConfigKey counter_config(int state, std::vector<std::int64_t> counters) {
  return {Family::Counter, state, std::move(counters)};
}

/// Splits a stack configuration into its per-stack strings (each ending in Z0).
inline std::vector<std::span<const std::int64_t>> split_stacks(const ConfigKey& k) {
  std::vector<std::span<const std::int64_t>> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < k.cells.size(); ++i) {
    if (k.cells[i] == kBottomSymbol) {
      out.emplace_back(k.cells.data() + start, i + 1 - start);
      start = i + 1;
    }
  }
  return out;
}

inline ConfigKey stack_config(int state, const std::vector<std::vector<std::int64_t>>& stacks) {
  ConfigKey k{Family::Stack, state, {}};
  for (const auto& s : stacks) k.cells.insert(k.cells.end(), s.begin(), s.end());
  return k;
}

}  // namespace qmf

#endif  // QMF_CONFIG_HPP
