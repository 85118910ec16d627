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

#ifndef QMF_TRANSPILE_LEMMAS_HPP
#define QMF_TRANSPILE_LEMMAS_HPP

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qmf/errors.hpp"
#include "qmf/machine.hpp"

// Counter-alphabet reductions. Both lemmas write every counter value as
// n = i + r*k with residue i in [0, r-1]. A rule schema is split per residue of
// each of its variables: residues become literals, the quotient k stays a
// variable (or a literal when its range is a single point), and a target
// var+offset becomes a literal residue plus a carry on the quotient.

namespace qmf {

struct TranspileResult {
  MachineDescription machine;
  nlohmann::ordered_json provenance;

  const CounterMachine& counter() const { return std::get<CounterMachine>(machine); }
  const StackMachine& stack() const { return std::get<StackMachine>(machine); }
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  auto q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - b * floor_div(a, b); }

/// Lemma 1 encoding of one counter value: (n mod r, n div r).
inline std::pair<std::int64_t, std::int64_t> lemma1_encode(std::int64_t n, std::int64_t r) {
  if (n < 0 || r < 2) throw DomainError("lemma1_encode: need n >= 0 and r >= 2");
  return {n % r, n / r};
}
inline std::int64_t lemma1_decode(std::pair<std::int64_t, std::int64_t> p, std::int64_t r) {
  if (p.first < 0 || p.first >= r || p.second < 0) throw DomainError("lemma1_decode: not an encoding");
  return p.first + r * p.second;
}

/// Lemma 2 encoding: r-1 indicator counters (the i-th is 1 iff n mod r = i,
/// all zero when the residue is 0) followed by n div r.
inline std::vector<std::int64_t> lemma2_encode(std::int64_t n, std::int64_t r) {
  if (n < 0 || r < 2) throw DomainError("lemma2_encode: need n >= 0 and r >= 2");
  std::vector<std::int64_t> v(static_cast<std::size_t>(r), 0);
  if (n % r != 0) v[static_cast<std::size_t>(n % r - 1)] = 1;
  v.back() = n / r;
  return v;
}
inline std::int64_t lemma2_decode(const std::vector<std::int64_t>& v, std::int64_t r) {
  if (static_cast<std::int64_t>(v.size()) != r) throw DomainError("lemma2_decode: wrong width");
  std::int64_t residue = 0;
  int ones = 0;
  for (std::int64_t i = 0; i + 1 < r; ++i) {
    const auto x = v[static_cast<std::size_t>(i)];
    if (x != 0 && x != 1) throw DomainError("lemma2_decode: indicator out of range");
    if (x == 1) {
      residue = i + 1;
      ++ones;
    }
  }
  if (ones > 1 || v.back() < 0) throw DomainError("lemma2_decode: not an encoding");
  return residue + r * v.back();
}

namespace detail {

/// One coordinate after residue splitting.
struct SplitSource {
  std::int64_t residue = 0;
  CounterPattern quotient;
};
struct SplitTarget {
  std::int64_t residue = 0;
  CounterTarget quotient;
};
struct SplitRule {
  std::size_t origin = 0;
  std::vector<SplitSource> source;
  std::vector<SplitTarget> target;
};

inline std::string quotient_name(const std::string& v) { return v + "'"; }

/// All residue splits of `rule` modulo r. Variables whose residue class is
/// empty over their range produce no instance.
inline std::vector<SplitRule> split_rule(const CounterRule& rule, std::size_t origin, std::int64_t r) {
  std::vector<std::string> vars;
  std::vector<Range> ranges;
  for (const auto& p : rule.source) {
    if (const auto* v = std::get_if<Variable>(&p)) {
      vars.push_back(v->name);
      ranges.push_back(v->range);
    }
  }
  std::vector<SplitRule> out;
  std::vector<std::int64_t> res(vars.size(), 0);
  while (true) {
    std::map<std::string, std::pair<std::int64_t, CounterPattern>> bind;  // residue, quotient pattern
    bool feasible = true;
    for (std::size_t u = 0; u < vars.size() && feasible; ++u) {
      const auto i = res[u];
      const auto klo = std::max<std::int64_t>(0, floor_div(ranges[u].lo - i + r - 1, r));
      std::optional<std::int64_t> khi;
      if (ranges[u].hi) khi = floor_div(*ranges[u].hi - i, r);
      if (khi && *khi < klo) {
        feasible = false;
        break;
      }
      CounterPattern q = (khi && *khi == klo) ? CounterPattern{klo}
                                              : CounterPattern{Variable{quotient_name(vars[u]), Range{klo, khi}}};
      bind[vars[u]] = {i, q};
    }
    if (feasible) {
      SplitRule s;
      s.origin = origin;
      for (const auto& p : rule.source) {
        if (const auto* lit = std::get_if<std::int64_t>(&p)) {
          s.source.push_back({*lit % r, CounterPattern{*lit / r}});
        } else {
          const auto& b = bind.at(std::get<Variable>(p).name);
          s.source.push_back({b.first, b.second});
        }
      }
      for (const auto& t : rule.target) {
        if (const auto* lit = std::get_if<std::int64_t>(&t)) {
          s.target.push_back({floor_mod(*lit, r), CounterTarget{floor_div(*lit, r)}});
          continue;
        }
        const auto& ref = std::get<VarRef>(t);
        auto it = bind.find(ref.name);
        if (it == bind.end()) throw DomainError("rule " + std::to_string(origin) + ": unbound variable '" + ref.name + "'");
        const auto sum = it->second.first + ref.offset;
        const auto residue = floor_mod(sum, r);
        const auto carry = floor_div(sum, r);
        if (const auto* kl = std::get_if<std::int64_t>(&it->second.second)) {
          s.target.push_back({residue, CounterTarget{*kl + carry}});
        } else {
          s.target.push_back({residue, CounterTarget{VarRef{quotient_name(ref.name), carry}}});
        }
      }
      out.push_back(std::move(s));
    }
    std::size_t p = 0;
    while (p < res.size() && ++res[p] == r) res[p++] = 0;
    if (p == res.size()) break;
  }
  return out;
}

inline std::set<std::int64_t> delta_set(const CounterMachine& m) {
  return {m.allowed_deltas.begin(), m.allowed_deltas.end()};
}

inline nlohmann::ordered_json base_provenance(const std::string& stage, const CounterMachine& src) {
  nlohmann::ordered_json p;
  p["stage"] = stage;
  p["source_counters"] = src.counters;
  p["source_allowed_deltas"] = src.allowed_deltas;
  p["source_rules"] = src.rules.size();
  return p;
}

}  // namespace detail

/// Lemma 1: k counters counting with {0, +-1, +-r} become 2k counters counting
/// with {0, +-1, +-(r-1)}; counter j becomes the pair (2j, 2j+1) = (residue,
/// quotient). Configurations with a residue >= r match no rule and therefore
/// follow the source's completion flag.
inline TranspileResult lemma1_transform(const CounterMachine& m, std::optional<std::int64_t> r_opt = std::nullopt) {
  const auto r = r_opt.value_or(m.max_abs_delta());
  if (r < 2) throw DomainError("lemma1_transform: r must be at least 2");
  for (auto d : m.allowed_deltas) {
    if (d != 0 && d != 1 && d != -1 && d != r && d != -r) {
      throw DomainError("lemma1_transform: allowed deltas must be within {0, +-1, +-" + std::to_string(r) + "}");
    }
  }
  CounterMachine out;
  out.control = m.control;
  out.counters = 2 * m.counters;
  out.allowed_deltas = r == 2 ? std::vector<std::int64_t>{-1, 0, 1}
                              : std::vector<std::int64_t>{-(r - 1), -1, 0, 1, r - 1};
  for (std::size_t ri = 0; ri < m.rules.size(); ++ri) {
    const auto& rule = m.rules[ri];
    for (auto& s : detail::split_rule(rule, ri, r)) {
      CounterRule nr;
      nr.state = rule.state;
      nr.symbol = rule.symbol;
      nr.target_state = rule.target_state;
      nr.amplitude = rule.amplitude;
      for (auto& c : s.source) {
        nr.source.emplace_back(c.residue);
        nr.source.push_back(std::move(c.quotient));
      }
      for (auto& c : s.target) {
        nr.target.emplace_back(c.residue);
        nr.target.push_back(std::move(c.quotient));
      }
      out.rules.push_back(std::move(nr));
    }
  }
  auto prov = detail::base_provenance("lemma1", m);
  prov["r"] = r;
  prov["target_counters"] = out.counters;
  prov["target_allowed_deltas"] = out.allowed_deltas;
  prov["encoding"] = "counter j -> (n mod r, n div r) on counters (2j, 2j+1)";
  prov["target_rules"] = out.rules.size();
  return {out, prov};
}

/// Lemma 2: k counters counting with {0, +-1, ..., +-r} become k*r counters
/// counting with {-1, 0, 1}; counter j becomes r-1 residue indicators followed
/// by the quotient. Rules whose quotient moves by +1 must not raise the
/// residue (and by -1 must not lower it); offending rules are rejected.
inline TranspileResult lemma2_transform(const CounterMachine& m, std::optional<std::int64_t> r_opt = std::nullopt) {
  const auto r = r_opt.value_or(m.max_abs_delta());
  if (r < 2) throw DomainError("lemma2_transform: r must be at least 2");
  for (auto d : m.allowed_deltas) {
    if (d < -r || d > r) throw DomainError("lemma2_transform: allowed deltas exceed +-" + std::to_string(r));
  }
  CounterMachine out;
  out.control = m.control;
  out.counters = m.counters * static_cast<int>(r);
  out.allowed_deltas = {-1, 0, 1};
  const auto indicators = [&](std::int64_t residue) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(r - 1), 0);
    if (residue != 0) v[static_cast<std::size_t>(residue - 1)] = 1;
    return v;
  };
  for (std::size_t ri = 0; ri < m.rules.size(); ++ri) {
    const auto& rule = m.rules[ri];
    for (auto& s : detail::split_rule(rule, ri, r)) {
      CounterRule nr;
      nr.state = rule.state;
      nr.symbol = rule.symbol;
      nr.target_state = rule.target_state;
      nr.amplitude = rule.amplitude;
      for (std::size_t j = 0; j < s.source.size(); ++j) {
        const auto& sc = s.source[j];
        const auto& tc = s.target[j];
        // Quotient change, when it is determined by the split.
        std::optional<std::int64_t> dk;
        const auto* sk_lit = std::get_if<std::int64_t>(&sc.quotient);
        const auto* tk_lit = std::get_if<std::int64_t>(&tc.quotient);
        const auto* tk_ref = std::get_if<VarRef>(&tc.quotient);
        const auto* sk_var = std::get_if<Variable>(&sc.quotient);
        if (sk_lit && tk_lit) dk = *tk_lit - *sk_lit;
        if (sk_var && tk_ref && tk_ref->name == sk_var->name) dk = tk_ref->offset;
        if (!dk || *dk < -1 || *dk > 1 || (*dk == 1 && tc.residue > sc.residue) ||
            (*dk == -1 && tc.residue < sc.residue)) {
          throw DomainError("lemma2_transform: rule " + std::to_string(ri) + " violates the carry guard on counter " +
                            std::to_string(j));
        }
        for (auto v : indicators(sc.residue)) nr.source.emplace_back(v);
        nr.source.push_back(sc.quotient);
        for (auto v : indicators(tc.residue)) nr.target.emplace_back(v);
        nr.target.push_back(tc.quotient);
      }
      out.rules.push_back(std::move(nr));
    }
  }
  auto prov = detail::base_provenance("lemma2", m);
  prov["r"] = r;
  prov["target_counters"] = out.counters;
  prov["target_allowed_deltas"] = out.allowed_deltas;
  prov["encoding"] = "counter j -> r-1 residue indicators then n div r";
  prov["target_rules"] = out.rules.size();
  return {out, prov};
}

}  // namespace qmf

#endif  // QMF_TRANSPILE_LEMMAS_HPP
