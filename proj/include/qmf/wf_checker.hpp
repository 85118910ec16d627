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

#ifndef QMF_WF_CHECKER_HPP
#define QMF_WF_CHECKER_HPP

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qmf/dynamics.hpp"
#include "qmf/enumerate.hpp"
#include "qmf/qtm.hpp"
#include "qmf/simulator.hpp"
#include "qmf/sparse_operator.hpp"

// Well-formedness on a finite scope.
//
// For a symbol sigma let I be the sources under test and J the targets under
// test. Condition I asks that the images of any two sources in I be
// orthonormal; condition II asks the same of the rows (preimage lists) of any
// two targets in J. A source whose image leaves the window, or a target with a
// preimage outside I, is "inconclusive": truncation hides part of its row or
// column, so it is reported but never counted as a failure.

namespace qmf {

struct WfOffender {
  int condition = 1;  // 1 or 2
  std::string first;
  std::string second;
  Amplitude sum;
  double expected = 0.0;
};

struct WfSymbolReport {
  std::string symbol;
  bool condition1 = true;
  bool condition2 = true;
  double deviation1 = 0.0;
  double deviation2 = 0.0;
  std::size_t sources_tested = 0;
  std::size_t targets_tested = 0;
  std::vector<WfOffender> offenders;
  std::vector<std::string> inconclusive;
  std::set<std::string> offending_configs;  // every configuration named by an offender

  bool pass() const { return condition1 && condition2; }
};

enum class WfVerdict { Pass, Fail, Inconclusive };

struct WfReport {
  std::string family;
  std::string scope;        // "full-window" or "reachable"
  std::string certificate;  // "exact", "windowed" or "reachable"
  double tol = kDefaultTol;
  std::vector<WfSymbolReport> symbols;

  bool pass() const {
    return std::all_of(symbols.begin(), symbols.end(), [](const auto& s) { return s.pass(); });
  }
  bool any_inconclusive() const {
    return std::any_of(symbols.begin(), symbols.end(), [](const auto& s) { return !s.inconclusive.empty(); });
  }
  WfVerdict verdict() const {
    if (!pass()) return WfVerdict::Fail;
    return any_inconclusive() ? WfVerdict::Inconclusive : WfVerdict::Pass;
  }
  const WfSymbolReport& at(const std::string& sym) const {
    for (const auto& s : symbols) {
      if (s.symbol == sym) return s;
    }
    throw DomainError("no report for symbol '" + sym + "'");
  }
};

inline constexpr std::size_t kMaxListedOffenders = 16;

namespace detail {

using KeySet = std::unordered_set<ConfigKey, ConfigKeyHash>;
using PairSums = std::map<std::pair<ConfigKey, ConfigKey>, Amplitude>;

template <class D>
void record_pairs(const D& dyn, const PairSums& sums, int condition, double tol, WfSymbolReport& rep) {
  double& worst = condition == 1 ? rep.deviation1 : rep.deviation2;
  bool& ok = condition == 1 ? rep.condition1 : rep.condition2;
  for (const auto& [pair, sum] : sums) {
    const double expected = pair.first == pair.second ? 1.0 : 0.0;
    const double dev = std::abs(sum - expected);
    worst = std::max(worst, dev);
    if (dev <= tol) continue;
    ok = false;
    const auto a = dyn.describe(pair.first);
    const auto b = dyn.describe(pair.second);
    rep.offending_configs.insert(a);
    rep.offending_configs.insert(b);
    if (rep.offenders.size() < kMaxListedOffenders) rep.offenders.push_back({condition, a, b, sum, expected});
  }
}

/// Conditions I and II for one symbol given candidate source / target sets.
template <SymbolDynamics D>
WfSymbolReport check_sets(const D& dyn, const std::string& sym, const std::vector<ConfigKey>& source_candidates,
                          const std::vector<ConfigKey>& target_candidates, const SimulationBounds& b) {
  WfSymbolReport rep;
  rep.symbol = sym;
  std::unordered_map<ConfigKey, Column, ConfigKeyHash> images;
  KeySet in_i;
  std::set<std::string> inconclusive;
  for (const auto& c : source_candidates) {
    if (images.count(c) || !dyn.in_window(c, b)) continue;
    auto col = dyn.image(c, sym);
    const bool inside = std::all_of(col.begin(), col.end(), [&](const auto& e) { return dyn.in_window(e.first, b); });
    if (inside) {
      in_i.insert(c);
    } else {
      inconclusive.insert(dyn.describe(c));
    }
    images.emplace(c, std::move(col));
  }
  std::unordered_map<ConfigKey, Column, ConfigKeyHash> rows;
  for (const auto& t : target_candidates) {
    if (rows.count(t) || !dyn.in_window(t, b)) continue;
    auto pre = dyn.preimage(t, sym);
    const bool inside = std::all_of(pre.begin(), pre.end(), [&](const auto& e) { return in_i.count(e.first) != 0; });
    if (inside) {
      rows.emplace(t, std::move(pre));
    } else {
      inconclusive.insert(dyn.describe(t));
    }
  }
  rep.sources_tested = in_i.size();
  rep.targets_tested = rows.size();
  rep.inconclusive.assign(inconclusive.begin(), inconclusive.end());

  // Condition I: sum_t conj(delta(c1 -> t)) delta(c2 -> t) over sources sharing a target.
  PairSums s1;
  for (const auto& c1 : in_i) {
    s1[{c1, c1}];  // the diagonal must be present even for an empty image
    for (const auto& [t, a1] : images.at(c1)) {
      for (const auto& [c2, a2] : dyn.preimage(t, sym)) {
        if (in_i.count(c2)) s1[{c1, c2}] += std::conj(a1) * a2;
      }
    }
  }
  record_pairs(dyn, s1, 1, b.tol, rep);

  // Condition II: sum_c delta(c -> t1) conj(delta(c -> t2)) over targets sharing a source.
  PairSums s2;
  for (const auto& [t1, pre] : rows) {
    s2[{t1, t1}];
    for (const auto& [c, a1] : pre) {
      auto it = images.find(c);
      const Column col = it != images.end() ? it->second : dyn.image(c, sym);
      for (const auto& [t2, a2] : col) {
        if (rows.count(t2)) s2[{t1, t2}] += a1 * std::conj(a2);
      }
    }
  }
  record_pairs(dyn, s2, 2, b.tol, rep);
  return rep;
}

template <SymbolDynamics D>
std::string full_window_certificate(const D& dyn, const SimulationBounds& b) {
  if (!dyn.control().complete_with_identity) return "windowed";
  const auto support = dyn.support_bound();
  if (!support) return "windowed";
  const auto limit = D::family == Family::Counter ? b.n_max : b.d_max;
  return *support <= limit - dyn.margin() ? "exact" : "windowed";
}

}  // namespace detail

/// Conditions I and II for every readable symbol over the full window.
template <SymbolDynamics D>
WfReport wf_check_window(const D& dyn, const SimulationBounds& b) {
  b.check();
  const auto limit = D::family == Family::Counter ? b.n_max : b.d_max;
  if (limit < dyn.margin()) throw DomainError("window smaller than the machine's maximal step");
  WfReport rep;
  rep.family = family_name(D::family);
  rep.scope = "full-window";
  rep.certificate = detail::full_window_certificate(dyn, b);
  rep.tol = b.tol;
  const auto basis = dyn.window_basis(b);
  for (const auto& sym : dyn.control().readable_symbols()) {
    rep.symbols.push_back(detail::check_sets(dyn, sym, basis, basis, b));
  }
  return rep;
}

/// Sources V_sigma acts on during runs over `inputs`, per symbol.
template <SymbolDynamics D>
std::map<std::string, std::set<ConfigKey>> reachable_sources(const D& dyn,
                                                             const std::vector<std::vector<std::string>>& inputs,
                                                             const SimulationBounds& b) {
  std::map<std::string, std::set<ConfigKey>> out;
  for (const auto& sym : dyn.control().readable_symbols()) out[sym];
  for (const auto& x : inputs) {
    auto r = reachable_configs(dyn, x, b);
    for (std::size_t p = 0; p < r.symbols.size(); ++p) out[r.symbols[p]].insert(r.layers[p].begin(), r.layers[p].end());
  }
  return out;
}

/// Conditions I and II restricted to what runs over `inputs` touch: the
/// sources actually acted on plus the preimages of their images (margin),
/// with condition II on the images.
template <SymbolDynamics D>
WfReport wf_check_reachable(const D& dyn, const std::vector<std::vector<std::string>>& inputs,
                            const SimulationBounds& b) {
  b.check();
  WfReport rep;
  rep.family = family_name(D::family);
  rep.scope = "reachable";
  rep.certificate = "reachable";
  rep.tol = b.tol;
  for (const auto& [sym, sources] : reachable_sources(dyn, inputs, b)) {
    std::set<ConfigKey> src(sources.begin(), sources.end());
    std::set<ConfigKey> tgt;
    for (const auto& c : sources) {
      for (const auto& [t, a] : dyn.image(c, sym)) tgt.insert(t);
    }
    for (const auto& t : tgt) {
      for (const auto& [c, a] : dyn.preimage(t, sym)) src.insert(c);
    }
    rep.symbols.push_back(detail::check_sets(dyn, sym, {src.begin(), src.end()}, {tgt.begin(), tgt.end()}, b));
  }
  return rep;
}

inline WfReport wf_check_counter(const CounterMachine& m, const SimulationBounds& b) {
  return wf_check_window(CounterDynamics(m), b);
}
inline WfReport wf_check_counter(const CounterMachine& m, const SimulationBounds& b,
                                 const std::vector<std::vector<std::string>>& inputs) {
  return wf_check_reachable(CounterDynamics(m), inputs, b);
}
inline WfReport wf_check_stack(const StackMachine& m, const SimulationBounds& b) {
  return wf_check_window(StackDynamics(m), b);
}
inline WfReport wf_check_stack(const StackMachine& m, const SimulationBounds& b,
                               const std::vector<std::vector<std::string>>& inputs) {
  return wf_check_reachable(StackDynamics(m), inputs, b);
}

/// Result of the dense-matrix route for one symbol.
struct CrosscheckRecord {
  std::string symbol;
  bool oracle_pass = true;
  bool delta_pass = true;
  double oracle_deviation = 0.0;
  std::size_t interior = 0;  // columns of the interior block
  std::size_t rows = 0;
  bool square = false;
  std::set<std::string> oracle_offending;
  std::set<std::string> delta_offending;

  bool agree() const {
    if (oracle_pass != delta_pass) return false;
    if (oracle_pass) return true;
    return std::any_of(oracle_offending.begin(), oracle_offending.end(),
                       [&](const auto& c) { return delta_offending.count(c) != 0; });
  }
};

/// Independent check of one symbol: materialize V_sigma as a dense block over
/// the window from forward images only, then test A^dagger A = I on the
/// interior columns and (A A^dagger) = I on the rows whose every source is
/// interior. Compares with the delta-level report.
template <SymbolDynamics D>
CrosscheckRecord wf_crosscheck(const D& dyn, const std::string& sym, const SimulationBounds& b) {
  b.check();
  SimulationBounds outer = b;
  outer.n_max += dyn.margin();
  outer.d_max += dyn.margin();
  const auto window = dyn.window_basis(b);
  const auto wide = dyn.window_basis(outer);
  std::unordered_map<ConfigKey, Eigen::Index, ConfigKeyHash> row_of;
  for (std::size_t i = 0; i < window.size(); ++i) row_of.emplace(window[i], static_cast<Eigen::Index>(i));

  std::vector<ConfigKey> interior;
  std::vector<Column> cols;
  detail::KeySet interior_set;
  std::unordered_map<ConfigKey, std::vector<ConfigKey>, ConfigKeyHash> sources_of;  // within `wide`
  for (const auto& c : wide) {
    auto col = dyn.image(c, sym);
    for (const auto& [t, a] : col) {
      if (std::abs(a) > 0.0 && row_of.count(t)) sources_of[t].push_back(c);
    }
    if (!dyn.in_window(c, b)) continue;
    if (std::all_of(col.begin(), col.end(), [&](const auto& e) { return row_of.count(e.first) != 0; })) {
      interior.push_back(c);
      interior_set.insert(c);
      cols.push_back(std::move(col));
    }
  }
  if (interior.empty()) throw DomainError("wf_crosscheck: empty interior (window too small)");

  const auto n = static_cast<Eigen::Index>(window.size());
  const auto m = static_cast<Eigen::Index>(interior.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (const auto& [t, amp] : cols[static_cast<std::size_t>(j)]) a(row_of.at(t), j) += amp;
  }
  std::vector<Eigen::Index> good_rows;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& srcs = sources_of[window[static_cast<std::size_t>(i)]];
    if (std::all_of(srcs.begin(), srcs.end(), [&](const auto& c) { return interior_set.count(c) != 0; })) {
      good_rows.push_back(i);
    }
  }

  CrosscheckRecord rec;
  rec.symbol = sym;
  rec.interior = static_cast<std::size_t>(m);
  rec.rows = good_rows.size();
  rec.square = m == n && static_cast<Eigen::Index>(good_rows.size()) == n;
  if (rec.square) {
    auto u = check_unitary(a, b.tol);
    rec.oracle_pass = u.pass;
    rec.oracle_deviation = u.deviation;
  }
  const Eigen::MatrixXcd g1 = a.adjoint() * a;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double d = std::abs(g1(i, j) - (i == j ? Amplitude(1.0) : Amplitude(0.0)));
      rec.oracle_deviation = std::max(rec.oracle_deviation, d);
      if (d > b.tol) {
        rec.oracle_pass = false;
        rec.oracle_offending.insert(dyn.describe(interior[static_cast<std::size_t>(i)]));
        rec.oracle_offending.insert(dyn.describe(interior[static_cast<std::size_t>(j)]));
      }
    }
  }
  Eigen::MatrixXcd rows_block(static_cast<Eigen::Index>(good_rows.size()), m);
  for (std::size_t r = 0; r < good_rows.size(); ++r) rows_block.row(static_cast<Eigen::Index>(r)) = a.row(good_rows[r]);
  const Eigen::MatrixXcd g2 = rows_block * rows_block.adjoint();
  for (Eigen::Index j = 0; j < g2.cols(); ++j) {
    for (Eigen::Index i = 0; i < g2.rows(); ++i) {
      const double d = std::abs(g2(i, j) - (i == j ? Amplitude(1.0) : Amplitude(0.0)));
      rec.oracle_deviation = std::max(rec.oracle_deviation, d);
      if (d > b.tol) {
        rec.oracle_pass = false;
        rec.oracle_offending.insert(dyn.describe(window[static_cast<std::size_t>(good_rows[static_cast<std::size_t>(i)])]));
        rec.oracle_offending.insert(dyn.describe(window[static_cast<std::size_t>(good_rows[static_cast<std::size_t>(j)])]));
      }
    }
  }

  auto delta = detail::check_sets(dyn, sym, window, window, b);
  rec.delta_pass = delta.pass();
  rec.delta_offending = delta.offending_configs;
  return rec;
}

/// Images of the reachable non-final configurations within t steps.
struct IsometryReport {
  bool pass = true;
  std::size_t configs = 0;
  double max_deviation = 0.0;
  std::vector<WfOffender> offenders;
};

inline IsometryReport qtm_isometry_check(const TuringMachine& m, const std::vector<std::vector<std::string>>& inputs,
                                         std::int64_t t, const SimulationBounds& b) {
  if (b.radius < t) throw DomainError("qtm_isometry_check: tape radius must be at least t");
  QtmDynamics d(m, b.radius);
  std::set<ConfigKey> reach;
  for (const auto& x : inputs) {
    std::set<ConfigKey> cur{d.initial(x)};
    for (std::int64_t step = 0; step < t; ++step) {
      std::set<ConfigKey> next;
      for (const auto& c : cur) {
        if (d.is_final(c)) continue;
        reach.insert(c);
        for (const auto& [k, a] : d.image(c)) next.insert(k);
      }
      cur = std::move(next);
    }
  }
  IsometryReport rep;
  rep.configs = reach.size();
  std::map<ConfigKey, Column> images;
  std::map<ConfigKey, std::vector<std::pair<ConfigKey, Amplitude>>> by_target;
  for (const auto& c : reach) {
    images[c] = d.image(c);
    for (const auto& [k, a] : images[c]) by_target[k].emplace_back(c, a);
  }
  std::map<std::pair<ConfigKey, ConfigKey>, Amplitude> sums;
  for (const auto& c : reach) {
    sums[{c, c}];
    for (const auto& [k, a1] : images[c]) {
      for (const auto& [c2, a2] : by_target[k]) sums[{c, c2}] += std::conj(a1) * a2;
    }
  }
  for (const auto& [pair, sum] : sums) {
    const double expected = pair.first == pair.second ? 1.0 : 0.0;
    const double dev = std::abs(sum - expected);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (dev > b.tol) {
      rep.pass = false;
      if (rep.offenders.size() < kMaxListedOffenders) {
        rep.offenders.push_back({1, d.describe(pair.first), d.describe(pair.second), sum, expected});
      }
    }
  }
  return rep;
}

inline const char* verdict_name(WfVerdict v) {
  switch (v) {
    case WfVerdict::Pass: return "pass";
    case WfVerdict::Fail: return "fail";
    case WfVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline nlohmann::ordered_json to_json(const WfReport& r) {
  nlohmann::ordered_json j;
  j["verdict"] = verdict_name(r.verdict());
  j["family"] = r.family;
  j["scope"] = r.scope;
  j["certificate"] = r.certificate;
  j["tol"] = r.tol;
  auto syms = nlohmann::ordered_json::array();
  for (const auto& s : r.symbols) {
    nlohmann::ordered_json o;
    o["symbol"] = s.symbol;
    o["condition_I"] = s.condition1;
    o["condition_II"] = s.condition2;
    o["deviation_I"] = s.deviation1;
    o["deviation_II"] = s.deviation2;
    o["sources_tested"] = s.sources_tested;
    o["targets_tested"] = s.targets_tested;
    auto offs = nlohmann::ordered_json::array();
    for (const auto& f : s.offenders) {
      offs.push_back({{"condition", f.condition == 1 ? "I" : "II"},
                      {"first", f.first},
                      {"second", f.second},
                      {"sum_re", f.sum.real()},
                      {"sum_im", f.sum.imag()},
                      {"expected", f.expected}});
    }
    o["offenders"] = std::move(offs);
    o["inconclusive"] = s.inconclusive;
    syms.push_back(std::move(o));
  }
  j["symbols"] = std::move(syms);
  return j;
}

inline nlohmann::ordered_json to_json(const IsometryReport& r) {
  nlohmann::ordered_json j;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["configs"] = r.configs;
  j["max_deviation"] = r.max_deviation;
  auto offs = nlohmann::ordered_json::array();
  for (const auto& f : r.offenders) {
    offs.push_back({{"first", f.first}, {"second", f.second}, {"sum_re", f.sum.real()}, {"sum_im", f.sum.imag()}});
  }
  j["offenders"] = std::move(offs);
  return j;
}

}  // namespace qmf

#endif  // QMF_WF_CHECKER_HPP
