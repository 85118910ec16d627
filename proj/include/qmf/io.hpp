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

#ifndef QMF_IO_HPP
#define QMF_IO_HPP

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "qmf/amplitude.hpp"
#include "qmf/errors.hpp"
#include "qmf/machine.hpp"

// Machine description files.
//
//   {"model": "qmcm", "states": [...], "initial": "q0", "accept": "qa",
//    "reject": "qr", "input_alphabet": [...], "padding": [...],
//    "complete_with_identity": true, "counters": 1, "allowed_deltas": [...],
//    "rules": [{"state", "symbol", "source", "target_state", "target",
//               "amplitude": {"re": "r2", "im": "0"}}, ...]}
//
// Counter source entries are integers or {"var", "lo", "hi"?}; counter target
// entries are integers or {"var", "offset"}. Stack machines ("qmsm") carry
// "stacks", "stack_alphabet", "bottom"; sources are {"top": [...],
// "height"?: {"lo", "hi"?}} and targets are symbol arrays. Turing machines
// ("qtm") carry "blank" and rules {"state", "read", "write", "next", "move"}.
//
// emit_machine() is canonical: parsing its output and emitting again yields
// the same bytes.

namespace qmf {

using Json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ParseError(where, "unknown field '" + k + "'");
  }
}

inline const Json& field(const Json& j, const std::string& where, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string get_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where, "expected a string");
  return j.get<std::string>();
}

inline std::int64_t get_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<std::int64_t>();
}

inline bool get_bool(const Json& j, const std::string& where) {
  if (!j.is_boolean()) throw ParseError(where, "expected a boolean");
  return j.get<bool>();
}

inline std::vector<std::string> get_strings(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline int index_of(const std::vector<std::string>& names, const std::string& name, const std::string& where,
                    const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ParseError(where, std::string("unknown ") + what + " '" + name + "'");
  return static_cast<int>(it - names.begin());
}

inline Amplitude parse_amplitude(const Json& j, const std::string& where) {
  reject_unknown(j, where, {"re", "im"});
  auto component = [&](const char* key) {
    const auto w = where + "." + key;
    try {
      return parse_real_token(get_string(field(j, where, key), w));
    } catch (const ParseError& e) {
      if (!e.where().empty()) throw;
      throw ParseError(w, e.what());
    }
  };
  return {component("re"), component("im")};
}

inline Json emit_amplitude(Amplitude a) {
  return Json{{"re", format_real_token(a.real())}, {"im", format_real_token(a.imag())}};
}

inline Control parse_control(const Json& j) {
  Control c;
  c.states = get_strings(field(j, "", "states"), "states");
  c.initial = index_of(c.states, get_string(field(j, "", "initial"), "initial"), "initial", "state");
  c.accept = index_of(c.states, get_string(field(j, "", "accept"), "accept"), "accept", "state");
  c.reject = index_of(c.states, get_string(field(j, "", "reject"), "reject"), "reject", "state");
  c.input_alphabet = get_strings(field(j, "", "input_alphabet"), "input_alphabet");
  if (j.contains("padding")) c.padding = get_strings(j["padding"], "padding");
  if (j.contains("complete_with_identity")) {
    c.complete_with_identity = get_bool(j["complete_with_identity"], "complete_with_identity");
  }
  return c;
}

inline void emit_control(Json& j, const Control& c) {
  j["states"] = c.states;
  j["initial"] = c.states.at(static_cast<std::size_t>(c.initial));
  j["accept"] = c.states.at(static_cast<std::size_t>(c.accept));
  j["reject"] = c.states.at(static_cast<std::size_t>(c.reject));
  j["input_alphabet"] = c.input_alphabet;
  j["padding"] = c.padding;
  j["complete_with_identity"] = c.complete_with_identity;
}

inline Range parse_range(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  reject_unknown(j, where, allowed);
  Range r;
  r.lo = get_int(field(j, where, "lo"), where + ".lo");
  if (j.contains("hi")) r.hi = get_int(j["hi"], where + ".hi");
  return r;
}

inline CounterMachine parse_counter(const Json& j) {
  reject_unknown(j, "", {"model", "states", "initial", "accept", "reject", "input_alphabet", "padding",
                         "complete_with_identity", "counters", "allowed_deltas", "rules"});
  CounterMachine m;
  m.control = parse_control(j);
  m.counters = static_cast<int>(get_int(field(j, "", "counters"), "counters"));
  const auto& d = field(j, "", "allowed_deltas");
  if (!d.is_array()) throw ParseError("allowed_deltas", "expected an array of integers");
  m.allowed_deltas.clear();
  for (std::size_t i = 0; i < d.size(); ++i) {
    m.allowed_deltas.push_back(get_int(d[i], "allowed_deltas[" + std::to_string(i) + "]"));
  }
  const auto& rules = field(j, "", "rules");
  if (!rules.is_array()) throw ParseError("rules", "expected an array");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto w = "rules[" + std::to_string(i) + "]";
    const auto& rj = rules[i];
    reject_unknown(rj, w, {"state", "symbol", "source", "target_state", "target", "amplitude"});
    CounterRule r;
    r.state = index_of(m.control.states, get_string(field(rj, w, "state"), w + ".state"), w + ".state", "state");
    r.symbol = get_string(field(rj, w, "symbol"), w + ".symbol");
    r.target_state = index_of(m.control.states, get_string(field(rj, w, "target_state"), w + ".target_state"),
                              w + ".target_state", "state");
    const auto& src = field(rj, w, "source");
    if (!src.is_array()) throw ParseError(w + ".source", "expected an array");
    for (std::size_t c = 0; c < src.size(); ++c) {
      const auto wc = w + ".source[" + std::to_string(c) + "]";
      if (src[c].is_number_integer()) {
        r.source.emplace_back(src[c].get<std::int64_t>());
      } else {
        auto rg = parse_range(src[c], wc, {"var", "lo", "hi"});
        r.source.emplace_back(Variable{get_string(field(src[c], wc, "var"), wc + ".var"), rg});
      }
    }
    const auto& tgt = field(rj, w, "target");
    if (!tgt.is_array()) throw ParseError(w + ".target", "expected an array");
    for (std::size_t c = 0; c < tgt.size(); ++c) {
      const auto wc = w + ".target[" + std::to_string(c) + "]";
      if (tgt[c].is_number_integer()) {
        r.target.emplace_back(tgt[c].get<std::int64_t>());
      } else {
        reject_unknown(tgt[c], wc, {"var", "offset"});
        VarRef ref{get_string(field(tgt[c], wc, "var"), wc + ".var"), 0};
        if (tgt[c].contains("offset")) ref.offset = get_int(tgt[c]["offset"], wc + ".offset");
        r.target.emplace_back(ref);
      }
    }
    r.amplitude = parse_amplitude(field(rj, w, "amplitude"), w + ".amplitude");
    m.rules.push_back(std::move(r));
  }
  return m;
}

inline std::vector<std::int64_t> parse_stack_string(const Json& j, const StackMachine& m, const std::string& where) {
  std::vector<std::int64_t> out;
  for (const auto& name : get_strings(j, where)) {
    out.push_back(index_of(m.stack_alphabet, name, where, "stack symbol"));
  }
  return out;
}

inline StackMachine parse_stack(const Json& j) {
  reject_unknown(j, "", {"model", "states", "initial", "accept", "reject", "input_alphabet", "padding",
                         "complete_with_identity", "stacks", "stack_alphabet", "bottom", "rules"});
  StackMachine m;
  m.control = parse_control(j);
  m.stacks = static_cast<int>(get_int(field(j, "", "stacks"), "stacks"));
  auto alphabet = get_strings(field(j, "", "stack_alphabet"), "stack_alphabet");
  const auto bottom = get_string(field(j, "", "bottom"), "bottom");
  const auto b = index_of(alphabet, bottom, "bottom", "stack symbol");
  // Internally the bottom symbol always has index 0.
  std::rotate(alphabet.begin(), alphabet.begin() + b, alphabet.begin() + b + 1);
  m.stack_alphabet = alphabet;
  const auto& rules = field(j, "", "rules");
  if (!rules.is_array()) throw ParseError("rules", "expected an array");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto w = "rules[" + std::to_string(i) + "]";
    const auto& rj = rules[i];
    reject_unknown(rj, w, {"state", "symbol", "source", "target_state", "target", "amplitude"});
    StackRule r;
    r.state = index_of(m.control.states, get_string(field(rj, w, "state"), w + ".state"), w + ".state", "state");
    r.symbol = get_string(field(rj, w, "symbol"), w + ".symbol");
    r.target_state = index_of(m.control.states, get_string(field(rj, w, "target_state"), w + ".target_state"),
                              w + ".target_state", "state");
    const auto& src = field(rj, w, "source");
    if (!src.is_array()) throw ParseError(w + ".source", "expected an array");
    for (std::size_t c = 0; c < src.size(); ++c) {
      const auto wc = w + ".source[" + std::to_string(c) + "]";
      reject_unknown(src[c], wc, {"top", "height"});
      StackPattern p;
      p.top = parse_stack_string(field(src[c], wc, "top"), m, wc + ".top");
      if (src[c].contains("height")) {
        p.height = parse_range(src[c]["height"], wc + ".height", {"lo", "hi"});
      } else if (p.exact()) {
        const auto h = static_cast<std::int64_t>(p.top.size()) - 1;
        p.height = Range{h, h};
      } else {
        p.height = Range{static_cast<std::int64_t>(p.top.size()), std::nullopt};
      }
      r.source.push_back(std::move(p));
    }
    const auto& tgt = field(rj, w, "target");
    if (!tgt.is_array()) throw ParseError(w + ".target", "expected an array");
    for (std::size_t c = 0; c < tgt.size(); ++c) {
      r.target.push_back(StackTarget{parse_stack_string(tgt[c], m, w + ".target[" + std::to_string(c) + "]")});
    }
    r.amplitude = parse_amplitude(field(rj, w, "amplitude"), w + ".amplitude");
    m.rules.push_back(std::move(r));
  }
  return m;
}

inline TuringMachine parse_turing(const Json& j) {
  reject_unknown(j, "", {"model", "states", "initial", "accept", "reject", "input_alphabet", "blank", "rules"});
  TuringMachine m;
  m.states = get_strings(field(j, "", "states"), "states");
  m.initial = index_of(m.states, get_string(field(j, "", "initial"), "initial"), "initial", "state");
  m.accept = index_of(m.states, get_string(field(j, "", "accept"), "accept"), "accept", "state");
  m.reject = index_of(m.states, get_string(field(j, "", "reject"), "reject"), "reject", "state");
  m.tape_alphabet = {get_string(field(j, "", "blank"), "blank")};
  for (const auto& s : get_strings(field(j, "", "input_alphabet"), "input_alphabet")) {
    if (s == m.tape_alphabet[0]) throw ParseError("input_alphabet", "the blank may not be an input symbol");
    m.tape_alphabet.push_back(s);
  }
  const auto& rules = field(j, "", "rules");
  if (!rules.is_array()) throw ParseError("rules", "expected an array");
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const auto w = "rules[" + std::to_string(i) + "]";
    const auto& rj = rules[i];
    reject_unknown(rj, w, {"state", "read", "write", "next", "move", "amplitude"});
    TapeRule r;
    r.state = index_of(m.states, get_string(field(rj, w, "state"), w + ".state"), w + ".state", "state");
    r.read = index_of(m.tape_alphabet, get_string(field(rj, w, "read"), w + ".read"), w + ".read", "tape symbol");
    r.write = index_of(m.tape_alphabet, get_string(field(rj, w, "write"), w + ".write"), w + ".write", "tape symbol");
    r.next = index_of(m.states, get_string(field(rj, w, "next"), w + ".next"), w + ".next", "state");
    const auto mv = get_string(field(rj, w, "move"), w + ".move");
    if (mv == "L") {
      r.move = Move::L;
    } else if (mv == "R") {
      r.move = Move::R;
    } else {
      throw ParseError(w + ".move", "head must move \"L\" or \"R\"");
    }
    r.amplitude = parse_amplitude(field(rj, w, "amplitude"), w + ".amplitude");
    m.rules.push_back(r);
  }
  return m;
}

inline Json emit_stack_string(const StackMachine& m, const std::vector<std::int64_t>& s) {
  Json a = Json::array();
  for (auto x : s) a.push_back(m.stack_alphabet.at(static_cast<std::size_t>(x)));
  return a;
}

inline Json rules_json(const CounterMachine& m) {
  Json rules = Json::array();
  for (const auto& r : m.rules) {
    Json src = Json::array();
    for (const auto& p : r.source) {
      if (const auto* lit = std::get_if<std::int64_t>(&p)) {
        src.push_back(*lit);
      } else {
        const auto& v = std::get<Variable>(p);
        Json o{{"var", v.name}, {"lo", v.range.lo}};
        if (v.range.hi) o["hi"] = *v.range.hi;
        src.push_back(std::move(o));
      }
    }
    Json tgt = Json::array();
    for (const auto& t : r.target) {
      if (const auto* lit = std::get_if<std::int64_t>(&t)) {
        tgt.push_back(*lit);
      } else {
        const auto& ref = std::get<VarRef>(t);
        tgt.push_back(Json{{"var", ref.name}, {"offset", ref.offset}});
      }
    }
    rules.push_back(Json{{"state", m.control.states.at(static_cast<std::size_t>(r.state))},
                         {"symbol", r.symbol},
                         {"source", std::move(src)},
                         {"target_state", m.control.states.at(static_cast<std::size_t>(r.target_state))},
                         {"target", std::move(tgt)},
                         {"amplitude", emit_amplitude(r.amplitude)}});
  }
  return rules;
}

inline Json rules_json(const StackMachine& m) {
  Json rules = Json::array();
  for (const auto& r : m.rules) {
    Json src = Json::array();
    for (const auto& p : r.source) {
      Json o{{"top", emit_stack_string(m, p.top)}};
      if (!p.exact()) {
        Json h{{"lo", p.height.lo}};
        if (p.height.hi) h["hi"] = *p.height.hi;
        o["height"] = std::move(h);
      }
      src.push_back(std::move(o));
    }
    Json tgt = Json::array();
    for (const auto& t : r.target) tgt.push_back(emit_stack_string(m, t.top));
    rules.push_back(Json{{"state", m.control.states.at(static_cast<std::size_t>(r.state))},
                         {"symbol", r.symbol},
                         {"source", std::move(src)},
                         {"target_state", m.control.states.at(static_cast<std::size_t>(r.target_state))},
                         {"target", std::move(tgt)},
                         {"amplitude", emit_amplitude(r.amplitude)}});
  }
  return rules;
}

inline Json rules_json(const TuringMachine& m) {
  Json rules = Json::array();
  for (const auto& r : m.rules) {
    rules.push_back(Json{{"state", m.states.at(static_cast<std::size_t>(r.state))},
                         {"read", m.tape_alphabet.at(static_cast<std::size_t>(r.read))},
                         {"write", m.tape_alphabet.at(static_cast<std::size_t>(r.write))},
                         {"next", m.states.at(static_cast<std::size_t>(r.next))},
                         {"move", r.move == Move::L ? "L" : "R"},
                         {"amplitude", emit_amplitude(r.amplitude)}});
  }
  return rules;
}

/// Pretty layout: one header field per line, one rule per line.
inline std::string layout(const Json& header, const Json& rules) {
  std::ostringstream os;
  os << "{\n";
  for (const auto& [k, v] : header.items()) os << "  " << Json(k).dump() << ": " << v.dump() << ",\n";
  os << "  \"rules\": [";
  for (std::size_t i = 0; i < rules.size(); ++i) os << (i == 0 ? "\n" : ",\n") << "    " << rules[i].dump();
  os << (rules.empty() ? "]\n" : "\n  ]\n") << "}\n";
  return os.str();
}

}  // namespace detail

inline MachineDescription parse_machine(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ParseError("line " + std::to_string(line), std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("", "machine description must be a JSON object");
  const auto model = detail::get_string(detail::field(j, "", "model"), "model");
  try {
    if (model == "qmcm") return detail::parse_counter(j);
    if (model == "qmsm") return detail::parse_stack(j);
    if (model == "qtm") return detail::parse_turing(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("", e.what());
  }
  throw ParseError("model", "unknown model '" + model + "' (expected qtm, qmcm or qmsm)");
}

inline MachineDescription load_machine(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_machine(ss.str());
}

inline std::string emit_machine(const CounterMachine& m) {
  Json h{{"model", "qmcm"}};
  detail::emit_control(h, m.control);
  h["counters"] = m.counters;
  h["allowed_deltas"] = m.allowed_deltas;
  return detail::layout(h, detail::rules_json(m));
}

inline std::string emit_machine(const StackMachine& m) {
  Json h{{"model", "qmsm"}};
  detail::emit_control(h, m.control);
  h["stacks"] = m.stacks;
  h["stack_alphabet"] = m.stack_alphabet;
  h["bottom"] = m.stack_alphabet.at(0);
  return detail::layout(h, detail::rules_json(m));
}

inline std::string emit_machine(const TuringMachine& m) {
  Json h{{"model", "qtm"}};
  h["states"] = m.states;
  h["initial"] = m.states.at(static_cast<std::size_t>(m.initial));
  h["accept"] = m.states.at(static_cast<std::size_t>(m.accept));
  h["reject"] = m.states.at(static_cast<std::size_t>(m.reject));
  h["input_alphabet"] = m.input_alphabet();
  h["blank"] = m.tape_alphabet.at(0);
  return detail::layout(h, detail::rules_json(m));
}

inline std::string emit_machine(const MachineDescription& m) {
  return std::visit([](const auto& x) { return emit_machine(x); }, m);
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path, "cannot write file");
  out << text;
}

}  // namespace qmf

#endif  // QMF_IO_HPP
