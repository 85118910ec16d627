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

#ifndef QMF_AMPLITUDE_HPP
#define QMF_AMPLITUDE_HPP

#include <charconv>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "qmf/errors.hpp"

namespace qmf {

using Amplitude = std::complex<double>;

/// Stored superposition entries below this modulus are dropped.
inline constexpr double kPruneThreshold = 1e-14;
inline constexpr double kDefaultTol = 1e-9;

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline bool is_finite(Amplitude a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

/// Parses one real component: a decimal literal, or the tokens "r2" / "-r2" (±1/√2).
/// U+2212 MINUS SIGN is accepted in place of '-'.
inline double parse_real_token(std::string_view text) {
  std::string s(text);
  if (s.rfind("−", 0) == 0) s = "-" + s.substr(3);
  if (s == "r2" || s == "+r2") return kInvSqrt2;
  if (s == "-r2") return -kInvSqrt2;
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw ParseError("", "not a decimal amplitude component: '" + std::string(text) + "'");
  }
  if (!std::isfinite(v)) throw ParseError("", "amplitude component is not finite");
  return v;
}

/// Shortest round-trip decimal, with ±1/√2 rendered as the "r2" token so that
/// emitted files parse back to bit-identical doubles.
inline std::string format_real_token(double v) {
  if (v == kInvSqrt2) return "r2";
  if (v == -kInvSqrt2) return "-r2";
  if (v == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace qmf

#endif  // QMF_AMPLITUDE_HPP
