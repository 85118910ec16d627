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

#ifndef QMF_ERRORS_HPP
#define QMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qmf {

/// Precondition or domain violation (bad arguments, wrong machine shape).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation needed a configuration outside the active truncation window.
class WindowLeak : public std::runtime_error {
 public:
  WindowLeak(const std::string& what, std::string config, long step = -1)
      : std::runtime_error(what), config_(std::move(config)), step_(step) {}

  const std::string& config() const noexcept { return config_; }
  long step() const noexcept { return step_; }

 private:
  std::string config_;
  long step_;
};

/// Malformed machine description; `where` is a JSON path like rules[3].amplitude.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(where) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace qmf

#endif  // QMF_ERRORS_HPP
