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


#ifndef QMF_PIPELINE_HPP
#define QMF_PIPELINE_HPP

#include <json.hpp>

#include <cstdint>

#include "qmf/transpile_lemmas.hpp"
#include "qmf/transpile_thm4.hpp"
#include "qmf/transpile_thm5.hpp"

namespace qmf {

/// QTM -> (2t+2) counters -> (2t+2)*r unit-step counters -> stacks, keeping
/// every intermediate machine.
struct PipelineResult {
  Thm4Artifacts thm4;
  TranspileResult lemma2;
  TranspileResult thm5;
  nlohmann::ordered_json provenance;

  const StackMachine& machine() const { return thm5.stack(); }
};

inline PipelineResult pipeline_qtm_to_qmsm(const TuringMachine& m, std::int64_t n, std::int64_t t) {
  PipelineResult p;
  p.thm4 = thm4_transform(m, n, t);
  p.lemma2 = lemma2_transform(p.thm4.machine, p.thm4.r);
  p.thm5 = thm5_transform(p.lemma2.counter());
  p.provenance["stage"] = "pipeline";
  p.provenance["n"] = n;
  p.provenance["t"] = t;
  p.provenance["r"] = p.thm4.r;
  p.provenance["stacks"] = p.machine().stacks;
  p.provenance["stages"] = {p.thm4.provenance, p.lemma2.provenance, p.thm5.provenance};
  return p;
}

}  // namespace qmf

#endif  // QMF_PIPELINE_HPP
