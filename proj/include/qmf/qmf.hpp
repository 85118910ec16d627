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


#ifndef QMF_QMF_HPP
#define QMF_QMF_HPP

// Umbrella header.

#include "qmf/amplitude.hpp"
#include "qmf/compare.hpp"
#include "qmf/config.hpp"
#include "qmf/dynamics.hpp"
#include "qmf/enumerate.hpp"
#include "qmf/errors.hpp"
#include "qmf/io.hpp"
#include "qmf/machine.hpp"
#include "qmf/pipeline.hpp"
#include "qmf/qtm.hpp"
#include "qmf/samples.hpp"
#include "qmf/simulator.hpp"
#include "qmf/sparse_operator.hpp"
#include "qmf/superposition.hpp"
#include "qmf/transpile_lemmas.hpp"
#include "qmf/transpile_thm4.hpp"
#include "qmf/transpile_thm5.hpp"
#include "qmf/validate.hpp"
#include "qmf/wf_checker.hpp"

#endif  // QMF_QMF_HPP
