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


// Writes the sample machines to corpus/<name>.json. With --check, compares
// instead and exits 1 on any difference.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qmf/io.hpp"
#include "qmf/samples.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Regenerate the machine corpus"};
  std::string dir = "corpus";
  bool check = false;
  app.add_option("dir", dir, "output directory");
  app.add_flag("--check", check, "compare with existing files instead of writing");
  CLI11_PARSE(app, argc, argv);

  int stale = 0;
  for (const auto& e : qmf::samples::corpus()) {
    const auto path = dir + "/" + e.name + ".json";
    const auto text = qmf::emit_machine(e.machine);
    if (check) {
      std::ifstream in(path, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      if (!in || ss.str() != text) {
        std::cerr << "stale: " << path << "\n";
        ++stale;
      }
    } else {
      qmf::save_text(path, text);
      std::cout << path << "\n";
    }
  }
  return stale == 0 ? 0 : 1;
}
