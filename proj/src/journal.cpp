// Copyright 2026 The topoasm Authors
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

#include "topoasm/journal.hpp"

#include <sstream>

namespace topoasm {

void Journal::record(std::string_view op, std::string_view args) {
  std::string line = std::to_string(step_);
  line += ' ';
  line += op;
  if (!args.empty()) {
    line += ' ';
    line += args;
  }
  lines_.push_back(std::move(line));
}

std::string Journal::text() const {
  std::string out;
  for (const auto &l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

std::vector<std::string> Journal::ops(int step) const {
  std::vector<std::string> out;
  for (const auto &l : lines_) {
    std::istringstream is(l);
    int s = 0;
    std::string op;
    is >> s >> op;
    if (step < 0 || s == step) out.push_back(op);
  }
  return out;
}

}  // namespace topoasm
