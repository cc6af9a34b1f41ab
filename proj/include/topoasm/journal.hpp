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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace topoasm {

/// Append-only diagnosis log, one `<step> <op> <args...>` line per record.
/// Tracks obstacle enable/disable and every plumbing piece claimed, so the
/// state right before a failure can be replayed.
class Journal {
 public:
  void begin_step(int step) { step_ = step; }
  int step() const { return step_; }

  void record(std::string_view op, std::string_view args = {});

  const std::vector<std::string> &lines() const { return lines_; }
  std::string text() const;

  /// Op names in record order, optionally restricted to one step.
  std::vector<std::string> ops(int step = -1) const;

 private:
  int step_ = 0;
  std::vector<std::string> lines_;
};

}  // namespace topoasm
