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

#include "topoasm/engine.hpp"
#include "topoasm/geometry.hpp"

namespace topoasm {

/// JSON document: units and bounding box header, then defects, boxes and
/// pins. Keys are written in a fixed order so equal assemblies give equal
/// bytes.
std::string geometry_document(const Assembly &assembly);

/// Reads back a geometry_document. Throws std::invalid_argument.
GeometrySet parse_geometry_document(const std::string &text);

/// `step,nr_a,nr_y,a_pool,y_pool,sched_round` rows, then `volume,<n>`.
std::string stats_csv(const Assembly &assembly);

/// File writers; throw std::runtime_error when the file cannot be written.
void export_geometry(const Assembly &assembly, const std::string &path);
void export_stats(const Assembly &assembly, const std::string &path);
void export_journal(const Journal &journal, const std::string &path);

}  // namespace topoasm
