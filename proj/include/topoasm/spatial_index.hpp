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

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "topoasm/geometry.hpp"

namespace topoasm {

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ElementTag { circuit, box, port, pin, connection, pool, obstacle };
const char *to_string(ElementTag t);

using EntryId = std::int64_t;

struct IndexEntry {
  EntryId id = 0;
  Box3 box;
  ElementTag tag = ElementTag::circuit;
  /// Owning connection, or -1.
  int owner = -1;
};

/// R-tree over every bounding box in the generated space-time volume.
/// Touching boxes are not reported as hits.
class SpatialIndex {
 public:
  SpatialIndex();
  ~SpatialIndex();
  SpatialIndex(SpatialIndex &&) noexcept;
  SpatialIndex &operator=(SpatialIndex &&) noexcept;
  SpatialIndex(const SpatialIndex &);
  SpatialIndex &operator=(const SpatialIndex &);

  /// Throws IndexError on a duplicate id or an invalid box.
  void insert(const IndexEntry &entry);
  /// Throws IndexError on an unknown id.
  void remove(EntryId id);

  /// Ids of all entries overlapping the probe, ascending.
  std::vector<EntryId> hits(const Box3 &probe) const;
  std::vector<const IndexEntry *> hit_entries(const Box3 &probe) const;
  bool any_hit(const Box3 &probe) const;

  bool contains(EntryId id) const { return entries_.count(id) != 0; }
  const IndexEntry &at(EntryId id) const;
  std::size_t size() const { return entries_.size(); }
  /// Hull of all entries.
  std::optional<Box3> bounds() const;

 private:
  struct Tree;
  std::unique_ptr<Tree> tree_;
  std::unordered_map<EntryId, IndexEntry> entries_;
};

}  // namespace topoasm
