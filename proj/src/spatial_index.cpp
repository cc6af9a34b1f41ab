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

#include "topoasm/spatial_index.hpp"

#include <algorithm>
#include <iterator>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <boost/iterator/function_output_iterator.hpp>

namespace topoasm {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using BgPoint = bg::model::point<int, 3, bg::cs::cartesian>;
using BgBox = bg::model::box<BgPoint>;
using Value = std::pair<BgBox, EntryId>;

// Closed box over the covered cells: closed intersection of two cell boxes
// is exactly a non-empty cell overlap.
BgBox to_closed(const Box3 &b) {
  return {BgPoint(b.lo.t, b.lo.x, b.lo.y), BgPoint(b.hi.t - 1, b.hi.x - 1, b.hi.y - 1)};
}

}  // namespace

const char *to_string(ElementTag t) {
  switch (t) {
    case ElementTag::circuit: return "circuit";
    case ElementTag::box: return "box";
    case ElementTag::port: return "port";
    case ElementTag::pin: return "pin";
    case ElementTag::connection: return "connection";
    case ElementTag::pool: return "pool";
    case ElementTag::obstacle: return "obstacle";
  }
  return "?";
}

struct SpatialIndex::Tree {
  bgi::rtree<Value, bgi::rstar<16>> rtree;
};

SpatialIndex::SpatialIndex() : tree_(std::make_unique<Tree>()) {}
SpatialIndex::~SpatialIndex() = default;
SpatialIndex::SpatialIndex(SpatialIndex &&) noexcept = default;
SpatialIndex &SpatialIndex::operator=(SpatialIndex &&) noexcept = default;
SpatialIndex::SpatialIndex(const SpatialIndex &o) : tree_(std::make_unique<Tree>(*o.tree_)), entries_(o.entries_) {}
SpatialIndex &SpatialIndex::operator=(const SpatialIndex &o) {
  if (this != &o) {
    tree_ = std::make_unique<Tree>(*o.tree_);
    entries_ = o.entries_;
  }
  return *this;
}

void SpatialIndex::insert(const IndexEntry &entry) {
  if (!entry.box.valid()) throw IndexError("invalid box " + to_string(entry.box));
  if (!entries_.emplace(entry.id, entry).second) {
    throw IndexError("duplicate index id " + std::to_string(entry.id));
  }
  tree_->rtree.insert({to_closed(entry.box), entry.id});
}

void SpatialIndex::remove(EntryId id) {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw IndexError("unknown index id " + std::to_string(id));
  tree_->rtree.remove(Value{to_closed(it->second.box), id});
  entries_.erase(it);
}

std::vector<EntryId> SpatialIndex::hits(const Box3 &probe) const {
  std::vector<EntryId> out;
  if (!probe.valid()) return out;
  tree_->rtree.query(bgi::intersects(to_closed(probe)),
                     boost::make_function_output_iterator([&](const Value &v) { out.push_back(v.second); }));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<const IndexEntry *> SpatialIndex::hit_entries(const Box3 &probe) const {
  std::vector<const IndexEntry *> out;
  for (EntryId id : hits(probe)) out.push_back(&entries_.at(id));
  return out;
}

bool SpatialIndex::any_hit(const Box3 &probe) const {
  if (!probe.valid()) return false;
  return tree_->rtree.qbegin(bgi::intersects(to_closed(probe))) != tree_->rtree.qend();
}

const IndexEntry &SpatialIndex::at(EntryId id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) throw IndexError("unknown index id " + std::to_string(id));
  return it->second;
}

std::optional<Box3> SpatialIndex::bounds() const {
  if (tree_->rtree.empty()) return std::nullopt;
  BgBox b = tree_->rtree.bounds();
  return Box3{{bg::get<bg::min_corner, 0>(b), bg::get<bg::min_corner, 1>(b), bg::get<bg::min_corner, 2>(b)},
              {bg::get<bg::max_corner, 0>(b) + 1, bg::get<bg::max_corner, 1>(b) + 1,
               bg::get<bg::max_corner, 2>(b) + 1}};
}

}  // namespace topoasm
