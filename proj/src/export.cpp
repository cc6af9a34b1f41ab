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

#include "topoasm/export.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace topoasm {

using json = nlohmann::ordered_json;

namespace {

json point(Point3 p) { return json::array({p.t, p.x, p.y}); }

Point3 read_point(const json &j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("point must be [t, x, y]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

DefectKind read_kind(const std::string &s) {
  if (s == "primal") return DefectKind::primal;
  if (s == "dual") return DefectKind::dual;
  throw std::invalid_argument("unknown defect kind " + s);
}

DefectRole read_role(const std::string &s) {
  for (DefectRole r : {DefectRole::circuit, DefectRole::connection_b, DefectRole::connection_e,
                       DefectRole::connection_c}) {
    if (s == to_string(r)) return r;
  }
  throw std::invalid_argument("unknown defect role " + s);
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace

std::string geometry_document(const Assembly &assembly) {
  const GeometrySet &g = assembly.geometry;
  json doc;
  doc["format"] = "topoasm-geometry";
  doc["version"] = 1;
  doc["units"] = "plumbing_piece";
  doc["axes"] = json::array({"t", "x", "y"});
  if (!g.empty()) {
    Box3 bb = global_bounding_box(g);
    doc["bounding_box"] = {{"lo", point(bb.lo)}, {"hi", point(bb.hi)}};
  } else {
    doc["bounding_box"] = nullptr;
  }
  doc["volume"] = assembly.volume;

  json defects = json::array();
  for (const auto &d : g.defects) {
    json segs = json::array();
    for (const auto &s : d.segments) segs.push_back(json::array({point(s.a), point(s.b)}));
    defects.push_back({{"kind", to_string(d.kind)}, {"role", to_string(d.role)}, {"element", d.element},
                       {"segments", std::move(segs)}});
  }
  doc["defects"] = std::move(defects);

  json boxes = json::array();
  for (const auto &b : g.boxes) {
    boxes.push_back({{"id", b.id}, {"type", to_string(b.type)}, {"lo", point(b.footprint.lo)},
                     {"hi", point(b.footprint.hi)}, {"port", point(b.port)}});
  }
  doc["boxes"] = std::move(boxes);

  json pins = json::array();
  for (const auto &p : g.pins) pins.push_back({{"input", p.input}, {"at", point(p.at)}});
  doc["pins"] = std::move(pins);
  return doc.dump(1) + "\n";
}

GeometrySet parse_geometry_document(const std::string &text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw std::invalid_argument(std::string("geometry document: ") + e.what());
  }
  if (doc.value("format", "") != "topoasm-geometry") throw std::invalid_argument("not a geometry document");
  GeometrySet g;
  try {
    for (const auto &d : doc.at("defects")) {
      DefectPolyline p;
      p.kind = read_kind(d.at("kind").get<std::string>());
      p.role = read_role(d.at("role").get<std::string>());
      p.element = d.at("element").get<int>();
      for (const auto &s : d.at("segments")) p.segments.push_back({read_point(s.at(0)), read_point(s.at(1))});
      g.defects.push_back(std::move(p));
    }
    for (const auto &b : doc.at("boxes")) {
      std::string t = b.at("type").get<std::string>();
      if (t != "A" && t != "Y") throw std::invalid_argument("unknown box type " + t);
      g.boxes.push_back({b.at("id").get<int>(), t == "A" ? BoxType::A : BoxType::Y,
                         {read_point(b.at("lo")), read_point(b.at("hi"))}, read_point(b.at("port"))});
    }
    for (const auto &p : doc.at("pins")) g.pins.push_back({p.at("input").get<int>(), read_point(p.at("at"))});
  } catch (const json::exception &e) {
    throw std::invalid_argument(std::string("geometry document: ") + e.what());
  }
  return g;
}

std::string stats_csv(const Assembly &assembly) {
  std::ostringstream os;
  os << "step,nr_a,nr_y,a_pool,y_pool,sched_round\n";
  for (const StepRecord &r : trace_table(assembly)) {
    os << r.step << ',' << r.nr_a << ',' << r.nr_y << ',' << r.a_pool << ',' << r.y_pool << ',' << r.sched_round
       << '\n';
  }
  os << "volume," << assembly.volume << '\n';
  return os.str();
}

void export_geometry(const Assembly &assembly, const std::string &path) {
  write_file(path, geometry_document(assembly));
}

void export_stats(const Assembly &assembly, const std::string &path) { write_file(path, stats_csv(assembly)); }

void export_journal(const Journal &journal, const std::string &path) { write_file(path, journal.text()); }

}  // namespace topoasm
