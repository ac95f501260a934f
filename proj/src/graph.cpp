#include "funcfix/fungraph/graph.hpp"

#include <array>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace funcfix::fungraph {

using nlohmann::json;

namespace {

constexpr std::array<const char*, kCategoryCount> kCategoryNames = {
    "top_panel", "side_panel", "back_panel", "bottom_panel", "face_frame", "shelf", "divider",
    "bar",       "leg",        "door",       "drawer",       "handle",     "misc",  "unknown",
};

constexpr std::array<const char*, kEdgeKindCount> kEdgeKindNames = {
    "contact", "hinge", "rail", "attached", "null",
};

constexpr std::array<const char*, 6> kRailAxisNames = {"+x", "-x", "+y", "-y", "+z", "-z"};

}  // namespace

const char* to_string(Category c) { return kCategoryNames[static_cast<int>(c)]; }

Category parse_category(const std::string& token) {
  for (int i = 0; i < kCategoryCount; ++i) {
    if (token == kCategoryNames[i]) return static_cast<Category>(i);
  }
  return Category::kMisc;  // vocabulary fallback
}

const char* to_string(EdgeKind k) { return kEdgeKindNames[static_cast<int>(k)]; }

std::optional<EdgeKind> parse_edge_kind(const std::string& token) {
  for (int i = 0; i < kEdgeKindCount; ++i) {
    if (token == kEdgeKindNames[i]) return static_cast<EdgeKind>(i);
  }
  return std::nullopt;
}

int rail_axis_code(int axis, int sign) { return axis * 2 + (sign < 0 ? 1 : 0); }

Vec3 rail_axis_vector(int code) {
  Vec3 v = Vec3::Zero();
  v[code / 2] = code % 2 == 0 ? 1.0 : -1.0;
  return v;
}

const char* rail_axis_name(int code) { return kRailAxisNames[code]; }

std::optional<int> parse_rail_axis(const std::string& token) {
  for (int i = 0; i < 6; ++i) {
    if (token == kRailAxisNames[i]) return i;
  }
  return std::nullopt;
}

const PartNode* FunctionalGraph::find_node(const std::string& id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

PartNode* FunctionalGraph::find_node(const std::string& id) {
  for (auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const Edge* FunctionalGraph::find_edge(const std::string& a, const std::string& b) const {
  for (const auto& e : edges) {
    if ((e.src == a && e.dst == b) || (e.src == b && e.dst == a)) return &e;
  }
  return nullptr;
}

int FunctionalGraph::node_index(const std::string& id) const {
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> validate(const FunctionalGraph& graph) {
  std::vector<std::string> out;
  std::set<std::string> ids;
  for (const auto& n : graph.nodes) {
    if (!ids.insert(n.id).second) out.push_back("duplicate node id: " + n.id);
    if (!n.bbox.valid()) out.push_back("node " + n.id + ": bbox min > max");
    if (!n.mesh_ref && (n.centroid - n.bbox.center()).norm() > 1e-9) {
      out.push_back("node " + n.id + ": centroid must be the bbox center without mesh_ref");
    }
  }

  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& e : graph.edges) {
    const std::string tag = "edge " + e.src + "->" + e.dst;
    const PartNode* src = graph.find_node(e.src);
    const PartNode* dst = graph.find_node(e.dst);
    if (!src || !dst) {
      out.push_back(tag + ": endpoint not in graph");
      continue;
    }
    if (e.src == e.dst) {
      out.push_back(tag + ": self-edge");
      continue;
    }
    auto key = std::minmax(e.src, e.dst);
    if (!pairs.insert({key.first, key.second}).second) {
      out.push_back(tag + ": multiple edges on one node pair");
    }
    if ((e.kind == EdgeKind::kContact || e.kind == EdgeKind::kNull) && e.src > e.dst) {
      out.push_back(tag + ": bidirectional edge must be stored with src < dst");
    }
    switch (e.kind) {
      case EdgeKind::kHinge:
        if (dst->category != Category::kDoor) out.push_back(tag + ": hinge child must be a door");
        if (!e.motion || e.motion->hinge_border < 0 || e.motion->hinge_border > 3 ||
            (e.motion->axis_sign != 1 && e.motion->axis_sign != -1)) {
          out.push_back(tag + ": hinge edge needs hinge_border in 0..3 and axis_sign in {-1,+1}");
        } else if (e.motion->rail_axis >= 0) {
          out.push_back(tag + ": hinge edge must not carry rail_axis");
        }
        break;
      case EdgeKind::kRail:
        if (dst->category != Category::kDrawer) {
          out.push_back(tag + ": rail child must be a drawer");
        }
        if (!e.motion || e.motion->rail_axis < 0 || e.motion->rail_axis > 5) {
          out.push_back(tag + ": rail edge needs rail_axis");
        } else if (e.motion->hinge_border >= 0 || e.motion->axis_sign != 0) {
          out.push_back(tag + ": rail edge must not carry hinge attributes");
        }
        break;
      case EdgeKind::kAttached:
        if (dst->category != Category::kHandle) {
          out.push_back(tag + ": attached child must be a handle");
        }
        if (src->category != Category::kDoor && src->category != Category::kDrawer) {
          out.push_back(tag + ": attached parent must be a door or drawer");
        }
        if (e.motion) out.push_back(tag + ": attached edge carries motion attributes");
        break;
      default:
        if (e.motion) out.push_back(tag + ": edge kind carries motion attributes");
        break;
    }
    // Handles bind to exactly one door/drawer; contact with unrelated parts is
    // disallowed (doors and drawers are fine: those contacts upgrade to
    // attached during completion).
    for (const PartNode* end : {src, dst}) {
      const PartNode* other = end == src ? dst : src;
      if (end->category == Category::kHandle && e.kind == EdgeKind::kContact &&
          other->category != Category::kDoor && other->category != Category::kDrawer &&
          other->category != Category::kUnknown) {
        out.push_back(tag + ": handle may only touch its door or drawer");
      }
    }
  }
  return out;
}

namespace {

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
      !j[2].is_number()) {
    throw GraphSchemaError(path, "expected array of 3 numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string serialize(const FunctionalGraph& graph) {
  json doc;
  doc["schema_version"] = 1;
  doc["nodes"] = json::array();
  for (const auto& n : graph.nodes) {
    json jn = {{"id", n.id},
               {"category", to_string(n.category)},
               {"bbox_min", vec_to_json(n.bbox.min)},
               {"bbox_max", vec_to_json(n.bbox.max)},
               {"centroid", vec_to_json(n.centroid)}};
    if (n.mesh_ref) jn["mesh_ref"] = *n.mesh_ref;
    doc["nodes"].push_back(jn);
  }
  doc["edges"] = json::array();
  for (const auto& e : graph.edges) {
    json je = {{"src", e.src}, {"dst", e.dst}, {"kind", to_string(e.kind)}};
    if (e.motion) {
      if (e.kind == EdgeKind::kHinge) {
        je["hinge_border"] = e.motion->hinge_border;
        je["axis_sign"] = e.motion->axis_sign;
      }
      if (e.kind == EdgeKind::kRail) je["rail_axis"] = rail_axis_name(e.motion->rail_axis);
    }
    doc["edges"].push_back(je);
  }
  return doc.dump(2);
}

FunctionalGraph deserialize(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw GraphSchemaError("", std::string("invalid json: ") + e.what());
  }
  if (!doc.is_object()) throw GraphSchemaError("", "expected object");

  FunctionalGraph graph;
  std::set<std::string> ids;
  const json& nodes = doc.value("nodes", json::array());
  for (size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "/nodes/" + std::to_string(i);
    const json& jn = nodes[i];
    if (!jn.is_object()) throw GraphSchemaError(path, "expected object");
    PartNode n;
    if (!jn.contains("id") || !jn["id"].is_string()) {
      throw GraphSchemaError(path + "/id", "missing node id");
    }
    n.id = jn["id"].get<std::string>();
    if (!ids.insert(n.id).second) throw GraphSchemaError(path + "/id", "duplicate node id");
    if (!jn.contains("category") || !jn["category"].is_string()) {
      throw GraphSchemaError(path + "/category", "missing category");
    }
    n.category = parse_category(jn["category"].get<std::string>());
    n.bbox.min = vec_from_json(jn.value("bbox_min", json()), path + "/bbox_min");
    n.bbox.max = vec_from_json(jn.value("bbox_max", json()), path + "/bbox_max");
    n.centroid = jn.contains("centroid") ? vec_from_json(jn["centroid"], path + "/centroid")
                                         : n.bbox.center();
    if (jn.contains("mesh_ref")) {
      if (!jn["mesh_ref"].is_string()) throw GraphSchemaError(path + "/mesh_ref", "expected string");
      n.mesh_ref = jn["mesh_ref"].get<std::string>();
    }
    graph.nodes.push_back(std::move(n));
  }

  const json& edges = doc.value("edges", json::array());
  for (size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "/edges/" + std::to_string(i);
    const json& je = edges[i];
    Edge e;
    e.src = je.value("src", "");
    e.dst = je.value("dst", "");
    if (!ids.count(e.src)) throw GraphSchemaError(path + "/src", "unknown node id " + e.src);
    if (!ids.count(e.dst)) throw GraphSchemaError(path + "/dst", "unknown node id " + e.dst);
    auto kind = parse_edge_kind(je.value("kind", ""));
    if (!kind) throw GraphSchemaError(path + "/kind", "unknown edge kind");
    e.kind = *kind;
    if (e.kind == EdgeKind::kHinge) {
      if (!je.contains("hinge_border") || !je.contains("axis_sign")) {
        throw GraphSchemaError(path, "hinge edge needs hinge_border and axis_sign");
      }
      MotionAttr m;
      m.hinge_border = je["hinge_border"].get<int>();
      m.axis_sign = je["axis_sign"].get<int>();
      e.motion = m;
    } else if (e.kind == EdgeKind::kRail) {
      if (!je.contains("rail_axis")) throw GraphSchemaError(path, "rail edge needs rail_axis");
      auto axis = parse_rail_axis(je["rail_axis"].get<std::string>());
      if (!axis) throw GraphSchemaError(path + "/rail_axis", "unknown rail axis token");
      MotionAttr m;
      m.rail_axis = *axis;
      e.motion = m;
    }
    graph.edges.push_back(std::move(e));
  }
  return graph;
}

int thin_axis(const Aabb& box) {
  const Vec3 e = box.extents();
  if (e.x() == e.y() && e.y() == e.z()) {
    throw std::invalid_argument("thin axis undefined: bbox extents all equal");
  }
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (e[k] < e[axis]) axis = k;  // ties keep the lower axis
  }
  return axis;
}

std::pair<int, int> non_thin_axes(const Aabb& box) {
  const int t = thin_axis(box);
  int p = t == 0 ? 1 : 0;
  int q = t == 2 ? 1 : 2;
  return {p, q};
}

std::pair<int, int> border_axis_side(const Aabb& box, int border) {
  if (border < 0 || border > 3) throw std::invalid_argument("hinge_border out of range");
  auto [p, q] = non_thin_axes(box);
  return {border / 2 == 0 ? p : q, border % 2};
}

int border_from_axis_side(const Aabb& box, int axis, int side) {
  auto [p, q] = non_thin_axes(box);
  if (axis == p) return side;
  if (axis == q) return 2 + side;
  throw std::invalid_argument("axis is the thin axis; no border edge there");
}

int hinge_direction_axis(const Aabb& box, int border) {
  auto [p, q] = non_thin_axes(box);
  return border / 2 == 0 ? q : p;
}

MotionAxis motion_axis_world(const FunctionalGraph& graph, const Edge& edge) {
  if (edge.kind != EdgeKind::kHinge && edge.kind != EdgeKind::kRail) {
    throw std::invalid_argument("motion axis defined only for hinge and rail edges");
  }
  if (!edge.motion) throw std::invalid_argument("edge is missing motion attributes");
  const PartNode* child = graph.find_node(edge.dst);
  if (!child) throw std::invalid_argument("edge child not in graph");

  MotionAxis out;
  if (edge.kind == EdgeKind::kRail) {
    out.revolute = false;
    out.point = child->centroid;
    out.dir = rail_axis_vector(edge.motion->rail_axis);
    return out;
  }

  const Aabb& box = child->bbox;
  auto [axis, side] = border_axis_side(box, edge.motion->hinge_border);
  const int dir_axis = hinge_direction_axis(box, edge.motion->hinge_border);
  Vec3 point = box.center();
  point[axis] = side == 0 ? box.min[axis] : box.max[axis];
  out.point = point;
  out.dir = Vec3::Zero();
  out.dir[dir_axis] = edge.motion->axis_sign;
  out.revolute = true;
  return out;
}

}  // namespace funcfix::fungraph
