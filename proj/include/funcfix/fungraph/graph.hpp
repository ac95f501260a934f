#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "funcfix/geometry.hpp"

namespace funcfix::fungraph {

/// Fixed part vocabulary. `unknown` appears only on corrupted or unlabeled
/// inputs; unrecognized tokens fall back to `misc`.
enum class Category {
  kTopPanel,
  kSidePanel,
  kBackPanel,
  kBottomPanel,
  kFaceFrame,
  kShelf,
  kDivider,
  kBar,
  kLeg,
  kDoor,
  kDrawer,
  kHandle,
  kMisc,
  kUnknown,
};
inline constexpr int kCategoryCount = 14;

const char* to_string(Category c);
Category parse_category(const std::string& token);  // unrecognized -> kMisc

enum class EdgeKind { kContact, kHinge, kRail, kAttached, kNull };
inline constexpr int kEdgeKindCount = 5;

const char* to_string(EdgeKind k);
std::optional<EdgeKind> parse_edge_kind(const std::string& token);

/// Signed canonical rail direction, encoded axis*2 + (negative ? 1 : 0).
int rail_axis_code(int axis, int sign);
Vec3 rail_axis_vector(int code);
const char* rail_axis_name(int code);                  // "+x", "-y", ...
std::optional<int> parse_rail_axis(const std::string& token);

/// Motion attributes carried by functional edges. For hinges: which of the
/// four non-thin panel-face edges of the child holds the axis (0..3) and the
/// rotation sign (+1 = counter-clockwise about the edge direction). For rails:
/// the signed canonical slide direction.
struct MotionAttr {
  int hinge_border = -1;
  int axis_sign = 0;
  int rail_axis = -1;

  bool operator==(const MotionAttr&) const = default;
};

struct PartNode {
  std::string id;
  Category category = Category::kMisc;
  Aabb bbox;
  Vec3 centroid = Vec3::Zero();
  std::optional<std::string> mesh_ref;

  bool operator==(const PartNode& o) const {
    return id == o.id && category == o.category && bbox.min == o.bbox.min &&
           bbox.max == o.bbox.max && centroid == o.centroid && mesh_ref == o.mesh_ref;
  }
};

/// Directed for hinge/rail/attached (src = parent, dst = child); contact and
/// null are bidirectional and stored with src < dst.
struct Edge {
  std::string src;
  std::string dst;
  EdgeKind kind = EdgeKind::kContact;
  std::optional<MotionAttr> motion;

  bool operator==(const Edge&) const = default;
};

struct FunctionalGraph {
  std::vector<PartNode> nodes;
  std::vector<Edge> edges;

  const PartNode* find_node(const std::string& id) const;
  PartNode* find_node(const std::string& id);
  const Edge* find_edge(const std::string& a, const std::string& b) const;  // either direction
  int node_index(const std::string& id) const;  // -1 when absent

  bool operator==(const FunctionalGraph&) const = default;
};

/// Empty iff all graph invariants hold; each entry names the offending
/// node or edge.
std::vector<std::string> validate(const FunctionalGraph& graph);

struct GraphSchemaError : std::runtime_error {
  explicit GraphSchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), json_pointer(path) {}
  std::string json_pointer;
};

std::string serialize(const FunctionalGraph& graph);
FunctionalGraph deserialize(const std::string& text);

// -- Geometry-facing helpers ---------------------------------------------------

/// Axis of smallest bbox extent; ties break toward the lower axis index.
/// Throws when all three extents are equal (no thin axis).
int thin_axis(const Aabb& box);

/// The two non-thin axes in ascending order.
std::pair<int, int> non_thin_axes(const Aabb& box);

/// Decodes a hinge border index: the four non-thin panel-face edges are
/// ordered (first non-thin axis, min), (first, max), (second, min),
/// (second, max). Returns {axis, side} with side 0 = min, 1 = max.
std::pair<int, int> border_axis_side(const Aabb& box, int border);
int border_from_axis_side(const Aabb& box, int axis, int side);

/// The bbox axis a hinge with this border rotates about (the non-thin axis
/// orthogonal to the border's axis).
int hinge_direction_axis(const Aabb& box, int border);

struct MotionAxis {
  Vec3 point = Vec3::Zero();
  Vec3 dir = Vec3::UnitZ();
  bool revolute = true;
};

/// World axis line of a functional edge. Hinge: the border edge of the child
/// box at the thin-axis midplane, oriented by axis_sign. Rail: line through
/// the child centroid along the rail axis.
MotionAxis motion_axis_world(const FunctionalGraph& graph, const Edge& edge);

}  // namespace funcfix::fungraph
