#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "funcfix/geometry.hpp"

namespace funcfix::meshkit {

/// Indexed triangle mesh for one part, coordinates in meters in the canonical
/// asset frame. Immutable after load by convention; transforms return copies.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::string part_id;

  Aabb bounds() const;
  double surface_area() const;
  bool empty() const { return triangles.empty(); }
};

/// Drops triangles with area below `min_area` and out-of-range indices.
/// Returns the number of triangles removed.
int cleanup_degenerate(TriMesh& mesh, double min_area = 1e-12);

/// True when every index is in range and no triangle is degenerate.
bool mesh_is_valid(const TriMesh& mesh, double min_area = 1e-12);

TriMesh make_box(const Vec3& min, const Vec3& max, const std::string& part_id = "");

TriMesh transformed(const TriMesh& mesh, const AffineTransform& xf);
void transform_in_place(TriMesh& mesh, const AffineTransform& xf);

/// Merge several meshes into one (indices re-based).
TriMesh merged(const std::vector<TriMesh>& meshes, const std::string& part_id = "");

/// Intersection of the mesh surface with the plane through `point` with unit
/// `normal`: a list of segments (unordered).
std::vector<std::pair<Vec3, Vec3>> cross_section(const TriMesh& mesh, const Vec3& point,
                                                 const Vec3& normal);

/// Every edge shared by exactly two triangles with opposite orientation.
bool is_watertight(const TriMesh& mesh);

}  // namespace funcfix::meshkit
