#include "funcfix/meshkit/mesh.hpp"

#include <cstdint>
#include <map>

namespace funcfix::meshkit {

Aabb TriMesh::bounds() const {
  Aabb box;
  for (const auto& v : vertices) box.expand(v);
  return box;
}

double TriMesh::surface_area() const {
  double area = 0.0;
  for (const auto& t : triangles) {
    const Vec3& a = vertices[t[0]];
    area += 0.5 * (vertices[t[1]] - a).cross(vertices[t[2]] - a).norm();
  }
  return area;
}

static double triangle_area(const TriMesh& m, const std::array<int, 3>& t) {
  const Vec3& a = m.vertices[t[0]];
  return 0.5 * (m.vertices[t[1]] - a).cross(m.vertices[t[2]] - a).norm();
}

int cleanup_degenerate(TriMesh& mesh, double min_area) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<std::array<int, 3>> kept;
  kept.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    if (t[0] < 0 || t[1] < 0 || t[2] < 0 || t[0] >= n || t[1] >= n || t[2] >= n) continue;
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
    if (triangle_area(mesh, t) < min_area) continue;
    kept.push_back(t);
  }
  int removed = static_cast<int>(mesh.triangles.size() - kept.size());
  mesh.triangles = std::move(kept);
  return removed;
}

bool mesh_is_valid(const TriMesh& mesh, double min_area) {
  const int n = static_cast<int>(mesh.vertices.size());
  for (const auto& v : mesh.vertices) {
    if (!v.allFinite()) return false;
  }
  for (const auto& t : mesh.triangles) {
    if (t[0] < 0 || t[1] < 0 || t[2] < 0 || t[0] >= n || t[1] >= n || t[2] >= n) return false;
    if (triangle_area(mesh, t) < min_area) return false;
  }
  return true;
}

TriMesh make_box(const Vec3& lo, const Vec3& hi, const std::string& part_id) {
  TriMesh m;
  m.part_id = part_id;
  m.vertices = {
      {lo.x(), lo.y(), lo.z()}, {hi.x(), lo.y(), lo.z()}, {hi.x(), hi.y(), lo.z()},
      {lo.x(), hi.y(), lo.z()}, {lo.x(), lo.y(), hi.z()}, {hi.x(), lo.y(), hi.z()},
      {hi.x(), hi.y(), hi.z()}, {lo.x(), hi.y(), hi.z()},
  };
  // Outward CCW winding.
  m.triangles = {
      {0, 2, 1}, {0, 3, 2},  // bottom (-z)
      {4, 5, 6}, {4, 6, 7},  // top (+z)
      {0, 1, 5}, {0, 5, 4},  // front (-y)
      {2, 3, 7}, {2, 7, 6},  // back (+y)
      {0, 4, 7}, {0, 7, 3},  // left (-x)
      {1, 2, 6}, {1, 6, 5},  // right (+x)
  };
  return m;
}

void transform_in_place(TriMesh& mesh, const AffineTransform& xf) {
  for (auto& v : mesh.vertices) v = xf * v;
  if (xf.linear().determinant() < 0) {
    for (auto& t : mesh.triangles) std::swap(t[1], t[2]);  // keep outward normals
  }
}

TriMesh transformed(const TriMesh& mesh, const AffineTransform& xf) {
  TriMesh out = mesh;
  transform_in_place(out, xf);
  return out;
}

TriMesh merged(const std::vector<TriMesh>& meshes, const std::string& part_id) {
  TriMesh out;
  out.part_id = part_id;
  for (const auto& m : meshes) {
    const int base = static_cast<int>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), m.vertices.begin(), m.vertices.end());
    for (const auto& t : m.triangles) {
      out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
  }
  return out;
}

std::vector<std::pair<Vec3, Vec3>> cross_section(const TriMesh& mesh, const Vec3& point,
                                                 const Vec3& normal) {
  std::vector<std::pair<Vec3, Vec3>> segments;
  const Vec3 n = normal.normalized();
  for (const auto& t : mesh.triangles) {
    const Vec3 p[3] = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    double d[3];
    for (int i = 0; i < 3; ++i) d[i] = n.dot(p[i] - point);
    Vec3 pts[3];
    int count = 0;
    for (int i = 0; i < 3 && count < 3; ++i) {
      int j = (i + 1) % 3;
      if (d[i] == 0.0) pts[count++] = p[i];
      if ((d[i] > 0 && d[j] < 0) || (d[i] < 0 && d[j] > 0)) {
        double s = d[i] / (d[i] - d[j]);
        pts[count++] = p[i] + s * (p[j] - p[i]);
      }
    }
    if (count >= 2) segments.emplace_back(pts[0], pts[1]);
  }
  return segments;
}

bool is_watertight(const TriMesh& mesh) {
  // Directed edge (a, b) must be matched by exactly one (b, a).
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : mesh.triangles) {
    for (int i = 0; i < 3; ++i) {
      int a = t[i], b = t[(i + 1) % 3];
      edges[{a, b}] += 1;
    }
  }
  for (const auto& [e, count] : edges) {
    if (count != 1) return false;
    auto rev = edges.find({e.second, e.first});
    if (rev == edges.end() || rev->second != 1) return false;
  }
  return true;
}

}  // namespace funcfix::meshkit
