#pragma once

#include <optional>
#include <vector>

#include "funcfix/geometry.hpp"
#include "funcfix/meshkit/mesh.hpp"

namespace funcfix::meshkit {

/// Median-split bounding volume hierarchy over one mesh's triangles.
/// Acceleration only: every query is exact relative to the all-pairs test.
class Bvh {
 public:
  Bvh() = default;
  explicit Bvh(const TriMesh& mesh);

  const TriMesh& mesh() const { return *mesh_; }
  const Aabb& bounds() const { return nodes_.empty() ? empty_bounds_ : nodes_[0].box; }
  bool watertight() const { return watertight_; }

  /// All ray-triangle intersections with t >= 0, ascending t.
  std::vector<RayHit> raycast(const Ray& ray) const;

  /// Parity test; the point must not lie on the surface.
  bool contains(const Vec3& point) const;

  /// Minimum distance from a point to the surface.
  double distance(const Vec3& point) const;

  struct Node {
    Aabb box;
    int left = -1;   // internal: child index; leaf: first triangle
    int right = -1;  // internal: child index; leaf: -1
    int count = 0;   // leaf: triangle count; internal: 0
    bool leaf() const { return count > 0; }
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& order() const { return order_; }

 private:
  int build(std::vector<int>& tris, int begin, int end, const std::vector<Aabb>& boxes);

  const TriMesh* mesh_ = nullptr;
  std::vector<Node> nodes_;
  std::vector<int> order_;  // triangle indices, leaf ranges contiguous
  Aabb empty_bounds_;
  bool watertight_ = false;
};

// -- Primitive queries --------------------------------------------------------

/// Moller-Trumbore; returns the ray parameter when the ray meets the triangle.
std::optional<double> ray_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c);

/// Strict transversal crossing: both triangles straddle the other's plane by
/// more than `tol` and the crossing intervals overlap by more than `tol`.
/// Coplanar or grazing contact does not count.
bool triangles_cross(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                     const Vec3& b1, const Vec3& b2, double tol = kTouchTolerance);

/// Exact minimum distance between two triangles (0 when they cross).
double triangle_triangle_distance(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                                  const Vec3& b1, const Vec3& b2);

double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);
double segment_segment_distance_sq(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

// -- Mesh-pair queries --------------------------------------------------------

/// True iff the posed meshes interpenetrate. Shared-boundary touching within
/// the tolerance does not count.
bool meshes_intersect(const Bvh& a, const RigidTransform& pose_a, const Bvh& b,
                      const RigidTransform& pose_b, double tol = kTouchTolerance);

/// Minimum distance between the posed surfaces; 0 when intersecting.
double min_distance(const Bvh& a, const RigidTransform& pose_a, const Bvh& b,
                    const RigidTransform& pose_b);

/// Early-out variant of min_distance: true iff the distance is <= threshold.
bool within_distance(const Bvh& a, const RigidTransform& pose_a, const Bvh& b,
                     const RigidTransform& pose_b, double threshold);

// -- Convenience overloads (build the hierarchy per call) ---------------------

std::vector<RayHit> raycast(const TriMesh& mesh, const Ray& ray);
bool meshes_intersect(const TriMesh& a, const RigidTransform& pose_a, const TriMesh& b,
                      const RigidTransform& pose_b, double tol = kTouchTolerance);
double min_distance(const TriMesh& a, const RigidTransform& pose_a, const TriMesh& b,
                    const RigidTransform& pose_b);

/// Groups hits (sorted by t) into layers: consecutive hits with gap <= eps
/// share a layer; layers ordered by first t.
std::vector<std::vector<RayHit>> cluster_hits(const std::vector<RayHit>& hits, double eps);

// Serial all-pairs implementations with identical contracts. Kept as the
// reference path for tests and the benchmark target.
namespace reference {
std::vector<RayHit> raycast(const TriMesh& mesh, const Ray& ray);
bool meshes_intersect(const TriMesh& a, const RigidTransform& pose_a, const TriMesh& b,
                      const RigidTransform& pose_b, double tol = kTouchTolerance);
double min_distance(const TriMesh& a, const RigidTransform& pose_a, const TriMesh& b,
                    const RigidTransform& pose_b);
}  // namespace reference

}  // namespace funcfix::meshkit
