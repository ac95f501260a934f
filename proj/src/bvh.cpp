#include "funcfix/meshkit/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace funcfix::meshkit {

namespace {

// Fixed generic direction for parity tests; components chosen to avoid the
// axis-aligned planes that dominate this domain.
const Vec3 kParityDir = Vec3(0.5330677649, 0.6264537892, 0.5686433461).normalized();

bool ray_box(const Ray& ray, const Aabb& box, double& t_near) {
  double t0 = 0.0, t1 = std::numeric_limits<double>::max();
  for (int k = 0; k < 3; ++k) {
    if (std::abs(ray.dir[k]) < 1e-300) {
      if (ray.origin[k] < box.min[k] || ray.origin[k] > box.max[k]) return false;
      continue;
    }
    double inv = 1.0 / ray.dir[k];
    double ta = (box.min[k] - ray.origin[k]) * inv;
    double tb = (box.max[k] - ray.origin[k]) * inv;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  t_near = t0;
  return true;
}

void sort_hits(std::vector<RayHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
    return a.t != b.t ? a.t < b.t : a.triangle < b.triangle;
  });
}

}  // namespace

// -- Primitives ----------------------------------------------------------------

std::optional<double> ray_triangle(const Ray& ray, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 p = ray.dir.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-14) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 s = ray.origin - a;
  const double u = s.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = s.cross(e1);
  const double v = ray.dir.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(q) * inv;
  if (t < 0.0) return std::nullopt;
  return t;
}

bool triangles_cross(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                     const Vec3& b1, const Vec3& b2, double tol) {
  const Vec3 pa[3] = {a0, a1, a2};
  const Vec3 pb[3] = {b0, b1, b2};

  Vec3 na = (a1 - a0).cross(a2 - a0);
  Vec3 nb = (b1 - b0).cross(b2 - b0);
  const double la = na.norm(), lb = nb.norm();
  if (la < 1e-300 || lb < 1e-300) return false;
  na /= la;
  nb /= lb;

  double db[3], da[3];
  for (int i = 0; i < 3; ++i) db[i] = na.dot(pb[i] - a0);
  if (*std::max_element(db, db + 3) <= tol || *std::min_element(db, db + 3) >= -tol) return false;
  for (int i = 0; i < 3; ++i) da[i] = nb.dot(pa[i] - b0);
  if (*std::max_element(da, da + 3) <= tol || *std::min_element(da, da + 3) >= -tol) return false;

  Vec3 line = na.cross(nb);
  const double ll = line.norm();
  if (ll < 1e-14) return false;
  line /= ll;

  auto interval = [&line](const Vec3 p[3], const double d[3], double& lo, double& hi) {
    lo = std::numeric_limits<double>::max();
    hi = std::numeric_limits<double>::lowest();
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      if (d[i] == 0.0) {
        double s = line.dot(p[i]);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      if ((d[i] > 0.0) != (d[j] > 0.0)) {
        double s = d[i] / (d[i] - d[j]);
        double proj = line.dot(p[i] + s * (p[j] - p[i]));
        lo = std::min(lo, proj);
        hi = std::max(hi, proj);
      }
    }
  };

  double alo, ahi, blo, bhi;
  interval(pa, da, alo, ahi);
  interval(pb, db, blo, bhi);
  return std::min(ahi, bhi) - std::max(alo, blo) > tol;
}

double point_triangle_distance_sq(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Ericson, Real-Time Collision Detection 5.1.5.
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return (p - a).squaredNorm();

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return (p - b).squaredNorm();

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return (p - (a + v * ab)).squaredNorm();
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return (p - c).squaredNorm();

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return (p - (a + w * ac)).squaredNorm();
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + w * (c - b))).squaredNorm();
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (p - (a + ab * v + ac * w)).squaredNorm();
}

double segment_segment_distance_sq(const Vec3& p0, const Vec3& p1, const Vec3& q0,
                                   const Vec3& q1) {
  // Ericson 5.1.9 (closest points of two segments).
  const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  double s, t;
  if (a <= 1e-300 && e <= 1e-300) return (p0 - q0).squaredNorm();
  if (a <= 1e-300) {
    s = 0.0;
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 1e-300) {
      t = 0.0;
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2), denom = a * e - b * b;
      s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return (p0 + d1 * s - (q0 + d2 * t)).squaredNorm();
}

double triangle_triangle_distance(const Vec3& a0, const Vec3& a1, const Vec3& a2, const Vec3& b0,
                                  const Vec3& b1, const Vec3& b2) {
  if (triangles_cross(a0, a1, a2, b0, b1, b2, 0.0)) return 0.0;
  const Vec3 pa[3] = {a0, a1, a2};
  const Vec3 pb[3] = {b0, b1, b2};
  double best = std::numeric_limits<double>::max();
  for (int i = 0; i < 3; ++i) {
    best = std::min(best, point_triangle_distance_sq(pa[i], b0, b1, b2));
    best = std::min(best, point_triangle_distance_sq(pb[i], a0, a1, a2));
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      best = std::min(best, segment_segment_distance_sq(pa[i], pa[(i + 1) % 3], pb[j],
                                                        pb[(j + 1) % 3]));
    }
  }
  return std::sqrt(best);
}

// -- Bvh -----------------------------------------------------------------------

Bvh::Bvh(const TriMesh& mesh) : mesh_(&mesh), watertight_(is_watertight(mesh)) {
  const int n = static_cast<int>(mesh.triangles.size());
  if (n == 0) return;
  std::vector<Aabb> boxes(n);
  for (int i = 0; i < n; ++i) {
    const auto& t = mesh.triangles[i];
    boxes[i].expand(mesh.vertices[t[0]]);
    boxes[i].expand(mesh.vertices[t[1]]);
    boxes[i].expand(mesh.vertices[t[2]]);
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * n);
  build(order_, 0, n, boxes);
}

int Bvh::build(std::vector<int>& tris, int begin, int end, const std::vector<Aabb>& boxes) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Aabb box;
  for (int i = begin; i < end; ++i) box.expand(boxes[tris[i]]);
  nodes_[index].box = box;

  const int count = end - begin;
  if (count <= 4) {
    nodes_[index].left = begin;
    nodes_[index].count = count;
    return index;
  }

  Aabb centroid_box;
  for (int i = begin; i < end; ++i) centroid_box.expand(boxes[tris[i]].center());
  int axis = 0;
  centroid_box.extents().maxCoeff(&axis);
  const int mid = (begin + end) / 2;
  std::nth_element(tris.begin() + begin, tris.begin() + mid, tris.begin() + end,
                   [&boxes, axis](int a, int b) {
                     double ca = boxes[a].center()[axis], cb = boxes[b].center()[axis];
                     return ca != cb ? ca < cb : a < b;
                   });
  const int left = build(tris, begin, mid, boxes);
  const int right = build(tris, mid, end, boxes);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

std::vector<RayHit> Bvh::raycast(const Ray& ray) const {
  std::vector<RayHit> hits;
  if (nodes_.empty()) return hits;
  std::vector<int> stack{0};
  double t_near;
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (!ray_box(ray, node.box, t_near)) continue;
    if (node.leaf()) {
      for (int i = node.left; i < node.left + node.count; ++i) {
        const int tri = order_[i];
        const auto& t = mesh_->triangles[tri];
        if (auto hit = ray_triangle(ray, mesh_->vertices[t[0]], mesh_->vertices[t[1]],
                                    mesh_->vertices[t[2]])) {
          hits.push_back({*hit, ray.origin + *hit * ray.dir, tri});
        }
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  sort_hits(hits);
  return hits;
}

bool Bvh::contains(const Vec3& point) const {
  auto hits = raycast({point, kParityDir});
  // Crossings through shared triangle edges report once per triangle; collapse
  // coincident parameters so each surface crossing counts once.
  int crossings = 0;
  double last_t = -1.0;
  for (const auto& h : hits) {
    if (crossings == 0 || h.t - last_t > 1e-10) {
      ++crossings;
      last_t = h.t;
    }
  }
  return crossings % 2 == 1;
}

double Bvh::distance(const Vec3& point) const {
  if (nodes_.empty()) return std::numeric_limits<double>::max();
  double best = std::numeric_limits<double>::max();
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    Vec3 clamped = point.cwiseMax(node.box.min).cwiseMin(node.box.max);
    if ((clamped - point).squaredNorm() >= best) continue;
    if (node.leaf()) {
      for (int i = node.left; i < node.left + node.count; ++i) {
        const auto& t = mesh_->triangles[order_[i]];
        best = std::min(best, point_triangle_distance_sq(point, mesh_->vertices[t[0]],
                                                         mesh_->vertices[t[1]],
                                                         mesh_->vertices[t[2]]));
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return std::sqrt(best);
}

// -- Mesh pair queries -----------------------------------------------------------

namespace {

struct PairFrame {
  const Bvh* a;
  const Bvh* b;
  AffineTransform b_to_a;  // maps b's local points into a's local frame
};

void fetch_triangle(const TriMesh& mesh, int tri, Vec3 out[3]) {
  const auto& t = mesh.triangles[tri];
  out[0] = mesh.vertices[t[0]];
  out[1] = mesh.vertices[t[1]];
  out[2] = mesh.vertices[t[2]];
}

bool pair_cross(const PairFrame& f, int na, int nb, double tol) {
  const auto& node_a = f.a->nodes()[na];
  const auto& node_b = f.b->nodes()[nb];
  const Aabb box_b = node_b.box.transformed(f.b_to_a);
  if (!node_a.box.inflated(tol).overlaps(box_b)) return false;

  if (node_a.leaf() && node_b.leaf()) {
    Vec3 ta[3], tb[3];
    for (int i = node_a.left; i < node_a.left + node_a.count; ++i) {
      fetch_triangle(f.a->mesh(), f.a->order()[i], ta);
      for (int j = node_b.left; j < node_b.left + node_b.count; ++j) {
        fetch_triangle(f.b->mesh(), f.b->order()[j], tb);
        for (auto& v : tb) v = f.b_to_a * v;
        if (triangles_cross(ta[0], ta[1], ta[2], tb[0], tb[1], tb[2], tol)) return true;
      }
    }
    return false;
  }
  if (node_b.leaf() || (!node_a.leaf() && node_a.box.extents().maxCoeff() >
                                              box_b.extents().maxCoeff())) {
    return pair_cross(f, node_a.left, nb, tol) || pair_cross(f, node_a.right, nb, tol);
  }
  return pair_cross(f, na, node_b.left, tol) || pair_cross(f, na, node_b.right, tol);
}

double pair_distance(const PairFrame& f, int na, int nb, double& best) {
  const auto& node_a = f.a->nodes()[na];
  const auto& node_b = f.b->nodes()[nb];
  const Aabb box_b = node_b.box.transformed(f.b_to_a);
  const double lower = std::sqrt(node_a.box.distance_sq(box_b));
  if (lower >= best) return best;

  if (node_a.leaf() && node_b.leaf()) {
    Vec3 ta[3], tb[3];
    for (int i = node_a.left; i < node_a.left + node_a.count; ++i) {
      fetch_triangle(f.a->mesh(), f.a->order()[i], ta);
      for (int j = node_b.left; j < node_b.left + node_b.count; ++j) {
        fetch_triangle(f.b->mesh(), f.b->order()[j], tb);
        for (auto& v : tb) v = f.b_to_a * v;
        best = std::min(best, triangle_triangle_distance(ta[0], ta[1], ta[2], tb[0], tb[1],
                                                         tb[2]));
        if (best == 0.0) return best;
      }
    }
    return best;
  }
  if (node_b.leaf() || (!node_a.leaf() && node_a.box.extents().maxCoeff() >
                                              box_b.extents().maxCoeff())) {
    pair_distance(f, node_a.left, nb, best);
    pair_distance(f, node_a.right, nb, best);
  } else {
    pair_distance(f, na, node_b.left, best);
    pair_distance(f, na, node_b.right, best);
  }
  return best;
}

/// True when some probe point of `probes` lies strictly inside `host` with
/// clearance > tol from its surface. Parity is meaningful only for closed
/// meshes; callers gate on watertightness.
bool deep_probe(const Bvh& host, const TriMesh& probes, const AffineTransform& probe_to_host,
                double tol) {
  const Aabb host_box = host.bounds();
  auto test = [&](const Vec3& p_local) {
    const Vec3 p = probe_to_host * p_local;
    if (!host_box.contains(p)) return false;
    if (host.distance(p) <= tol) return false;
    return host.contains(p);
  };
  for (const auto& v : probes.vertices) {
    if (test(v)) return true;
  }
  for (const auto& t : probes.triangles) {
    const Vec3 c = (probes.vertices[t[0]] + probes.vertices[t[1]] + probes.vertices[t[2]]) / 3.0;
    if (test(c)) return true;
  }
  return false;
}

}  // namespace

bool meshes_intersect(const Bvh& a, const RigidTransform& pose_a, const Bvh& b,
                      const RigidTransform& pose_b, double tol) {
  if (a.mesh().empty() || b.mesh().empty()) return false;
  PairFrame frame{&a, &b, AffineTransform(pose_a.inverse() * pose_b)};
  if (!a.bounds().inflated(tol).overlaps(b.bounds().transformed(frame.b_to_a))) return false;
  if (pair_cross(frame, 0, 0, tol)) return true;
  // Boundary-aligned overlaps (one surface nested in the other volume) produce
  // no transversal crossing; catch them with interior probes.
  if (a.watertight() && deep_probe(a, b.mesh(), frame.b_to_a, tol)) return true;
  if (b.watertight()) {
    AffineTransform a_to_b(pose_b.inverse() * pose_a);
    if (deep_probe(b, a.mesh(), a_to_b, tol)) return true;
  }
  return false;
}

double min_distance(const Bvh& a, const RigidTransform& pose_a, const Bvh& b,
                    const RigidTransform& pose_b) {
  if (a.mesh().empty() || b.mesh().empty()) return std::numeric_limits<double>::max();
  if (meshes_intersect(a, pose_a, b, pose_b)) return 0.0;
  PairFrame frame{&a, &b, AffineTransform(pose_a.inverse() * pose_b)};
  double best = std::numeric_limits<double>::max();
  pair_distance(frame, 0, 0, best);
  return best;
}

bool within_distance(const Bvh& a, const RigidTransform& pose_a, const Bvh& b,
                     const RigidTransform& pose_b, double threshold) {
  if (a.mesh().empty() || b.mesh().empty()) return false;
  PairFrame frame{&a, &b, AffineTransform(pose_a.inverse() * pose_b)};
  double best = threshold + 1e-12;
  pair_distance(frame, 0, 0, best);
  if (best <= threshold) return true;
  // Surface distance can be large while one mesh sits inside the other.
  return meshes_intersect(a, pose_a, b, pose_b);
}

std::vector<RayHit> raycast(const TriMesh& mesh, const Ray& ray) {
  return Bvh(mesh).raycast(ray);
}

bool meshes_intersect(const TriMesh& a, const RigidTransform& pose_a, const TriMesh& b,
                      const RigidTransform& pose_b, double tol) {
  Bvh ba(a), bb(b);
  return meshes_intersect(ba, pose_a, bb, pose_b, tol);
}

double min_distance(const TriMesh& a, const RigidTransform& pose_a, const TriMesh& b,
                    const RigidTransform& pose_b) {
  Bvh ba(a), bb(b);
  return min_distance(ba, pose_a, bb, pose_b);
}

std::vector<std::vector<RayHit>> cluster_hits(const std::vector<RayHit>& hits, double eps) {
  std::vector<std::vector<RayHit>> layers;
  for (const auto& h : hits) {
    if (layers.empty() || h.t - layers.back().back().t > eps) {
      layers.emplace_back();
    }
    layers.back().push_back(h);
  }
  return layers;
}

// -- Reference (all-pairs, serial) ----------------------------------------------

namespace reference {

std::vector<RayHit> raycast(const TriMesh& mesh, const Ray& ray) {
  std::vector<RayHit> hits;
  for (int i = 0; i < static_cast<int>(mesh.triangles.size()); ++i) {
    const auto& t = mesh.triangles[i];
    if (auto hit = ray_triangle(ray, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                mesh.vertices[t[2]])) {
      hits.push_back({*hit, ray.origin + *hit * ray.dir, i});
    }
  }
  sort_hits(hits);
  return hits;
}

namespace {

bool contains_brute(const TriMesh& mesh, const Vec3& p) {
  auto hits = raycast(mesh, {p, kParityDir});
  int crossings = 0;
  double last_t = -1.0;
  for (const auto& h : hits) {
    if (crossings == 0 || h.t - last_t > 1e-10) {
      ++crossings;
      last_t = h.t;
    }
  }
  return crossings % 2 == 1;
}

double distance_brute(const TriMesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::max();
  for (const auto& t : mesh.triangles) {
    best = std::min(best, point_triangle_distance_sq(p, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                                     mesh.vertices[t[2]]));
  }
  return std::sqrt(best);
}

bool probe_brute(const TriMesh& host, const TriMesh& probes, const AffineTransform& to_host,
                 double tol) {
  auto test = [&](const Vec3& p_local) {
    const Vec3 p = to_host * p_local;
    return distance_brute(host, p) > tol && contains_brute(host, p);
  };
  for (const auto& v : probes.vertices) {
    if (test(v)) return true;
  }
  for (const auto& t : probes.triangles) {
    const Vec3 c = (probes.vertices[t[0]] + probes.vertices[t[1]] + probes.vertices[t[2]]) / 3.0;
    if (test(c)) return true;
  }
  return false;
}

}  // namespace

bool meshes_intersect(const TriMesh& a, const RigidTransform& pose_a, const TriMesh& b,
                      const RigidTransform& pose_b, double tol) {
  if (a.empty() || b.empty()) return false;
  const AffineTransform b_to_a(pose_a.inverse() * pose_b);
  Vec3 ta[3], tb[3];
  for (const auto& i : a.triangles) {
    ta[0] = a.vertices[i[0]];
    ta[1] = a.vertices[i[1]];
    ta[2] = a.vertices[i[2]];
    for (const auto& j : b.triangles) {
      tb[0] = b_to_a * b.vertices[j[0]];
      tb[1] = b_to_a * b.vertices[j[1]];
      tb[2] = b_to_a * b.vertices[j[2]];
      if (triangles_cross(ta[0], ta[1], ta[2], tb[0], tb[1], tb[2], tol)) return true;
    }
  }
  if (is_watertight(a) && probe_brute(a, b, b_to_a, tol)) return true;
  if (is_watertight(b) && probe_brute(b, a, AffineTransform(pose_b.inverse() * pose_a), tol)) {
    return true;
  }
  return false;
}

double min_distance(const TriMesh& a, const RigidTransform& pose_a, const TriMesh& b,
                    const RigidTransform& pose_b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::max();
  if (meshes_intersect(a, pose_a, b, pose_b)) return 0.0;
  const AffineTransform b_to_a(pose_a.inverse() * pose_b);
  double best = std::numeric_limits<double>::max();
  Vec3 ta[3], tb[3];
  for (const auto& i : a.triangles) {
    ta[0] = a.vertices[i[0]];
    ta[1] = a.vertices[i[1]];
    ta[2] = a.vertices[i[2]];
    for (const auto& j : b.triangles) {
      tb[0] = b_to_a * b.vertices[j[0]];
      tb[1] = b_to_a * b.vertices[j[1]];
      tb[2] = b_to_a * b.vertices[j[2]];
      best = std::min(best, triangle_triangle_distance(ta[0], ta[1], ta[2], tb[0], tb[1], tb[2]));
    }
  }
  return best;
}

}  // namespace reference

}  // namespace funcfix::meshkit
