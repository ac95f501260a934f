#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace funcfix {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using RigidTransform = Eigen::Isometry3d;
using AffineTransform = Eigen::Affine3d;

inline constexpr double kTouchTolerance = 1e-7;  // surface touching vs. interpenetration

/// Axis-aligned box in the canonical asset frame. Invariant: min <= max componentwise.
struct Aabb {
  Vec3 min{Vec3::Constant(std::numeric_limits<double>::max())};
  Vec3 max{Vec3::Constant(std::numeric_limits<double>::lowest())};

  bool valid() const { return (min.array() <= max.array()).all(); }
  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extents() const { return max - min; }
  Vec3 half_extents() const { return 0.5 * (max - min); }
  double longest_extent() const { return extents().maxCoeff(); }

  void expand(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void expand(const Aabb& b) {
    min = min.cwiseMin(b.min);
    max = max.cwiseMax(b.max);
  }
  Aabb inflated(double eps) const { return {min.array() - eps, max.array() + eps}; }

  bool overlaps(const Aabb& b) const {
    return (min.array() <= b.max.array()).all() && (b.min.array() <= max.array()).all();
  }
  bool contains(const Vec3& p) const {
    return (min.array() <= p.array()).all() && (p.array() <= max.array()).all();
  }

  /// Smallest axis-aligned box enclosing this box under an affine map.
  Aabb transformed(const AffineTransform& xf) const {
    Aabb out;
    for (int corner = 0; corner < 8; ++corner) {
      Vec3 p{(corner & 1) ? max.x() : min.x(),
             (corner & 2) ? max.y() : min.y(),
             (corner & 4) ? max.z() : min.z()};
      out.expand(xf * p);
    }
    return out;
  }

  double distance_sq(const Aabb& b) const {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      double gap = std::max({0.0, b.min[k] - max[k], min[k] - b.max[k]});
      d2 += gap * gap;
    }
    return d2;
  }
};

/// Per-axis surface gap between boxes; zero on axes where the intervals overlap.
inline Vec3 axis_gap(const Aabb& a, const Aabb& b) {
  Vec3 g;
  for (int k = 0; k < 3; ++k) {
    g[k] = std::max({0.0, b.min[k] - a.max[k], a.min[k] - b.max[k]});
  }
  return g;
}

/// Bounded rectangular plane patch: origin + two in-plane axes spanning
/// half_extent, unit normal = u x v.
struct Plane {
  Vec3 origin{Vec3::Zero()};
  Vec3 normal{Vec3::UnitZ()};
  Vec3 u_axis{Vec3::UnitX()};
  Vec3 v_axis{Vec3::UnitY()};
  Vec2 half_extent{Vec2::Zero()};

  std::array<Vec3, 4> corners() const {
    const Vec3 du = u_axis * half_extent.x();
    const Vec3 dv = v_axis * half_extent.y();
    return {origin - du - dv, origin + du - dv, origin + du + dv, origin - du + dv};
  }

  Plane transformed(const AffineTransform& xf) const {
    Plane out;
    out.origin = xf * origin;
    // Scale can be anisotropic: rebuild an orthonormal in-plane frame and keep
    // the stretched extents.
    Vec3 u = xf.linear() * (u_axis * half_extent.x());
    Vec3 v = xf.linear() * (v_axis * half_extent.y());
    out.half_extent = {u.norm(), v.norm()};
    out.u_axis = out.half_extent.x() > 0 ? Vec3(u / out.half_extent.x()) : Vec3::UnitX();
    out.v_axis = out.half_extent.y() > 0 ? Vec3(v / out.half_extent.y()) : Vec3::UnitY();
    out.normal = out.u_axis.cross(out.v_axis).normalized();
    return out;
  }
};

struct Ray {
  Vec3 origin{Vec3::Zero()};
  Vec3 dir{Vec3::UnitX()};  // unit length
};

struct RayHit {
  double t = 0.0;  // nonnegative ray parameter, meters
  Vec3 point{Vec3::Zero()};
  int triangle = -1;
};

/// Minimal rotation taking `from` onto `to` (both unit). Identity when aligned,
/// a 180-degree flip about any orthogonal axis when opposed.
inline Mat3 minimal_rotation(const Vec3& from, const Vec3& to) {
  const double c = from.dot(to);
  if (c > 1.0 - 1e-12) return Mat3::Identity();
  if (c < -1.0 + 1e-12) {
    Vec3 ortho = std::abs(from.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    Vec3 axis = from.cross(ortho).normalized();
    return Eigen::AngleAxisd(M_PI, axis).toRotationMatrix();
  }
  return Eigen::Quaterniond::FromTwoVectors(from, to).toRotationMatrix();
}

/// Rotation by `angle` about the line (point, unit dir), as a rigid transform.
inline RigidTransform rotation_about_line(const Vec3& point, const Vec3& dir, double angle) {
  RigidTransform xf = RigidTransform::Identity();
  xf.translate(point).rotate(Eigen::AngleAxisd(angle, dir)).translate(-point);
  return xf;
}

/// Distance between two infinite lines (point + unit direction).
inline double line_line_distance(const Vec3& p0, const Vec3& d0, const Vec3& p1, const Vec3& d1) {
  const Vec3 n = d0.cross(d1);
  const double n2 = n.squaredNorm();
  if (n2 < 1e-18) {  // parallel: perpendicular offset
    Vec3 w = p1 - p0;
    return (w - w.dot(d0) * d0).norm();
  }
  return std::abs(n.dot(p1 - p0)) / std::sqrt(n2);
}

}  // namespace funcfix
