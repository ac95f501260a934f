#pragma once

#include "funcfix/fungraph/graph.hpp"
#include "funcfix/meshkit/io.hpp"

namespace funcfix::fungraph {

/// Default eps for contact detection, normalized units. Two parts are in
/// contact when their eps-inflated boxes overlap with positive depth
/// (equivalently: surface gap < 2*eps on every axis).
inline constexpr double kContactEps = 0.005;

/// One node per part (bbox from the mesh, centroid = bbox center, mesh_ref set)
/// and a contact edge per touching pair. No functional edges.
FunctionalGraph build_contact_graph(const std::vector<meshkit::LoadedPart>& parts,
                                    double eps = kContactEps);

/// [|r|, |g|, r_hat, g_axis] with r = centroid(b) - centroid(a) and g the
/// per-axis bbox surface gap. Coincident centroids yield r_hat = 0.
Eigen::Matrix<double, 8, 1> edge_descriptor(const PartNode& a, const PartNode& b);

}  // namespace funcfix::fungraph
