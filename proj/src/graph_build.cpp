#include "funcfix/fungraph/build.hpp"

#include <set>
#include <stdexcept>

namespace funcfix::fungraph {

namespace {

bool overlaps_strict(const Aabb& a, const Aabb& b) {
  return (a.min.array() < b.max.array()).all() && (b.min.array() < a.max.array()).all();
}

}  // namespace

FunctionalGraph build_contact_graph(const std::vector<meshkit::LoadedPart>& parts, double eps) {
  FunctionalGraph graph;
  std::set<std::string> ids;
  for (const auto& part : parts) {
    if (!ids.insert(part.id).second) {
      throw std::invalid_argument("duplicate part id: " + part.id);
    }
    PartNode node;
    node.id = part.id;
    node.category = parse_category(part.category);
    node.bbox = part.mesh.bounds();
    node.centroid = node.bbox.center();
    node.mesh_ref = part.id;
    graph.nodes.push_back(std::move(node));
  }
  for (size_t i = 0; i < graph.nodes.size(); ++i) {
    for (size_t j = i + 1; j < graph.nodes.size(); ++j) {
      const Aabb a = graph.nodes[i].bbox.inflated(eps);
      const Aabb b = graph.nodes[j].bbox.inflated(eps);
      if (!overlaps_strict(a, b)) continue;
      Edge e;
      e.kind = EdgeKind::kContact;
      e.src = std::min(graph.nodes[i].id, graph.nodes[j].id);
      e.dst = std::max(graph.nodes[i].id, graph.nodes[j].id);
      graph.edges.push_back(std::move(e));
    }
  }
  return graph;
}

Eigen::Matrix<double, 8, 1> edge_descriptor(const PartNode& a, const PartNode& b) {
  const Vec3 r = b.centroid - a.centroid;
  const Vec3 g = axis_gap(a.bbox, b.bbox);
  const double rn = r.norm();
  const Vec3 r_hat = rn > 0.0 ? Vec3(r / rn) : Vec3::Zero();

  Eigen::Matrix<double, 8, 1> out;
  out << rn, g.norm(), r_hat, g;
  return out;
}

}  // namespace funcfix::fungraph
