#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "funcfix/meshkit/mesh.hpp"

namespace funcfix::meshkit {

struct MeshIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One entry of an asset manifest. Category is the raw token from the file;
/// vocabulary mapping happens in the graph layer.
struct LoadedPart {
  TriMesh mesh;
  std::string category;
  std::string id;
};

TriMesh load_mesh(const std::filesystem::path& path);          // .obj or .ply by extension
TriMesh load_obj(const std::filesystem::path& path);
TriMesh load_ply(const std::filesystem::path& path);           // ascii + binary_little_endian
void save_obj(const TriMesh& mesh, const std::filesystem::path& path);
void save_ply(const TriMesh& mesh, const std::filesystem::path& path, bool binary = false);

/// Manifest schema: {"parts":[{"id","category","mesh"}],"up_axis":"z"}.
/// Mesh paths are relative to the manifest. Degenerate triangles are dropped
/// at load; duplicate ids and missing files raise MeshIoError.
std::vector<LoadedPart> load_parts(const std::filesystem::path& manifest_path);

/// Writes a manifest next to existing mesh files (paths stored relative).
void save_manifest(const std::vector<LoadedPart>& parts, const std::filesystem::path& manifest_path,
                   const std::filesystem::path& mesh_dir);

/// Uniformly scales and translates all parts so the union box fits [0,1]^3 with
/// the longest extent equal to 1. Returns the applied original->normalized map.
AffineTransform normalize_to_unit_cube(std::vector<TriMesh>& parts);

}  // namespace funcfix::meshkit
