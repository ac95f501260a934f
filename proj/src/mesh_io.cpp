#include "funcfix/meshkit/io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace funcfix::meshkit {

namespace fs = std::filesystem;
using nlohmann::json;

TriMesh load_obj(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshIoError("missing file: " + path.string());
  TriMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    if (line.size() < 2) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v.x() >> v.y() >> v.z();
      if (ss.fail()) throw MeshIoError("unparsable mesh: bad vertex in " + path.string());
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string token;
      while (ss >> token) {
        // "f v", "f v/vt", "f v//vn", "f v/vt/vn"; negative = relative index.
        int v = std::stoi(token.substr(0, token.find('/')));
        if (v < 0) v = static_cast<int>(mesh.vertices.size()) + v + 1;
        idx.push_back(v - 1);
      }
      if (idx.size() < 3) throw MeshIoError("unparsable mesh: short face in " + path.string());
      for (size_t k = 1; k + 1 < idx.size(); ++k) {  // fan-triangulate polygons
        mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
      }
    }
  }
  return mesh;
}

namespace {

struct PlyProperty {
  std::string type;
  std::string name;
  bool list = false;
  std::string count_type;
};

size_t scalar_size(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32" || type == "float" ||
      type == "float32") {
    return 4;
  }
  if (type == "double" || type == "float64") return 8;
  throw MeshIoError("unparsable mesh: unknown ply type " + type);
}

double read_binary_scalar(std::istream& in, const std::string& type) {
  unsigned char buf[8];
  const size_t n = scalar_size(type);
  in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n));
  if (!in) throw MeshIoError("unparsable mesh: truncated ply payload");
  auto as = [&buf]<typename T>() {
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return static_cast<double>(v);
  };
  if (type == "char" || type == "int8") return as.operator()<int8_t>();
  if (type == "uchar" || type == "uint8") return as.operator()<uint8_t>();
  if (type == "short" || type == "int16") return as.operator()<int16_t>();
  if (type == "ushort" || type == "uint16") return as.operator()<uint16_t>();
  if (type == "int" || type == "int32") return as.operator()<int32_t>();
  if (type == "uint" || type == "uint32") return as.operator()<uint32_t>();
  if (type == "float" || type == "float32") return as.operator()<float>();
  return as.operator()<double>();
}

}  // namespace

TriMesh load_ply(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MeshIoError("missing file: " + path.string());

  std::string line;
  std::getline(in, line);
  if (line.rfind("ply", 0) != 0) throw MeshIoError("unparsable mesh: not a ply " + path.string());

  bool binary = false;
  struct Element {
    std::string name;
    size_t count = 0;
    std::vector<PlyProperty> props;
  };
  std::vector<Element> elements;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "comment") continue;
    if (tag == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt == "binary_little_endian") {
        binary = true;
      } else if (fmt != "ascii") {
        throw MeshIoError("unparsable mesh: unsupported ply format " + fmt);
      }
    } else if (tag == "element") {
      Element e;
      ss >> e.name >> e.count;
      elements.push_back(e);
    } else if (tag == "property") {
      if (elements.empty()) throw MeshIoError("unparsable mesh: property before element");
      PlyProperty p;
      std::string first;
      ss >> first;
      if (first == "list") {
        p.list = true;
        ss >> p.count_type >> p.type >> p.name;
      } else {
        p.type = first;
        ss >> p.name;
      }
      elements.back().props.push_back(p);
    } else if (tag == "end_header") {
      break;
    }
  }

  TriMesh mesh;
  for (const auto& element : elements) {
    const bool is_vertex = element.name == "vertex";
    const bool is_face = element.name == "face";
    for (size_t i = 0; i < element.count; ++i) {
      Vec3 v = Vec3::Zero();
      std::vector<int> face;
      if (binary) {
        for (const auto& p : element.props) {
          if (p.list) {
            const int n = static_cast<int>(read_binary_scalar(in, p.count_type));
            for (int k = 0; k < n; ++k) {
              double x = read_binary_scalar(in, p.type);
              if (is_face && p.name == "vertex_indices") face.push_back(static_cast<int>(x));
            }
          } else {
            double x = read_binary_scalar(in, p.type);
            if (is_vertex && p.name == "x") v.x() = x;
            if (is_vertex && p.name == "y") v.y() = x;
            if (is_vertex && p.name == "z") v.z() = x;
          }
        }
      } else {
        std::getline(in, line);
        std::istringstream ss(line);
        for (const auto& p : element.props) {
          if (p.list) {
            int n;
            ss >> n;
            for (int k = 0; k < n; ++k) {
              double x;
              ss >> x;
              if (is_face && p.name == "vertex_indices") face.push_back(static_cast<int>(x));
            }
          } else {
            double x;
            ss >> x;
            if (is_vertex && p.name == "x") v.x() = x;
            if (is_vertex && p.name == "y") v.y() = x;
            if (is_vertex && p.name == "z") v.z() = x;
          }
        }
        if (ss.fail()) throw MeshIoError("unparsable mesh: bad ply row in " + path.string());
      }
      if (is_vertex) mesh.vertices.push_back(v);
      if (is_face) {
        for (size_t k = 1; k + 1 < face.size(); ++k) {
          mesh.triangles.push_back({face[0], face[k], face[k + 1]});
        }
      }
    }
  }
  return mesh;
}

TriMesh load_mesh(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".obj" || ext == ".OBJ") return load_obj(path);
  if (ext == ".ply" || ext == ".PLY") return load_ply(path);
  throw MeshIoError("unparsable mesh: unsupported extension " + path.string());
}

void save_obj(const TriMesh& mesh, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw MeshIoError("cannot write: " + path.string());
  out.precision(12);
  for (const auto& v : mesh.vertices) {
    out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  }
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
  }
}

void save_ply(const TriMesh& mesh, const fs::path& path, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MeshIoError("cannot write: " + path.string());
  out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "element face " << mesh.triangles.size() << "\n";
  out << "property list uchar int vertex_indices\n";
  out << "end_header\n";
  if (binary) {
    for (const auto& v : mesh.vertices) {
      double xyz[3] = {v.x(), v.y(), v.z()};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
    for (const auto& t : mesh.triangles) {
      unsigned char n = 3;
      int idx[3] = {t[0], t[1], t[2]};
      out.write(reinterpret_cast<const char*>(&n), 1);
      out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
    }
  } else {
    out.precision(12);
    for (const auto& v : mesh.vertices) {
      out << v.x() << " " << v.y() << " " << v.z() << "\n";
    }
    for (const auto& t : mesh.triangles) {
      out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    }
  }
}

std::vector<LoadedPart> load_parts(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw MeshIoError("missing file: " + manifest_path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw MeshIoError("unparsable manifest: " + std::string(e.what()));
  }
  if (!doc.contains("parts") || !doc["parts"].is_array()) {
    throw MeshIoError("unparsable manifest: missing parts array");
  }

  std::vector<LoadedPart> parts;
  std::set<std::string> seen;
  const fs::path base = manifest_path.parent_path();
  for (const auto& entry : doc["parts"]) {
    LoadedPart part;
    part.id = entry.at("id").get<std::string>();
    part.category = entry.value("category", "misc");
    if (!seen.insert(part.id).second) throw MeshIoError("duplicate part id: " + part.id);
    const fs::path mesh_path = base / entry.at("mesh").get<std::string>();
    part.mesh = load_mesh(mesh_path);
    part.mesh.part_id = part.id;
    cleanup_degenerate(part.mesh);
    if (!mesh_is_valid(part.mesh)) {
      throw MeshIoError("unparsable mesh: invalid geometry in " + mesh_path.string());
    }
    parts.push_back(std::move(part));
  }
  return parts;
}

void save_manifest(const std::vector<LoadedPart>& parts, const fs::path& manifest_path,
                   const fs::path& mesh_dir) {
  json doc;
  doc["schema_version"] = 1;
  doc["up_axis"] = "z";
  doc["parts"] = json::array();
  fs::create_directories(manifest_path.parent_path() / mesh_dir);
  for (const auto& part : parts) {
    const fs::path rel = mesh_dir / (part.id + ".obj");
    save_obj(part.mesh, manifest_path.parent_path() / rel);
    doc["parts"].push_back({{"id", part.id}, {"category", part.category}, {"mesh", rel.string()}});
  }
  std::ofstream out(manifest_path);
  if (!out) throw MeshIoError("cannot write: " + manifest_path.string());
  out << doc.dump(2) << "\n";
}

AffineTransform normalize_to_unit_cube(std::vector<TriMesh>& parts) {
  Aabb box;
  for (const auto& p : parts) box.expand(p.bounds());
  if (!box.valid()) throw MeshIoError("zero-extent asset: no geometry");
  const double longest = box.longest_extent();
  if (longest <= 0.0) throw MeshIoError("zero-extent asset");
  const double scale = 1.0 / longest;
  AffineTransform xf = AffineTransform::Identity();
  xf.scale(scale).translate(-box.min);
  for (auto& p : parts) transform_in_place(p, xf);
  return xf;
}

}  // namespace funcfix::meshkit
