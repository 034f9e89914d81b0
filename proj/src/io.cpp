#include "hmlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hmlab/errors.hpp"

namespace hmlab {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump_sphere_mesh(const TriangulatedSphere& mesh, const std::string& path) {
  std::ostringstream out;
  out << "sphere-mesh v1 " << mesh.vertex_count() << " " << mesh.triangle_count() << "\n";
  for (const Vec3& v : mesh.vertices()) {
    out << fmt_double(v.x) << " " << fmt_double(v.y) << " " << fmt_double(v.z) << "\n";
  }
  for (const Triangle& t : mesh.triangles()) {
    out << t.a << " " << t.b << " " << t.c << "\n";
  }
  write_text_file(path, out.str());
}

void dump_ball_mesh(const BallMesh& mesh, const std::string& path) {
  std::ostringstream out;
  out << "ball-mesh v1 " << mesh.node_count() << " " << mesh.resolution() << "\n";
  for (const Vec3& v : mesh.nodes()) {
    out << fmt_double(v.x) << " " << fmt_double(v.y) << " " << fmt_double(v.z) << "\n";
  }
  write_text_file(path, out.str());
}

void dump_sphere_map(const SphereMap& map, const std::string& path) {
  std::ostringstream out;
  out << "sphere-map v1 " << map.values.size() << "\n";
  for (const Vec3& v : map.values) {
    out << fmt_double(v.x) << " " << fmt_double(v.y) << " " << fmt_double(v.z) << "\n";
  }
  write_text_file(path, out.str());
}

SphereMap load_sphere_map(const SpherePtr& mesh, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string tag, ver;
  std::size_t n = 0;
  in >> tag >> ver >> n;
  if (tag != "sphere-map" || ver != "v1") throw IoError("bad sphere-map header in " + path);
  if (n != static_cast<std::size_t>(mesh->vertex_count())) {
    throw IoError("sphere-map has " + std::to_string(n) + " values, mesh has " +
                  std::to_string(mesh->vertex_count()) + " vertices");
  }
  SphereMap m;
  m.mesh = mesh;
  m.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> m.values[i].x >> m.values[i].y >> m.values[i].z)) {
      throw IoError("truncated sphere-map: " + path);
    }
  }
  return m;
}

void dump_ball_map(const BallMap& map, const std::string& path) {
  std::ostringstream out;
  out << "ball-map v1 " << map.values.size() << "\n";
  for (const Vec3& v : map.values) {
    out << fmt_double(v.x) << " " << fmt_double(v.y) << " " << fmt_double(v.z) << "\n";
  }
  write_text_file(path, out.str());
}

BallMap load_ball_map(const BallPtr& mesh, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string tag, ver;
  std::size_t n = 0;
  in >> tag >> ver >> n;
  if (tag != "ball-map" || ver != "v1") throw IoError("bad ball-map header in " + path);
  if (n != static_cast<std::size_t>(mesh->node_count())) {
    throw IoError("ball-map has " + std::to_string(n) + " values, mesh has " +
                  std::to_string(mesh->node_count()) + " nodes");
  }
  BallMap m;
  m.mesh = mesh;
  m.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> m.values[i].x >> m.values[i].y >> m.values[i].z)) {
      throw IoError("truncated ball-map: " + path);
    }
  }
  return m;
}

std::string norm_report_csv_row(const NormReport& rep, const std::string& region_id) {
  std::ostringstream out;
  out << fmt_double(rep.p) << "," << region_id << "," << fmt_double(rep.lp_part) << ","
      << fmt_double(rep.seminorm_part) << "," << fmt_double(rep.total);
  return out.str();
}

void dump_homotopy(const HomotopyPath& path, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  for (std::size_t k = 0; k < path.maps.size(); ++k) {
    dump_sphere_map(path.maps[k], directory + "/H_" + std::to_string(k) + ".txt");
  }
  std::ostringstream manifest;
  manifest << "homotopy v1 " << (path.sample_count() - 1) << " " << fmt_double(path.r) << " "
           << fmt_double(path.center.x) << " " << fmt_double(path.center.y) << " "
           << fmt_double(path.center.z) << " " << fmt_double(path.tau) << " "
           << fmt_double(path.p) << "\n";
  write_text_file(directory + "/manifest.txt", manifest.str());

  std::ostringstream csv;
  csv << "t,norm_total,norm_local\n";
  for (std::size_t k = 0; k < path.ts.size(); ++k) {
    const double total = k < path.reports_global.size() ? path.reports_global[k].total : 0.0;
    const double local = k < path.reports_local.size() ? path.reports_local[k].total : 0.0;
    csv << fmt_double(path.ts[k]) << "," << fmt_double(total) << "," << fmt_double(local) << "\n";
  }
  write_text_file(directory + "/norms.csv", csv.str());
}

}  // namespace hmlab
