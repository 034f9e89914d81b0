#pragma once

#include <string>

#include "hmlab/ball_mesh.hpp"
#include "hmlab/homotopy.hpp"
#include "hmlab/maps.hpp"
#include "hmlab/norms.hpp"
#include "hmlab/sphere_mesh.hpp"

namespace hmlab {

// Doubles formatted with 17 significant digits: reruns are byte-identical
// and values round-trip exactly.
std::string fmt_double(double v);

void dump_sphere_mesh(const TriangulatedSphere& mesh, const std::string& path);
void dump_ball_mesh(const BallMesh& mesh, const std::string& path);

void dump_sphere_map(const SphereMap& map, const std::string& path);
SphereMap load_sphere_map(const SpherePtr& mesh, const std::string& path);

void dump_ball_map(const BallMap& map, const std::string& path);
BallMap load_ball_map(const BallPtr& mesh, const std::string& path);

std::string norm_report_csv_row(const NormReport& rep, const std::string& region_id);

// Directory layout: H_<k>.txt per sample, `manifest.txt`, `norms.csv` with
// rows t,norm_total,norm_local.
void dump_homotopy(const HomotopyPath& path, const std::string& directory);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hmlab
