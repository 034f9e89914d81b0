#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "hmlab/vec3.hpp"

namespace hmlab {

struct Triangle {
  int a, b, c;
};

// Containing triangle plus gnomonic barycentric weights (sum to 1).
struct PointLocation {
  int triangle = -1;
  std::array<double, 3> weights{};
};

// Geodesic triangulation of S^2 built by icosahedron subdivision.
// Immutable after construction; vertex positions are unit, triangles are
// oriented outward, and triangle/vertex areas are spherical (steradians).
class TriangulatedSphere {
 public:
  static std::shared_ptr<const TriangulatedSphere> build_icosphere(int subdivision_level);

  int level() const { return level_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<double>& triangle_areas() const { return triangle_areas_; }
  const std::vector<double>& vertex_areas() const { return vertex_areas_; }
  const std::vector<std::vector<int>>& vertex_neighbors() const { return vertex_neighbors_; }

  // Max geodesic edge length at the finest level.
  double mesh_size() const { return mesh_size_; }

  double total_area() const { return total_area_; }

  // Locates the triangle whose spherical image contains the unit direction q
  // by descending the subdivision hierarchy.
  PointLocation locate(Vec3 q) const;

 private:
  TriangulatedSphere() = default;

  int level_ = 0;
  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<double> triangle_areas_;
  std::vector<double> vertex_areas_;
  std::vector<std::vector<int>> vertex_neighbors_;
  double mesh_size_ = 0.0;
  double total_area_ = 0.0;

  // Subdivision hierarchy for point location: triangles per level and the
  // four children of each coarse triangle. Level `level_` equals triangles_.
  std::vector<std::vector<Triangle>> level_triangles_;
  std::vector<std::vector<std::array<int, 4>>> level_children_;
};

using SpherePtr = std::shared_ptr<const TriangulatedSphere>;

// Vertices of a geodesic ball B_rho(center) on a concrete mesh.
struct VertexSet {
  SpherePtr mesh;
  Vec3 center{};
  double radius = 0.0;
  std::vector<int> indices;
  std::vector<std::uint8_t> member;  // size = vertex_count()

  bool contains(int v) const { return member[static_cast<std::size_t>(v)] != 0; }
  double area() const;
};

// Exactly the vertices with geodesic distance < rho from x.
VertexSet geodesic_ball(const SpherePtr& mesh, Vec3 x, double rho);

}  // namespace hmlab
