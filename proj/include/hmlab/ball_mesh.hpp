#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "hmlab/sphere_mesh.hpp"
#include "hmlab/vec3.hpp"

namespace hmlab {

// Regular N^3 lattice clipped to the closed unit ball. Lattice points with a
// 6-neighbor outside the ball form the boundary layer and are projected onto
// S^2. Immutable after construction.
class BallMesh {
 public:
  // trace_sphere, when given, defines the boundary-node -> sphere-vertex
  // correspondence (nearest vertex) used to impose boundary data.
  static std::shared_ptr<const BallMesh> build_ball_grid(int resolution,
                                                         SpherePtr trace_sphere = nullptr);

  int resolution() const { return n_; }
  double spacing() const { return h_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }

  const std::vector<Vec3>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>>& lattice_coords() const { return lattice_; }
  // Per node, the 6 axis neighbors (-x,+x,-y,+y,-z,+z); -1 when absent.
  const std::vector<std::array<int, 6>>& neighbors() const { return neighbors_; }
  const std::vector<std::uint8_t>& is_boundary() const { return is_boundary_; }
  const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }
  const std::vector<int>& interior_nodes() const { return interior_nodes_; }
  const std::vector<double>& node_volumes() const { return volumes_; }
  double total_volume() const { return total_volume_; }

  const SpherePtr& trace_sphere() const { return trace_sphere_; }
  // Nearest sphere vertex per node; -1 for interior nodes.
  const std::vector<int>& trace_map() const { return trace_; }

  // Lattice lookup: node id at (i,j,k), or -1.
  int node_at(int i, int j, int k) const;
  // Node id nearest the origin.
  int center_node() const { return center_node_; }

 private:
  BallMesh() = default;

  int n_ = 0;
  double h_ = 0.0;
  std::vector<Vec3> nodes_;
  std::vector<std::array<int, 3>> lattice_;
  std::vector<int> grid_;  // dense (i,j,k) -> node id or -1
  std::vector<std::array<int, 6>> neighbors_;
  std::vector<std::uint8_t> is_boundary_;
  std::vector<int> boundary_nodes_;
  std::vector<int> interior_nodes_;
  std::vector<double> volumes_;
  double total_volume_ = 0.0;
  int center_node_ = -1;
  SpherePtr trace_sphere_;
  std::vector<int> trace_;
};

using BallPtr = std::shared_ptr<const BallMesh>;

}  // namespace hmlab
