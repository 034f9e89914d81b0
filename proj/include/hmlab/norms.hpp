#pragma once

#include <span>
#include <string>

#include "hmlab/maps.hpp"
#include "hmlab/sphere_mesh.hpp"

namespace hmlab {

// Full W^{1,p} norm split into its two parts:
// total^p = lp_part^p + seminorm_part^p.
struct NormReport {
  double p = 1.0;
  std::string region = "all";
  double lp_part = 0.0;
  double seminorm_part = 0.0;
  double total = 0.0;
};

struct DegreeResult {
  int value = 0;
  double raw = 0.0;
  // Some triangle image has geodesic diameter > pi/2; the map may be
  // under-resolved even though the raw value is near an integer.
  bool diameter_warning = false;
};

// W^{1,p} norm, 1 <= p < 2, of an R^3-valued vertex field over a region
// (whole sphere when region is null). Quadrature: spherical triangle areas,
// constant per-triangle gradients of the piecewise-linear interpolant; a
// triangle contributes only when all three corners are in the region.
NormReport w1p_norm(const SpherePtr& mesh, std::span<const Vec3> values, double p,
                    const VertexSet* region = nullptr);

inline NormReport w1p_norm(const SphereMap& f, double p, const VertexSet* region = nullptr) {
  return w1p_norm(f.mesh, f.values, p, region);
}

// W^{1,p} norm of the extrinsic (R^3) difference f - g.
double w1p_distance(const SphereMap& f, const SphereMap& g, double p,
                    const VertexSet* region = nullptr);
NormReport w1p_difference_report(const SphereMap& f, const SphereMap& g, double p,
                                 const VertexSet* region = nullptr);

// Topological degree: (1/4pi) * sum of signed spherical areas of image
// triangles. Throws ResolutionError when the raw value strays more than 0.1
// from the nearest integer.
DegreeResult degree(const SphereMap& f);

// Dirichlet energy of a ball map: node-volume quadrature of |grad u|^2 with
// central differences at interior nodes and one-sided differences where a
// lattice neighbor is missing.
double dirichlet_energy(const BallMap& u);

// Discrete L^2 distance between two ball maps on the same mesh
// (node-volume weighted).
double l2_distance(const BallMap& u, const BallMap& v);

}  // namespace hmlab
