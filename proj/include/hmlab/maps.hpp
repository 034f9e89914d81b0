#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hmlab/ball_mesh.hpp"
#include "hmlab/sphere_mesh.hpp"
#include "hmlab/vec3.hpp"

namespace hmlab {

// Unit 3-vector field over the vertices of a TriangulatedSphere.
struct SphereMap {
  SpherePtr mesh;
  std::vector<Vec3> values;

  // Piecewise-linear evaluation at an arbitrary unit direction, renormalized.
  Vec3 sample(Vec3 dir) const;
  // Maximum deviation of |value| from 1.
  double unit_defect() const;
};

// Unit 3-vector field over the nodes of a BallMesh.
struct BallMap {
  BallPtr mesh;
  std::vector<Vec3> values;

  double unit_defect() const;
};

SphereMap map_from_function(const SpherePtr& mesh, const std::function<Vec3(Vec3)>& f);

SphereMap make_identity_map(const SpherePtr& mesh);
SphereMap make_constant_map(const SpherePtr& mesh, Vec3 value);
SphereMap make_antipodal_map(const SpherePtr& mesh);
// Multiplies longitude by k, keeping latitude.
SphereMap make_azimuthal_wrap(const SpherePtr& mesh, int k);
// v -> (cos theta, sin theta, 0) with theta the longitude of v; image is the
// equator great circle.
SphereMap make_equatorial_map(const SpherePtr& mesh);

// Named builders used by experiment configs: identity | constant | antipodal
// | wrap2 | wrap3 | equatorial.
SphereMap make_named_map(const SpherePtr& mesh, const std::string& name);

// Composition value at each vertex v: base evaluated at transform(v).
// Vertices the transform returns bit-unchanged copy the base value exactly.
SphereMap compose(const SphereMap& base, const std::function<Vec3(Vec3)>& transform);

// Exact vertex-wise equality.
bool identical(const SphereMap& a, const SphereMap& b);

}  // namespace hmlab
