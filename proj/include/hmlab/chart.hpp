#pragma once

#include <array>

#include "hmlab/vec3.hpp"

namespace hmlab {

// Exponential chart of S^2 at a unit center point. Coordinates are tangent
// plane vectors whose length equals geodesic distance from the center.
class ChartMap {
 public:
  explicit ChartMap(Vec3 center);

  Vec3 center() const { return center_; }
  double valid_radius() const { return valid_radius_; }

  std::array<double, 2> forward(Vec3 q) const;
  Vec3 inverse(std::array<double, 2> y) const;

 private:
  Vec3 center_;
  Vec3 e1_, e2_;
  double valid_radius_;
};

ChartMap exp_chart(Vec3 x);

// Point at geodesic distance rho from x along the great circle from x
// through q (q != +-x). rho = 0 gives x.
Vec3 geodesic_point(Vec3 x, Vec3 q, double rho);

}  // namespace hmlab
