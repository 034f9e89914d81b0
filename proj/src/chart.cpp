#include "hmlab/chart.hpp"

#include <cmath>

#include "hmlab/errors.hpp"

namespace hmlab {

ChartMap::ChartMap(Vec3 center) : center_(center) {
  if (std::fabs(norm(center) - 1.0) > 1e-9) {
    throw DomainError("exp_chart: center must be a unit vector");
  }
  e1_ = any_orthogonal(center_);
  e2_ = cross(center_, e1_);
  valid_radius_ = M_PI - 1e-6;
}

std::array<double, 2> ChartMap::forward(Vec3 q) const {
  if (same_bits(q, center_)) return {0.0, 0.0};
  const double c = dot(q, center_);
  const Vec3 w = q - c * center_;
  const double wn = norm(w);
  const double d = std::atan2(wn, c);  // geodesic distance
  if (wn < 1e-300) return {0.0, 0.0};
  const double s = d / wn;
  return {s * dot(w, e1_), s * dot(w, e2_)};
}

Vec3 ChartMap::inverse(std::array<double, 2> y) const {
  const double d = std::hypot(y[0], y[1]);
  if (d == 0.0) return center_;
  const Vec3 dir = (y[0] / d) * e1_ + (y[1] / d) * e2_;
  return normalized(std::cos(d) * center_ + std::sin(d) * dir);
}

ChartMap exp_chart(Vec3 x) { return ChartMap(x); }

Vec3 geodesic_point(Vec3 x, Vec3 q, double rho) {
  if (rho == 0.0) return x;
  const Vec3 w = q - dot(q, x) * x;
  const double wn = norm(w);
  if (wn < 1e-300) return x;
  const Vec3 dir = w / wn;
  return normalized(std::cos(rho) * x + std::sin(rho) * dir);
}

}  // namespace hmlab
