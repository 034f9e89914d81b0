#include "hmlab/maps.hpp"

#include <cmath>

#include "hmlab/errors.hpp"

namespace hmlab {

Vec3 SphereMap::sample(Vec3 dir) const {
  const PointLocation loc = mesh->locate(dir);
  const Triangle t = mesh->triangles()[static_cast<std::size_t>(loc.triangle)];
  const Vec3 v = loc.weights[0] * values[static_cast<std::size_t>(t.a)] +
                 loc.weights[1] * values[static_cast<std::size_t>(t.b)] +
                 loc.weights[2] * values[static_cast<std::size_t>(t.c)];
  const double n = norm(v);
  if (n < 1e-12) {
    // Interpolating across nearly antipodal values; fall back to the
    // dominant-weight vertex.
    int best = t.a;
    double w = loc.weights[0];
    if (loc.weights[1] > w) { best = t.b; w = loc.weights[1]; }
    if (loc.weights[2] > w) best = t.c;
    return values[static_cast<std::size_t>(best)];
  }
  return v / n;
}

double SphereMap::unit_defect() const {
  double worst = 0.0;
  for (const Vec3& v : values) worst = std::max(worst, std::fabs(norm(v) - 1.0));
  return worst;
}

double BallMap::unit_defect() const {
  double worst = 0.0;
  for (const Vec3& v : values) worst = std::max(worst, std::fabs(norm(v) - 1.0));
  return worst;
}

SphereMap map_from_function(const SpherePtr& mesh, const std::function<Vec3(Vec3)>& f) {
  SphereMap m;
  m.mesh = mesh;
  m.values.reserve(static_cast<std::size_t>(mesh->vertex_count()));
  for (const Vec3& v : mesh->vertices()) m.values.push_back(normalized(f(v)));
  return m;
}

SphereMap make_identity_map(const SpherePtr& mesh) {
  SphereMap m;
  m.mesh = mesh;
  m.values = mesh->vertices();
  return m;
}

SphereMap make_constant_map(const SpherePtr& mesh, Vec3 value) {
  SphereMap m;
  m.mesh = mesh;
  m.values.assign(static_cast<std::size_t>(mesh->vertex_count()), normalized(value));
  return m;
}

SphereMap make_antipodal_map(const SpherePtr& mesh) {
  return map_from_function(mesh, [](Vec3 v) { return -v; });
}

SphereMap make_azimuthal_wrap(const SpherePtr& mesh, int k) {
  return map_from_function(mesh, [k](Vec3 v) {
    const double theta = std::atan2(v.y, v.x);
    const double rho = std::hypot(v.x, v.y);
    return Vec3{rho * std::cos(k * theta), rho * std::sin(k * theta), v.z};
  });
}

SphereMap make_equatorial_map(const SpherePtr& mesh) {
  return map_from_function(mesh, [](Vec3 v) {
    const double theta = std::atan2(v.y, v.x);
    return Vec3{std::cos(theta), std::sin(theta), 0.0};
  });
}

SphereMap make_named_map(const SpherePtr& mesh, const std::string& name) {
  if (name == "identity") return make_identity_map(mesh);
  if (name == "constant") return make_constant_map(mesh, {0.0, 0.0, 1.0});
  if (name == "antipodal") return make_antipodal_map(mesh);
  if (name == "wrap2") return make_azimuthal_wrap(mesh, 2);
  if (name == "wrap3") return make_azimuthal_wrap(mesh, 3);
  if (name == "equatorial") return make_equatorial_map(mesh);
  throw ConfigError("unknown map name: " + name);
}

SphereMap compose(const SphereMap& base, const std::function<Vec3(Vec3)>& transform) {
  SphereMap out;
  out.mesh = base.mesh;
  out.values.reserve(base.values.size());
  const auto& verts = base.mesh->vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Vec3 p = transform(verts[i]);
    if (same_bits(p, verts[i])) {
      out.values.push_back(base.values[i]);
    } else {
      out.values.push_back(base.sample(p));
    }
  }
  return out;
}

bool identical(const SphereMap& a, const SphereMap& b) {
  if (a.values.size() != b.values.size()) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (!same_bits(a.values[i], b.values[i])) return false;
  }
  return true;
}

}  // namespace hmlab
