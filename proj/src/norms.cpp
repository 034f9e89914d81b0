#include "hmlab/norms.hpp"

#include <cmath>

#include "hmlab/errors.hpp"

namespace hmlab {

namespace {

// Squared Frobenius norm of the surface gradient of the PL interpolant on
// the flat triangle (p0,p1,p2) with R^3 values (f0,f1,f2).
double triangle_grad_sq(Vec3 p0, Vec3 p1, Vec3 p2, Vec3 f0, Vec3 f1, Vec3 f2) {
  const Vec3 u = p1 - p0;
  const Vec3 v = p2 - p0;
  const double lu = norm(u);
  const Vec3 e1 = u / lu;
  const Vec3 nrm = cross(u, v);
  const Vec3 e2 = normalized(cross(nrm, u));
  const double bx = lu;
  const double cx = dot(v, e1);
  const double cy = dot(v, e2);

  double total = 0.0;
  const Vec3 d1 = f1 - f0;
  const Vec3 d2 = f2 - f0;
  const double g1[3] = {d1.x, d1.y, d1.z};
  const double g2[3] = {d2.x, d2.y, d2.z};
  for (int c = 0; c < 3; ++c) {
    const double gx = g1[c] / bx;
    const double gy = (g2[c] - cx * gx) / cy;
    total += gx * gx + gy * gy;
  }
  return total;
}

bool is_zero(Vec3 v) { return v.x == 0.0 && v.y == 0.0 && v.z == 0.0; }

}  // namespace

NormReport w1p_norm(const SpherePtr& mesh, std::span<const Vec3> values, double p,
                    const VertexSet* region) {
  if (!(p >= 1.0 && p < 2.0)) {
    throw DomainError("w1p_norm: p must lie in [1, 2)");
  }
  if (values.size() != static_cast<std::size_t>(mesh->vertex_count())) {
    throw DomainError("w1p_norm: field size does not match mesh");
  }
  if (region && region->mesh.get() != mesh.get()) {
    throw DomainError("w1p_norm: region belongs to a different mesh");
  }

  double lp_acc = 0.0;
  double semi_acc = 0.0;
  const auto& verts = mesh->vertices();
  const auto& tris = mesh->triangles();
  const auto& areas = mesh->triangle_areas();
  for (std::size_t ti = 0; ti < tris.size(); ++ti) {
    const Triangle t = tris[ti];
    if (region && !(region->contains(t.a) && region->contains(t.b) && region->contains(t.c))) {
      continue;
    }
    const Vec3 f0 = values[static_cast<std::size_t>(t.a)];
    const Vec3 f1 = values[static_cast<std::size_t>(t.b)];
    const Vec3 f2 = values[static_cast<std::size_t>(t.c)];
    if (is_zero(f0) && is_zero(f1) && is_zero(f2)) continue;
    const double area = areas[ti];
    const double mean_abs_p =
        (std::pow(norm(f0), p) + std::pow(norm(f1), p) + std::pow(norm(f2), p)) / 3.0;
    lp_acc += area * mean_abs_p;
    const double gsq = triangle_grad_sq(verts[static_cast<std::size_t>(t.a)],
                                        verts[static_cast<std::size_t>(t.b)],
                                        verts[static_cast<std::size_t>(t.c)], f0, f1, f2);
    semi_acc += area * std::pow(gsq, p / 2.0);
  }

  NormReport rep;
  rep.p = p;
  rep.region = region ? "ball" : "all";
  rep.lp_part = std::pow(lp_acc, 1.0 / p);
  rep.seminorm_part = std::pow(semi_acc, 1.0 / p);
  rep.total = std::pow(lp_acc + semi_acc, 1.0 / p);
  return rep;
}

NormReport w1p_difference_report(const SphereMap& f, const SphereMap& g, double p,
                                 const VertexSet* region) {
  if (f.mesh.get() != g.mesh.get()) {
    throw DomainError("w1p_distance: maps live on different meshes");
  }
  std::vector<Vec3> diff(f.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    // Exactly zero where the maps agree bitwise.
    diff[i] = same_bits(f.values[i], g.values[i]) ? Vec3{0.0, 0.0, 0.0}
                                                  : f.values[i] - g.values[i];
  }
  return w1p_norm(f.mesh, diff, p, region);
}

double w1p_distance(const SphereMap& f, const SphereMap& g, double p, const VertexSet* region) {
  return w1p_difference_report(f, g, p, region).total;
}

DegreeResult degree(const SphereMap& f) {
  const auto& tris = f.mesh->triangles();
  DegreeResult res;
  double acc = 0.0;
  const double diam_cos = std::cos(M_PI / 2.0);
  for (const Triangle& t : tris) {
    const Vec3 fa = f.values[static_cast<std::size_t>(t.a)];
    const Vec3 fb = f.values[static_cast<std::size_t>(t.b)];
    const Vec3 fc = f.values[static_cast<std::size_t>(t.c)];
    acc += signed_spherical_area(fa, fb, fc);
    if (dot(fa, fb) < diam_cos || dot(fb, fc) < diam_cos || dot(fc, fa) < diam_cos) {
      res.diameter_warning = true;
    }
  }
  res.raw = acc / (4.0 * M_PI);
  const double nearest = std::round(res.raw);
  // Negated comparison so non-finite raw values also land here.
  if (!(std::fabs(res.raw - nearest) <= 0.1)) {
    throw ResolutionError("degree: raw value " + std::to_string(res.raw) +
                          " is not within 0.1 of an integer; map under-resolved");
  }
  res.value = static_cast<int>(nearest);
  return res;
}

double dirichlet_energy(const BallMap& u) {
  const BallMesh& mesh = *u.mesh;
  if (u.values.size() != static_cast<std::size_t>(mesh.node_count())) {
    throw DomainError("dirichlet_energy: field size does not match mesh");
  }
  const double h = mesh.spacing();
  const auto& nb = mesh.neighbors();
  const auto& vol = mesh.node_volumes();
  double acc = 0.0;
  for (int id = 0; id < mesh.node_count(); ++id) {
    const std::size_t si = static_cast<std::size_t>(id);
    double gsq = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const int m = nb[si][static_cast<std::size_t>(2 * axis)];
      const int p = nb[si][static_cast<std::size_t>(2 * axis + 1)];
      // Centered quadrature: mean of the squared half-step differences.
      // Exact for affine fields; one-sided where a neighbor is missing.
      double s = 0.0;
      int c = 0;
      if (p >= 0) {
        s += norm2(u.values[static_cast<std::size_t>(p)] - u.values[si]);
        ++c;
      }
      if (m >= 0) {
        s += norm2(u.values[si] - u.values[static_cast<std::size_t>(m)]);
        ++c;
      }
      if (c > 0) gsq += s / (c * h * h);
    }
    acc += vol[si] * gsq;
  }
  return acc;
}

double l2_distance(const BallMap& u, const BallMap& v) {
  if (u.mesh.get() != v.mesh.get()) {
    throw DomainError("l2_distance: maps live on different meshes");
  }
  const auto& vol = u.mesh->node_volumes();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    acc += vol[i] * norm2(u.values[i] - v.values[i]);
  }
  return std::sqrt(acc);
}

}  // namespace hmlab
