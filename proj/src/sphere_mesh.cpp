#include "hmlab/sphere_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "hmlab/errors.hpp"

namespace hmlab {

Vec3 slerp(Vec3 a, Vec3 b, double t) {
  if (t == 0.0 || same_bits(a, b)) return a;
  if (t == 1.0) return b;
  const double theta = unit_angle(a, b);
  if (theta < 1e-14) return a;
  if (theta > M_PI - 1e-9) {
    // Antipodal: rotate a by t*pi in the plane spanned by a and a fixed
    // perpendicular direction.
    const Vec3 p = any_orthogonal(a);
    const double ang = t * M_PI;
    return normalized(std::cos(ang) * a + std::sin(ang) * p);
  }
  const double s = std::sin(theta);
  return normalized((std::sin((1.0 - t) * theta) / s) * a + (std::sin(t * theta) / s) * b);
}

Vec3 any_orthogonal(Vec3 a) {
  const double ax = std::fabs(a.x), ay = std::fabs(a.y), az = std::fabs(a.z);
  Vec3 axis;
  if (ax <= ay && ax <= az) {
    axis = {1.0, 0.0, 0.0};
  } else if (ay <= az) {
    axis = {0.0, 1.0, 0.0};
  } else {
    axis = {0.0, 0.0, 1.0};
  }
  return normalized(cross(a, axis));
}

namespace {

// Icosahedron with outward (counter-clockwise seen from outside) triangles.
void icosahedron(std::vector<Vec3>& verts, std::vector<Triangle>& tris) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const std::array<std::array<double, 3>, 12> raw = {{
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  }};
  verts.clear();
  for (const auto& r : raw) verts.push_back(normalized({r[0], r[1], r[2]}));
  tris = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
}

int midpoint(std::map<std::pair<int, int>, int>& cache, std::vector<Vec3>& verts, int i, int j) {
  const auto key = std::minmax(i, j);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int idx = static_cast<int>(verts.size());
  verts.push_back(normalized(verts[static_cast<std::size_t>(i)] + verts[static_cast<std::size_t>(j)]));
  cache.emplace(key, idx);
  return idx;
}

double tri_min_side(const std::vector<Vec3>& v, Triangle t, Vec3 q) {
  const Vec3& a = v[static_cast<std::size_t>(t.a)];
  const Vec3& b = v[static_cast<std::size_t>(t.b)];
  const Vec3& c = v[static_cast<std::size_t>(t.c)];
  return std::min({det3(a, b, q), det3(b, c, q), det3(c, a, q)});
}

}  // namespace

std::shared_ptr<const TriangulatedSphere> TriangulatedSphere::build_icosphere(int subdivision_level) {
  if (subdivision_level < 0 || subdivision_level > 8) {
    throw ConfigError("build_icosphere: subdivision level must be in [0, 8]");
  }
  auto mesh = std::shared_ptr<TriangulatedSphere>(new TriangulatedSphere());
  mesh->level_ = subdivision_level;

  std::vector<Vec3> verts;
  std::vector<Triangle> tris;
  icosahedron(verts, tris);
  mesh->level_triangles_.push_back(tris);

  std::map<std::pair<int, int>, int> cache;
  for (int l = 0; l < subdivision_level; ++l) {
    const auto& coarse = mesh->level_triangles_.back();
    std::vector<Triangle> fine;
    std::vector<std::array<int, 4>> children;
    fine.reserve(coarse.size() * 4);
    children.reserve(coarse.size());
    for (const Triangle& t : coarse) {
      const int ab = midpoint(cache, verts, t.a, t.b);
      const int bc = midpoint(cache, verts, t.b, t.c);
      const int ca = midpoint(cache, verts, t.c, t.a);
      const int base = static_cast<int>(fine.size());
      fine.push_back({t.a, ab, ca});
      fine.push_back({ab, t.b, bc});
      fine.push_back({ca, bc, t.c});
      fine.push_back({ab, bc, ca});
      children.push_back({base, base + 1, base + 2, base + 3});
    }
    mesh->level_children_.push_back(std::move(children));
    mesh->level_triangles_.push_back(std::move(fine));
  }

  mesh->vertices_ = std::move(verts);
  mesh->triangles_ = mesh->level_triangles_.back();

  const auto n = mesh->vertices_.size();
  mesh->vertex_areas_.assign(n, 0.0);
  mesh->vertex_neighbors_.assign(n, {});
  mesh->triangle_areas_.reserve(mesh->triangles_.size());
  double total = 0.0;
  double max_edge = 0.0;
  for (const Triangle& t : mesh->triangles_) {
    const Vec3& a = mesh->vertices_[static_cast<std::size_t>(t.a)];
    const Vec3& b = mesh->vertices_[static_cast<std::size_t>(t.b)];
    const Vec3& c = mesh->vertices_[static_cast<std::size_t>(t.c)];
    const double area = signed_spherical_area(a, b, c);
    mesh->triangle_areas_.push_back(area);
    total += area;
    const double third = area / 3.0;
    mesh->vertex_areas_[static_cast<std::size_t>(t.a)] += third;
    mesh->vertex_areas_[static_cast<std::size_t>(t.b)] += third;
    mesh->vertex_areas_[static_cast<std::size_t>(t.c)] += third;
    max_edge = std::max({max_edge, unit_angle(a, b), unit_angle(b, c), unit_angle(c, a)});
    auto link = [&](int i, int j) {
      auto& nb = mesh->vertex_neighbors_[static_cast<std::size_t>(i)];
      if (std::find(nb.begin(), nb.end(), j) == nb.end()) nb.push_back(j);
    };
    link(t.a, t.b); link(t.b, t.a);
    link(t.b, t.c); link(t.c, t.b);
    link(t.c, t.a); link(t.a, t.c);
  }
  mesh->total_area_ = total;
  mesh->mesh_size_ = max_edge;
  return mesh;
}

PointLocation TriangulatedSphere::locate(Vec3 q) const {
  // Pick the best base triangle, then descend picking the best child.
  int best = 0;
  double best_score = -1e300;
  const auto& base = level_triangles_[0];
  for (int i = 0; i < static_cast<int>(base.size()); ++i) {
    const double s = tri_min_side(vertices_, base[static_cast<std::size_t>(i)], q);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  int tri = best;
  for (std::size_t l = 0; l < level_children_.size(); ++l) {
    const auto& kids = level_children_[l][static_cast<std::size_t>(tri)];
    int best_kid = kids[0];
    double score = -1e300;
    for (int k : kids) {
      const double s =
          tri_min_side(vertices_, level_triangles_[l + 1][static_cast<std::size_t>(k)], q);
      if (s > score) {
        score = s;
        best_kid = k;
      }
    }
    tri = best_kid;
  }

  PointLocation loc;
  loc.triangle = tri;
  const Triangle t = triangles_[static_cast<std::size_t>(tri)];
  const Vec3& a = vertices_[static_cast<std::size_t>(t.a)];
  const Vec3& b = vertices_[static_cast<std::size_t>(t.b)];
  const Vec3& c = vertices_[static_cast<std::size_t>(t.c)];
  // Gnomonic barycentric weights: solve [a b c] w = q by Cramer's rule.
  const double d = det3(a, b, c);
  double wa = det3(q, b, c) / d;
  double wb = det3(a, q, c) / d;
  double wc = det3(a, b, q) / d;
  wa = std::max(wa, 0.0);
  wb = std::max(wb, 0.0);
  wc = std::max(wc, 0.0);
  const double s = wa + wb + wc;
  loc.weights = {wa / s, wb / s, wc / s};
  return loc;
}

double VertexSet::area() const {
  double a = 0.0;
  for (int v : indices) a += mesh->vertex_areas()[static_cast<std::size_t>(v)];
  return a;
}

VertexSet geodesic_ball(const SpherePtr& mesh, Vec3 x, double rho) {
  if (!(rho > 0.0 && rho < M_PI)) {
    throw DomainError("geodesic_ball: radius must lie in (0, pi)");
  }
  VertexSet set;
  set.mesh = mesh;
  set.center = x;
  set.radius = rho;
  set.member.assign(static_cast<std::size_t>(mesh->vertex_count()), 0);
  const auto& verts = mesh->vertices();
  for (int i = 0; i < mesh->vertex_count(); ++i) {
    if (unit_angle(verts[static_cast<std::size_t>(i)], x) < rho) {
      set.indices.push_back(i);
      set.member[static_cast<std::size_t>(i)] = 1;
    }
  }
  return set;
}

}  // namespace hmlab
