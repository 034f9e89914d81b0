#include "hmlab/ball_mesh.hpp"

#include <cmath>

#include "hmlab/errors.hpp"

namespace hmlab {

namespace {

// Fraction of the axis-aligned cube centered at p with side h that lies
// inside the unit ball, by midpoint subsampling.
double inside_fraction(Vec3 p, double h, int samples) {
  const double step = h / samples;
  const double off = -h / 2.0 + step / 2.0;
  int inside = 0;
  for (int a = 0; a < samples; ++a) {
    const double xs = p.x + off + a * step;
    for (int b = 0; b < samples; ++b) {
      const double ys = p.y + off + b * step;
      for (int c = 0; c < samples; ++c) {
        const double zs = p.z + off + c * step;
        if (xs * xs + ys * ys + zs * zs <= 1.0) ++inside;
      }
    }
  }
  return static_cast<double>(inside) / (samples * samples * samples);
}

}  // namespace

std::shared_ptr<const BallMesh> BallMesh::build_ball_grid(int resolution, SpherePtr trace_sphere) {
  if (resolution < 8) {
    throw ConfigError("build_ball_grid: resolution must be >= 8");
  }
  auto mesh = std::shared_ptr<BallMesh>(new BallMesh());
  const int n = resolution;
  mesh->n_ = n;
  const double h = 2.0 / (n - 1);
  mesh->h_ = h;

  // Symmetric form: coord(n-1-i) is the exact negation of coord(i).
  auto coord = [&](int i) { return static_cast<double>(2 * i - (n - 1)) / (n - 1); };
  auto inside = [&](int i, int j, int k) {
    if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n) return false;
    const double x = coord(i), y = coord(j), z = coord(k);
    return x * x + y * y + z * z <= 1.0 + 1e-12;
  };

  mesh->grid_.assign(static_cast<std::size_t>(n) * n * n, -1);
  auto gid = [&](int i, int j, int k) -> int& {
    return mesh->grid_[(static_cast<std::size_t>(i) * n + j) * n + k];
  };

  const int di[6] = {-1, 1, 0, 0, 0, 0};
  const int dj[6] = {0, 0, -1, 1, 0, 0};
  const int dk[6] = {0, 0, 0, 0, -1, 1};

  double best_center = 1e300;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        if (!inside(i, j, k)) continue;
        Vec3 p = {coord(i), coord(j), coord(k)};
        bool boundary = false;
        for (int d = 0; d < 6; ++d) {
          if (!inside(i + di[d], j + dj[d], k + dk[d])) {
            boundary = true;
            break;
          }
        }
        const int id = static_cast<int>(mesh->nodes_.size());
        gid(i, j, k) = id;
        const double r = norm(p);
        if (boundary) {
          if (r < 1e-12) throw ConfigError("build_ball_grid: degenerate boundary at origin");
          p = p / r;  // project onto S^2
        }
        mesh->nodes_.push_back(p);
        mesh->lattice_.push_back({i, j, k});
        mesh->is_boundary_.push_back(boundary ? 1 : 0);
        if (r < best_center) {
          best_center = r;
          mesh->center_node_ = id;
        }
      }
    }
  }

  const int count = static_cast<int>(mesh->nodes_.size());
  mesh->neighbors_.assign(static_cast<std::size_t>(count), {-1, -1, -1, -1, -1, -1});
  mesh->volumes_.assign(static_cast<std::size_t>(count), 0.0);
  const double margin = 1.0 - std::sqrt(3.0) * h / 2.0;
  for (int id = 0; id < count; ++id) {
    const auto [i, j, k] = mesh->lattice_[static_cast<std::size_t>(id)];
    for (int d = 0; d < 6; ++d) {
      if (inside(i + di[d], j + dj[d], k + dk[d])) {
        mesh->neighbors_[static_cast<std::size_t>(id)][static_cast<std::size_t>(d)] =
            gid(i + di[d], j + dj[d], k + dk[d]);
      }
    }
    if (mesh->is_boundary_[static_cast<std::size_t>(id)]) {
      mesh->boundary_nodes_.push_back(id);
    } else {
      mesh->interior_nodes_.push_back(id);
    }
    // Node volume: the lattice cube centered at the original lattice point,
    // clipped to the ball when it straddles the surface.
    const Vec3 lp = {coord(i), coord(j), coord(k)};
    const double r = norm(lp);
    double vol = h * h * h;
    if (r > margin) vol *= inside_fraction(lp, h, 8);
    mesh->volumes_[static_cast<std::size_t>(id)] = vol;
    mesh->total_volume_ += vol;
  }

  // Ball slivers under cubes of excluded lattice points go to the nearest
  // included node so node volumes tile the whole ball.
  const double reach = 1.0 + std::sqrt(3.0) * h / 2.0;
  for (int i = -1; i <= n; ++i) {
    for (int j = -1; j <= n; ++j) {
      for (int k = -1; k <= n; ++k) {
        if (inside(i, j, k)) continue;
        const Vec3 p = {coord(i), coord(j), coord(k)};
        if (norm(p) >= reach) continue;
        const double vol = h * h * h * inside_fraction(p, h, 8);
        if (vol <= 0.0) continue;
        int best = -1;
        double best_d = 1e300;
        for (int a = -1; a <= 1; ++a) {
          for (int b = -1; b <= 1; ++b) {
            for (int c = -1; c <= 1; ++c) {
              if (!inside(i + a, j + b, k + c)) continue;
              const double d = a * a + b * b + c * c;
              if (d < best_d) {
                best_d = d;
                best = gid(i + a, j + b, k + c);
              }
            }
          }
        }
        if (best >= 0) {
          mesh->volumes_[static_cast<std::size_t>(best)] += vol;
          mesh->total_volume_ += vol;
        }
      }
    }
  }

  if (trace_sphere) {
    mesh->trace_sphere_ = trace_sphere;
    mesh->trace_.assign(static_cast<std::size_t>(count), -1);
    const auto& verts = trace_sphere->vertices();
    for (int b : mesh->boundary_nodes_) {
      const Vec3 dir = mesh->nodes_[static_cast<std::size_t>(b)];
      const PointLocation loc = trace_sphere->locate(dir);
      const Triangle t = trace_sphere->triangles()[static_cast<std::size_t>(loc.triangle)];
      const int cand[3] = {t.a, t.b, t.c};
      int best = cand[0];
      double best_dot = -2.0;
      for (int v : cand) {
        const double d = dot(dir, verts[static_cast<std::size_t>(v)]);
        if (d > best_dot) {
          best_dot = d;
          best = v;
        }
      }
      mesh->trace_[static_cast<std::size_t>(b)] = best;
    }
  }
  return mesh;
}

int BallMesh::node_at(int i, int j, int k) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || k < 0 || k >= n_) return -1;
  return grid_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
}

}  // namespace hmlab
