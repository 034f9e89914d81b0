#include "hmlab/homotopy.hpp"

#include <algorithm>
#include <cmath>

#include "hmlab/errors.hpp"

namespace hmlab {

namespace {

// Rodrigues rotation of p about the unit axis by angle.
Vec3 rotate_about(Vec3 axis, double angle, Vec3 p) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return c * p + s * cross(axis, p) + (1.0 - c) * dot(axis, p) * axis;
}

Vec3 blend_at(const SphereMap& m, const PointLocation& loc) {
  const Triangle t = m.mesh->triangles()[static_cast<std::size_t>(loc.triangle)];
  const Vec3 v = loc.weights[0] * m.values[static_cast<std::size_t>(t.a)] +
                 loc.weights[1] * m.values[static_cast<std::size_t>(t.b)] +
                 loc.weights[2] * m.values[static_cast<std::size_t>(t.c)];
  const double n = norm(v);
  if (n < 1e-12) return m.values[static_cast<std::size_t>(t.a)];
  return v / n;
}

double max_deviation_outside(const SphereMap& a, const SphereMap& b, Vec3 x, double r) {
  const auto& verts = a.mesh->vertices();
  double worst = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (unit_angle(verts[i], x) >= r) {
      worst = std::max(worst, norm(a.values[i] - b.values[i]));
    }
  }
  return worst;
}

}  // namespace

// ---------------------------------------------------------------------------
// CollapseMap

CollapseMap::CollapseMap(double r, Vec3 x) : r_(r), x_(x) {
  if (!(r > 0.0 && r < M_PI / 4.0)) {
    throw DomainError("collapse_map: radius must lie in (0, pi/4)");
  }
}

double CollapseMap::profile(double s) const {
  if (s >= r_) return s;
  const double half = r_ / 2.0;
  if (s <= half) return M_PI * smoothstep(s / half);
  return M_PI + (r_ - M_PI) * smoothstep((s - half) / half);
}

Vec3 CollapseMap::operator()(Vec3 v) const {
  const double s = unit_angle(v, x_);
  if (s >= r_) return v;
  return geodesic_point(x_, v, profile(s));
}

Vec3 CollapseMap::partial(Vec3 v, double sigma) const {
  if (sigma == 0.0) return v;
  const double s = unit_angle(v, x_);
  if (s >= r_) return v;
  const double g = (1.0 - sigma) * s + sigma * profile(s);
  return geodesic_point(x_, v, g);
}

CollapseMap collapse_map(double r, Vec3 x) { return CollapseMap(r, x); }

// ---------------------------------------------------------------------------
// RescaleMap

RescaleMap::RescaleMap(double t, double r, double tau, Vec3 x)
    : t_(t), r_(r), tau_(tau), x_(x) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("phi_rescale: t must lie in [0, 1]");
  if (!(r > 0.0 && r < M_PI / 4.0)) throw DomainError("phi_rescale: r must lie in (0, pi/4)");
  if (!(tau > 0.0 && tau <= r)) throw DomainError("phi_rescale: tau must lie in (0, r]");
  mid_ = (1.0 - t) * r + t * tau;
}

double RescaleMap::profile_inner(double s) const { return r_ * s / mid_; }

double RescaleMap::profile_outer(double s) const {
  return (r_ / (2.0 * r_ - mid_)) * (s - mid_) + r_;
}

double RescaleMap::profile(double s) const {
  if (s >= 2.0 * r_) return s;
  return s <= mid_ ? profile_inner(s) : profile_outer(s);
}

Vec3 RescaleMap::operator()(Vec3 v) const {
  if (t_ == 0.0) return v;
  const double s = unit_angle(v, x_);
  if (s >= 2.0 * r_) return v;
  return geodesic_point(x_, v, profile(s));
}

RescaleMap phi_rescale(double t, double r, double tau, Vec3 x) {
  return RescaleMap(t, r, tau, x);
}

// ---------------------------------------------------------------------------
// Generic homotopies

HomotopyPath make_geodesic_homotopy(const SphereMap& phi, const SphereMap& psi, int samples) {
  if (phi.mesh.get() != psi.mesh.get()) {
    throw DomainError("make_geodesic_homotopy: endpoint maps live on different meshes");
  }
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    if (!same_bits(phi.values[i], psi.values[i]) &&
        unit_angle(phi.values[i], psi.values[i]) > M_PI - 1e-6) {
      throw DegenerateInputError(
          "make_geodesic_homotopy: endpoints antipodal at a vertex; supply a homotopy");
    }
  }
  HomotopyPath g;
  g.mesh = phi.mesh;
  g.phi = phi;
  g.psi = psi;
  for (int k = 0; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    SphereMap m;
    m.mesh = phi.mesh;
    m.values.resize(phi.values.size());
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
      m.values[i] = slerp(phi.values[i], psi.values[i], t);
    }
    g.ts.push_back(t);
    g.maps.push_back(std::move(m));
  }
  return g;
}

HomotopyPath stationary_homotopy(const HomotopyPath& g, double r, Vec3 x) {
  if (g.maps.size() < 2) throw PreconditionError("stationary_homotopy: path needs >= 2 samples");
  const SphereMap& u = g.maps.front();
  const SphereMap& v = g.maps.back();
  if (max_deviation_outside(u, v, x, r) > 1e-12) {
    throw PreconditionError("stationary_homotopy: endpoints differ outside B_r(x)");
  }

  const SpherePtr mesh = u.mesh;
  const auto& verts = mesh->vertices();
  const std::size_t n = verts.size();

  // Already stationary: keep the path, snapping interior samples onto the
  // endpoint values outside B_r so downstream equality checks are exact.
  bool stationary = true;
  for (const SphereMap& m : g.maps) {
    if (max_deviation_outside(u, m, x, r) > 1e-12) {
      stationary = false;
      break;
    }
  }
  if (stationary) {
    HomotopyPath out = g;
    for (std::size_t k = 1; k + 1 < out.maps.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (unit_angle(verts[i], x) >= r) out.maps[k].values[i] = u.values[i];
      }
    }
    out.center = x;
    out.r = r;
    return out;
  }

  const CollapseMap psi_map(r, x);
  const Vec3 antipode = -1.0 * x;
  const Vec3 w0 = u.sample(antipode);
  const int kg = static_cast<int>(g.maps.size()) - 1;
  const int k1 = std::max(6, kg / 2);

  // Per-vertex geodesic distances; only s < r moves.
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = unit_angle(verts[i], x);

  HomotopyPath out;
  out.mesh = mesh;
  out.phi = u;
  out.psi = v;
  out.center = x;
  out.r = r;

  auto push = [&](double t, SphereMap m) {
    out.ts.push_back(t);
    out.maps.push_back(std::move(m));
  };

  // Stage A: u -> u o Psi through the partial collapse.
  for (int k = 0; k <= k1; ++k) {
    const double sigma = static_cast<double>(k) / k1;
    push(sigma / 3.0, compose(u, [&](Vec3 p) { return psi_map.partial(p, sigma); }));
  }

  // Stage B: (G_k o Psi) on the inner disk, a rotation collar on the annulus.
  for (int k = 1; k <= kg; ++k) {
    const SphereMap& gk = g.maps[static_cast<std::size_t>(k)];
    const Vec3 qk = gk.sample(antipode);
    const double theta = unit_angle(w0, qk);
    Vec3 axis{0.0, 0.0, 1.0};
    bool rotate = theta > 1e-15;
    if (rotate) {
      axis = theta > M_PI - 1e-9 ? any_orthogonal(w0) : normalized(cross(w0, qk));
    }
    SphereMap m;
    m.mesh = mesh;
    m.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = dist[i];
      if (s >= r) {
        m.values[i] = u.values[i];
      } else if (s <= r / 2.0) {
        m.values[i] = gk.sample(psi_map(verts[i]));
      } else {
        const Vec3 base = u.sample(psi_map(verts[i]));
        if (!rotate) {
          m.values[i] = base;
        } else {
          const double lam = smoothstep((r - s) / (r / 2.0));
          m.values[i] = normalized(rotate_about(axis, lam * theta, base));
        }
      }
    }
    push((1.0 + static_cast<double>(k) / kg) / 3.0, std::move(m));
  }

  // Stage C: v o Psi -> v.
  for (int k = 1; k <= k1; ++k) {
    const double sigma = 1.0 - static_cast<double>(k) / k1;
    SphereMap m = (k == k1) ? v : compose(v, [&](Vec3 p) { return psi_map.partial(p, sigma); });
    push((2.0 + static_cast<double>(k) / k1) / 3.0, std::move(m));
  }
  return out;
}

double choose_tau(const SphereMap& phi, const SphereMap& psi, const HomotopyPath& g, double r,
                  Vec3 x, double p) {
  if (!(p >= 1.0 && p < 2.0)) throw DomainError("choose_tau: p must lie in [1, 2)");
  const VertexSet region = geodesic_ball(phi.mesh, x, 2.0 * r);
  const double a = w1p_norm(phi, p, &region).total;
  const double b = w1p_norm(psi, p, &region).total;
  double c1 = 0.0;
  for (const SphereMap& m : g.maps) {
    c1 = std::max(c1, w1p_norm(m, p, &region).total);
  }
  if (c1 <= 0.0) {
    throw DegenerateInputError("choose_tau: homotopy norm bound C1 vanishes");
  }
  if (a + b <= 0.0) {
    throw DegenerateInputError("choose_tau: endpoint norms vanish on B_2r");
  }
  const double ratio = (a + b) / c1;
  const double candidate = std::pow(ratio, p / (2.0 - p));
  return std::min(r, candidate);
}

// ---------------------------------------------------------------------------
// HomotopyEval

HomotopyEval::HomotopyEval(SphereMap phi, SphereMap psi, HomotopyPath g, double r, Vec3 x,
                           double tau, double p)
    : phi_(std::move(phi)), psi_(std::move(psi)), g_(std::move(g)), r_(r), tau_(tau), p_(p), x_(x) {
  const auto& verts = phi_.mesh->vertices();
  const RescaleMap phi1(1.0, r_, tau_, x_);
  for (int i = 0; i < static_cast<int>(verts.size()); ++i) {
    const Vec3 v = verts[static_cast<std::size_t>(i)];
    if (unit_angle(v, x_) < 2.0 * r_) {
      local_.push_back(i);
      const Vec3 pt = phi1(v);
      phi1_points_.push_back(pt);
      if (same_bits(pt, v)) {
        PointLocation loc;
        loc.triangle = -1;  // vertex fixed by Phi_1, read values directly
        phi1_locs_.push_back(loc);
      } else {
        phi1_locs_.push_back(phi_.mesh->locate(pt));
      }
    }
  }
}

SphereMap HomotopyEval::at(double t) const {
  if (t <= 0.0) return phi_;
  if (t >= 1.0) return psi_;
  SphereMap out = phi_;

  if (t <= 1.0 / 3.0) {
    const RescaleMap rescale(3.0 * t, r_, tau_, x_);
    for (int v : local_) {
      const std::size_t i = static_cast<std::size_t>(v);
      const Vec3 p = rescale(phi_.mesh->vertices()[i]);
      if (!same_bits(p, phi_.mesh->vertices()[i])) out.values[i] = phi_.sample(p);
    }
  } else if (t < 2.0 / 3.0) {
    const double s_g = 3.0 * (t - 1.0 / 3.0);
    const int kg = static_cast<int>(g_.maps.size()) - 1;
    double pos = s_g * kg;
    int k0 = std::clamp(static_cast<int>(std::floor(pos)), 0, kg - 1);
    const double frac = pos - k0;
    const SphereMap& m0 = g_.maps[static_cast<std::size_t>(k0)];
    const SphereMap& m1 = g_.maps[static_cast<std::size_t>(k0 + 1)];
    for (std::size_t li = 0; li < local_.size(); ++li) {
      const std::size_t i = static_cast<std::size_t>(local_[li]);
      const PointLocation& loc = phi1_locs_[li];
      if (loc.triangle < 0) {
        out.values[i] = slerp(m0.values[i], m1.values[i], frac);
      } else {
        out.values[i] = slerp(blend_at(m0, loc), blend_at(m1, loc), frac);
      }
    }
  } else {
    const double s = std::clamp(1.0 - 3.0 * (t - 2.0 / 3.0), 0.0, 1.0);
    const RescaleMap rescale(s > 0.0 ? s : 0.0, r_, tau_, x_);
    for (int v : local_) {
      const std::size_t i = static_cast<std::size_t>(v);
      const Vec3 vert = phi_.mesh->vertices()[i];
      const Vec3 p = (s == 0.0) ? vert : rescale(vert);
      out.values[i] = same_bits(p, vert) ? psi_.values[i] : psi_.sample(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// build_homotopy

namespace {

SphereMap sanitize_outside(const SphereMap& phi, const SphereMap& psi, double r, Vec3 x) {
  SphereMap out = psi;
  const auto& verts = phi.mesh->vertices();
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (unit_angle(verts[i], x) >= r && !same_bits(phi.values[i], out.values[i])) {
      if (norm(phi.values[i] - out.values[i]) > 1e-12) {
        throw PreconditionError("build_homotopy: endpoint maps differ outside B_r(x)");
      }
      out.values[i] = phi.values[i];
    }
  }
  return out;
}

HomotopyPath prepare_g(const SphereMap& phi, const SphereMap& psi, const HomotopyPath* g,
                       double r, Vec3 x, int g_samples) {
  if (!g) return make_geodesic_homotopy(phi, psi, g_samples);
  if (g->maps.empty()) throw PreconditionError("build_homotopy: supplied homotopy is empty");
  // Radius -1 makes the deviation scan cover the whole sphere.
  if (max_deviation_outside(g->maps.front(), phi, x, -1.0) > 1e-9 ||
      max_deviation_outside(g->maps.back(), psi, x, -1.0) > 1e-9) {
    throw PreconditionError("build_homotopy: supplied homotopy does not connect phi to psi");
  }
  return stationary_homotopy(*g, r, x);
}

}  // namespace

HomotopyEval make_homotopy_eval(const SphereMap& phi, const SphereMap& psi, const HomotopyPath* g,
                                double r, Vec3 x, double p, int g_samples) {
  if (!(r > 0.0 && r < M_PI / 4.0)) throw DomainError("build_homotopy: r must lie in (0, pi/4)");
  if (!(p >= 1.0 && p < 2.0)) throw DomainError("build_homotopy: p must lie in [1, 2)");
  const SphereMap psi2 = sanitize_outside(phi, psi, r, x);
  HomotopyPath gstat = prepare_g(phi, psi2, g, r, x, g_samples);
  const double tau = choose_tau(phi, psi2, gstat, r, x, p);
  return HomotopyEval(phi, psi2, std::move(gstat), r, x, tau, p);
}

HomotopyPath build_homotopy(const SphereMap& phi, const SphereMap& psi, const HomotopyPath* g,
                            double r, Vec3 x, double p, const BuildOptions& opts) {
  if (opts.check_degree) {
    const DegreeResult d_phi = degree(phi);
    const DegreeResult d_psi = degree(psi);
    if (d_phi.value != d_psi.value) {
      throw TopologyError("build_homotopy: boundary maps have degrees " +
                          std::to_string(d_phi.value) + " and " + std::to_string(d_psi.value));
    }
  }
  HomotopyEval eval = make_homotopy_eval(phi, psi, g, r, x, p, opts.g_samples);

  HomotopyPath path;
  path.mesh = phi.mesh;
  path.phi = eval.phi();
  path.psi = eval.psi();
  path.center = x;
  path.r = r;
  path.tau = eval.tau();
  path.p = p;
  if (opts.check_degree) path.map_degree = degree(phi).value;

  const VertexSet region = geodesic_ball(phi.mesh, x, 2.0 * r);
  const int k = opts.samples;
  for (int i = 0; i <= k; ++i) {
    const double t = static_cast<double>(i) / k;
    path.ts.push_back(t);
    path.maps.push_back(eval.at(t));
    if (opts.attach_reports) {
      path.reports_global.push_back(w1p_difference_report(path.phi, path.maps.back(), p));
      path.reports_local.push_back(w1p_difference_report(path.phi, path.maps.back(), p, &region));
    }
  }
  return path;
}

EstimateReport verify_estimate(const HomotopyPath& path, double bound) {
  if (path.reports_global.empty()) {
    throw PreconditionError("verify_estimate: path has no norm reports");
  }
  const VertexSet region = geodesic_ball(path.mesh, path.center, 2.0 * path.r);
  EstimateReport rep;
  rep.bound = bound;
  rep.denominator = w1p_norm(path.phi, path.p, &region).total +
                    w1p_norm(path.psi, path.p, &region).total;
  for (std::size_t i = 0; i < path.reports_global.size(); ++i) {
    if (path.reports_global[i].total > rep.sup_norm) {
      rep.sup_norm = path.reports_global[i].total;
      rep.arg_sup_t = path.ts[i];
    }
    rep.sup_local = std::max(rep.sup_local, path.reports_local[i].total);
  }
  rep.observed_c = rep.denominator > 0.0 ? rep.sup_norm / rep.denominator : 0.0;
  rep.violated = rep.observed_c > bound;
  return rep;
}

EstimateReport streaming_estimate(const HomotopyEval& eval, int samples, double bound,
                                  const EstimateRowFn& row) {
  const VertexSet region = geodesic_ball(eval.phi().mesh, eval.center(), 2.0 * eval.r());
  EstimateReport rep;
  rep.bound = bound;
  rep.denominator = w1p_norm(eval.phi(), eval.p(), &region).total +
                    w1p_norm(eval.psi(), eval.p(), &region).total;
  for (int k = 0; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    const SphereMap m = eval.at(t);
    const NormReport global = w1p_difference_report(eval.phi(), m, eval.p());
    if (global.total > rep.sup_norm) {
      rep.sup_norm = global.total;
      rep.arg_sup_t = t;
    }
    if (row) {
      // localized norms are only needed for the per-sample report rows
      const NormReport local = w1p_difference_report(eval.phi(), m, eval.p(), &region);
      rep.sup_local = std::max(rep.sup_local, local.total);
      row(k, t, global, local);
    }
  }
  rep.observed_c = rep.denominator > 0.0 ? rep.sup_norm / rep.denominator : 0.0;
  rep.violated = rep.observed_c > bound;
  return rep;
}

// ---------------------------------------------------------------------------
// bubble_insert

SphereMap bubble_insert(const SphereMap& phi, Vec3 x, double r, double strength) {
  if (!(r > 0.0 && r < M_PI / 4.0)) throw DomainError("bubble_insert: r must lie in (0, pi/4)");
  if (!(strength >= 0.0 && strength <= 1.0)) {
    throw DomainError("bubble_insert: strength must lie in [0, 1]");
  }
  const auto& verts = phi.mesh->vertices();
  int inside = 0;
  for (const Vec3& v : verts) {
    if (unit_angle(v, x) < r) ++inside;
  }
  if (inside < 200) {
    throw ResolutionError("bubble_insert: ball B_r(x) holds " + std::to_string(inside) +
                          " vertices; need >= 200");
  }

  const ChartMap chart(x);
  const Vec3 q0 = phi.sample(x);
  const Vec3 b1 = any_orthogonal(q0);
  const Vec3 b2 = cross(q0, b1);
  const double half = r / 2.0;
  const double offset = r / 4.0;   // bubble centers at (+-offset, 0)
  const double support = r / 4.0;  // bubble disk radius

  SphereMap out = phi;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const double s = unit_angle(verts[i], x);
    if (s >= r) continue;
    Vec3 full;
    if (s >= half) {
      const double lam = smoothstep((r - s) / half);
      full = slerp(phi.values[i], q0, lam);
    } else {
      const auto y = chart.forward(verts[i]);
      full = q0;
      for (int sign = -1; sign <= 1; sign += 2) {
        const double dx = y[0] - sign * offset;
        const double dy = y[1];
        const double rho = std::hypot(dx, dy) / support;
        if (rho < 1.0) {
          const double alpha = std::atan2(dy, dx);
          // Positive bubble reverses the azimuth to preserve orientation.
          const double az = sign > 0 ? -alpha : alpha;
          const double colat = M_PI * (1.0 - smoothstep(rho));
          full = std::cos(colat) * q0 +
                 std::sin(colat) * (std::cos(az) * b1 + std::sin(az) * b2);
          break;
        }
      }
    }
    out.values[i] = slerp(phi.values[i], normalized(full), strength);
  }
  return out;
}

}  // namespace hmlab
