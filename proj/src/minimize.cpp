#include "hmlab/minimize.hpp"

#include <algorithm>
#include <cmath>

#include "hmlab/errors.hpp"
#include "hmlab/norms.hpp"

namespace hmlab {

namespace {

void require_trace(const BallMesh& mesh, const SphereMap& phi) {
  if (!mesh.trace_sphere() || mesh.trace_sphere().get() != phi.mesh.get()) {
    throw DomainError("ball mesh is not paired with the boundary map's sphere mesh");
  }
}

void impose_boundary(BallMap& u, const SphereMap& phi) {
  const auto& trace = u.mesh->trace_map();
  for (int b : u.mesh->boundary_nodes()) {
    u.values[static_cast<std::size_t>(b)] = phi.values[static_cast<std::size_t>(trace[static_cast<std::size_t>(b)])];
  }
}

// Lattice Dirichlet energy: h * sum over lattice edges |u_a - u_b|^2.
double edge_energy(const BallMap& u) {
  const BallMesh& mesh = *u.mesh;
  const auto& nb = mesh.neighbors();
  const double h = mesh.spacing();
  double acc = 0.0;
  for (int id = 0; id < mesh.node_count(); ++id) {
    const std::size_t i = static_cast<std::size_t>(id);
    // +x, +y, +z neighbors only: each edge counted once.
    for (int d : {1, 3, 5}) {
      const int j = nb[i][static_cast<std::size_t>(d)];
      if (j >= 0) acc += norm2(u.values[i] - u.values[static_cast<std::size_t>(j)]);
    }
  }
  return h * acc;
}

BallMap reflected_z(const BallMap& m) {
  BallMap out = m;
  for (Vec3& v : out.values) v.z = -v.z;
  return out;
}

}  // namespace

BallMap radial_extension(const SphereMap& phi, const BallPtr& mesh) {
  require_trace(*mesh, phi);
  BallMap u;
  u.mesh = mesh;
  u.values.resize(static_cast<std::size_t>(mesh->node_count()));
  const double tiny = mesh->spacing() / 4.0;
  int origin = -1;
  for (int id = 0; id < mesh->node_count(); ++id) {
    const std::size_t i = static_cast<std::size_t>(id);
    if (mesh->is_boundary()[i]) continue;
    const Vec3 p = mesh->nodes()[i];
    const double r = norm(p);
    if (r < tiny) {
      origin = id;
      continue;
    }
    u.values[i] = phi.sample(p / r);
  }
  impose_boundary(u, phi);
  if (origin >= 0) {
    // The extension is undefined at the origin; copy a neighbor.
    for (int j : mesh->neighbors()[static_cast<std::size_t>(origin)]) {
      if (j >= 0) {
        u.values[static_cast<std::size_t>(origin)] = u.values[static_cast<std::size_t>(j)];
        break;
      }
    }
  }
  return u;
}

MinimizeResult minimize(const BallPtr& mesh, const SphereMap& phi, const MinimizeOptions& opts) {
  require_trace(*mesh, phi);
  if (opts.max_iterations < 1) throw ConfigError("minimize: max_iterations must be >= 1");
  if (!(opts.tolerance >= 0.0)) throw ConfigError("minimize: tolerance must be >= 0");

  MinimizeResult res;
  switch (opts.init) {
    case MinimizeOptions::Init::Radial:
      res.u = radial_extension(phi, mesh);
      break;
    case MinimizeOptions::Init::Constant: {
      res.u.mesh = mesh;
      res.u.values.assign(static_cast<std::size_t>(mesh->node_count()),
                          normalized(opts.constant_value));
      break;
    }
    case MinimizeOptions::Init::Supplied:
    case MinimizeOptions::Init::Mirrored: {
      if (!opts.supplied || opts.supplied->mesh.get() != mesh.get()) {
        throw DomainError("minimize: supplied initialization missing or on a different mesh");
      }
      res.u = opts.init == MinimizeOptions::Init::Supplied ? *opts.supplied
                                                           : reflected_z(*opts.supplied);
      break;
    }
  }
  impose_boundary(res.u, phi);

  const auto& nb = mesh->neighbors();
  const auto& lattice = mesh->lattice_coords();

  // Red-black coloring by lattice parity; fixed ascending order per color.
  std::vector<int> red, black;
  for (int id : mesh->interior_nodes()) {
    const auto& c = lattice[static_cast<std::size_t>(id)];
    ((c[0] + c[1] + c[2]) % 2 == 0 ? red : black).push_back(id);
  }

  auto sweep_color = [&](const std::vector<int>& color) {
    for (int id : color) {
      const std::size_t i = static_cast<std::size_t>(id);
      Vec3 s{0.0, 0.0, 0.0};
      for (int j : nb[i]) {
        if (j >= 0) s += res.u.values[static_cast<std::size_t>(j)];
      }
      const double n = norm(s);
      if (n > 1e-14) res.u.values[i] = s / n;
    }
  };

  double prev = edge_energy(res.u);
  if (opts.record_trace) res.energy_trace.push_back(prev);
  res.converged = false;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    sweep_color(red);
    sweep_color(black);
    const double cur = edge_energy(res.u);
    if (opts.record_trace) res.energy_trace.push_back(cur);
    if (cur > prev + 1e-12 * std::max(1.0, prev)) res.monotone = false;
    const double rel = (prev - cur) / std::max(prev, 1e-300);
    prev = cur;
    if (opts.residual_target > 0.0) {
      if ((it + 1) % opts.residual_check_every == 0 &&
          el_residual(res.u) <= opts.residual_target) {
        res.converged = true;
        ++it;
        break;
      }
    } else if (rel < opts.tolerance) {
      res.converged = true;
      ++it;
      break;
    }
  }
  res.iterations = it;
  res.energy = prev;
  res.quad_energy = dirichlet_energy(res.u);
  return res;
}

double el_residual(const BallMap& u, const SingularityReport* exclude, int exclusion_cells) {
  const BallMesh& mesh = *u.mesh;
  const double h = mesh.spacing();
  const auto& nb = mesh.neighbors();
  const auto& lattice = mesh.lattice_coords();
  const auto& vol = mesh.node_volumes();

  auto near_singularity = [&](const std::array<int, 3>& c) {
    if (!exclude) return false;
    for (const Singularity& s : exclude->items) {
      const int d = std::max({std::abs(c[0] - s.lattice[0]), std::abs(c[1] - s.lattice[1]),
                              std::abs(c[2] - s.lattice[2])});
      if (d <= exclusion_cells) return true;
    }
    return false;
  };

  double acc = 0.0;
  for (int id : mesh.interior_nodes()) {
    const std::size_t i = static_cast<std::size_t>(id);
    if (near_singularity(lattice[i])) continue;
    Vec3 lap{0.0, 0.0, 0.0};
    double grad_sq = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const Vec3 um = u.values[static_cast<std::size_t>(nb[i][static_cast<std::size_t>(2 * axis)])];
      const Vec3 up = u.values[static_cast<std::size_t>(nb[i][static_cast<std::size_t>(2 * axis + 1)])];
      lap += up + um;
      grad_sq += norm2((up - um) / (2.0 * h));
    }
    lap = (lap - 6.0 * u.values[i]) / (h * h);
    const Vec3 r = -1.0 * lap - grad_sq * u.values[i];
    const Vec3 rt = r - dot(r, u.values[i]) * u.values[i];
    acc += vol[i] * norm2(rt);
  }
  return std::sqrt(acc);
}

namespace {

// Winding number of u over the lattice cube surface of radius `shell` around
// node (i0,j0,k0); false when the shell leaves the mesh.
bool shell_winding(const BallMap& u, int i0, int j0, int k0, int shell, double& winding) {
  const BallMesh& mesh = *u.mesh;
  const int c = shell;
  auto value_at = [&](int i, int j, int k, Vec3& out) {
    const int id = mesh.node_at(i, j, k);
    if (id < 0) return false;
    out = u.values[static_cast<std::size_t>(id)];
    return true;
  };

  double acc = 0.0;
  // Faces perpendicular to each axis; (s,t) parametrize the face lattice.
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = -1; side <= 1; side += 2) {
      for (int a = -c; a < c; ++a) {
        for (int b = -c; b < c; ++b) {
          int ia[3], ib[3], ic_[3], id_[3];
          auto set = [&](int* arr, int s, int t) {
            arr[axis] = side * c;
            arr[(axis + 1) % 3] = s;
            arr[(axis + 2) % 3] = t;
          };
          set(ia, a, b);
          set(ib, a + 1, b);
          set(ic_, a + 1, b + 1);
          set(id_, a, b + 1);
          Vec3 va, vb, vc, vd;
          if (!value_at(i0 + ia[0], j0 + ia[1], k0 + ia[2], va) ||
              !value_at(i0 + ib[0], j0 + ib[1], k0 + ib[2], vb) ||
              !value_at(i0 + ic_[0], j0 + ic_[1], k0 + ic_[2], vc) ||
              !value_at(i0 + id_[0], j0 + id_[1], k0 + id_[2], vd)) {
            return false;
          }
          // (e_{axis+1}, e_{axis+2}, e_axis) is right-handed, so the (a,b)
          // order faces outward on the +side and inward on the -side.
          double quad = signed_spherical_area(va, vb, vc) + signed_spherical_area(va, vc, vd);
          if (side < 0) quad = -quad;
          acc += quad;
        }
      }
    }
  }
  winding = acc / (4.0 * M_PI);
  return true;
}

}  // namespace

SingularityReport find_singularities(const BallMap& u, int shell, int merge_cells) {
  const BallMesh& mesh = *u.mesh;
  SingularityReport rep;
  rep.shell = shell;

  struct Candidate {
    int node;
    std::array<int, 3> lattice;
    double winding;
  };
  std::vector<Candidate> cands;
  for (int id : mesh.interior_nodes()) {
    const auto& c = mesh.lattice_coords()[static_cast<std::size_t>(id)];
    double w = 0.0;
    if (!shell_winding(u, c[0], c[1], c[2], shell, w)) {
      ++rep.skipped_nodes;
      continue;
    }
    if (std::fabs(w) > 0.5) cands.push_back({id, c, w});
  }

  // Greedy clustering by Chebyshev distance.
  std::vector<char> used(cands.size(), 0);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> cluster{i};
    used[i] = 1;
    for (std::size_t pos = 0; pos < cluster.size(); ++pos) {
      const auto& a = cands[cluster[pos]].lattice;
      for (std::size_t j = 0; j < cands.size(); ++j) {
        if (used[j]) continue;
        const auto& b = cands[j].lattice;
        const int d = std::max({std::abs(a[0] - b[0]), std::abs(a[1] - b[1]),
                                std::abs(a[2] - b[2])});
        if (d <= merge_cells) {
          used[j] = 1;
          cluster.push_back(j);
        }
      }
    }
    // Representative: candidate nearest the cluster centroid.
    double ci = 0, cj = 0, ck = 0;
    for (std::size_t idx : cluster) {
      ci += cands[idx].lattice[0];
      cj += cands[idx].lattice[1];
      ck += cands[idx].lattice[2];
    }
    ci /= cluster.size();
    cj /= cluster.size();
    ck /= cluster.size();
    std::size_t best = cluster[0];
    double best_d = 1e300;
    for (std::size_t idx : cluster) {
      const auto& l = cands[idx].lattice;
      const double d = (l[0] - ci) * (l[0] - ci) + (l[1] - cj) * (l[1] - cj) +
                       (l[2] - ck) * (l[2] - ck);
      if (d < best_d) {
        best_d = d;
        best = idx;
      }
    }
    const Candidate& rep_cand = cands[best];
    // A wider shell around the representative gives the cleanest degree.
    double w = rep_cand.winding;
    double w2 = 0.0;
    if (shell_winding(u, rep_cand.lattice[0], rep_cand.lattice[1], rep_cand.lattice[2],
                      shell + 1, w2) &&
        std::fabs(w2) > 0.5) {
      w = w2;
    }
    const int deg = static_cast<int>(std::lround(w));
    if (deg == 0) continue;
    Singularity s;
    s.position = mesh.nodes()[static_cast<std::size_t>(rep_cand.node)];
    s.lattice = rep_cand.lattice;
    s.local_degree = deg;
    rep.items.push_back(s);
  }

  rep.boundary_clearance = -1.0;
  for (const Singularity& s : rep.items) {
    const double cl = 1.0 - norm(s.position);
    if (rep.boundary_clearance < 0.0 || cl < rep.boundary_clearance) {
      rep.boundary_clearance = cl;
    }
  }
  return rep;
}

namespace {

struct CountedMinimizer {
  MinimizeResult run;
  SingularityReport sing;
  int effective_count = 0;
};

// Runs the configured initializations and counts singularities on every
// converged run inside the energy window of the best one.
CountedMinimizer count_at(const HomotopyEval& homotopy, const BallPtr& mesh,
                          const MinimizeOptions& base, const TransitionOptions& topts, double t,
                          const BallMap* warm_lo, const BallMap* warm_hi) {
  const SphereMap datum = homotopy.at(t);
  std::vector<MinimizeResult> runs;

  MinimizeOptions o = base;
  o.init = MinimizeOptions::Init::Radial;
  runs.push_back(minimize(mesh, datum, o));
  if (warm_lo) {
    o.init = MinimizeOptions::Init::Supplied;
    o.supplied = warm_lo;
    runs.push_back(minimize(mesh, datum, o));
  }
  if (warm_hi) {
    o.init = MinimizeOptions::Init::Supplied;
    o.supplied = warm_hi;
    runs.push_back(minimize(mesh, datum, o));
  }
  // Mirrored probe of the best run so far.
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (runs[i].energy < runs[best].energy) best = i;
  }
  o.init = MinimizeOptions::Init::Mirrored;
  o.supplied = &runs[best].u;
  runs.push_back(minimize(mesh, datum, o));

  double e_min = 1e300;
  for (const auto& r : runs) {
    if (r.converged) e_min = std::min(e_min, r.energy);
  }
  if (e_min == 1e300) {
    // Nothing converged; fall back to the best energy.
    for (const auto& r : runs) e_min = std::min(e_min, r.energy);
  }

  CountedMinimizer out;
  int count = 0;
  std::size_t pick = 0;
  double pick_energy = 1e300;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    if (r.energy <= e_min * (1.0 + topts.energy_window)) {
      const SingularityReport s = find_singularities(r.u, topts.shell, topts.merge_cells);
      count = std::max(count, s.count());
      if (r.energy < pick_energy) {
        pick_energy = r.energy;
        pick = i;
      }
    }
  }
  out.run = std::move(runs[pick]);
  out.sing = find_singularities(out.run.u, topts.shell, topts.merge_cells);
  out.effective_count = count;
  return out;
}

}  // namespace

TransitionResult bisect_transition(const HomotopyEval& homotopy, const BallPtr& mesh,
                                   const MinimizeOptions& opts, int max_singularities,
                                   const TransitionOptions& topts) {
  TransitionResult res;
  CountedMinimizer lo = count_at(homotopy, mesh, opts, topts, 0.0, nullptr, nullptr);
  CountedMinimizer hi = count_at(homotopy, mesh, opts, topts, 1.0, &lo.run.u, nullptr);
  res.sampled.push_back({0.0, lo.effective_count});
  res.sampled.push_back({1.0, hi.effective_count});

  if (lo.effective_count > max_singularities || hi.effective_count <= max_singularities) {
    res.conclusive = false;
    res.count_below = lo.effective_count;
    res.count_above = hi.effective_count;
    res.map_below = lo.run.u;
    res.map_above = hi.run.u;
    res.sing_below = lo.sing;
    res.sing_above = hi.sing;
    res.energy_below = lo.run.quad_energy;
    res.energy_above = hi.run.quad_energy;
    return res;
  }

  double t_lo = 0.0, t_hi = 1.0;
  while (t_hi - t_lo > topts.bracket_width) {
    const double mid = 0.5 * (t_lo + t_hi);
    CountedMinimizer m = count_at(homotopy, mesh, opts, topts, mid, &lo.run.u, &hi.run.u);
    res.sampled.push_back({mid, m.effective_count});
    if (m.effective_count <= max_singularities) {
      t_lo = mid;
      lo = std::move(m);
    } else {
      t_hi = mid;
      hi = std::move(m);
    }
  }

  res.conclusive = true;
  res.t_lo = t_lo;
  res.t_hi = t_hi;
  res.t_star = 0.5 * (t_lo + t_hi);
  res.width = t_hi - t_lo;
  res.count_below = lo.effective_count;
  res.count_above = hi.effective_count;
  res.energy_below = lo.run.quad_energy;
  res.energy_above = hi.run.quad_energy;
  res.map_below = lo.run.u;
  res.map_above = hi.run.u;
  res.sing_below = lo.sing;
  res.sing_above = hi.sing;
  std::sort(res.sampled.begin(), res.sampled.end());
  return res;
}

}  // namespace hmlab
