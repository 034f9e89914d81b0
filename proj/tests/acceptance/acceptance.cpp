// Acceptance suite: one criterion per numbered run, each printing a single
// PASS/FAIL line with its key measurements and wall time.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hmlab/ball_mesh.hpp"
#include "hmlab/experiments.hpp"
#include "hmlab/homotopy.hpp"
#include "hmlab/io.hpp"
#include "hmlab/maps.hpp"
#include "hmlab/minimize.hpp"
#include "hmlab/norms.hpp"
#include "hmlab/sphere_mesh.hpp"

using namespace hmlab;

namespace {

constexpr double kHedgehogEnergy = 8.0 * M_PI;
constexpr unsigned kFamilySeed = 20240601;
constexpr double kEstimateBound = 20.0;

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

BallMap analytic_hedgehog(const BallPtr& mesh) {
  BallMap u;
  u.mesh = mesh;
  u.values.resize(mesh->node_count());
  const double tiny = mesh->spacing() / 4.0;
  for (int i = 0; i < mesh->node_count(); ++i) {
    const Vec3 p = mesh->nodes()[i];
    const double r = norm(p);
    u.values[i] = r < tiny ? Vec3{1.0, 0.0, 0.0} : p / r;
  }
  return u;
}

std::string out_dir() {
  std::filesystem::create_directories("acceptance-out");
  return "acceptance-out";
}

// 1. Degree exactness at subdivision level 5.
void criterion_1(Checker& c) {
  auto mesh = TriangulatedSphere::build_icosphere(5);
  const std::vector<std::pair<std::string, int>> cases = {
      {"identity", 1}, {"constant", 0}, {"antipodal", -1}, {"wrap2", 2}, {"wrap3", 3}};
  for (const auto& [name, expected] : cases) {
    const DegreeResult d = degree(make_named_map(mesh, name));
    c.require(d.value == expected, name + " degree " + std::to_string(d.value));
    c.require(std::fabs(d.raw - expected) < 0.02, name + " raw " + std::to_string(d.raw));
  }
  c.detail << " five reference maps at level 5";
}

// 2. Hedgehog energy: 3% of 8*pi at N = 48, error decreasing over N.
void criterion_2(Checker& c) {
  double prev = 1e300;
  double final_err = 0.0;
  for (int n : {16, 32, 48}) {
    const double e = dirichlet_energy(analytic_hedgehog(BallMesh::build_ball_grid(n)));
    const double err = std::fabs(e - kHedgehogEnergy);
    c.require(err < prev, "error not decreasing at N=" + std::to_string(n));
    prev = err;
    final_err = err;
  }
  c.require(final_err < 0.03 * kHedgehogEnergy, "N=48 error above 3%");
  c.detail << " N=48 relative error " << final_err / kHedgehogEnergy;
}

// 3. Rescaling map structure over 50 random parameter triples.
void criterion_3(Checker& c) {
  auto mesh = TriangulatedSphere::build_icosphere(4);
  const Vec3 x = normalized(Vec3{0.3, -0.4, 0.87});
  const auto seeds = experiments::random_centers(150, kFamilySeed + 3);
  for (int i = 0; i < 50; ++i) {
    // derive (t, r, tau) from the deterministic stream
    const double t = 0.5 * (seeds[3 * i].x + 1.0);
    const double r = 0.05 + 0.35 * (seeds[3 * i + 1].y + 1.0);
    const double tau = r * (0.05 + 0.475 * (seeds[3 * i + 2].z + 1.0));
    const RescaleMap m(t, r, tau, x);
    const double mid = (1.0 - t) * r + t * tau;
    c.require(std::fabs(m.profile_inner(mid) - m.profile_outer(mid)) < 1e-12,
              "branch mismatch at sample " + std::to_string(i));
    double prevp = -1e-9;
    bool increasing = true;
    for (int k = 0; k <= 60; ++k) {
      const double s = 2.0 * r * k / 60.0;
      const double v = m.profile(s);
      increasing = increasing && v > prevp;
      prevp = v;
    }
    c.require(increasing, "profile not strictly increasing at sample " + std::to_string(i));

    const RescaleMap id0(0.0, r, tau, x);
    for (int vi = 0; vi < mesh->vertex_count(); vi += 37) {
      const Vec3 v = mesh->vertices()[vi];
      c.require(same_bits(id0(v), v), "t=0 not identity");
      if (unit_angle(v, x) >= 2.0 * r) {
        c.require(same_bits(m(v), v), "outside B_2r not fixed");
      }
    }
  }
  c.detail << " 50 parameter triples";
}

// 4. Homotopy contract for 10 dipole-perturbed pairs.
void criterion_4(Checker& c) {
  auto mesh = TriangulatedSphere::build_icosphere(6);
  const SphereMap phi = make_identity_map(mesh);
  const auto centers = experiments::random_centers(10, kFamilySeed);
  const double r = 0.3;
  BuildOptions opts;
  opts.samples = 30;
  for (int ci = 0; ci < 10; ++ci) {
    const Vec3 x = centers[ci];
    const SphereMap psi = bubble_insert(phi, x, r, 1.0);
    const HomotopyPath path = build_homotopy(phi, psi, nullptr, r, x, 1.0, opts);
    c.require(identical(path.maps.front(), phi), "H_0 != phi at center " + std::to_string(ci));
    c.require(identical(path.maps.back(), psi), "H_1 != psi at center " + std::to_string(ci));
    bool stationary = true;
    for (const SphereMap& m : path.maps) {
      for (int vi = 0; vi < mesh->vertex_count(); ++vi) {
        if (unit_angle(mesh->vertices()[vi], x) >= 2.0 * r &&
            !same_bits(m.values[vi], phi.values[vi])) {
          stationary = false;
        }
      }
    }
    c.require(stationary, "not stationary outside B_2r at center " + std::to_string(ci));
    bool constant_degree = true;
    for (const SphereMap& m : path.maps) {
      constant_degree = constant_degree && degree(m).value == 1;
    }
    c.require(constant_degree, "degree drift at center " + std::to_string(ci));
  }
  c.detail << " 10 pairs, r = " << r << ", K = " << opts.samples;
}

experiments::EstimateFamilyConfig family_config() {
  experiments::EstimateFamilyConfig cfg;
  cfg.level = 7;
  cfg.radii = {0.4, 0.2, 0.1};
  cfg.centers = 10;
  cfg.strengths = {0.5, 1.0};
  cfg.p = 1.0;
  cfg.samples = 30;
  cfg.seed = kFamilySeed;
  cfg.bound = kEstimateBound;
  return cfg;
}

// 5. Homotopy estimate: observed constant bounded by 20 over the family.
void criterion_5(Checker& c) {
  const experiments::EstimateFamilyResult res = run_estimate_family(family_config());
  write_text_file(out_dir() + "/estimate_family.csv", res.csv);
  c.require(res.rows.size() == 60, "family size");
  c.require(res.max_observed_c <= kEstimateBound, "observed constant above 20");
  c.detail << " max observed C " << res.max_observed_c << " over " << res.rows.size()
           << " pairs";
}

// 6. Smallness: sup norms decrease with r; at r = 0.05 below 10% of |phi|.
void criterion_6(Checker& c) {
  experiments::SmallnessConfig cfg;
  cfg.level = 8;
  cfg.radii = {0.4, 0.2, 0.1, 0.05};
  cfg.centers = 3;
  cfg.strength = 1.0;
  cfg.p = 1.0;
  cfg.samples = 30;
  cfg.seed = kFamilySeed;
  const experiments::SmallnessResult res = run_smallness_sweep(cfg);
  write_text_file(out_dir() + "/smallness.csv", res.csv);
  c.require(res.monotone, "sup norm not monotone in r");
  c.require(res.worst_final < 0.1 * res.base_norm, "r = 0.05 sup norm above 10% of base");
  c.detail << " worst sup at r=0.05: " << res.worst_final << " vs 0.1*|phi| = "
           << 0.1 * res.base_norm;
}

// 7. Two minimizers for the equatorial datum.
void criterion_7(Checker& c) {
  auto sphere = TriangulatedSphere::build_icosphere(5);
  auto ball = BallMesh::build_ball_grid(32, sphere);
  const SphereMap eq = make_equatorial_map(sphere);
  MinimizeOptions o;
  o.init = MinimizeOptions::Init::Constant;
  o.constant_value = {0.0, 0.0, 1.0};
  const MinimizeResult north = minimize(ball, eq, o);
  o.constant_value = {0.0, 0.0, -1.0};
  const MinimizeResult south = minimize(ball, eq, o);
  c.require(north.converged && south.converged, "runs did not converge");
  const double rel = std::fabs(north.quad_energy - south.quad_energy) /
                     std::max(north.quad_energy, 1e-300);
  c.require(rel < 0.01, "energy difference above 1%");
  const double dist = l2_distance(north.u, south.u);
  c.require(dist >= 0.5, "L2 distance below 0.5");
  BallMap mirrored = north.u;
  for (Vec3& v : mirrored.values) v.z = -v.z;
  c.require(dirichlet_energy(mirrored) == dirichlet_energy(north.u),
            "reflection changed the energy");
  c.detail << " energies " << north.quad_energy << " / " << south.quad_energy << ", L2 "
           << dist;
}

experiments::TransitionConfig transition_config() {
  experiments::TransitionConfig cfg;  // pole-centered dipole defaults
  return cfg;
}

// 8. Transition pipeline: 0 -> 2 singularities with a tight bracket.
void criterion_8(Checker& c) {
  const experiments::TransitionConfig cfg = transition_config();
  const experiments::TransitionRunResult res = experiments::run_transition(cfg);
  write_text_file(out_dir() + "/transition_counts.csv", res.counts_csv);
  write_text_file(out_dir() + "/transition.txt", res.transition_block);
  c.require(res.transition.conclusive, "no conclusive crossing");
  c.require(res.transition.t_star > 0.0 && res.transition.t_star < 1.0, "t* outside (0,1)");
  c.require(res.transition.width <= cfg.bracket_width + 1e-15, "bracket too wide");
  c.require(res.transition.count_below == 0, "count below not 0");
  c.require(res.transition.count_above == 2, "count above not 2");
  if (res.transition.sing_above.count() == 2) {
    const int d0 = res.transition.sing_above.items[0].local_degree;
    const int d1 = res.transition.sing_above.items[1].local_degree;
    c.require(d0 + d1 == 0 && std::abs(d0) == 1, "degrees not +1/-1");
  } else {
    c.require(false, "above-end report does not hold two singularities");
  }
  c.require(res.norm_at_tstar < cfg.eps, "norm at t* above configured eps");
  c.detail << " t* = " << res.transition.t_star << ", width " << res.transition.width
           << ", |phi - H_t*| = " << res.norm_at_tstar << " < eps " << cfg.eps;
}

// 9. Residuals: targeted runs under 10x tolerance; hedgehog refinement decay.
void criterion_9(Checker& c) {
  auto sphere = TriangulatedSphere::build_icosphere(5);
  auto ball = BallMesh::build_ball_grid(32, sphere);
  const SphereMap cap = map_from_function(sphere, [](Vec3 v) {
    return Vec3{0.35 * v.x, 0.35 * v.y, 1.0};
  });
  const double target = 1e-4;
  MinimizeOptions o;
  o.residual_target = target;
  const MinimizeResult res = minimize(ball, cap, o);
  c.require(res.converged, "residual-targeted run did not converge");
  const SingularityReport sing = find_singularities(res.u);
  const double resid = el_residual(res.u, &sing);
  c.require(resid < 10.0 * target, "residual above 10x solver tolerance");

  double prev = 1e300;
  bool decreasing = true;
  for (int n : {16, 32, 48}) {
    auto mesh = BallMesh::build_ball_grid(n);
    const BallMap u = analytic_hedgehog(mesh);
    const SingularityReport s = find_singularities(u);
    const int cells = std::max(2, static_cast<int>(std::ceil(0.15 * (n - 1) / 2.0)));
    const double hr = el_residual(u, &s, cells);
    decreasing = decreasing && hr < prev;
    prev = hr;
  }
  c.require(decreasing, "hedgehog residual not decreasing under refinement");
  c.detail << " residual " << resid << " vs target " << target << "; hedgehog N=48 residual "
           << prev;
}

// 10. Determinism: reruns of criteria 5 and 8 produce byte-identical CSVs.
void criterion_10(Checker& c) {
  const experiments::EstimateFamilyResult fam1 = run_estimate_family(family_config());
  const experiments::EstimateFamilyResult fam2 = run_estimate_family(family_config());
  c.require(fam1.csv == fam2.csv, "estimate family CSV differs between runs");

  const experiments::TransitionRunResult tr1 = experiments::run_transition(transition_config());
  const experiments::TransitionRunResult tr2 = experiments::run_transition(transition_config());
  c.require(tr1.counts_csv == tr2.counts_csv, "transition counts CSV differs between runs");
  c.require(tr1.transition_block == tr2.transition_block, "transition block differs");
  c.detail << " criterion 5 and 8 outputs byte-identical across reruns";
}

const char* criterion_name(int k) {
  switch (k) {
    case 1: return "degree exactness";
    case 2: return "hedgehog energy";
    case 3: return "rescaling map structure";
    case 4: return "homotopy contract";
    case 5: return "homotopy estimate bound";
    case 6: return "smallness under shrinking radius";
    case 7: return "equatorial non-uniqueness";
    case 8: return "transition pipeline";
    case 9: return "euler-lagrange residual";
    case 10: return "determinism";
    default: return "unknown";
  }
}

// Wall-time budgets in seconds; criterion 10 carries none.
double runtime_budget(int k) {
  switch (k) {
    case 1: return 5.0;
    case 2: return 30.0;
    case 3: return 5.0;
    case 4: return 120.0;
    case 5: return 300.0;
    case 6: return 300.0;
    case 7: return 180.0;
    case 8: return 900.0;
    case 9: return 120.0;
    default: return 0.0;
  }
}

bool run_criterion(int k) {
  Checker c;
  const auto t0 = std::chrono::steady_clock::now();
  switch (k) {
    case 1: criterion_1(c); break;
    case 2: criterion_2(c); break;
    case 3: criterion_3(c); break;
    case 4: criterion_4(c); break;
    case 5: criterion_5(c); break;
    case 6: criterion_6(c); break;
    case 7: criterion_7(c); break;
    case 8: criterion_8(c); break;
    case 9: criterion_9(c); break;
    case 10: criterion_10(c); break;
    default:
      std::printf("FAIL criterion %d: unknown criterion\n", k);
      return false;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double budget = runtime_budget(k);
  if (budget > 0.0 && secs >= budget) {
    c.ok = false;
    c.detail << " [failed: runtime " << secs << " s over budget " << budget << " s]";
  }
  std::printf("%s criterion %d: %s —%s (%.1f s)\n", c.ok ? "PASS" : "FAIL", k,
              criterion_name(k), c.detail.str().c_str(), secs);
  std::fflush(stdout);
  return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (int k = 1; k <= 10; ++k) which.push_back(k);
  }
  bool ok = true;
  for (int k : which) {
    try {
      ok = run_criterion(k) && ok;
    } catch (const std::exception& e) {
      std::printf("FAIL criterion %d: %s — exception: %s\n", k, criterion_name(k), e.what());
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
