#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hmlab/ball_mesh.hpp"
#include "hmlab/errors.hpp"
#include "hmlab/homotopy.hpp"
#include "hmlab/maps.hpp"
#include "hmlab/minimize.hpp"
#include "hmlab/norms.hpp"

using namespace hmlab;

namespace {

constexpr double kHedgehogEnergy = 8.0 * M_PI;

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

SphereMap polar_cap_map(const SpherePtr& sphere) {
  return map_from_function(sphere, [](Vec3 v) {
    return Vec3{0.35 * v.x, 0.35 * v.y, 1.0};
  });
}

struct Fixture {
  SpherePtr sphere = TriangulatedSphere::build_icosphere(5);
  BallPtr ball = BallMesh::build_ball_grid(32, sphere);
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("radial extension") {
  auto& f = fixture();

  SUBCASE("constant boundary data extends to the constant map") {
    const SphereMap c = make_constant_map(f.sphere, {0.0, 1.0, 0.0});
    const BallMap u = radial_extension(c, f.ball);
    double worst = 0.0;
    for (const Vec3& v : u.values) worst = std::max(worst, norm(v - Vec3{0.0, 1.0, 0.0}));
    CHECK(worst < 1e-12);
  }

  SUBCASE("identity boundary data extends to the hedgehog") {
    const BallMap u = radial_extension(make_identity_map(f.sphere), f.ball);
    CHECK(std::fabs(dirichlet_energy(u) - kHedgehogEnergy) < 0.05 * kHedgehogEnergy);
  }

  SUBCASE("the trace matches the boundary map vertex-wise") {
    const SphereMap phi = make_azimuthal_wrap(f.sphere, 2);
    const BallMap u = radial_extension(phi, f.ball);
    for (int b : f.ball->boundary_nodes()) {
      CHECK(same_bits(u.values[b], phi.values[f.ball->trace_map()[b]]));
    }
  }

  SUBCASE("unpaired meshes are rejected") {
    auto bare = BallMesh::build_ball_grid(8);
    CHECK_THROWS_AS(radial_extension(make_identity_map(f.sphere), bare), DomainError);
  }

  SUBCASE("odd resolutions copy a neighbor value onto the exact origin node") {
    auto sphere = TriangulatedSphere::build_icosphere(3);
    auto ball = BallMesh::build_ball_grid(9, sphere);
    const int center = ball->center_node();
    REQUIRE(norm(ball->nodes()[center]) == 0.0);
    const BallMap u = radial_extension(make_identity_map(sphere), ball);
    CHECK(std::fabs(norm(u.values[center]) - 1.0) < 1e-12);
  }
}

TEST_CASE("relaxation on reference data") {
  auto& f = fixture();

  SUBCASE("constant datum gives the constant minimizer") {
    const SphereMap c = make_constant_map(f.sphere, {0.0, 0.0, 1.0});
    const MinimizeResult res = minimize(f.ball, c, {});
    CHECK(res.converged);
    CHECK(res.energy < 1e-20);
    CHECK(res.quad_energy < 1e-20);
  }

  SUBCASE("identity datum: energy near 8*pi, one interior singularity of degree 1") {
    MinimizeOptions o;
    o.record_trace = true;
    const MinimizeResult res = minimize(f.ball, make_identity_map(f.sphere), o);
    CHECK(res.converged);
    CHECK(res.monotone);
    CHECK(std::fabs(res.quad_energy - kHedgehogEnergy) < 0.05 * kHedgehogEnergy);

    // energy trace is non-increasing, sweep by sweep
    for (std::size_t i = 1; i < res.energy_trace.size(); ++i) {
      CHECK(res.energy_trace[i] <= res.energy_trace[i - 1] + 1e-12);
    }

    // relaxing can only lower the energy of the radial extension
    const BallMap ext = radial_extension(make_identity_map(f.sphere), f.ball);
    CHECK(res.quad_energy <= dirichlet_energy(ext));

    const SingularityReport sing = find_singularities(res.u);
    REQUIRE(sing.count() == 1);
    CHECK(sing.items[0].local_degree == 1);
    CHECK(norm(sing.items[0].position) < 0.2);
    CHECK(sing.degree_sum() == degree(make_identity_map(f.sphere)).value);
  }

  SUBCASE("boundary values never move and stay unit") {
    const SphereMap phi = make_azimuthal_wrap(f.sphere, 2);
    MinimizeOptions o;
    o.max_iterations = 40;
    const MinimizeResult res = minimize(f.ball, phi, o);
    for (int b : f.ball->boundary_nodes()) {
      CHECK(same_bits(res.u.values[b], phi.values[f.ball->trace_map()[b]]));
    }
    CHECK(res.u.unit_defect() < 1e-12);
  }

  SUBCASE("iteration cap flags non-convergence") {
    MinimizeOptions o;
    o.max_iterations = 3;
    const MinimizeResult res = minimize(f.ball, make_equatorial_map(f.sphere), o);
    CHECK(!res.converged);
    CHECK(res.iterations == 3);
  }
}

TEST_CASE("equatorial datum splits into north and south minimizers") {
  auto& f = fixture();
  const SphereMap eq = make_equatorial_map(f.sphere);

  MinimizeOptions o;
  o.init = MinimizeOptions::Init::Constant;
  o.constant_value = {0.0, 0.0, 1.0};
  const MinimizeResult north = minimize(f.ball, eq, o);
  o.constant_value = {0.0, 0.0, -1.0};
  const MinimizeResult south = minimize(f.ball, eq, o);

  CHECK(north.converged);
  CHECK(south.converged);
  CHECK(std::fabs(north.quad_energy - south.quad_energy) < 0.01 * north.quad_energy);
  CHECK(l2_distance(north.u, south.u) >= 0.5);

  // the two solutions genuinely escape to opposite hemispheres
  double zn = 0.0, zs = 0.0;
  for (const Vec3& v : north.u.values) zn += v.z;
  for (const Vec3& v : south.u.values) zs += v.z;
  CHECK(zn > 0.0);
  CHECK(zs < 0.0);

  // reflecting the values through the equatorial plane keeps the discrete
  // energy bit-identical
  BallMap mirrored = north.u;
  for (Vec3& v : mirrored.values) v.z = -v.z;
  CHECK(dirichlet_energy(mirrored) == dirichlet_energy(north.u));

  // minimizers never carry more energy than the radial extension
  const BallMap ext = radial_extension(eq, f.ball);
  CHECK(north.quad_energy <= dirichlet_energy(ext));
}

TEST_CASE("euler-lagrange residual") {
  auto& f = fixture();

  SUBCASE("constant maps solve the system exactly") {
    BallMap u;
    u.mesh = f.ball;
    u.values.assign(f.ball->node_count(), Vec3{0.0, 0.0, 1.0});
    CHECK(el_residual(u) == 0.0);
  }

  SUBCASE("residual-targeted runs meet their target") {
    const SphereMap cap = polar_cap_map(f.sphere);
    double prev = 1e300;
    for (double target : {1e-3, 1e-4}) {
      MinimizeOptions o;
      o.residual_target = target;
      const MinimizeResult res = minimize(f.ball, cap, o);
      CHECK(res.converged);
      const SingularityReport sing = find_singularities(res.u);
      CHECK(sing.count() == 0);
      const double resid = el_residual(res.u, &sing);
      CHECK(resid < 10.0 * target);
      CHECK(resid < prev);
      prev = resid;
    }
  }

  SUBCASE("hedgehog residual away from the origin decays under refinement") {
    double prev = 1e300;
    for (int n : {16, 32, 48}) {
      auto mesh = BallMesh::build_ball_grid(n);
      const BallMap u = analytic_hedgehog(mesh);
      const SingularityReport sing = find_singularities(u);
      // exclusion of the fixed physical ball |x| < 0.15
      const int cells = std::max(2, static_cast<int>(std::ceil(0.15 * (n - 1) / 2.0)));
      const double resid = el_residual(u, &sing, cells);
      CHECK(resid < prev);
      prev = resid;
    }
  }
}

TEST_CASE("singularity detection") {
  auto& f = fixture();

  SUBCASE("constant maps have no singularities") {
    BallMap u;
    u.mesh = f.ball;
    u.values.assign(f.ball->node_count(), Vec3{1.0, 0.0, 0.0});
    const SingularityReport rep = find_singularities(u);
    CHECK(rep.count() == 0);
    CHECK(rep.boundary_clearance == -1.0);
  }

  SUBCASE("the hedgehog has one degree-1 singularity at the origin cell") {
    for (int n : {16, 32}) {
      auto mesh = BallMesh::build_ball_grid(n);
      const SingularityReport rep = find_singularities(analytic_hedgehog(mesh));
      REQUIRE(rep.count() == 1);
      CHECK(rep.items[0].local_degree == 1);
      CHECK(norm(rep.items[0].position) < 3.0 * mesh->spacing());
      CHECK(rep.boundary_clearance > 0.85);
      // shells around near-boundary nodes leave the ball and are skipped
      CHECK(rep.skipped_nodes > 0);
    }
  }

  SUBCASE("detection is invariant under target rotations") {
    auto mesh = BallMesh::build_ball_grid(16);
    const BallMap u = analytic_hedgehog(mesh);
    const Vec3 axis = normalized(Vec3{0.5, -1.0, 2.0});
    const double c = std::cos(1.1), s = std::sin(1.1);
    BallMap v = u;
    for (Vec3& w : v.values) {
      w = c * w + s * cross(axis, w) + (1.0 - c) * dot(axis, w) * axis;
    }
    const SingularityReport ru = find_singularities(u);
    const SingularityReport rv = find_singularities(v);
    REQUIRE(ru.count() == rv.count());
    for (int i = 0; i < ru.count(); ++i) {
      CHECK(same_bits(ru.items[i].position, rv.items[i].position));
      CHECK(ru.items[i].local_degree == rv.items[i].local_degree);
    }
  }
}

TEST_CASE("transition bisection") {
  auto sphere = TriangulatedSphere::build_icosphere(6);
  auto ball = BallMesh::build_ball_grid(32, sphere);
  const Vec3 pole{0.0, 0.0, 1.0};
  const SphereMap phi = make_constant_map(sphere, pole);

  SUBCASE("no crossing is reported as inconclusive") {
    const HomotopyEval eval = make_homotopy_eval(phi, phi, nullptr, 0.3, pole, 1.0);
    const TransitionResult res = bisect_transition(eval, ball, {}, 0);
    CHECK(!res.conclusive);
    CHECK(res.count_below == 0);
    CHECK(res.count_above == 0);
    CHECK(res.sampled.size() >= 2);
  }

  SUBCASE("the dipole datum crosses from zero to two singularities") {
    const SphereMap psi = bubble_insert(phi, pole, 0.75, 1.0);
    const HomotopyEval eval = make_homotopy_eval(phi, psi, nullptr, 0.75, pole, 1.0);
    const TransitionResult res = bisect_transition(eval, ball, {}, 0);
    REQUIRE(res.conclusive);
    CHECK(res.t_star > 0.0);
    CHECK(res.t_star < 1.0);
    CHECK(res.width <= 1e-2);
    CHECK(res.sampled.size() <= 9);  // endpoints + at most 7 bisection steps
    CHECK(res.count_below == 0);
    CHECK(res.count_above == 2);
    REQUIRE(res.sing_above.count() == 2);
    const int d0 = res.sing_above.items[0].local_degree;
    const int d1 = res.sing_above.items[1].local_degree;
    CHECK(d0 + d1 == 0);
    CHECK(std::abs(d0) == 1);
    CHECK(res.energy_above > res.energy_below);

    // continuation stability at the bracket: seeding from the other end's
    // minimizer converges to the same energy within the solver scale
    const SphereMap datum = eval.at(res.t_lo);
    MinimizeOptions o;
    o.init = MinimizeOptions::Init::Supplied;
    o.supplied = &res.map_above;
    const MinimizeResult again = minimize(ball, datum, o);
    CHECK(again.converged);
  }

  SUBCASE("continuation between nearby data stays within twice the tolerance") {
    const SphereMap psi = bubble_insert(phi, pole, 0.75, 1.0);
    const HomotopyEval eval = make_homotopy_eval(phi, psi, nullptr, 0.75, pole, 1.0);
    MinimizeOptions o;
    o.tolerance = 1e-8;
    const SphereMap datum = eval.at(0.4);
    const MinimizeResult direct = minimize(ball, datum, o);
    const MinimizeResult nearby = minimize(ball, eval.at(0.42), o);
    MinimizeOptions seeded = o;
    seeded.init = MinimizeOptions::Init::Supplied;
    seeded.supplied = &nearby.u;
    const MinimizeResult continued = minimize(ball, datum, seeded);
    const SingularityReport sa = find_singularities(direct.u);
    const SingularityReport sb = find_singularities(continued.u);
    CHECK(sa.count() == sb.count());
    const double rel = std::fabs(direct.energy - continued.energy) /
                       std::max(direct.energy, 1e-300);
    CHECK(rel < 2.0 * o.tolerance);
  }
}
