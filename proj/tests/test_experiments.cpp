#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hmlab/experiments.hpp"

using namespace hmlab;
using namespace hmlab::experiments;

TEST_CASE("random centers are deterministic unit vectors") {
  const auto a = random_centers(8, 42);
  const auto b = random_centers(8, 42);
  const auto c = random_centers(8, 43);
  REQUIRE(a.size() == 8);
  bool all_same = true, any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::fabs(norm(a[i]) - 1.0) < 1e-12);
    all_same = all_same && same_bits(a[i], b[i]);
    any_diff = any_diff || !same_bits(a[i], c[i]);
  }
  CHECK(all_same);
  CHECK(any_diff);
}

TEST_CASE("estimate family stays under the calibrated bound") {
  EstimateFamilyConfig cfg;
  cfg.level = 6;
  cfg.radii = {0.4, 0.2};
  cfg.centers = 3;
  cfg.strengths = {1.0};
  cfg.samples = 12;
  const EstimateFamilyResult res = run_estimate_family(cfg);
  REQUIRE(res.rows.size() == 6);
  CHECK(res.max_observed_c > 0.0);
  CHECK(res.max_observed_c <= 20.0);

  SUBCASE("reruns are byte-identical") {
    const EstimateFamilyResult again = run_estimate_family(cfg);
    CHECK(res.csv == again.csv);
  }

  SUBCASE("threaded runs produce the same bytes") {
    EstimateFamilyConfig tcfg = cfg;
    tcfg.threads = 4;
    CHECK(run_estimate_family(tcfg).csv == res.csv);
  }
}

TEST_CASE("smallness sweep shrinks with the radius") {
  SmallnessConfig cfg;
  cfg.level = 7;
  cfg.radii = {0.4, 0.2, 0.1};
  cfg.centers = 2;
  cfg.samples = 12;
  const SmallnessResult res = run_smallness_sweep(cfg);
  REQUIRE(res.rows.size() == 6);
  CHECK(res.monotone);
  CHECK(res.base_norm > 0.0);
  CHECK(res.worst_final < res.rows[0].sup_norm);
}

TEST_CASE("probe grid reports distance and sup-norm pairs") {
  ProbeConfig cfg;
  cfg.level = 6;
  cfg.radii = {0.4};
  cfg.strengths = {0.0, 0.5, 1.0};
  cfg.samples = 10;
  const ProbeResult res = run_probe(cfg);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].distance < 1e-10);
  CHECK(res.rows[0].sup_norm < 1e-10);
  // monotone in strength at fixed r (reported; holds for this family)
  CHECK(res.rows[0].distance <= res.rows[1].distance);
  CHECK(res.rows[1].distance <= res.rows[2].distance);
}

TEST_CASE("transition pipeline") {
  TransitionConfig cfg;  // pole-centered dipole defaults

  SUBCASE("finds the zero-to-two crossing and reruns identically") {
    const TransitionRunResult res = run_transition(cfg);
    REQUIRE(res.transition.conclusive);
    CHECK(res.shrinks == 0);
    CHECK(res.transition.t_star > 0.0);
    CHECK(res.transition.t_star < 1.0);
    CHECK(res.transition.width <= cfg.bracket_width);
    CHECK(res.transition.count_below == 0);
    CHECK(res.transition.count_above == 2);
    CHECK(res.norm_at_tstar < cfg.eps);
    CHECK(res.sup_norm < cfg.eps);

    const TransitionRunResult again = run_transition(cfg);
    CHECK(res.counts_csv == again.counts_csv);
    CHECK(res.transition_block == again.transition_block);
  }

  SUBCASE("auto-shrink halves the radius and refines the sphere") {
    TransitionConfig tight = cfg;
    tight.eps = 2.0;  // below the sup norm at r = 0.75
    tight.max_shrink = 1;
    const TransitionRunResult res = run_transition(tight);
    CHECK(res.shrinks == 1);
    CHECK(res.final_r == doctest::Approx(cfg.r / 2.0));
    CHECK(res.final_level == cfg.level + 1);
  }
}
