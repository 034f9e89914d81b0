#pragma once

#include <string>
#include <vector>

#include "hmlab/homotopy.hpp"
#include "hmlab/maps.hpp"
#include "hmlab/minimize.hpp"

namespace hmlab::experiments {

// Deterministic unit vectors from a seed (raw mt19937 words, no library
// distributions, so output is identical across runs and platforms).
std::vector<Vec3> random_centers(int count, unsigned seed);

struct EstimateFamilyConfig {
  int level = 7;
  std::vector<double> radii{0.4, 0.2, 0.1};
  int centers = 10;
  std::vector<double> strengths{0.5, 1.0};
  double p = 1.0;
  int samples = 30;
  unsigned seed = 20240601;
  double bound = 20.0;
  std::string base_map = "identity";
  int threads = 1;
};

struct EstimateFamilyRow {
  double r = 0.0;
  double strength = 0.0;
  int center_index = 0;
  Vec3 center{};
  double sup_norm = 0.0;
  double denominator = 0.0;
  double observed_c = 0.0;
};

struct EstimateFamilyResult {
  std::vector<EstimateFamilyRow> rows;
  double max_observed_c = 0.0;
  std::string csv;
};

// Dipole-perturbed pairs over a (radius, center, strength) grid; records the
// observed homotopy-estimate constant per pair.
EstimateFamilyResult run_estimate_family(const EstimateFamilyConfig& cfg);

struct SmallnessConfig {
  int level = 8;
  std::vector<double> radii{0.4, 0.2, 0.1, 0.05};  // descending
  int centers = 3;
  double strength = 1.0;
  double p = 1.0;
  int samples = 30;
  unsigned seed = 20240601;
  std::string base_map = "identity";
  int threads = 1;
};

struct SmallnessRow {
  int center_index = 0;
  double r = 0.0;
  double sup_norm = 0.0;
};

struct SmallnessResult {
  std::vector<SmallnessRow> rows;
  double base_norm = 0.0;  // |phi|_{W^{1,p}(S^2)}
  bool monotone = true;    // sup norms decrease with r per center
  double worst_final = 0.0;  // max sup norm at the smallest radius
  std::string csv;
};

// Radius sweep at fixed strength: the homotopy sup norm must shrink with r.
SmallnessResult run_smallness_sweep(const SmallnessConfig& cfg);

struct TransitionConfig {
  int level = 6;
  int ball_n = 32;
  // The bubble pair needs about three grid cells of support before the
  // singular pair beats smoothing at ball_n = 32.
  double r = 0.75;
  double strength = 1.0;
  double p = 1.0;
  int g_samples = 20;
  int norm_samples = 30;
  double lat = 1.5707963267948966;  // pole placement, see run_transition
  double lon = 0.0;
  double eps = 8.0;  // auto-shrink target for sup_t |phi - H_t|
  int max_shrink = 2;
  double tolerance = 1e-8;
  int max_iterations = 20000;
  double bracket_width = 1e-2;
  double energy_window = 0.01;
  int shell = 1;
  int merge_cells = 2;
  std::string base_map = "constant";
};

struct TransitionRunResult {
  TransitionResult transition;
  SphereMap phi, psi;
  double sup_norm = 0.0;       // sup_t |phi - H_t| at the final radius
  double norm_at_tstar = 0.0;  // |phi - H_{t_star}|
  double final_r = 0.0;
  int final_level = 0;
  int shrinks = 0;
  std::string counts_csv;       // t,count per evaluated datum
  std::string transition_block; // t_lo t_hi count_lo count_hi E_lo E_hi
};

// Full non-uniqueness pipeline: dipole insertion, homotopy with auto-shrink
// of the perturbation radius until the sup norm is below eps, then bisection
// of the singularity-count transition.
TransitionRunResult run_transition(const TransitionConfig& cfg);

struct ProbeConfig {
  int level = 6;
  std::vector<double> radii{0.4, 0.3, 0.2};
  std::vector<double> strengths{0.25, 0.5, 0.75, 1.0};
  double p = 1.0;
  int samples = 24;
  double lat = 0.45;
  double lon = 0.8;
  std::string base_map = "identity";
  int threads = 1;
};

struct ProbeRow {
  double r = 0.0;
  double strength = 0.0;
  double distance = 0.0;  // |phi - psi|_{W^{1,p}}
  double sup_norm = 0.0;  // sup_t |phi - H_t|_{W^{1,p}}
};

struct ProbeResult {
  std::vector<ProbeRow> rows;
  std::string csv;
};

// Perturbation-size scan: reports (distance, homotopy sup norm) pairs over
// the (r, strength) grid, drawing no conclusion.
ProbeResult run_probe(const ProbeConfig& cfg);

}  // namespace hmlab::experiments
