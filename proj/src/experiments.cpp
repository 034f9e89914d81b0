#include "hmlab/experiments.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "hmlab/errors.hpp"
#include "hmlab/io.hpp"

namespace hmlab::experiments {

namespace {

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<Vec3> random_centers(int count, unsigned seed) {
  std::mt19937 gen(seed);
  auto unit = [&]() { return (static_cast<double>(gen()) + 0.5) / 4294967296.0; };
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * unit();
    const double theta = 2.0 * M_PI * unit();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back({rho * std::cos(theta), rho * std::sin(theta), z});
  }
  return out;
}

EstimateFamilyResult run_estimate_family(const EstimateFamilyConfig& cfg) {
  const SpherePtr mesh = TriangulatedSphere::build_icosphere(cfg.level);
  const SphereMap phi = make_named_map(mesh, cfg.base_map);
  const std::vector<Vec3> centers = random_centers(cfg.centers, cfg.seed);

  struct Job {
    double r, strength;
    int center_index;
  };
  std::vector<Job> jobs;
  for (double r : cfg.radii) {
    for (int c = 0; c < cfg.centers; ++c) {
      for (double s : cfg.strengths) jobs.push_back({r, s, c});
    }
  }

  EstimateFamilyResult res;
  res.rows.resize(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), cfg.threads, [&](int j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    const Vec3 x = centers[static_cast<std::size_t>(job.center_index)];
    const SphereMap psi = bubble_insert(phi, x, job.r, job.strength);
    const HomotopyEval eval = make_homotopy_eval(phi, psi, nullptr, job.r, x, cfg.p);
    const EstimateReport rep = streaming_estimate(eval, cfg.samples, cfg.bound);
    EstimateFamilyRow row;
    row.r = job.r;
    row.strength = job.strength;
    row.center_index = job.center_index;
    row.center = x;
    row.sup_norm = rep.sup_norm;
    row.denominator = rep.denominator;
    row.observed_c = rep.observed_c;
    res.rows[static_cast<std::size_t>(j)] = row;
  });

  std::ostringstream csv;
  csv << "r,strength,center_index,cx,cy,cz,sup_norm,denominator,observed_c\n";
  for (const EstimateFamilyRow& row : res.rows) {
    res.max_observed_c = std::max(res.max_observed_c, row.observed_c);
    csv << fmt_double(row.r) << "," << fmt_double(row.strength) << "," << row.center_index << ","
        << fmt_double(row.center.x) << "," << fmt_double(row.center.y) << ","
        << fmt_double(row.center.z) << "," << fmt_double(row.sup_norm) << ","
        << fmt_double(row.denominator) << "," << fmt_double(row.observed_c) << "\n";
  }
  res.csv = csv.str();
  return res;
}

SmallnessResult run_smallness_sweep(const SmallnessConfig& cfg) {
  const SpherePtr mesh = TriangulatedSphere::build_icosphere(cfg.level);
  const SphereMap phi = make_named_map(mesh, cfg.base_map);
  const std::vector<Vec3> centers = random_centers(cfg.centers, cfg.seed);

  SmallnessResult res;
  res.base_norm = w1p_norm(phi, cfg.p).total;
  res.rows.resize(static_cast<std::size_t>(cfg.centers) * cfg.radii.size());

  parallel_for(cfg.centers, cfg.threads, [&](int c) {
    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
      const double r = cfg.radii[ri];
      const Vec3 x = centers[static_cast<std::size_t>(c)];
      const SphereMap psi = bubble_insert(phi, x, r, cfg.strength);
      const HomotopyEval eval = make_homotopy_eval(phi, psi, nullptr, r, x, cfg.p);
      const EstimateReport rep = streaming_estimate(eval, cfg.samples);
      res.rows[static_cast<std::size_t>(c) * cfg.radii.size() + ri] = {c, r, rep.sup_norm};
    }
  });

  for (int c = 0; c < cfg.centers; ++c) {
    double prev = 1e300;
    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri) {
      const SmallnessRow& row = res.rows[static_cast<std::size_t>(c) * cfg.radii.size() + ri];
      if (row.sup_norm >= prev) res.monotone = false;
      prev = row.sup_norm;
      if (ri + 1 == cfg.radii.size()) res.worst_final = std::max(res.worst_final, row.sup_norm);
    }
  }

  std::ostringstream csv;
  csv << "center_index,r,sup_norm\n";
  for (const SmallnessRow& row : res.rows) {
    csv << row.center_index << "," << fmt_double(row.r) << "," << fmt_double(row.sup_norm) << "\n";
  }
  res.csv = csv.str();
  return res;
}

TransitionRunResult run_transition(const TransitionConfig& cfg) {
  TransitionRunResult out;
  double r = cfg.r;
  int level = cfg.level;

  const double cl = std::cos(cfg.lat), sl = std::sin(cfg.lat);
  // Snap to the exact pole: the lattice and the icosphere vertex set are
  // both invariant under the half-turn about the z axis, which makes the
  // two dipole defects nucleate at the same homotopy time.
  const Vec3 x = std::fabs(cl) < 1e-9 ? Vec3{0.0, 0.0, sl > 0.0 ? 1.0 : -1.0}
                                      : Vec3{cl * std::cos(cfg.lon), cl * std::sin(cfg.lon), sl};

  SpherePtr mesh;
  SphereMap phi, psi;
  double sup = 0.0;
  int shrink = 0;
  for (;; ++shrink) {
    mesh = TriangulatedSphere::build_icosphere(level);
    phi = make_named_map(mesh, cfg.base_map);
    psi = bubble_insert(phi, x, r, cfg.strength);
    const HomotopyEval eval = make_homotopy_eval(phi, psi, nullptr, r, x, cfg.p, cfg.g_samples);
    sup = streaming_estimate(eval, cfg.norm_samples).sup_norm;
    if (sup < cfg.eps || shrink >= cfg.max_shrink) break;
    r /= 2.0;
    level = std::min(level + 1, 8);
  }
  out.final_r = r;
  out.final_level = level;
  out.shrinks = shrink;
  out.sup_norm = sup;
  out.phi = phi;
  out.psi = psi;

  const BallPtr ball = BallMesh::build_ball_grid(cfg.ball_n, mesh);
  const HomotopyEval eval = make_homotopy_eval(phi, psi, nullptr, r, x, cfg.p, cfg.g_samples);

  MinimizeOptions mopts;
  mopts.tolerance = cfg.tolerance;
  mopts.max_iterations = cfg.max_iterations;
  TransitionOptions topts;
  topts.bracket_width = cfg.bracket_width;
  topts.energy_window = cfg.energy_window;
  topts.shell = cfg.shell;
  topts.merge_cells = cfg.merge_cells;

  out.transition = bisect_transition(eval, ball, mopts, 0, topts);

  if (out.transition.conclusive) {
    const SphereMap h_star = eval.at(out.transition.t_star);
    out.norm_at_tstar = w1p_distance(phi, h_star, cfg.p);
  }

  std::ostringstream counts;
  counts << "t,count\n";
  for (const auto& [t, c] : out.transition.sampled) {
    counts << fmt_double(t) << "," << c << "\n";
  }
  out.counts_csv = counts.str();

  std::ostringstream block;
  block << fmt_double(out.transition.t_lo) << " " << fmt_double(out.transition.t_hi) << " "
        << out.transition.count_below << " " << out.transition.count_above << " "
        << fmt_double(out.transition.energy_below) << " "
        << fmt_double(out.transition.energy_above) << "\n";
  out.transition_block = block.str();
  return out;
}

ProbeResult run_probe(const ProbeConfig& cfg) {
  const SpherePtr mesh = TriangulatedSphere::build_icosphere(cfg.level);
  const SphereMap phi = make_named_map(mesh, cfg.base_map);
  const double cl = std::cos(cfg.lat), sl = std::sin(cfg.lat);
  const Vec3 x = {cl * std::cos(cfg.lon), cl * std::sin(cfg.lon), sl};

  struct Job {
    double r, strength;
  };
  std::vector<Job> jobs;
  for (double r : cfg.radii) {
    for (double s : cfg.strengths) jobs.push_back({r, s});
  }

  ProbeResult res;
  res.rows.resize(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), cfg.threads, [&](int j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    const SphereMap psi = bubble_insert(phi, x, job.r, job.strength);
    const HomotopyEval eval = make_homotopy_eval(phi, psi, nullptr, job.r, x, cfg.p);
    const EstimateReport rep = streaming_estimate(eval, cfg.samples);
    ProbeRow row;
    row.r = job.r;
    row.strength = job.strength;
    row.distance = w1p_distance(phi, psi, cfg.p);
    row.sup_norm = rep.sup_norm;
    res.rows[static_cast<std::size_t>(j)] = row;
  });

  std::ostringstream csv;
  csv << "r,strength,distance,sup_norm\n";
  for (const ProbeRow& row : res.rows) {
    csv << fmt_double(row.r) << "," << fmt_double(row.strength) << ","
        << fmt_double(row.distance) << "," << fmt_double(row.sup_norm) << "\n";
  }
  res.csv = csv.str();
  return res;
}

}  // namespace hmlab::experiments
