// Experiment harness for sphere-valued harmonic map studies on the unit
// ball: degree and norm queries, energy minimization, controlled homotopies
// between boundary data, and the singularity-count transition search.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "hmlab/config.hpp"
#include "hmlab/errors.hpp"
#include "hmlab/experiments.hpp"
#include "hmlab/homotopy.hpp"
#include "hmlab/io.hpp"
#include "hmlab/maps.hpp"
#include "hmlab/minimize.hpp"
#include "hmlab/norms.hpp"

namespace {

using namespace hmlab;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitResolution = 2;
constexpr int kExitTopology = 3;
constexpr int kExitInconclusive = 4;

bool is_builtin_map(const std::string& name) {
  return name == "identity" || name == "constant" || name == "antipodal" || name == "wrap2" ||
         name == "wrap3" || name == "equatorial";
}

SphereMap resolve_map(const SpherePtr& mesh, const std::string& spec) {
  if (is_builtin_map(spec)) return make_named_map(mesh, spec);
  if (!std::filesystem::exists(spec)) {
    throw ConfigError("map file does not exist: " + spec);
  }
  return load_sphere_map(mesh, spec);
}

Vec3 center_from(const ExperimentConfig& cfg) {
  const double lat = cfg.get_double("lat", 0.45);
  const double lon = cfg.get_double("lon", 0.8);
  const double cl = std::cos(lat), sl = std::sin(lat);
  if (std::fabs(cl) < 1e-9) return {0.0, 0.0, sl > 0.0 ? 1.0 : -1.0};
  return {cl * std::cos(lon), cl * std::sin(lon), sl};
}

std::string out_dir(const ExperimentConfig& cfg, const std::string& flag_out,
                    const std::string& fallback) {
  std::string dir = !flag_out.empty() ? flag_out : cfg.get_string("out", fallback);
  std::filesystem::create_directories(dir);
  return dir;
}

int cmd_degree(const ExperimentConfig& cfg) {
  const auto mesh = TriangulatedSphere::build_icosphere(cfg.get_int("level", 5));
  const SphereMap f = resolve_map(mesh, cfg.get_string("map"));
  const DegreeResult d = degree(f);
  std::printf("degree %d raw %.12f\n", d.value, d.raw);
  if (d.diameter_warning) {
    std::printf("warning: some triangle image has diameter > pi/2; map may be under-resolved\n");
  }
  return kExitOk;
}

int cmd_norm(const ExperimentConfig& cfg, const std::string& flag_out) {
  const auto mesh = TriangulatedSphere::build_icosphere(cfg.get_int("level", 5));
  const double p = cfg.get_double("p", 1.0);
  const SphereMap f = resolve_map(mesh, cfg.get_string("map"));

  VertexSet region;
  const VertexSet* region_ptr = nullptr;
  std::string region_id = "0";
  if (cfg.has("region_rho")) {
    region = geodesic_ball(mesh, center_from(cfg), cfg.get_double("region_rho"));
    region_ptr = &region;
    region_id = "1";
  }

  NormReport rep;
  if (cfg.has("map2")) {
    const SphereMap g = resolve_map(mesh, cfg.get_string("map2"));
    rep = w1p_difference_report(f, g, p, region_ptr);
  } else {
    rep = w1p_norm(f, p, region_ptr);
  }
  const std::string row = norm_report_csv_row(rep, region_id);
  std::printf("%s\n", row.c_str());
  if (!flag_out.empty() || cfg.has("out")) {
    write_text_file(out_dir(cfg, flag_out, "hmlab-out") + "/norm.csv",
                    "p,region_id,lp,seminorm,total\n" + row + "\n");
  }
  return kExitOk;
}

int cmd_minimize(const ExperimentConfig& cfg, const std::string& flag_out) {
  const auto mesh = TriangulatedSphere::build_icosphere(cfg.get_int("level", 5));
  const auto ball = BallMesh::build_ball_grid(cfg.get_int("ball_n", 32), mesh);
  const SphereMap phi = resolve_map(mesh, cfg.get_string("phi", "identity"));

  MinimizeOptions o;
  o.tolerance = cfg.get_double("tol", 1e-8);
  o.max_iterations = cfg.get_int("max_iters", 20000);
  o.residual_target = cfg.get_double("residual_target", 0.0);
  o.record_trace = true;
  const std::string init = cfg.get_string("init", "radial");
  if (init == "radial") {
    o.init = MinimizeOptions::Init::Radial;
  } else if (init == "north") {
    o.init = MinimizeOptions::Init::Constant;
    o.constant_value = {0.0, 0.0, 1.0};
  } else if (init == "south") {
    o.init = MinimizeOptions::Init::Constant;
    o.constant_value = {0.0, 0.0, -1.0};
  } else {
    throw ConfigError("minimize: unknown init: " + init);
  }

  const MinimizeResult res = minimize(ball, phi, o);
  const SingularityReport sing =
      find_singularities(res.u, cfg.get_int("shell", 1), cfg.get_int("merge_cells", 2));

  const std::string dir = out_dir(cfg, flag_out, "hmlab-out");
  dump_ball_map(res.u, dir + "/minimizer.txt");
  std::ostringstream ecsv;
  ecsv << "iteration,energy\n";
  for (std::size_t i = 0; i < res.energy_trace.size(); ++i) {
    ecsv << i << "," << fmt_double(res.energy_trace[i]) << "\n";
  }
  write_text_file(dir + "/energy.csv", ecsv.str());
  std::ostringstream scsv;
  scsv << "x,y,z,local_degree\n";
  for (const Singularity& s : sing.items) {
    scsv << fmt_double(s.position.x) << "," << fmt_double(s.position.y) << ","
         << fmt_double(s.position.z) << "," << s.local_degree << "\n";
  }
  write_text_file(dir + "/singularities.csv", scsv.str());

  std::printf("energy %.12g iterations %d converged %d singularities %d residual %.6g\n",
              res.quad_energy, res.iterations, res.converged ? 1 : 0, sing.count(),
              el_residual(res.u, &sing));
  return kExitOk;
}

int cmd_homotopy(const ExperimentConfig& cfg, const std::string& flag_out) {
  const auto mesh = TriangulatedSphere::build_icosphere(cfg.get_int("level", 6));
  const double r = cfg.get_double("r", 0.3);
  const double p = cfg.get_double("p", 1.0);
  const Vec3 x = center_from(cfg);
  const SphereMap phi = resolve_map(mesh, cfg.get_string("phi", "identity"));
  const SphereMap psi = cfg.has("psi")
                            ? resolve_map(mesh, cfg.get_string("psi"))
                            : bubble_insert(phi, x, r, cfg.get_double("strength", 1.0));

  BuildOptions opts;
  opts.samples = cfg.get_int("samples", 60);
  opts.g_samples = cfg.get_int("g_samples", 20);
  const HomotopyPath path = build_homotopy(phi, psi, nullptr, r, x, p, opts);
  const EstimateReport rep = verify_estimate(path, cfg.get_double("bound", 20.0));

  const std::string dir = out_dir(cfg, flag_out, "hmlab-out");
  dump_homotopy(path, dir);
  std::printf("tau %.12g sup_norm %.12g sup_local %.12g denominator %.12g observed_c %.12g "
              "violated %d\n",
              path.tau, rep.sup_norm, rep.sup_local, rep.denominator, rep.observed_c,
              rep.violated ? 1 : 0);
  return kExitOk;
}

int cmd_nonuniqueness(const ExperimentConfig& cfg, const std::string& flag_out, int threads) {
  experiments::TransitionConfig tc;
  tc.level = cfg.get_int("level", tc.level);
  tc.ball_n = cfg.get_int("ball_n", tc.ball_n);
  tc.r = cfg.get_double("r", tc.r);
  tc.strength = cfg.get_double("strength", tc.strength);
  tc.p = cfg.get_double("p", tc.p);
  tc.g_samples = cfg.get_int("g_samples", tc.g_samples);
  tc.norm_samples = cfg.get_int("samples", tc.norm_samples);
  tc.lat = cfg.get_double("lat", tc.lat);
  tc.lon = cfg.get_double("lon", tc.lon);
  tc.eps = cfg.get_double("eps", tc.eps);
  tc.max_shrink = cfg.get_int("max_shrink", tc.max_shrink);
  tc.tolerance = cfg.get_double("tol", tc.tolerance);
  tc.max_iterations = cfg.get_int("max_iters", tc.max_iterations);
  tc.bracket_width = cfg.get_double("width", tc.bracket_width);
  tc.energy_window = cfg.get_double("energy_window", tc.energy_window);
  tc.shell = cfg.get_int("shell", tc.shell);
  tc.merge_cells = cfg.get_int("merge_cells", tc.merge_cells);
  tc.base_map = cfg.get_string("phi", tc.base_map);
  (void)threads;

  const experiments::TransitionRunResult res = experiments::run_transition(tc);

  const std::string dir = out_dir(cfg, flag_out, "hmlab-out");
  write_text_file(dir + "/counts.csv", res.counts_csv);
  write_text_file(dir + "/transition.txt", res.transition_block);
  dump_sphere_map(res.phi, dir + "/phi.txt");
  dump_sphere_map(res.psi, dir + "/psi.txt");

  if (!res.transition.conclusive) {
    std::printf("inconclusive: no singularity-count crossing\n%s", res.counts_csv.c_str());
    return kExitInconclusive;
  }

  dump_ball_map(res.transition.map_below, dir + "/minimizer_below.txt");
  dump_ball_map(res.transition.map_above, dir + "/minimizer_above.txt");
  auto sing_csv = [](const SingularityReport& rep) {
    std::ostringstream s;
    s << "x,y,z,local_degree\n";
    for (const Singularity& it : rep.items) {
      s << fmt_double(it.position.x) << "," << fmt_double(it.position.y) << ","
        << fmt_double(it.position.z) << "," << it.local_degree << "\n";
    }
    return s.str();
  };
  write_text_file(dir + "/singularities_below.csv", sing_csv(res.transition.sing_below));
  write_text_file(dir + "/singularities_above.csv", sing_csv(res.transition.sing_above));

  std::printf("t_star %.12g bracket [%.12g, %.12g] counts %d -> %d energies %.12g -> %.12g\n",
              res.transition.t_star, res.transition.t_lo, res.transition.t_hi,
              res.transition.count_below, res.transition.count_above,
              res.transition.energy_below, res.transition.energy_above);
  std::printf("r %.12g level %d shrinks %d sup_norm %.12g norm_at_tstar %.12g\n", res.final_r,
              res.final_level, res.shrinks, res.sup_norm, res.norm_at_tstar);
  return kExitOk;
}

int cmd_probe(const ExperimentConfig& cfg, const std::string& flag_out, int threads) {
  experiments::ProbeConfig pc;
  pc.level = cfg.get_int("level", pc.level);
  pc.radii = cfg.get_doubles("r_list", pc.radii);
  pc.strengths = cfg.get_doubles("strength_list", pc.strengths);
  pc.p = cfg.get_double("p", pc.p);
  pc.samples = cfg.get_int("samples", pc.samples);
  pc.lat = cfg.get_double("lat", pc.lat);
  pc.lon = cfg.get_double("lon", pc.lon);
  pc.base_map = cfg.get_string("phi", pc.base_map);
  pc.threads = threads > 0 ? threads : cfg.get_int("threads", 1);

  const experiments::ProbeResult res = experiments::run_probe(pc);
  const std::string dir = out_dir(cfg, flag_out, "hmlab-out");
  write_text_file(dir + "/probe.csv", res.csv);
  std::printf("%s", res.csv.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sphere-valued harmonic map laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string flag_out;
  int threads = 0;

  auto add_common = [&](CLI::App* sub, bool config_required = true) {
    auto* opt = sub->add_option("--config", config_path, "key=value configuration file");
    if (config_required) opt->required();
    sub->add_option("--out", flag_out, "output directory (overrides config)");
    sub->add_option("--threads", threads, "worker threads for independent sweeps");
  };

  auto* sub_degree = app.add_subcommand("degree", "topological degree of a sphere map");
  auto* sub_norm = app.add_subcommand("norm", "W^{1,p} norm or distance of sphere maps");
  auto* sub_minimize = app.add_subcommand("minimize", "relax the Dirichlet energy on the ball");
  auto* sub_homotopy = app.add_subcommand("homotopy", "controlled homotopy with norm estimate");
  auto* sub_nonuniq =
      app.add_subcommand("nonuniqueness", "singularity-count transition along a homotopy");
  auto* sub_probe = app.add_subcommand("probe", "distance vs homotopy sup-norm grid scan");
  for (auto* sub : {sub_degree, sub_norm, sub_minimize, sub_homotopy, sub_nonuniq, sub_probe}) {
    add_common(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = ExperimentConfig::load(config_path);
    if (sub_degree->parsed()) return cmd_degree(cfg);
    if (sub_norm->parsed()) return cmd_norm(cfg, flag_out);
    if (sub_minimize->parsed()) return cmd_minimize(cfg, flag_out);
    if (sub_homotopy->parsed()) return cmd_homotopy(cfg, flag_out);
    if (sub_nonuniq->parsed()) return cmd_nonuniqueness(cfg, flag_out, threads);
    if (sub_probe->parsed()) return cmd_probe(cfg, flag_out, threads);
    std::fprintf(stderr, "no subcommand\n");
    return kExitOther;
  } catch (const ResolutionError& e) {
    std::fprintf(stderr, "resolution error: %s\n", e.what());
    return kExitResolution;
  } catch (const TopologyError& e) {
    std::fprintf(stderr, "topology error: %s\n", e.what());
    return kExitTopology;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
}
