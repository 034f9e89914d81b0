#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hmlab/chart.hpp"
#include "hmlab/maps.hpp"
#include "hmlab/norms.hpp"
#include "hmlab/sphere_mesh.hpp"

namespace hmlab {

// Degree-one self-map of S^2: identity outside B_r(x), the annulus
// B_r \ B_{r/2} wraps back over the far side, the circle at r/2 pins to the
// antipode, and B_{r/2} stretches over the rest of the sphere.
class CollapseMap {
 public:
  CollapseMap(double r, Vec3 x);

  Vec3 center() const { return x_; }
  double radius() const { return r_; }

  Vec3 operator()(Vec3 v) const;
  // Radial profile: image geodesic distance for source distance s.
  double profile(double s) const;

  // Interpolated collapse: sigma=0 is the identity, sigma=1 is *this.
  Vec3 partial(Vec3 v, double sigma) const;

 private:
  double r_;
  Vec3 x_;
};

CollapseMap collapse_map(double r, Vec3 x);

// Radial rescaling diffeomorphism of S^2 around x: the geodesic disk of
// radius (1-t)r + t*tau dilates onto the disk of radius r, the remaining
// collar up to 2r compresses, and everything at distance >= 2r is fixed.
class RescaleMap {
 public:
  RescaleMap(double t, double r, double tau, Vec3 x);

  double t() const { return t_; }
  double r() const { return r_; }
  double tau() const { return tau_; }
  Vec3 center() const { return x_; }

  Vec3 operator()(Vec3 v) const;
  double profile(double s) const;
  // First branch of the profile (used by branch-agreement checks).
  double profile_inner(double s) const;
  double profile_outer(double s) const;

 private:
  double t_, r_, tau_, mid_;
  Vec3 x_;
};

RescaleMap phi_rescale(double t, double r, double tau, Vec3 x);

// Sampled homotopy between two sphere maps.
struct HomotopyPath {
  SpherePtr mesh;
  std::vector<double> ts;
  std::vector<SphereMap> maps;
  SphereMap phi, psi;
  Vec3 center{};
  double r = 0.0;
  double tau = 0.0;
  double p = 1.0;
  int map_degree = 0;
  // Norms of phi - H_t, whole sphere and restricted to B_{2r}(x).
  std::vector<NormReport> reports_global;
  std::vector<NormReport> reports_local;

  int sample_count() const { return static_cast<int>(ts.size()); }
};

// Geodesic interpolation homotopy; endpoints must be nowhere antipodal.
HomotopyPath make_geodesic_homotopy(const SphereMap& phi, const SphereMap& psi, int samples = 20);

// Rebuilds a homotopy so that every intermediate map equals the common
// endpoint values outside B_r(x), by patching three stages through the
// collapse map.
HomotopyPath stationary_homotopy(const HomotopyPath& g, double r, Vec3 x);

// tau selection for the rescaling: tau = min(r, ((|phi| + |psi|) / C1)^(p/(2-p)))
// with norms over B_{2r}(x) and C1 the sup of the same norm along g.
double choose_tau(const SphereMap& phi, const SphereMap& psi, const HomotopyPath& g, double r,
                  Vec3 x, double p);

// On-demand evaluator of the three-phase homotopy
//   t in [0,1/3]:   phi o Phi_{3t}
//   t in [1/3,2/3]: G_{3(t-1/3)} o Phi_1
//   t in [2/3,1]:   psi o Phi_{1-3(t-2/3)}
// Stationary outside B_{2r}(x) by construction (exact vertex copies).
class HomotopyEval {
 public:
  HomotopyEval(SphereMap phi, SphereMap psi, HomotopyPath g, double r, Vec3 x, double tau,
               double p);

  SphereMap at(double t) const;

  const SphereMap& phi() const { return phi_; }
  const SphereMap& psi() const { return psi_; }
  double r() const { return r_; }
  double tau() const { return tau_; }
  double p() const { return p_; }
  Vec3 center() const { return x_; }

 private:
  SphereMap phi_, psi_;
  HomotopyPath g_;
  double r_, tau_, p_;
  Vec3 x_;
  // Vertices with geodesic distance < 2r from x (the moving region).
  std::vector<int> local_;
  // Cached point locations of Phi_1(v) for the middle phase.
  std::vector<Vec3> phi1_points_;
  std::vector<PointLocation> phi1_locs_;
};

struct BuildOptions {
  int samples = 60;           // K: path has K+1 maps
  int g_samples = 20;         // default geodesic homotopy resolution
  bool attach_reports = true; // per-sample norms of phi - H_t
  bool check_degree = true;
};

// Full construction: preconditions, stationarization when needed, tau rule,
// sampling, per-sample norms.
HomotopyPath build_homotopy(const SphereMap& phi, const SphereMap& psi, const HomotopyPath* g,
                            double r, Vec3 x, double p, const BuildOptions& opts = {});

// Evaluator variant sharing the same setup; used when paths are too long to
// store or when intermediate boundary data are needed at arbitrary t.
HomotopyEval make_homotopy_eval(const SphereMap& phi, const SphereMap& psi, const HomotopyPath* g,
                                double r, Vec3 x, double p, int g_samples = 20);

struct EstimateReport {
  double sup_norm = 0.0;        // sup_t |phi - H_t|_{W^{1,p}(S^2)}
  double sup_local = 0.0;       // same over B_{2r}(x)
  double denominator = 0.0;     // |phi|_{B_{2r}} + |psi|_{B_{2r}}
  double observed_c = 0.0;
  double bound = 20.0;
  bool violated = false;
  double arg_sup_t = 0.0;
};

EstimateReport verify_estimate(const HomotopyPath& path, double bound = 20.0);

// Estimate sweep that never stores the sampled maps; `row` (when set) sees
// each sample's norms in order.
using EstimateRowFn =
    std::function<void(int k, double t, const NormReport& global, const NormReport& local)>;
EstimateReport streaming_estimate(const HomotopyEval& eval, int samples, double bound = 20.0,
                                  const EstimateRowFn& row = nullptr);

// Degree-preserving local modification: a +1/-1 bubble pair in chart
// coordinates at +-r/4 from x, blended to phi on the collar r/2 <= |y| <= r.
// strength in [0,1] interpolates pointwise between phi and the full dipole.
SphereMap bubble_insert(const SphereMap& phi, Vec3 x, double r, double strength);

}  // namespace hmlab
