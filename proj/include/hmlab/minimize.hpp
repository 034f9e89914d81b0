#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hmlab/ball_mesh.hpp"
#include "hmlab/homotopy.hpp"
#include "hmlab/maps.hpp"

namespace hmlab {

struct MinimizeOptions {
  enum class Init { Radial, Constant, Supplied, Mirrored };

  int max_iterations = 20000;
  // Relative decrease of the lattice Dirichlet energy per sweep below which
  // the relaxation stops.
  double tolerance = 1e-8;
  // When > 0, the run instead stops once the tangential residual of the
  // discrete Euler-Lagrange system drops below this value.
  double residual_target = 0.0;
  int residual_check_every = 25;
  Init init = Init::Radial;
  Vec3 constant_value{0.0, 0.0, 1.0};
  const BallMap* supplied = nullptr;  // for Supplied and Mirrored
  bool record_trace = false;
};

struct MinimizeResult {
  BallMap u;
  double energy = 0.0;       // lattice edge energy (the relaxed objective)
  double quad_energy = 0.0;  // dirichlet_energy quadrature of u
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
  std::vector<double> energy_trace;
};

struct Singularity {
  Vec3 position{};
  std::array<int, 3> lattice{};
  int local_degree = 0;
};

struct SingularityReport {
  std::vector<Singularity> items;
  int shell = 1;
  double boundary_clearance = -1.0;  // min distance of a singularity to S^2
  int skipped_nodes = 0;             // shells that left the ball

  int count() const { return static_cast<int>(items.size()); }
  int degree_sum() const {
    int s = 0;
    for (const auto& it : items) s += it.local_degree;
    return s;
  }
};

struct TransitionOptions {
  double bracket_width = 1e-2;
  // Converged runs within this relative energy window of the best run
  // participate in the singularity count.
  double energy_window = 0.01;
  int shell = 1;
  int merge_cells = 2;
};

struct TransitionResult {
  bool conclusive = false;
  double t_lo = 0.0;
  double t_hi = 1.0;
  double t_star = 0.5;
  double width = 1.0;
  int count_below = 0;
  int count_above = 0;
  double energy_below = 0.0;
  double energy_above = 0.0;
  BallMap map_below, map_above;
  SingularityReport sing_below, sing_above;
  std::vector<std::pair<double, int>> sampled;  // (t, effective count)
};

// u(node) = phi(node/|node|); boundary nodes copy phi at their trace vertex,
// a node at the origin copies a neighbor.
BallMap radial_extension(const SphereMap& phi, const BallPtr& mesh);

// Pointwise nonlinear relaxation under fixed boundary trace: each interior
// node is replaced by the normalized neighbor average in a red-black sweep.
MinimizeResult minimize(const BallPtr& mesh, const SphereMap& phi, const MinimizeOptions& opts);

// Discrete L^2 norm over interior nodes of the tangential part of
// -lap(u) - |grad u|^2 u, skipping nodes within `exclusion_cells` of a
// detected singularity.
double el_residual(const BallMap& u, const SingularityReport* exclude = nullptr,
                   int exclusion_cells = 2);

// Local degree of u on small lattice shells around interior nodes; adjacent
// detections merge into one singularity.
SingularityReport find_singularities(const BallMap& u, int shell = 1, int merge_cells = 2);

// Bisection for the smallest homotopy parameter whose boundary datum forces
// more than M singularities on some near-minimal run.
TransitionResult bisect_transition(const HomotopyEval& homotopy, const BallPtr& mesh,
                                   const MinimizeOptions& opts, int max_singularities,
                                   const TransitionOptions& topts = {});

}  // namespace hmlab
