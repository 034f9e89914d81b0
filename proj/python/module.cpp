#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <tuple>
#include <vector>

#include "hmlab/ball_mesh.hpp"
#include "hmlab/experiments.hpp"
#include "hmlab/homotopy.hpp"
#include "hmlab/maps.hpp"
#include "hmlab/minimize.hpp"
#include "hmlab/norms.hpp"
#include "hmlab/sphere_mesh.hpp"

namespace py = pybind11;
using namespace hmlab;

namespace {

using Triple = std::array<double, 3>;

Vec3 to_vec(const Triple& t) { return {t[0], t[1], t[2]}; }
Triple to_triple(Vec3 v) { return {v.x, v.y, v.z}; }

struct PySphere {
  SpherePtr ptr;
};

struct PyBall {
  BallPtr ptr;
};

struct PyMap {
  SphereMap map;
};

struct PyBallMap {
  BallMap map;
};

}  // namespace

PYBIND11_MODULE(_hmlab, m) {
  m.doc() = "Sphere-valued harmonic map laboratory: meshes, Sobolev norms, "
            "controlled homotopies, and Dirichlet-energy minimization.";

  py::class_<PySphere>(m, "TriangulatedSphere")
      .def_property_readonly("vertex_count", [](const PySphere& s) { return s.ptr->vertex_count(); })
      .def_property_readonly("triangle_count",
                             [](const PySphere& s) { return s.ptr->triangle_count(); })
      .def_property_readonly("level", [](const PySphere& s) { return s.ptr->level(); })
      .def_property_readonly("mesh_size", [](const PySphere& s) { return s.ptr->mesh_size(); })
      .def_property_readonly("total_area", [](const PySphere& s) { return s.ptr->total_area(); })
      .def("vertices", [](const PySphere& s) {
        std::vector<Triple> out;
        out.reserve(s.ptr->vertices().size());
        for (const Vec3& v : s.ptr->vertices()) out.push_back(to_triple(v));
        return out;
      });

  py::class_<PyBall>(m, "BallMesh")
      .def_property_readonly("node_count", [](const PyBall& b) { return b.ptr->node_count(); })
      .def_property_readonly("resolution", [](const PyBall& b) { return b.ptr->resolution(); })
      .def_property_readonly("total_volume", [](const PyBall& b) { return b.ptr->total_volume(); })
      .def_property_readonly("boundary_count", [](const PyBall& b) {
        return static_cast<int>(b.ptr->boundary_nodes().size());
      });

  py::class_<PyMap>(m, "SphereMap")
      .def("values", [](const PyMap& f) {
        std::vector<Triple> out;
        out.reserve(f.map.values.size());
        for (const Vec3& v : f.map.values) out.push_back(to_triple(v));
        return out;
      });

  py::class_<PyBallMap>(m, "BallMap")
      .def("values", [](const PyBallMap& f) {
        std::vector<Triple> out;
        out.reserve(f.map.values.size());
        for (const Vec3& v : f.map.values) out.push_back(to_triple(v));
        return out;
      });

  m.def("build_icosphere", [](int level) { return PySphere{TriangulatedSphere::build_icosphere(level)}; },
        py::arg("level"));

  m.def("build_ball_grid",
        [](int resolution, const PySphere* trace) {
          return PyBall{BallMesh::build_ball_grid(resolution, trace ? trace->ptr : nullptr)};
        },
        py::arg("resolution"), py::arg("trace_sphere") = nullptr);

  m.def("make_map",
        [](const PySphere& mesh, const std::string& name) {
          return PyMap{make_named_map(mesh.ptr, name)};
        },
        py::arg("mesh"), py::arg("name"),
        "Named maps: identity, constant, antipodal, wrap2, wrap3, equatorial.");

  m.def("degree",
        [](const PyMap& f) {
          const DegreeResult d = degree(f.map);
          return py::make_tuple(d.value, d.raw);
        },
        py::arg("map"), "Topological degree as (integer, raw value).");

  m.def("w1p_norm",
        [](const PyMap& f, double p) {
          const NormReport rep = w1p_norm(f.map, p);
          py::dict out;
          out["lp"] = rep.lp_part;
          out["seminorm"] = rep.seminorm_part;
          out["total"] = rep.total;
          return out;
        },
        py::arg("map"), py::arg("p"));

  m.def("w1p_distance",
        [](const PyMap& f, const PyMap& g, double p) { return w1p_distance(f.map, g.map, p); },
        py::arg("f"), py::arg("g"), py::arg("p"));

  m.def("bubble_insert",
        [](const PyMap& phi, const Triple& x, double r, double strength) {
          return PyMap{bubble_insert(phi.map, to_vec(x), r, strength)};
        },
        py::arg("phi"), py::arg("center"), py::arg("r"), py::arg("strength"),
        "Degree-preserving dipole perturbation inside the geodesic ball B_r(center).");

  m.def("homotopy_estimate",
        [](const PyMap& phi, const PyMap& psi, double r, const Triple& x, double p, int samples) {
          const HomotopyEval eval = make_homotopy_eval(phi.map, psi.map, nullptr, r, to_vec(x), p);
          const EstimateReport rep = streaming_estimate(eval, samples);
          py::dict out;
          out["tau"] = eval.tau();
          out["sup_norm"] = rep.sup_norm;
          out["denominator"] = rep.denominator;
          out["observed_c"] = rep.observed_c;
          return out;
        },
        py::arg("phi"), py::arg("psi"), py::arg("r"), py::arg("center"), py::arg("p") = 1.0,
        py::arg("samples") = 30,
        "Builds the three-phase homotopy and reports the sup-norm estimate.");

  m.def("radial_extension",
        [](const PyMap& phi, const PyBall& ball) {
          return PyBallMap{radial_extension(phi.map, ball.ptr)};
        },
        py::arg("phi"), py::arg("ball"));

  m.def("dirichlet_energy", [](const PyBallMap& u) { return dirichlet_energy(u.map); },
        py::arg("u"));

  m.def("minimize",
        [](const PyBall& ball, const PyMap& phi, double tolerance, int max_iterations,
           const std::string& init) {
          MinimizeOptions o;
          o.tolerance = tolerance;
          o.max_iterations = max_iterations;
          if (init == "radial") {
            o.init = MinimizeOptions::Init::Radial;
          } else if (init == "north") {
            o.init = MinimizeOptions::Init::Constant;
            o.constant_value = {0.0, 0.0, 1.0};
          } else if (init == "south") {
            o.init = MinimizeOptions::Init::Constant;
            o.constant_value = {0.0, 0.0, -1.0};
          } else {
            throw std::invalid_argument("init must be radial, north, or south");
          }
          const MinimizeResult res = minimize(ball.ptr, phi.map, o);
          const SingularityReport sing = find_singularities(res.u);
          py::dict out;
          out["energy"] = res.quad_energy;
          out["iterations"] = res.iterations;
          out["converged"] = res.converged;
          out["map"] = PyBallMap{res.u};
          py::list items;
          for (const Singularity& s : sing.items) {
            py::dict it;
            it["position"] = to_triple(s.position);
            it["local_degree"] = s.local_degree;
            items.append(it);
          }
          out["singularities"] = items;
          return out;
        },
        py::arg("ball"), py::arg("phi"), py::arg("tolerance") = 1e-8,
        py::arg("max_iterations") = 20000, py::arg("init") = "radial");

  m.def("find_singularities",
        [](const PyBallMap& u, int shell) {
          const SingularityReport rep = find_singularities(u.map, shell);
          py::list items;
          for (const Singularity& s : rep.items) {
            py::dict it;
            it["position"] = to_triple(s.position);
            it["local_degree"] = s.local_degree;
            items.append(it);
          }
          return items;
        },
        py::arg("u"), py::arg("shell") = 1);
}
