#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stratakit/bundle.hpp"
#include "stratakit/errors.hpp"
#include "stratakit/estimates.hpp"
#include "stratakit/report.hpp"
#include "stratakit/scene.hpp"
#include "stratakit/stratify.hpp"

namespace py = pybind11;
using namespace stratakit;

namespace {

Vec to_vec(const std::vector<double>& v) { return Vec::from(v); }

std::vector<Vec> to_vecs(const std::vector<std::vector<double>>& pts) {
  std::vector<Vec> out;
  for (const auto& p : pts) out.push_back(to_vec(p));
  return out;
}

// Scene plus its built set; reports cross the boundary as canonical JSON.
struct Scene {
  SceneSpec spec;
  ClosedSet set;

  explicit Scene(const std::string& text) : spec(parse_scene(text)), set(build_set(spec.set, spec.ambient_dim)) {}

  std::vector<std::vector<double>> probes() const {
    std::vector<std::vector<double>> out;
    for (const Vec& x : scene_probes(spec, set)) out.push_back(x.to_vector());
    return out;
  }

  std::optional<std::vector<double>> nearest(const std::vector<double>& x) const {
    const auto p = xi(set, to_vec(x), default_tol_unique(set));
    if (!p) return std::nullopt;
    return p->to_vector();
  }

  std::string stratify(int m, const std::vector<std::vector<double>>& pts) const {
    StratifyOptions o;
    o.q_grid = spec.params.q_grid;
    o.seed = spec.params.seed;
    const std::vector<Vec> probes = pts.empty() ? scene_probes(spec, set) : to_vecs(pts);
    return canonical_dump(to_json(stratify_sampled(set, m, probes, o)));
  }

  std::string verify(const std::string& estimate, int samples) const {
    CampaignOptions o;
    o.samples = samples > 0 ? samples : spec.params.samples;
    o.seed = spec.params.seed;
    o.q = spec.params.q;
    o.r = spec.params.r;
    o.s = spec.params.s;
    return canonical_dump(to_json(run_campaign(set, parse_estimate_id(estimate), o)));
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "stratakit core bindings";
  m.attr("__version__") = kLibraryVersion;

  // later registrations are tried first
  py::register_exception<Error>(m, "StratakitError", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<Scene>(m, "Scene")
      .def(py::init<const std::string&>(), py::arg("text"))
      .def_property_readonly("scene_id", [](const Scene& s) { return s.spec.scene_id; })
      .def_property_readonly("ambient_dim", [](const Scene& s) { return s.spec.ambient_dim; })
      .def("to_json", [](const Scene& s) { return canonical_dump(scene_to_json(s.spec)); })
      .def("diameter", [](const Scene& s) { return scene_diameter(s.set); })
      .def("distance", [](const Scene& s, const std::vector<double>& x) { return distance(s.set, to_vec(x)); })
      .def("nearest", &Scene::nearest, "Unique nearest point, or None")
      .def("probes", &Scene::probes)
      .def("stratify_json", &Scene::stratify, py::arg("m"), py::arg("points") = std::vector<std::vector<double>>{})
      .def("verify_json", &Scene::verify, py::arg("estimate"), py::arg("samples") = 0);

  m.def("one_sided_kappa", &one_sided_kappa, py::arg("q"), py::arg("r"), py::arg("s"));
  m.def(
      "gamma_constant",
      [](const std::vector<std::vector<double>>& gens, const std::vector<std::vector<double>>& u,
         const std::vector<double>& v) {
        const int n = static_cast<int>(v.size());
        const std::vector<Vec> ub = to_vecs(u);
        return gamma_constant(PolyhedralCone(n, to_vecs(gens)), Subspace::spanned_by(n, ub), to_vec(v));
      },
      py::arg("generators"), py::arg("u_basis"), py::arg("v"));
  m.def("estimates", [] {
    std::vector<std::string> out;
    for (EstimateId id : all_estimates()) out.emplace_back(estimate_name(id));
    return out;
  });
}
