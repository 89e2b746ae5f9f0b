#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "mvfp/fa_gss.hpp"
#include "mvfp/ffa_cd.hpp"
#include "mvfp/io.hpp"
#include "mvfp/legalize.hpp"
#include "mvfp/model.hpp"
#include "mvfp/objective.hpp"

namespace py = pybind11;
using namespace mvfp;

namespace {

Floorplan plan_from_lists(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<int>& r) {
  Floorplan plan;
  plan.x = x;
  plan.y = y;
  plan.r.reserve(r.size());
  for (int code : r) plan.r.push_back(Orientation(code));
  return plan;
}

std::vector<int> codes_of(const Floorplan& plan) {
  std::vector<int> out;
  out.reserve(plan.r.size());
  for (Orientation o : plan.r) out.push_back(o.code());
  return out;
}

}  // namespace

PYBIND11_MODULE(_mvfp, m) {
  m.doc() = "Mixed-variable floorplanning: conjugate sub-gradient coordinates, "
            "distribution-evolution orientations";

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def_property_readonly("module_count",
                             [](const ProblemInstance& p) { return p.module_count(); })
      .def_property_readonly("pad_count",
                             [](const ProblemInstance& p) { return p.pads().size(); })
      .def_property_readonly("net_count",
                             [](const ProblemInstance& p) { return p.nets().size(); })
      .def_property_readonly("total_module_area",
                             [](const ProblemInstance& p) { return p.total_module_area(); })
      .def_property_readonly("module_names",
                             [](const ProblemInstance& p) {
                               std::vector<std::string> names;
                               for (const Module& mod : p.modules()) names.push_back(mod.name);
                               return names;
                             })
      .def("module_dims", [](const ProblemInstance& p, int i) {
        const Module& mod = p.modules().at(i);
        return py::make_tuple(mod.width, mod.height);
      });

  py::class_<Floorplan>(m, "Floorplan")
      .def(py::init(&plan_from_lists), py::arg("x"), py::arg("y"), py::arg("r"))
      .def_property_readonly("x", [](const Floorplan& p) { return p.x; })
      .def_property_readonly("y", [](const Floorplan& p) { return p.y; })
      .def_property_readonly("r", &codes_of);

  py::class_<OutlineSpec>(m, "OutlineSpec")
      .def_readonly("width", &OutlineSpec::width)
      .def_readonly("height", &OutlineSpec::height)
      .def_readonly("aspect_ratio", &OutlineSpec::aspect_ratio)
      .def_readonly("whitespace", &OutlineSpec::whitespace);

  py::class_<FfaResult>(m, "FfaResult")
      .def_readonly("plan", &FfaResult::plan)
      .def_readonly("legal", &FfaResult::legal)
      .def_readonly("hpwl", &FfaResult::hpwl)
      .def_readonly("overlap_area", &FfaResult::overlap_area)
      .def_readonly("outline_violation", &FfaResult::outline_violation)
      .def_readonly("generations", &FfaResult::generations)
      .def_readonly("seconds", &FfaResult::seconds);

  py::class_<GssTrial>(m, "GssTrial")
      .def_readonly("gamma", &GssTrial::gamma)
      .def_readonly("feasible", &GssTrial::feasible)
      .def_readonly("hpwl", &GssTrial::hpwl)
      .def_readonly("area", &GssTrial::area);

  py::class_<GssResult>(m, "GssResult")
      .def_readonly("found", &GssResult::found)
      .def_readonly("plan", &GssResult::plan)
      .def_readonly("gamma_min", &GssResult::gamma_min)
      .def_readonly("gamma_max", &GssResult::gamma_max)
      .def_readonly("hpwl", &GssResult::hpwl)
      .def_readonly("area", &GssResult::area)
      .def_readonly("trials", &GssResult::trials)
      .def_readonly("seconds", &GssResult::seconds);

  m.def("load_instance", &load_instance, py::arg("blocks"), py::arg("nets"), py::arg("pl"),
        py::arg("normalize_terminals") = false);
  m.def("load_instance_aux", &load_instance_aux, py::arg("aux"),
        py::arg("normalize_terminals") = false);
  m.def("outline_from_ratio", &outline_from_ratio, py::arg("total_area"),
        py::arg("aspect_ratio"), py::arg("whitespace"));

  m.def("hpwl", [](const ProblemInstance& instance, const Floorplan& plan) {
    return hpwl(instance, plan.x, plan.y, plan.r);
  });
  m.def("total_overlap", &total_overlap);
  m.def("bounding_area", &bounding_area);
  m.def("whitespace_ratio", &whitespace_ratio);
  m.def("legalize", &legalize_graph, py::arg("instance"), py::arg("plan"));
  m.def("is_legal", [](const ProblemInstance& instance, const Floorplan& plan,
                       const OutlineSpec& outline) {
    return has_zero_geometric_overlap(instance, plan) && inside_outline(instance, plan, outline);
  });

  m.def(
      "fixed_outline",
      [](const ProblemInstance& instance, double aspect_ratio, double gamma, int np,
         std::uint64_t seed, int max_generations, int threads) {
        FfaConfig config;
        config.outline =
            outline_from_ratio(instance.total_module_area(), aspect_ratio, gamma);
        config.dea.population = np;
        config.max_generations = max_generations;
        config.threads = threads;
        return ffa_cd(instance, config, seed);
      },
      py::arg("instance"), py::arg("aspect_ratio") = 1.0, py::arg("gamma") = 0.15,
      py::arg("np") = 5, py::arg("seed") = 1, py::arg("max_generations") = 500,
      py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());

  m.def(
      "min_area",
      [](const ProblemInstance& instance, double aspect_ratio, double epsilon, int np,
         std::uint64_t seed, int trial_generations, int threads) {
        GssConfig config;
        config.aspect_ratio = aspect_ratio;
        config.epsilon = epsilon;
        config.trial_generations = trial_generations;
        config.ffa.dea.population = np;
        config.ffa.threads = threads;
        return fa_gss(instance, config, seed);
      },
      py::arg("instance"), py::arg("aspect_ratio") = 1.0, py::arg("epsilon") = 0.002,
      py::arg("np") = 5, py::arg("seed") = 1, py::arg("trial_generations") = 60,
      py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());

  m.def("render_svg", [](const ProblemInstance& instance, const Floorplan& plan,
                         std::optional<OutlineSpec> outline) {
    return render_svg(instance, plan, outline ? &*outline : nullptr);
  }, py::arg("instance"), py::arg("plan"), py::arg("outline") = std::nullopt);
  m.def("write_pl", &write_pl);
}
