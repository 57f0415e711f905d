#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curvlab/capacity.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/functional.hpp"
#include "curvlab/generators.hpp"
#include "curvlab/graph_io.hpp"
#include "curvlab/isoperimetry.hpp"
#include "curvlab/separation.hpp"
#include "curvlab/spectral.hpp"
#include "curvlab/verify.hpp"

namespace py = pybind11;
using namespace curvlab;

namespace {

VertexSubset subset_of(const MarkovChain& c, const std::vector<std::string>& labels) {
  std::vector<int> idx;
  for (const auto& l : labels) idx.push_back(c.index_of(l));
  return VertexSubset(c, idx);
}

std::vector<std::string> labels_of(const MarkovChain& c, const VertexSubset& s) {
  std::vector<std::string> out;
  for (int x : s.members()) out.push_back(c.labels()[x]);
  return out;
}

py::dict result_dict(const TheoremCheckResult& r) {
  py::dict d;
  d["theorem"] = r.theorem;
  d["instance"] = r.instance;
  d["status"] = std::string(to_string(r.status));
  d["hypothesis"] = r.hypothesis;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["margin"] = r.margin;
  d["detail"] = r.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_curvlab, m) {
  m.doc() = "Curvature and functional-inequality toolkit for finite reversible Markov chains";

  py::register_exception<InvalidChain>(m, "InvalidChain", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<EnumerationLimit>(m, "EnumerationLimit", PyExc_RuntimeError);

  py::class_<MarkovChain>(m, "Chain")
      .def_property_readonly("size", &MarkovChain::size)
      .def_property_readonly("labels", &MarkovChain::labels)
      .def_property_readonly("kernel", &MarkovChain::kernel)
      .def_property_readonly("measure", &MarkovChain::measure)
      .def_property_readonly("distances", &MarkovChain::distances)
      .def("is_lazy", &MarkovChain::is_lazy, py::arg("tol") = 1e-12)
      .def("edges", [](const MarkovChain& c) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const Edge& e : c.edges()) out.emplace_back(c.labels()[e.x], c.labels()[e.y]);
        return out;
      })
      .def("__repr__", [](const MarkovChain& c) { return "<curvlab.Chain n=" + std::to_string(c.size()) + ">"; });

  m.def("from_json", [](const std::string& text) { return build_chain(spec_from_json(text).description); },
        py::arg("text"));
  m.def("generate_json",
        [](const std::string& family, const std::map<std::string, std::string>& params, std::uint64_t seed) {
          return to_json(generate(family, params, seed));
        },
        py::arg("family"), py::arg("params") = std::map<std::string, std::string>{}, py::arg("seed") = 20240611);

  m.def("laplacian", &laplacian, py::arg("chain"), py::arg("f"));
  m.def("energy", &energy, py::arg("chain"), py::arg("f"));
  m.def("heat_apply", &heat_apply, py::arg("chain"), py::arg("f"), py::arg("t"));

  m.def("kappa", [](const MarkovChain& c, const std::string& x, const std::string& y) {
    return kappa(c, c.index_of(x), c.index_of(y)).value;
  });
  m.def("kappa_inf", [](const MarkovChain& c, const std::string& x, const std::string& y) {
    return kappa_inf(c, c.index_of(x), c.index_of(y));
  });
  m.def("min_kappa", [](const MarkovChain& c) { return min_kappa(c); });

  m.def("eigenvalues", [](const MarkovChain& c) { return spectrum(c).eigenvalues; });
  m.def("spectral_gap", [](const MarkovChain& c) { return spectrum(c).lambda; });
  m.def("dirichlet_eigenvalue", [](const MarkovChain& c, const std::vector<std::string>& W) {
    return dirichlet_eigenvalue(c, subset_of(c, W));
  });
  m.def("alpha_spectral", [](const MarkovChain& c) { return alpha_spectral(c).value; });

  m.def("alpha_logsob",
        [](const MarkovChain& c, int restarts, std::uint64_t seed) {
          OptimizerConfig o;
          o.restarts = restarts;
          o.seed = seed;
          return alpha_logsob(c, o).value;
        },
        py::arg("chain"), py::arg("restarts") = 64, py::arg("seed") = 20240611);
  m.def("alpha_mod",
        [](const MarkovChain& c, int restarts, std::uint64_t seed) {
          OptimizerConfig o;
          o.restarts = restarts;
          o.seed = seed;
          return alpha_mod(c, o).value;
        },
        py::arg("chain"), py::arg("restarts") = 64, py::arg("seed") = 20240611);
  m.def("mixing_time", [](const MarkovChain& c) { return mixing_time(c).tau; });
  m.def("counterexample_ratio", &counterexample_ratio, py::arg("eps"));

  m.def("capacity", [](const MarkovChain& c, const std::vector<std::string>& A, const std::vector<std::string>& B) {
    const auto r = capacity(c, subset_of(c, A), subset_of(c, B));
    return py::make_tuple(r.value, r.potential);
  });

  m.def("cheeger", [](const MarkovChain& c, const std::string& weight) {
    const CheegerWeight w = weight == "log" ? CheegerWeight::log
                            : weight == "sqrtlog" ? CheegerWeight::sqrtlog
                                                  : CheegerWeight::plain;
    const auto r = cheeger(c, w);
    return py::make_tuple(r.value, labels_of(c, r.witness));
  }, py::arg("chain"), py::arg("weight") = "plain");
  m.def("obs_diameter", [](const MarkovChain& c, double eps) { return obs_diameter(c, eps).value; });
  m.def("concentration_profile", [](const MarkovChain& c) { return concentration_profile(c).conc; });

  m.def("separate",
        [](const MarkovChain& c, const std::vector<std::string>& X, const std::vector<std::string>& K,
           const std::vector<std::string>& Y) {
          const CutPartition cut = make_cut(c, subset_of(c, X), subset_of(c, K), subset_of(c, Y));
          const auto sol = separation_solve(c, cut);
          py::dict d;
          d["f"] = sol.f;
          d["C"] = sol.C;
          d["residual"] = sol.residual;
          d["converged"] = sol.converged;
          d["verified"] = verify_separation(c, cut, sol).all();
          return d;
        },
        py::arg("chain"), py::arg("X"), py::arg("K"), py::arg("Y"));

  m.def("verify_json",
        [](const std::string& spec_text, const std::string& theorems, const std::string& id) {
          py::list out;
          for (const auto& r : verify({id, spec_from_json(spec_text)}, parse_theorem_list(theorems))) {
            out.append(result_dict(r));
          }
          return out;
        },
        py::arg("spec"), py::arg("theorems") = "all", py::arg("instance") = "input");

  m.attr("__version__") = CURVLAB_VERSION;
}
