#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "treelip/cli.hpp"
#include "treelip/comp_op.hpp"
#include "treelip/theorem_keys.hpp"
#include "treelip/tree.hpp"

namespace py = pybind11;

namespace {

std::vector<std::uint32_t> indices(const treelip::VertexPath& v) { return {v.indices().begin(), v.indices().end()}; }

treelip::VertexPath vertex(const std::vector<std::uint32_t>& idx) {
  return treelip::VertexPath(std::vector<treelip::VertexPath::Index>(idx.begin(), idx.end()));
}

}  // namespace

PYBIND11_MODULE(_treelip, m) {
  m.doc() = "Composition operators on the little Lipschitz space of rooted trees";

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int status = 0;
        {
          py::gil_scoped_release release;
          status = treelip::cli::run(args, out, err);
        }
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line with `args`; returns (exit_status, stdout, stderr).");

  m.def(
      "theorem_keys",
      [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& k : treelip::theorem_keys()) out.emplace_back(std::string(k.key), std::string(k.statement));
        return out;
      },
      "Registered theorem keys with their statements.");

  m.def(
      "distance",
      [](const std::vector<std::uint32_t>& u, const std::vector<std::uint32_t>& v) {
        return treelip::distance(vertex(u), vertex(v));
      },
      py::arg("u"), py::arg("v"));

  m.def(
      "affine_orbit",
      [](std::int64_t a, std::int64_t b, bool fixzero, std::size_t start, std::size_t steps) {
        auto map = treelip::affine_path_map(a, b, fixzero);
        std::vector<std::size_t> out;
        auto v = treelip::path_vertex(start);
        for (std::size_t n = 0; n <= steps; ++n) {
          out.push_back(treelip::path_index(v));
          v = map(v);
        }
        return out;
      },
      py::arg("a"), py::arg("b"), py::arg("fixzero") = false, py::arg("start") = 0, py::arg("steps") = 8,
      "Integers phi^0(start), ..., phi^steps(start) for m -> a*m + b on the path tree.");

  m.def(
      "comb_map",
      [](const std::vector<std::uint32_t>& v) { return indices(treelip::comb_map()(vertex(v))); }, py::arg("v"));

  py::register_exception<treelip::SpecError>(m, "SpecError");
}
