#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srcloc/diffusion.hpp"
#include "srcloc/estimators.hpp"
#include "srcloc/harness.hpp"
#include "srcloc/lip.hpp"
#include "srcloc/theory.hpp"

namespace py = pybind11;
using namespace srcloc;

PYBIND11_MODULE(_core, m) {
  m.doc() = "SI-cascade simulation and infection-path source localization";

  py::class_<Network>(m, "Network")
      .def_readonly("node_count", &Network::node_count)
      .def_readonly("edge_count", &Network::edge_count)
      .def_readonly("is_tree", &Network::is_tree)
      .def("neighbors",
           [](const Network& g, NodeId u) {
             if (!g.has_node(u)) throw py::index_error("node out of range");
             return g.adjacency[u];
           })
      .def("degree", [](const Network& g, NodeId u) {
        if (!g.has_node(u)) throw py::index_error("node out of range");
        return g.degree(u);
      });

  m.def("from_edges", &from_edges, py::arg("node_count"), py::arg("edges"));
  m.def(
      "load_edge_list",
      [](const std::string& path) {
        LabeledNetwork ln = load_edge_list(path);
        return py::make_tuple(ln.net, ln.labels);
      },
      py::arg("path"), "Returns (network, labels)");
  m.def("network_from_spec", &network_from_spec, py::arg("spec"));
  m.def("generate_line", &generate_line, py::arg("n"));
  m.def("generate_regular_tree", &generate_regular_tree, py::arg("degree"), py::arg("depth"));
  m.def("generate_er", &generate_er, py::arg("n"), py::arg("edges"), py::arg("seed"));
  m.def("generate_ba", &generate_ba, py::arg("n"), py::arg("attach"), py::arg("seed"));
  m.def("random_tree", &random_tree, py::arg("n"), py::arg("seed"));

  py::class_<Cascade>(m, "Cascade")
      .def_readonly("source", &Cascade::source)
      .def_readonly("t0", &Cascade::t0)
      .def_readonly("first_infection", &Cascade::first_infection)
      .def_readonly("infection_parent", &Cascade::infection_parent)
      .def("infected", &Cascade::infected);

  py::class_<Observation>(m, "Observation")
      .def(py::init([](const std::vector<NodeId>& nodes,
                       const std::vector<std::int64_t>& times) {
             if (nodes.size() != times.size())
               throw py::value_error("nodes and timestamps differ in length");
             std::vector<std::size_t> idx(nodes.size());
             for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
             std::sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return nodes[a] < nodes[b]; });
             Observation o;
             for (std::size_t i : idx) {
               o.sampled.push_back(nodes[i]);
               o.timestamps.push_back(times[i]);
             }
             return o;
           }),
           py::arg("nodes"), py::arg("timestamps"))
      .def_readonly("sampled", &Observation::sampled)
      .def_readonly("timestamps", &Observation::timestamps)
      .def("time_of", [](const Observation& o, NodeId u) -> py::object {
        auto t = o.time_of(u);
        return t ? py::cast(*t) : py::none();
      });

  m.def(
      "simulate_si",
      [](const Network& g, NodeId source, double p, std::uint64_t seed, std::int64_t t0) {
        return simulate_si(g, DiffusionConfig{p, t0, source}, seed);
      },
      py::arg("network"), py::arg("source"), py::arg("p"), py::arg("seed"),
      py::arg("t0") = 0);
  m.def("sample_observers", &sample_observers, py::arg("cascade"), py::arg("q"),
        py::arg("seed"));

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("source", &Estimate::source)
      .def_readonly("score", &Estimate::score)
      .def_readonly("log_likelihood", &Estimate::log_likelihood)
      .def_readonly("search_region", &Estimate::search_region)
      .def_readonly("feasible", &Estimate::feasible)
      .def_readonly("tied", &Estimate::tied)
      .def_readonly("used_fallback", &Estimate::used_fallback);

  m.def("reduced_search_space", &reduced_search_space, py::arg("network"), py::arg("obs"));
  m.def("localize_tree", &localize_tree, py::arg("network"), py::arg("obs"), py::arg("p"),
        py::arg("full_sampled_set") = false);
  m.def("localize_graph", &localize_graph, py::arg("network"), py::arg("obs"),
        py::arg("p"), py::arg("theta") = 0.95);
  m.def("min_timestamp_estimator", &min_timestamp_estimator, py::arg("obs"),
        py::arg("seed"));

  m.def("line_detection_probability", &line_detection_probability, py::arg("p"),
        py::arg("q"));
  m.def("line_expected_distance_bound", &line_expected_distance_bound, py::arg("p"),
        py::arg("q"));
  m.def("sigma_diff_pmf", &sigma_diff_pmf, py::arg("p"), py::arg("q"), py::arg("n"));
  m.def(
      "regular_tree_bound",
      [](int degree, double p, double q, int horizon) {
        RegularTreeBound b = regular_tree_bound(degree, p, q, horizon);
        py::dict d;
        d["bound"] = b.bound;
        d["x1"] = b.x1;
        d["x_star"] = b.x_star;
        d["x_seq"] = b.x_seq;
        return d;
      },
      py::arg("degree"), py::arg("p"), py::arg("q"), py::arg("horizon"));
  m.def("naive_line_stats", &naive_line_stats, py::arg("q"));

  py::class_<CandidatePath>(m, "CandidatePath")
      .def_readonly("anchor", &CandidatePath::anchor)
      .def_readonly("u_set", &CandidatePath::u_set)
      .def_readonly("u_star_set", &CandidatePath::u_star_set)
      .def_readonly("path_nodes", &CandidatePath::path_nodes)
      .def_readonly("length", &CandidatePath::length);
  m.def("candidate_path", &candidate_path, py::arg("network"), py::arg("v_star"),
        py::arg("obs"));
}
