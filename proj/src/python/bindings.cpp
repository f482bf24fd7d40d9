#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "p2n/distnet.hpp"
#include "p2n/errors.hpp"
#include "p2n/pipeline.hpp"

namespace py = pybind11;

namespace {

p2n::Linkage linkage_arg(const std::string& name) {
    auto l = p2n::parse_linkage(name);
    if (!l) throw py::value_error("unknown linkage '" + name + "'");
    return *l;
}

p2n::SimilarityMatrix matrix_from(const std::vector<std::vector<double>>& full) {
    p2n::SimilarityMatrix m(full.size());
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (full[i].size() != full.size()) throw py::value_error("similarity matrix must be square");
        for (std::size_t j = i + 1; j < full.size(); ++j) m.set(i, j, full[i][j]);
    }
    return m;
}

std::vector<std::vector<double>> matrix_to(const p2n::SimilarityMatrix& m) {
    std::vector<std::vector<double>> out(m.size(), std::vector<double>(m.size(), 0.0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j) out[i][j] = out[j][i] = m.at(i, j);
    return out;
}

py::list merges_to(const p2n::Dendrogram& d) {
    py::list out;
    for (const auto& m : d.merges) out.append(py::make_tuple(m.left, m.right, m.similarity, m.new_size));
    return out;
}

p2n::Dendrogram dendrogram_from(std::size_t n, const std::string& linkage,
                                const std::vector<std::tuple<std::size_t, std::size_t, double, std::size_t>>& merges) {
    p2n::Dendrogram d{n, linkage_arg(linkage), {}};
    std::size_t step = 0;
    for (const auto& [l, r, s, size] : merges) d.merges.push_back({++step, l, r, s, size});
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Subsystem recovery by hierarchical clustering of software facts.";

    py::register_exception<p2n::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<p2n::DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
    py::register_exception<p2n::NetworkError>(m, "NetworkError", PyExc_ConnectionError);

    py::class_<p2n::FactsDocument>(m, "FactsDocument")
        .def_property_readonly("entity_ids",
                               [](const p2n::FactsDocument& d) {
                                   std::vector<std::string> ids;
                                   for (const auto& e : d.graph.entities()) ids.push_back(e.id);
                                   return ids;
                               })
        .def_property_readonly("declared_modules",
                               [](const p2n::FactsDocument& d) {
                                   std::vector<std::string> mods;
                                   for (const auto& e : d.graph.entities()) mods.push_back(e.declared_module);
                                   return mods;
                               })
        .def_property_readonly("relationship_count",
                               [](const p2n::FactsDocument& d) { return d.graph.relationships().size(); })
        .def("to_facts", &p2n::write_facts)
        .def("__eq__", [](const p2n::FactsDocument& a, const p2n::FactsDocument& b) { return a == b; })
        .def("__len__", [](const p2n::FactsDocument& d) { return d.graph.size(); });

    m.def("parse_facts", &p2n::parse_facts, py::arg("text"));
    m.def("load_facts", &p2n::load_facts, py::arg("path"));

    m.def("euclidean_distance",
          [](const std::vector<double>& u, const std::vector<double>& v) {
              try {
                  return p2n::euclidean_distance(u, v);
              } catch (const std::invalid_argument& e) {
                  throw py::value_error(e.what());
              }
          },
          py::arg("u"), py::arg("v"));
    m.def("similarity", &p2n::similarity, py::arg("distance"));

    m.def(
        "similarity_matrix",
        [](const p2n::FactsDocument& doc, double part, double subclass, double ref) {
            auto f = p2n::prepare_features(doc, {part, subclass, ref});
            return matrix_to(p2n::similarity_matrix(f.matrix));
        },
        py::arg("doc"), py::arg("weight_part") = 1.0, py::arg("weight_subclass") = 1.0, py::arg("weight_ref") = 1.0,
        "Full symmetric similarity matrix (diagonal 0) of the standardized structural features.");

    m.def(
        "update_similarity",
        [](const std::string& linkage, double s_ij, double s_ik, std::size_t size_j, std::size_t size_k) {
            return p2n::update_similarity(linkage_arg(linkage), s_ij, s_ik, size_j, size_k);
        },
        py::arg("linkage"), py::arg("s_ij"), py::arg("s_ik"), py::arg("size_j") = 1, py::arg("size_k") = 1);

    m.def(
        "cluster",
        [](const std::vector<std::vector<double>>& sim, const std::string& linkage) {
            return merges_to(p2n::cluster(matrix_from(sim), linkage_arg(linkage)));
        },
        py::arg("similarity"), py::arg("linkage") = "uavg",
        "Merges as (left, right, similarity, new_size) tuples.");

    m.def(
        "cut",
        [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double, std::size_t>>& merges,
           std::optional<std::size_t> k, std::optional<double> threshold) {
            auto d = dendrogram_from(n, "single", merges);
            if (k.has_value() == threshold.has_value()) throw py::value_error("pass exactly one of k or threshold");
            try {
                return (k ? p2n::cut_k(d, *k) : p2n::cut_threshold(d, *threshold)).labels;
            } catch (const std::invalid_argument& e) {
                throw py::value_error(e.what());
            }
        },
        py::arg("n"), py::arg("merges"), py::kw_only(), py::arg("k") = py::none(), py::arg("threshold") = py::none());

    m.def(
        "to_newick",
        [](const std::vector<std::string>& names,
           const std::vector<std::tuple<std::size_t, std::size_t, double, std::size_t>>& merges) {
            return p2n::to_newick(dendrogram_from(names.size(), "single", merges), names);
        },
        py::arg("leaf_names"), py::arg("merges"));

    m.def(
        "agreement",
        [](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
            try {
                return p2n::agreement(a, b);
            } catch (const std::invalid_argument& e) {
                throw py::value_error(e.what());
            }
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "classify_maintenance",
        [](const std::string& quality) {
            std::vector<std::string> out;
            try {
                for (auto c : p2n::classify_maintenance(quality)) out.emplace_back(p2n::to_string(c));
            } catch (const std::invalid_argument& e) {
                throw py::value_error(e.what());
            }
            return out;
        },
        py::arg("quality"));

    m.def(
        "plan_tasks",
        [](std::size_t n, std::size_t workers) {
            std::vector<std::pair<std::size_t, std::size_t>> out;
            try {
                for (const auto& t : p2n::plan_tasks(n, workers)) out.emplace_back(t.row_start, t.row_end);
            } catch (const std::invalid_argument& e) {
                throw py::value_error(e.what());
            }
            return out;
        },
        py::arg("n"), py::arg("workers"));

    m.def(
        "run_pipeline",
        [](const p2n::FactsDocument& doc, const std::string& linkage, std::optional<std::size_t> k,
           std::optional<double> threshold, double part, double subclass, double ref) {
            p2n::PipelineConfig cfg;
            cfg.linkage = linkage_arg(linkage);
            cfg.k = k;
            cfg.threshold = threshold;
            cfg.weights = {part, subclass, ref};
            p2n::PipelineResult r;
            {
                py::gil_scoped_release release;
                r = p2n::run_pipeline(doc, cfg);
            }
            py::dict out;
            out["labels"] = r.assignment.labels;
            out["k"] = r.assignment.k;
            out["merges"] = merges_to(r.dendrogram);
            out["agreement"] = r.agreement;
            out["saturation"] = r.report.overall_saturation;
            py::list moves;
            for (const auto& s : r.suggestions) moves.append(py::make_tuple(s.entity_id, s.from_module, s.to_module));
            out["suggestions"] = moves;
            out["files"] = p2n::render_outputs(doc, r);
            return out;
        },
        py::arg("doc"), py::arg("linkage") = "uavg", py::kw_only(), py::arg("k") = py::none(),
        py::arg("threshold") = py::none(), py::arg("weight_part") = 1.0, py::arg("weight_subclass") = 1.0,
        py::arg("weight_ref") = 1.0);

    m.def(
        "serve_worker",
        [](const std::string& endpoint, const std::string& worker_id) {
            auto ep = p2n::net::parse_endpoint(endpoint);
            py::gil_scoped_release release;
            return p2n::serve_worker(ep, {worker_id});
        },
        py::arg("endpoint"), py::arg("worker_id") = "py-worker");
}
