#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "procmine/analytics/clustering.hpp"
#include "procmine/analytics/features.hpp"
#include "procmine/analytics/labels.hpp"
#include "procmine/analytics/models.hpp"
#include "procmine/cli.hpp"
#include "procmine/conformance.hpp"
#include "procmine/error.hpp"
#include "procmine/machining.hpp"
#include "procmine/net_transform.hpp"
#include "procmine/simulate.hpp"
#include "procmine/template_parser.hpp"
#include "procmine/tpn.hpp"
#include "procmine/xes.hpp"
#include "procmine/yaml_log.hpp"

namespace py = pybind11;
using namespace procmine;
namespace an = procmine::analytics;

namespace {

an::Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    an::Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols) throw ValidationError("rows differ in length");
        for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> to_rows(const an::Matrix& m) {
    std::vector<std::vector<double>> out(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
    return out;
}

py::dict triple(const conformance::FitnessTriple& f) {
    py::dict d;
    d["move_model"] = f.move_model;
    d["move_log"] = f.move_log;
    d["trace"] = f.trace;
    return d;
}

const char* move_name(conformance::MoveKind k) {
    switch (k) {
        case conformance::MoveKind::synchronous: return "sync";
        case conformance::MoveKind::model: return "model";
        case conformance::MoveKind::log: return "log";
        case conformance::MoveKind::invisible_model: return "invisible";
    }
    return "";
}

py::dict clustering(const an::ClusteringResult& r) {
    py::dict d;
    d["k"] = r.k;
    d["assignments"] = r.assignments;
    d["silhouette"] = r.silhouette;
    d["average_silhouette"] = r.average_silhouette;
    d["wss"] = r.wss;
    return d;
}

// held by value so the variant does not go through the STL casters
struct Classifier {
    an::ClassifierModel model;
};

std::vector<logs::XesTrace> xes_traces(const std::string& xes_text) { return logs::parse_xes(xes_text).traces; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Process mining on CPEE templates and logs";

    py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<ModelInfeasible>(m, "ModelInfeasible", PyExc_ValueError);

    py::class_<PetriNet>(m, "PetriNet")
        .def_property_readonly("places", &PetriNet::places)
        .def_property_readonly("transitions",
                               [](const PetriNet& n) {
                                   std::vector<std::string> out;
                                   for (const auto& t : n.transitions()) out.push_back(t.name);
                                   return out;
                               })
        .def_property_readonly("invisible",
                               [](const PetriNet& n) {
                                   std::vector<std::string> out;
                                   for (const auto& t : n.transitions())
                                       if (!t.visible) out.push_back(t.name);
                                   return out;
                               })
        .def_property_readonly("initial_marking", [](const PetriNet& n) { return n.initial_marking().tokens; })
        .def_property_readonly("final_markings",
                               [](const PetriNet& n) {
                                   std::vector<std::vector<std::uint32_t>> out;
                                   for (const auto& f : n.final_markings()) out.push_back(f.tokens);
                                   return out;
                               })
        .def("to_tpn", &emit_tpn)
        .def("__repr__", [](const PetriNet& n) {
            return "<PetriNet " + std::to_string(n.places().size()) + " places, " +
                   std::to_string(n.transitions().size()) + " transitions>";
        });

    m.def("clean_label", [](const std::string& s) { return clean_label(s); });
    m.def("template_to_net", [](const std::string& xml) { return template_to_net(parse_template(xml)); },
          py::arg("xml"), "Parse template XML and build the finalized net.");
    m.def("load_template_net", [](const std::filesystem::path& p) { return template_to_net(load_template(p)); });
    m.def("parse_tpn", [](const std::string& text, bool finalize) {
              auto net = parse_tpn(text);
              return finalize ? finalize_net(std::move(net)) : net;
          },
          py::arg("text"), py::arg("finalize") = true);

    m.def("simulate", [](const std::string& xml, std::uint64_t seed, std::size_t count) {
              auto doc = parse_template(xml);
              std::mt19937_64 rng(seed);
              std::vector<std::vector<std::pair<std::string, std::string>>> out;
              for (std::size_t i = 0; i < count; ++i) {
                  std::vector<std::pair<std::string, std::string>> t;
                  for (const auto& e : simulate_trace(doc, rng).events) t.emplace_back(e.get("concept:name"), logs::event_phase(e));
                  out.push_back(std::move(t));
              }
              return out;
          },
          py::arg("xml"), py::arg("seed") = 1, py::arg("count") = 1,
          "Conforming executions as (label, phase) lists.");

    m.def("yaml_to_xes", [](const std::vector<std::string>& yaml_texts) {
              std::vector<logs::TraceRecord> traces;
              for (const auto& t : yaml_texts) traces.push_back(logs::parse_yaml_trace(t));
              return logs::serialize_xes(logs::build_xes(traces));
          },
          py::arg("yaml_texts"));
    m.def("machining_csv", [](const std::string& yaml_text) {
              return logs::machining_csv_text(logs::extract_machining_rows(logs::parse_yaml_trace(yaml_text)));
          },
          py::arg("yaml_text"));

    m.def("align", [](const PetriNet& net, const std::string& xes_text, const std::string& mapping) {
              py::list out;
              auto kind = conformance::parse_mapping_kind(mapping);
              auto empty = conformance::empty_trace_cost(net);
              for (const auto& t : xes_traces(xes_text)) {
                  auto mt = conformance::map_trace(t, kind, net);
                  auto a = conformance::align(net, mt);
                  py::dict d;
                  d["trace"] = t.get("concept:name");
                  d["cost"] = a.raw_cost;
                  std::vector<std::string> moves;
                  for (const auto& mv : a.moves) moves.emplace_back(move_name(mv.kind));
                  d["moves"] = moves;
                  d["fitness"] = triple(conformance::fitness(a, empty, mt.size()));
                  out.append(d);
              }
              return out;
          },
          py::arg("net"), py::arg("xes"), py::arg("mapping") = "label");

    m.def("fitness_table", [](const std::string& xes_text, const std::vector<std::pair<std::string, PetriNet>>& nets,
                              const std::string& mapping, unsigned jobs) {
              std::vector<conformance::NamedNet> named;
              for (const auto& [n, net] : nets) named.push_back({n, net});
              conformance::TableOptions opt;
              opt.mapping = conformance::parse_mapping_kind(mapping);
              opt.jobs = jobs;
              auto table = conformance::build_fitness_table(logs::parse_xes(xes_text), named, opt);
              py::list rows;
              for (const auto& r : table.rows) {
                  py::dict d;
                  d["members"] = r.members;
                  d["multiplicity"] = r.multiplicity;
                  py::list cells;
                  for (const auto& c : r.cells) cells.append(c ? py::object(triple(*c)) : py::object(py::none()));
                  d["cells"] = cells;
                  auto a = conformance::assign_template(r);
                  d["assigned"] = a.template_index ? py::object(py::int_(*a.template_index)) : py::object(py::none());
                  d["conflict"] = a.conflict;
                  rows.append(d);
              }
              py::dict out;
              out["rows"] = rows;
              out["csv"] = conformance::fitness_table_csv(table);
              out["warnings"] = table.warnings;
              return out;
          },
          py::arg("xes"), py::arg("templates"), py::arg("mapping") = "label", py::arg("jobs") = 1);

    m.def("window_indices", [](std::size_t n, const std::string& position, std::size_t k) {
              return an::window_indices(n, {an::parse_window_position(position), k});
          },
          py::arg("n"), py::arg("position"), py::arg("k"));
    m.def("round_half_even", &an::round_half_even);
    m.def("split_train_test", [](std::size_t n, double ratio, std::uint64_t seed) {
              auto s = an::split_train_test(n, ratio, seed);
              return std::make_pair(s.train, s.test);
          },
          py::arg("n"), py::arg("ratio") = 0.75, py::arg("seed") = 1);

    py::class_<Classifier>(m, "Classifier")
        .def("predict", [](const Classifier& c, const std::vector<std::vector<double>>& x) {
            return an::predict(c.model, to_matrix(x)).predictions;
        })
        .def("accuracy", [](const Classifier& c, const std::vector<std::vector<double>>& x, const an::Labels& y) {
            return *an::predict(c.model, to_matrix(x), &y).accuracy;
        })
        .def_property_readonly("info", [](const Classifier& w) {
            const auto& c = w.model;
            py::dict d;
            if (const auto* s = std::get_if<an::SvmModel>(&c)) {
                d["kind"] = "svm";
                d["kernel"] = an::to_string(s->kernel);
                d["gamma"] = s->gamma;
                d["cost"] = s->cost;
                d["support_vectors"] = s->support_vector_count();
                d["kkt_residual"] = s->kkt_residual;
                d["converged"] = s->converged;
            } else {
                const auto& nb = std::get<an::NaiveBayesModel>(c);
                d["kind"] = "naive_bayes";
                d["prior"] = std::vector<double>(nb.prior.begin(), nb.prior.end());
            }
            return d;
        });

    m.def("train_svm", [](const std::vector<std::vector<double>>& x, const an::Labels& y, const std::string& kernel,
                          double cost, std::optional<double> gamma, bool scale) {
              an::SvmParams p;
              p.kernel = an::parse_kernel(kernel);
              p.cost = cost;
              p.gamma = gamma;
              p.scale = scale;
              return Classifier{an::train_svm(to_matrix(x), y, p)};
          },
          py::arg("x"), py::arg("y"), py::arg("kernel") = "radial", py::arg("cost") = 1.0,
          py::arg("gamma") = py::none(), py::arg("scale") = true);
    m.def("train_naive_bayes", [](const std::vector<std::vector<double>>& x, const an::Labels& y) {
              return Classifier{an::train_naive_bayes(to_matrix(x), y)};
          },
          py::arg("x"), py::arg("y"));

    m.def("hclust", [](const std::vector<std::vector<double>>& x, std::size_t k) {
              return clustering(an::hierarchical_cluster(to_matrix(x), k));
          },
          py::arg("x"), py::arg("k"));
    m.def("kmeans", [](const std::vector<std::vector<double>>& x, std::size_t k, std::uint64_t seed, std::size_t restarts) {
              an::KmeansOptions opt;
              opt.restarts = restarts;
              auto r = an::kmeans_cluster(to_matrix(x), k, seed, opt);
              auto d = clustering(r);
              d["centers"] = to_rows(r.centers);
              return d;
          },
          py::arg("x"), py::arg("k"), py::arg("seed") = 1, py::arg("restarts") = 20);
    m.def("silhouette", [](const std::vector<std::vector<double>>& x, const std::vector<std::size_t>& a) {
              return an::silhouette(to_matrix(x), a).widths;
          });
    m.def("cluster_accuracy", [](const std::vector<std::size_t>& a, const an::Labels& y) {
              return an::cluster_accuracy(a, y).accuracy;
          });
    m.def("measurement_stats", [](const std::string& text, std::optional<std::string> shift) {
              auto t = an::parse_measurements(text);
              if (shift) {
                  auto s = an::parse_shift(*shift);
                  t = an::apply_measurement_shift(t, s.from, s.to, s.offset);
              }
              auto st = an::measurement_stats(t);
              py::dict d;
              for (const auto& c : st.counts) d[py::str(c.name)] = py::make_tuple(c.pass, c.fail, c.missing);
              py::dict out;
              out["counts"] = d;
              out["confusion"] = st.confusion;
              return out;
          },
          py::arg("text"), py::arg("shift") = py::none());

    m.def("run_cli", [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              int code = 0;
              {
                  py::gil_scoped_release release;
                  code = cli::run(args, out, err);
              }
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Run one procmine command line; returns (exit code, stdout, stderr).");
}
