#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "silverdt/aggregation.hpp"
#include "silverdt/chart.hpp"
#include "silverdt/complexity.hpp"
#include "silverdt/ingest.hpp"
#include "silverdt/metrics.hpp"
#include "silverdt/pipeline.hpp"
#include "silverdt/serialize.hpp"
#include "silverdt/synth.hpp"

namespace py = pybind11;
using namespace silverdt;

namespace {

py::int_ to_py(const BigInt& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(v.str().c_str(), nullptr, 10));
}

SelectionMode parse_mode(const std::string& mode) {
  if (mode == "det" || mode == "deterministic") return SelectionMode::Deterministic;
  if (mode == "stoch" || mode == "stochastic") return SelectionMode::Stochastic;
  throw UsageError("mode must be 'det' or 'stoch', got '" + mode + "'");
}

TreeFormat format_of(const std::string& name) {
  const auto f = parse_format(name);
  if (!f) throw UsageError("unknown format '" + name + "'");
  return *f;
}

Convention convention_of(const std::string& name) {
  if (name == "par" || name == "original") return Convention::OriginalParseval;
  if (name == "rst") return Convention::RstParseval;
  throw UsageError("metric must be 'par' or 'rst', got '" + name + "'");
}

Aspect aspect_of(const std::string& name) {
  if (name == "structure") return Aspect::Structure;
  if (name == "nuclearity") return Aspect::Nuclearity;
  throw UsageError("aspect must be 'structure' or 'nuclearity', got '" + name + "'");
}

SelectorConfig selector(std::size_t beam, const std::string& mode, std::uint64_t seed,
                        bool with_nuclearity) {
  SelectorConfig c;
  c.beam_size = beam;
  c.mode = parse_mode(mode);
  c.rng_seed = seed;
  c.with_nuclearity = with_nuclearity;
  return c;
}

Treebank bank_of(const std::vector<DiscourseTree>& trees) {
  Treebank b;
  for (const auto& t : trees) b.add(t);
  return b;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["matched"] = r.matched;
  d["total"] = r.total;
  d["precision"] = r.precision();
  if (r.majority_label) d["majority_label"] = std::string(to_string(*r.majority_label));
  if (r.aspect == Aspect::Nuclearity) {
    py::dict confusion;
    for (auto g : r.confusion.labels())
      for (auto p : r.confusion.labels())
        confusion[py::make_tuple(std::string(to_string(g)), std::string(to_string(p)))] = r.confusion.at(g, p);
    d["confusion"] = confusion;
  }
  d["text"] = r.render();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sentiment-guided discourse tree generation";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", error);
  py::register_exception<StructuralError>(m, "StructuralError", error);
  py::register_exception<CapacityError>(m, "CapacityError", error);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<PairingError>(m, "PairingError", error);
  py::register_exception<AnnotationError>(m, "AnnotationError", error);
  py::register_exception<UsageError>(m, "UsageError", error);
  py::register_exception<IoError>(m, "IoError", error);

  py::class_<Edu>(m, "Edu")
      .def(py::init([](std::string text, double polarity, double attention) {
             return Edu{0, std::move(text), polarity, attention};
           }),
           py::arg("text"), py::arg("polarity"), py::arg("attention"))
      .def_readonly("index", &Edu::index)
      .def_readonly("text", &Edu::text)
      .def_readonly("polarity", &Edu::polarity)
      .def_readonly("attention", &Edu::attention);

  py::class_<AnnotatedDocument>(m, "Document")
      .def(py::init([](std::string doc_id, double gold, std::vector<Edu> edus,
                       std::vector<std::pair<int, int>> spans) {
             AnnotatedDocument d;
             d.doc_id = std::move(doc_id);
             d.gold_polarity = gold;
             for (std::size_t i = 0; i < edus.size(); ++i) edus[i].index = static_cast<int>(i) + 1;
             d.edus = std::move(edus);
             for (auto [s, e] : spans) d.sentence_spans.push_back({s, e});
             require_valid(d);
             return d;
           }),
           py::arg("doc_id"), py::arg("gold_polarity"), py::arg("edus"), py::arg("sentence_spans"))
      .def_static("from_record", [](const std::string& line, std::optional<int> max_edus) {
             const auto r = parse_input_record(line, IngestOptions{max_edus});
             if (!r.document) throw ValidationError(r.error);
             return *r.document;
           },
           py::arg("line"), py::arg("max_edus") = std::optional<int>(kDefaultMaxEdus))
      .def("to_record", &to_input_record)
      .def_readonly("doc_id", &AnnotatedDocument::doc_id)
      .def_readonly("gold_polarity", &AnnotatedDocument::gold_polarity)
      .def_readonly("edus", &AnnotatedDocument::edus)
      .def_property_readonly("sentence_spans", [](const AnnotatedDocument& d) {
        std::vector<std::pair<int, int>> out;
        for (const Span& s : d.sentence_spans) out.emplace_back(s.start, s.end);
        return out;
      })
      .def("__len__", &AnnotatedDocument::size);

  py::class_<DiscourseTree>(m, "Tree")
      .def_property_readonly("doc_id", &DiscourseTree::doc_id)
      .def_property_readonly("root_distance", &DiscourseTree::root_distance)
      .def_property_readonly("leaf_count", &DiscourseTree::leaf_count)
      .def_property_readonly("polarity", [](const DiscourseTree& t) { return t.root().polarity; })
      .def_property_readonly("nuclearity", [](const DiscourseTree& t) -> std::optional<std::string> {
        if (!t.root().nuclearity) return std::nullopt;
        return std::string(to_string(*t.root().nuclearity));
      })
      .def("nodes", [](const DiscourseTree& t) {
             py::list out;
             for (const TreeNode& n : t.nodes()) {
               py::dict d;
               d["span"] = py::make_tuple(n.span.start, n.span.end);
               d["polarity"] = n.polarity;
               d["attention"] = n.attention;
               d["nuclearity"] = n.nuclearity ? py::object(py::str(std::string(to_string(*n.nuclearity))))
                                              : py::object(py::none());
               d["left"] = n.left;
               d["right"] = n.right;
               out.append(d);
             }
             return out;
           },
           "Nodes in post-order; children are list indices, -1 for leaves.")
      .def("leaves", &in_order_leaves)
      .def("serialize", [](const DiscourseTree& t, const std::string& format, const AnnotatedDocument* doc) {
             return serialize_tree(t, format_of(format), doc);
           },
           py::arg("format") = "bracket", py::arg("doc") = nullptr)
      .def("__eq__", [](const DiscourseTree& a, const DiscourseTree& b) { return a == b; })
      .def("__repr__", [](const DiscourseTree& t) {
        return "<Tree " + t.doc_id() + " " + serialize_tree(t, TreeFormat::Bracket) + ">";
      });

  m.def("parse_bracket", &parse_bracket, py::arg("text"), py::arg("doc_id") = "");
  m.def("parse_tree_record", &parse_record, py::arg("line"));

  // aggregation
  m.def("aggregate_weighted", [](double pl, double al, double pr, double ar) {
    const auto a = aggregate_weighted(pl, al, pr, ar);
    return py::make_tuple(a.polarity, a.attention);
  });
  m.def("aggregate_multinuclear", [](double pl, double al, double pr, double ar) {
    const auto a = aggregate_multinuclear(pl, al, pr, ar);
    return py::make_tuple(a.polarity, a.attention);
  });
  m.def("assign_nuclearity", [](double al, double ar) {
    return std::string(to_string(assign_nuclearity(al, ar)));
  });

  // chart
  m.def("count_projective_trees", [](int n) { return to_py(count_projective_trees(n)); });
  m.def("temperature", &temperature, py::arg("n"), py::arg("coverage"));
  m.def("selection_probabilities",
        [](const std::vector<double>& d, double tau, double eps) { return selection_probabilities(d, tau, eps); },
        py::arg("distances"), py::arg("tau"), py::arg("epsilon") = 1e-4);
  m.def("beam_cky",
        [](const AnnotatedDocument& doc, std::size_t beam, const std::string& mode, std::uint64_t seed,
           bool with_nuclearity) {
          py::gil_scoped_release release;
          return beam_cky(doc, selector(beam, mode, seed, with_nuclearity));
        },
        py::arg("doc"), py::arg("beam") = 10, py::arg("mode") = "det", py::arg("seed") = 0,
        py::arg("with_nuclearity") = true);
  m.def("exact_cky", &exact_cky, py::arg("doc"), py::arg("with_nuclearity") = true);

  // complexity
  m.def("beam_space_bound", &beam_space_bound, py::arg("n"), py::arg("beam"));
  m.def("exact_space_bound", [](int n) { return to_py(exact_space_bound(n)); });
  m.def("format_units", [](const py::int_& v) { return format_units(BigInt(py::str(v).cast<std::string>())); });
  m.def("bounds_table", [](const std::vector<int>& edus, const std::vector<std::uint64_t>& beams) {
    return bounds_table(edus, beams).render();
  });

  // metrics
  m.def("micro_precision",
        [](const std::vector<DiscourseTree>& gold, const std::vector<DiscourseTree>& pred,
           const std::string& metric, const std::string& aspect) {
          return report_dict(micro_precision(bank_of(gold), bank_of(pred), convention_of(metric), aspect_of(aspect)));
        },
        py::arg("gold"), py::arg("pred"), py::arg("metric") = "par", py::arg("aspect") = "structure");
  m.def("majority_baseline",
        [](const std::vector<DiscourseTree>& train, const std::vector<DiscourseTree>& gold, const std::string& metric) {
          return report_dict(majority_class_baseline(bank_of(train), bank_of(gold), convention_of(metric)));
        },
        py::arg("train"), py::arg("gold"), py::arg("metric") = "par");
  m.def("branching", [](const AnnotatedDocument& doc, const std::string& kind) {
          if (kind == "right") return right_branching(doc);
          if (kind == "left") return left_branching(doc);
          if (kind == "hier-right") return hierarchical_branching(doc, Direction::Right);
          if (kind == "hier-left") return hierarchical_branching(doc, Direction::Left);
          throw UsageError("unknown branching kind '" + kind + "'");
        },
        py::arg("doc"), py::arg("kind") = "right");

  // pipeline
  m.def("synth",
        [](std::size_t count, std::uint64_t seed, int min_edus, int max_edus, double noise) {
          SynthOptions o;
          o.count = count;
          o.seed = seed;
          o.min_edus = min_edus;
          o.max_edus = max_edus;
          o.noise = noise;
          std::vector<AnnotatedDocument> docs;
          for (std::size_t i = 0; i < count; ++i) docs.push_back(synth_document(o, i));
          return docs;
        },
        py::arg("count") = 10, py::arg("seed") = 1, py::arg("min_edus") = 2, py::arg("max_edus") = 150,
        py::arg("noise") = 0.05);
  m.def("generate",
        [](const std::vector<AnnotatedDocument>& docs, std::size_t beam, const std::string& mode,
           std::uint64_t seed, int workers, bool with_nuclearity, bool exact) {
          RunConfig cfg;
          cfg.selector = selector(beam, mode, 0, with_nuclearity);
          cfg.global_seed = seed;
          cfg.workers = workers;
          cfg.exact = exact;
          GenerationResult r;
          {
            py::gil_scoped_release release;
            r = generate_treebank(docs, cfg);
          }
          return py::make_tuple(r.treebank.trees(), r.manifest.to_json());
        },
        py::arg("docs"), py::arg("beam") = 10, py::arg("mode") = "det", py::arg("seed") = 0,
        py::arg("workers") = 1, py::arg("with_nuclearity") = true, py::arg("exact") = false,
        "Returns (trees, manifest_json).");
}
