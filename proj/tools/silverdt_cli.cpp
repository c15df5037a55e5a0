// silverdt: build, score and size silver-standard discourse treebanks.
//
// Exit status: 0 on success, 1 on usage errors, 2 on I/O errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "silverdt/chart.hpp"
#include "silverdt/complexity.hpp"
#include "silverdt/ingest.hpp"
#include "silverdt/metrics.hpp"
#include "silverdt/pipeline.hpp"
#include "silverdt/serialize.hpp"
#include "silverdt/synth.hpp"

namespace {

using namespace silverdt;

constexpr int kUsageExit = 1;
constexpr int kIoExit = 2;

/// Output stream for `path`, stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw IoError("cannot open output '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw IoError("error while writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input '" + path + "'");
  return in;
}

Convention convention_from(const std::string& metric) {
  return metric == "rst" ? Convention::RstParseval : Convention::OriginalParseval;
}

void print_rejections(const std::vector<Rejection>& rejections) {
  for (const auto& r : rejections) std::cerr << "skipped: " << r.reason << '\n';
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string input;
  std::string output = "-";
  std::string manifest;
  std::string format = "bracket";
  std::size_t beam = 10;
  std::string mode = "det";
  std::uint64_t seed = 0;
  int max_edus = kDefaultMaxEdus;
  int workers = 1;
  bool exact = false;
  bool structure_only = false;
};

int run_generate(const GenerateArgs& a) {
  RunConfig config;
  config.selector.beam_size = a.beam;
  config.selector.mode = a.mode == "stoch" ? SelectionMode::Stochastic : SelectionMode::Deterministic;
  config.selector.with_nuclearity = !a.structure_only;
  config.global_seed = a.seed;
  config.max_edus = a.max_edus > 0 ? std::optional<int>(a.max_edus) : std::nullopt;
  config.workers = a.workers;
  config.exact = a.exact;
  config.output_format = *parse_format(a.format);

  auto in = open_input(a.input);
  Output out(a.output);
  const Manifest manifest = generate_stream(in, out.stream(), config);
  out.close();

  std::string manifest_path = a.manifest;
  if (manifest_path.empty() && a.output != "-") manifest_path = a.output + ".manifest.json";
  if (!manifest_path.empty()) {
    Output m(manifest_path);
    m.stream() << manifest.to_json() << '\n';
    m.close();
  }
  print_rejections(manifest.skips);
  std::cerr << "processed " << manifest.processed << ", skipped " << manifest.skipped << " of "
            << manifest.input_lines << " lines; mean root distance " << manifest.mean_root_distance
            << '\n';
  if (manifest.processed == 0 && manifest.input_lines > 0) std::cerr << "warning: empty corpus\n";
  return 0;
}

struct EvaluateArgs {
  std::string gold;
  std::string pred;
  std::string metric = "par";
  std::string aspect = "structure";
  bool confusion = false;
};

int run_evaluate(const EvaluateArgs& a) {
  const Treebank gold = read_treebank_file(a.gold);
  const Treebank pred = read_treebank_file(a.pred);
  const Aspect aspect = a.aspect == "nuclearity" ? Aspect::Nuclearity : Aspect::Structure;
  const Convention convention = convention_from(a.metric);
  std::cout << micro_precision(gold, pred, convention, aspect).render();
  // Nuclearity reports already carry the matrix.
  if (a.confusion && aspect == Aspect::Structure)
    std::cout << "confusion (spans present in both gold and predicted trees only):\n"
              << confusion_matrix(gold, pred, convention).render();
  return 0;
}

struct BaselineArgs {
  std::string input;
  std::string gold;
  std::string train;
  std::string kind = "right";
  std::string output;
};

int run_baselines(const BaselineArgs& a) {
  if (a.kind == "majority") {
    if (a.train.empty() || a.gold.empty()) throw UsageError("majority baseline needs --train and --gold");
    const Treebank train = read_treebank_file(a.train);
    const Treebank gold = read_treebank_file(a.gold);
    for (Convention c : {Convention::OriginalParseval, Convention::RstParseval})
      std::cout << majority_class_baseline(train, gold, c).render();
    return 0;
  }

  const bool hierarchical = a.kind == "hier-right" || a.kind == "hier-left";
  const Direction direction = (a.kind == "right" || a.kind == "hier-right") ? Direction::Right : Direction::Left;
  Treebank predicted("baseline");
  if (!a.input.empty()) {
    auto in = open_input(a.input);
    IngestOptions options;
    options.max_edus = std::nullopt;
    const IngestResult docs = ingest(in, options);
    print_rejections(docs.rejections);
    for (const auto& doc : docs.documents)
      predicted.add(hierarchical ? hierarchical_branching(doc, direction)
                                 : direction == Direction::Right ? right_branching(doc) : left_branching(doc));
  } else if (!a.gold.empty()) {
    if (hierarchical) throw UsageError("hierarchical baselines need --input with sentence spans");
    for (const auto& t : read_treebank_file(a.gold).trees())
      predicted.add(branching_skeleton(t.doc_id(), t.leaf_count(), direction));
  } else {
    throw UsageError("baselines need --input or --gold");
  }

  if (!a.output.empty()) {
    Output out(a.output);
    for (const auto& t : predicted.trees()) out.stream() << treebank_entry(t, TreeFormat::Bracket);
    out.close();
  }
  if (!a.gold.empty()) {
    const Treebank gold = read_treebank_file(a.gold);
    for (Convention c : {Convention::OriginalParseval, Convention::RstParseval})
      std::cout << micro_precision(gold, predicted, c, Aspect::Structure).render();
  } else if (a.output.empty()) {
    for (const auto& t : predicted.trees()) std::cout << treebank_entry(t, TreeFormat::Bracket);
  }
  return 0;
}

int run_complexity(const std::vector<int>& edus, const std::vector<std::uint64_t>& beams) {
  std::cout << bounds_table(edus, beams).render();
  return 0;
}

int run_oracle(const std::string& input, bool with_nuclearity) {
  auto in = open_input(input);
  IngestOptions options;
  options.max_edus = std::nullopt;
  const IngestResult docs = ingest(in, options);
  print_rejections(docs.rejections);
  for (const auto& doc : docs.documents) {
    try {
      ExactChart chart(doc, with_nuclearity);
      const DiscourseTree t = chart.best_tree();
      std::printf("%s\t%.6f\t%zu\t%s\n", doc.doc_id.c_str(), t.root_distance(), chart.root_count(),
                  serialize_tree(t, TreeFormat::Bracket).c_str());
    } catch (const CapacityError& e) {
      std::cerr << "skipped " << doc.doc_id << ": " << e.what() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"silverdt: silver-standard discourse treebanks from sentiment annotations"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Build a treebank from annotated documents");
  generate->add_option("--input", gen.input, "Input records, one JSON document per line")->required();
  generate->add_option("--output", gen.output, "Treebank output path ('-' for stdout)");
  generate->add_option("--manifest", gen.manifest, "Manifest path (default: <output>.manifest.json)");
  generate->add_option("--format", gen.format, "bracket | records | dis | dot")
      ->check(CLI::IsMember({"bracket", "records", "structured-records", "dis", "dot"}));
  generate->add_option("--beam", gen.beam, "Beam size")->check(CLI::PositiveNumber);
  generate->add_option("--mode", gen.mode, "det | stoch")->check(CLI::IsMember({"det", "stoch"}));
  generate->add_option("--seed", gen.seed, "Global seed");
  generate->add_option("--max-edus", gen.max_edus, "Skip documents above this many EDUs (0: no cap)");
  generate->add_option("--workers", gen.workers, "Worker threads")->check(CLI::PositiveNumber);
  generate->add_flag("--exact", gen.exact, "Use exact CKY for documents under its cap");
  generate->add_flag("--structure-only", gen.structure_only, "Skip the multi-nuclear candidate");

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score a predicted treebank against gold");
  evaluate->add_option("--gold", eval.gold)->required();
  evaluate->add_option("--pred", eval.pred)->required();
  evaluate->add_option("--metric", eval.metric, "par | rst")->check(CLI::IsMember({"par", "rst"}));
  evaluate->add_option("--aspect", eval.aspect, "structure | nuclearity")
      ->check(CLI::IsMember({"structure", "nuclearity"}));
  evaluate->add_flag("--confusion", eval.confusion, "Print the nuclearity confusion matrix");

  BaselineArgs base;
  auto* baselines = app.add_subcommand("baselines", "Branching and majority-class baselines");
  baselines->add_option("--input", base.input, "Annotated documents (for tree shapes and sentences)");
  baselines->add_option("--gold", base.gold, "Gold treebank to score against");
  baselines->add_option("--train", base.train, "Training treebank (majority baseline)");
  baselines->add_option("--kind", base.kind, "right | left | hier-right | hier-left | majority")
      ->check(CLI::IsMember({"right", "left", "hier-right", "hier-left", "majority"}));
  baselines->add_option("--output", base.output, "Write baseline trees here");

  std::vector<int> edus{20, 30, 100};
  std::vector<std::uint64_t> beams{1, 10, 100};
  auto* complexity = app.add_subcommand("complexity", "Space bounds for exact and beam CKY");
  complexity->add_option("--edus", edus, "EDU counts")->delimiter(',');
  complexity->add_option("--beams", beams, "Beam sizes")->delimiter(',');

  std::string oracle_input;
  bool oracle_nuclearity = false;
  auto* oracle = app.add_subcommand("oracle", "Exact CKY over small documents");
  oracle->add_option("--input", oracle_input)->required();
  oracle->add_flag("--with-nuclearity", oracle_nuclearity);

  SynthOptions synth;
  std::string synth_output = "-";
  std::string gold_model = "planted";
  auto* synthesize = app.add_subcommand("synth", "Write a synthetic annotated corpus");
  synthesize->add_option("--count", synth.count)->check(CLI::PositiveNumber);
  synthesize->add_option("--seed", synth.seed);
  synthesize->add_option("--min-edus", synth.min_edus)->check(CLI::PositiveNumber);
  synthesize->add_option("--max-edus", synth.max_edus)->check(CLI::PositiveNumber);
  synthesize->add_option("--mean-edus", synth.mean_edus, "Geometric length law with this mean");
  synthesize->add_option("--noise", synth.noise, "Half-width of uniform gold noise");
  synthesize->add_option("--gold-model", gold_model, "planted | mean")->check(CLI::IsMember({"planted", "mean"}));
  synthesize->add_option("--output", synth_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*evaluate) return run_evaluate(eval);
    if (*baselines) return run_baselines(base);
    if (*complexity) return run_complexity(edus, beams);
    if (*oracle) return run_oracle(oracle_input, oracle_nuclearity);
    if (*synthesize) {
      synth.gold_model = gold_model == "mean" ? GoldModel::WeightedMean : GoldModel::PlantedTree;
      Output out(synth_output);
      synth_corpus(synth, out.stream());
      out.close();
      return 0;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageExit;
  }
  return kUsageExit;
}
