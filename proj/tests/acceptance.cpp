// Acceptance suite: one PASS/FAIL line per criterion.
//
//   silverdt_acceptance [--cli PATH] [--workdir DIR] [--soak-docs N] [--only LIST]
//                       [--expect-fail LIST] [--report FILE]
//
// The scale soak runs first so that its peak resident set is measured before
// anything else has touched the heap; its line is still printed last.
#include <sys/resource.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <streambuf>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "oracle.hpp"
#include "silverdt/chart.hpp"
#include "silverdt/complexity.hpp"
#include "silverdt/ingest.hpp"
#include "silverdt/metrics.hpp"
#include "silverdt/pipeline.hpp"
#include "silverdt/serialize.hpp"
#include "silverdt/synth.hpp"

using namespace silverdt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  std::string out(static_cast<std::size_t>(std::snprintf(nullptr, 0, f, args...)), '\0');
  std::snprintf(out.data(), out.size() + 1, f, args...);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  status = ::pclose(pipe);
  return out;
}

struct Context {
  std::string cli;
  fs::path workdir;
  std::size_t soak_docs = 250000;
};

// ---------------------------------------------------------------------------

double parse_si(const std::string& text) {
  static const std::string prefixes = "KMGTPEZYRQ";
  std::size_t pos = 0;
  double v = std::stod(text, &pos);
  std::string unit = text.substr(pos);
  if (unit.size() == 2) v *= std::pow(1000.0, double(prefixes.find(unit[0]) + 1));
  return v;
}

Outcome table_reproduction(const Context& ctx) {
  const auto t0 = Clock::now();
  int status = 0;
  const std::string out = run_capture(ctx.cli + " complexity --edus 20,30,100 --beams 1,10,100", status);
  const double elapsed = seconds_since(t0);
  if (status != 0) return {false, "complexity subcommand failed"};

  // row label -> formatted cells in column order, plus exact integers
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> rows;
  std::istringstream lines(out);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    std::istringstream words(line);
    std::string label, cell, exact;
    words >> label;
    while (words >> cell >> exact) rows[label].push_back({cell, exact.substr(1, exact.size() - 2)});
  }
  const std::map<std::string, std::vector<std::string>> want{
      {"1", {"1.6KB", "3.7KB", "40KB"}},
      {"10", {"24KB", "48KB", "440KB"}},
      {"100", {"920KB", "1.5MB", "7.9MB"}}};
  int matched = 0;
  for (const auto& [beam, cells] : want)
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (rows[beam].size() > i && rows[beam][i].first == cells[i]) ++matched;

  bool unconstrained = rows["inf"].size() >= 2 && rows["inf"][0].first == "3.6GB" &&
                       rows["inf"][1].first == "1.9PB";
  double worst = 0.0;
  for (std::size_t i = 0; unconstrained && i < 2; ++i) {
    const double exact = std::stod(rows["inf"][i].second);
    worst = std::max(worst, std::abs(parse_si(rows["inf"][i].first) - exact) / exact);
  }
  unconstrained = unconstrained && worst <= 0.03;
  return {matched == 9 && unconstrained && elapsed < 1.0,
          fmt("%d/9 beam entries, unconstrained 3.6GB/1.9PB off by at most %.2f%%, %.3fs", matched,
              100 * worst, elapsed)};
}

Outcome catalan_check(const Context&) {
  const auto t0 = Clock::now();
  bool ok = count_projective_trees(5) == 14;
  std::mt19937_64 rng(2);
  int agreed = 0;
  for (int n = 2; n <= 8; ++n) {
    auto doc = oracle::random_document(n, rng);
    doc.sentence_spans = {{1, n}};
    if (BigInt(ExactChart(doc, false).root_count()) == oracle::catalan(n - 1)) ++agreed;
  }
  const double elapsed = seconds_since(t0);
  ok = ok && agreed == 7 && elapsed < 1.0;
  return {ok, fmt("C(4)=14 for five EDUs, chart root counts match for %d/7 lengths, %.3fs", agreed, elapsed)};
}

Outcome oracle_equivalence(const Context&) {
  const auto t0 = Clock::now();
  SynthOptions o;
  o.seed = 3;
  o.min_edus = 1;
  int docs = 0, equal = 0;
  double worst = 0.0;
  for (bool nuclearity : {true, false}) {
    o.max_edus = nuclearity ? kExactCapNuclearity : kExactCapStructure;
    o.seed += 1;
    for (std::size_t i = 0; i < 200; ++i) {
      // Odd draws drop the sentence boundaries so that nothing limits the
      // number of trees.
      auto doc = synth_document(o, i / 2);
      if (i % 2) doc.sentence_spans = {{1, doc.size()}};
      const int n = doc.size();
      SelectorConfig cfg;
      cfg.with_nuclearity = nuclearity;
      BigInt beam = count_projective_trees(n);
      if (nuclearity && n > 1) beam <<= (n - 1);
      cfg.beam_size = static_cast<std::size_t>(beam);
      const double diff = std::abs(beam_cky(doc, cfg).root_distance() -
                                   exact_cky(doc, nuclearity).root_distance());
      worst = std::max(worst, diff);
      ++docs;
      if (diff <= 1e-12) ++equal;
    }
  }
  const double elapsed = seconds_since(t0);
  return {equal == docs && elapsed < 60.0,
          fmt("%d/%d documents equal, largest gap %.3g, %.2fs", equal, docs, worst, elapsed)};
}

Outcome beam_monotonicity(const Context&) {
  const auto t0 = Clock::now();
  SynthOptions o;
  o.seed = 4;
  o.min_edus = o.max_edus = 30;
  int monotone = 0;
  std::string first_bad;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto doc = synth_document(o, i);
    double prev = INFINITY;
    bool ok = true;
    std::string trace;
    for (std::size_t b : {1, 5, 10, 50}) {
      SelectorConfig cfg;
      cfg.beam_size = b;
      const double d = beam_cky(doc, cfg).root_distance();
      trace += fmt(" B=%zu:%.3g", b, d);
      if (d > prev) ok = false;
      prev = d;
    }
    if (ok) ++monotone;
    else if (first_bad.empty()) first_bad = "; e.g. " + doc.doc_id + trace;
  }
  const double elapsed = seconds_since(t0);
  return {monotone == 50 && elapsed < 60.0,
          fmt("%d/50 documents non-increasing, %.2fs", monotone, elapsed) + first_bad};
}

Outcome selector_calibration(const Context&) {
  const auto t0 = Clock::now();
  SelectorConfig cfg;
  cfg.mode = SelectionMode::Stochastic;
  cfg.beam_size = 1;
  Rng rng(20240);
  const std::vector<double> two{0.1, 0.2};
  bool ok = true;
  std::string detail;
  for (double tau : {1.0, 5.0}) {
    const double expect = selection_probabilities(two, tau, cfg.epsilon)[0];
    int first = 0;
    for (int t = 0; t < 10000; ++t) first += select_indices(two, cfg, tau, rng)[0] == 0;
    const double freq = first / 10000.0;
    ok = ok && std::abs(freq - expect) <= 0.01;
    detail += fmt("tau=%g: %.4f vs %.4f; ", tau, freq, expect);
  }

  // Forced large temperature: ten candidates of very different distances.
  const std::vector<double> ten{0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.2, 1.9};
  std::vector<int> hits(ten.size(), 0);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) ++hits[select_indices(ten, cfg, 1e12, rng)[0]];
  double chi2 = 0.0;
  const double e = double(trials) / double(ten.size());
  for (int h : hits) chi2 += (h - e) * (h - e) / e;
  const boost::math::chi_squared dist(double(ten.size() - 1));
  const double critical = boost::math::quantile(dist, 0.99);
  ok = ok && chi2 < critical;
  const double elapsed = seconds_since(t0);
  detail += fmt("uniformity chi2=%.2f < %.2f, %.2fs", chi2, critical, elapsed);
  return {ok && elapsed < 30.0, detail};
}

Outcome metric_identity(const Context&) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6);
  std::vector<AnnotatedDocument> docs;
  Treebank gold;
  for (int i = 0; i < 200; ++i) {
    const int n = std::uniform_int_distribution<int>(2, 40)(rng);
    const std::string id = "g" + std::to_string(i);
    docs.push_back(oracle::random_document(n, rng, 4, id));
    gold.add(oracle::random_tree(n, rng, true, id));
  }
  using Make = std::function<DiscourseTree(const AnnotatedDocument&)>;
  const std::vector<std::pair<std::string, Make>> kinds{
      {"right", [](const AnnotatedDocument& d) { return right_branching(d); }},
      {"left", [](const AnnotatedDocument& d) { return left_branching(d); }},
      {"hier-right", [](const AnnotatedDocument& d) { return hierarchical_branching(d, Direction::Right); }},
      {"hier-left", [](const AnnotatedDocument& d) { return hierarchical_branching(d, Direction::Left); }}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, make] : kinds) {
    Treebank pred;
    int exact = 0;
    for (const auto& d : docs) {
      auto t = make(d);
      const DiscourseTree& g = *gold.find(d.doc_id);
      const auto o = score_tree(g, t, Convention::OriginalParseval, Aspect::Structure);
      const auto r = score_tree(g, t, Convention::RstParseval, Aspect::Structure);
      // r.matched / r.total == (o.matched / o.total + 1) / 2, in integers
      if (2 * r.matched * o.total == (o.matched + o.total) * r.total) ++exact;
      pred.add(std::move(t));
    }
    const double par = micro_precision(gold, pred, Convention::OriginalParseval, Aspect::Structure).precision();
    const double rst = micro_precision(gold, pred, Convention::RstParseval, Aspect::Structure).precision();
    const bool micro = std::abs(rst - (par + 1) / 2) <= 0.01;
    ok = ok && exact == 200 && micro;
    detail += fmt("%s %d/200 exact, %.4f->%.4f; ", name.c_str(), exact, par, rst);
  }
  const double elapsed = seconds_since(t0);
  detail += fmt("%.2fs", elapsed);
  return {ok && elapsed < 30.0, detail};
}

// Criteria 7, 8 and 9 share one generation run.
struct GenerationRun {
  bool ran = false;
  bool identical = false;
  double seconds = 0.0;
  std::string error;
  fs::path input, output;
};

GenerationRun generation_run(const Context& ctx) {
  GenerationRun run;
  fs::create_directories(ctx.workdir);
  run.input = ctx.workdir / "corpus.jsonl";
  run.output = ctx.workdir / "trees.w1.jsonl";
  const fs::path eight = ctx.workdir / "trees.w8.jsonl";
  {
    SynthOptions o;
    o.count = 1000;
    o.seed = 8;
    o.min_edus = 2;
    o.max_edus = 150;
    std::ofstream out(run.input, std::ios::binary);
    synth_corpus(o, out);
  }
  const std::string common = ctx.cli + " generate --input " + run.input.string() +
                             " --format records --beam 10 --mode stoch --seed 8";
  const auto t0 = Clock::now();
  int status = 0;
  run_capture(common + " --workers 1 --output " + run.output.string() + " 2>&1", status);
  if (status != 0) {
    run.error = "generate with 1 worker failed";
    return run;
  }
  run_capture(common + " --workers 8 --output " + eight.string() + " 2>&1", status);
  if (status != 0) {
    run.error = "generate with 8 workers failed";
    return run;
  }
  run.seconds = seconds_since(t0);
  run.ran = true;
  const std::string a = slurp(run.output);
  run.identical = !a.empty() && a == slurp(eight);
  return run;
}

Outcome constituent_counts(const GenerationRun& run) {
  if (!run.ran) return {false, run.error};
  const Treebank bank = read_treebank_file(run.output.string());
  std::size_t good = 0;
  for (const auto& t : bank.trees()) {
    const auto n = static_cast<std::size_t>(t.leaf_count());
    const auto o = extract_constituents(t, Convention::OriginalParseval, Aspect::Nuclearity).size();
    const auto r = extract_constituents(t, Convention::RstParseval, Aspect::Nuclearity).size();
    if (o == n - 1 && r == 2 * n - 2) ++good;
  }
  return {bank.size() == 1000 && good == bank.size(),
          fmt("%zu/%zu trees with n-1 and 2n-2 constituents", good, bank.size())};
}

Outcome determinism(const GenerationRun& run) {
  if (!run.ran) return {false, run.error};
  return {run.identical && run.seconds < 120.0,
          fmt("workers 1 vs 8 %s, both runs %.1fs", run.identical ? "byte-identical" : "DIFFER",
              run.seconds)};
}

Outcome sentence_first(const GenerationRun& run) {
  if (!run.ran) return {false, run.error};
  const auto docs = ingest_file(run.input.string()).documents;
  const Treebank bank = read_treebank_file(run.output.string());
  std::size_t nodes = 0, violations = 0, missing = 0;
  for (const auto& doc : docs) {
    const DiscourseTree* t = bank.find(doc.doc_id);
    if (!t) {
      ++missing;
      continue;
    }
    const AdmissibleSpans ok(doc);
    for (const TreeNode& n : t->nodes()) {
      if (n.is_leaf()) continue;
      ++nodes;
      if (!ok(n.span, t->node(n.left).span.end)) ++violations;
    }
  }
  return {violations == 0 && missing == 0 && nodes > 0,
          fmt("%zu violations over %zu internal nodes, %zu trees missing", violations, nodes, missing)};
}

// ---------------------------------------------------------------------------
// Scale soak: synthetic records are produced on the fly and trees are
// counted, not stored.

class SynthBuf : public std::streambuf {
 public:
  explicit SynthBuf(SynthOptions o) : o_(o) {}

 protected:
  int_type underflow() override {
    if (next_ == o_.count) return traits_type::eof();
    line_ = to_input_record(synth_document(o_, next_++));
    line_ += '\n';
    setg(line_.data(), line_.data(), line_.data() + line_.size());
    return traits_type::to_int_type(line_[0]);
  }

 private:
  SynthOptions o_;
  std::size_t next_ = 0;
  std::string line_;
};

class CountBuf : public std::streambuf {
 public:
  std::size_t bytes = 0;

 protected:
  int_type overflow(int_type c) override {
    ++bytes;
    return traits_type::not_eof(c);
  }
  std::streamsize xsputn(const char*, std::streamsize n) override {
    bytes += static_cast<std::size_t>(n);
    return n;
  }
};

std::size_t current_rss() {
  long pages = 0, resident = 0;
  std::ifstream statm("/proc/self/statm");
  statm >> pages >> resident;
  return static_cast<std::size_t>(resident) * static_cast<std::size_t>(::sysconf(_SC_PAGESIZE));
}

std::size_t peak_rss() {
  rusage u{};
  ::getrusage(RUSAGE_SELF, &u);
  return static_cast<std::size_t>(u.ru_maxrss) * 1024;
}

Outcome scale_soak(const Context& ctx) {
  SynthOptions o;
  o.count = ctx.soak_docs;
  o.seed = 10;
  o.min_edus = 2;
  o.max_edus = 150;
  o.mean_edus = 19;
  RunConfig cfg;
  cfg.selector.mode = SelectionMode::Stochastic;
  cfg.selector.beam_size = 10;
  cfg.global_seed = 10;
  cfg.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  const std::size_t before = current_rss();
  const auto t0 = Clock::now();
  SynthBuf source(o);
  std::istream in(&source);
  CountBuf sink;
  std::ostream out(&sink);
  const Manifest m = generate_stream(in, out, cfg);
  const double elapsed = seconds_since(t0);
  const std::size_t peak = peak_rss();
  const std::size_t growth = peak > before ? peak - before : 0;
  const std::size_t ceiling = static_cast<std::size_t>(cfg.workers) * beam_space_bound(150, 10) * 100;

  const bool ok = m.processed == ctx.soak_docs && m.skipped == 0 && growth <= ceiling && elapsed < 3600;
  return {ok, fmt("%zu/%zu documents, %zu workers, peak RSS growth %.1f MB within ceiling %.1f MB, %.0fs",
                  m.processed, ctx.soak_docs, static_cast<std::size_t>(cfg.workers), growth / 1e6,
                  ceiling / 1e6, elapsed)};
}

std::set<int> parse_list(const std::string& text) {
  std::set<int> out;
  std::istringstream s(text);
  for (std::string item; std::getline(s, item, ',');)
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.cli = SILVERDT_CLI_PATH;
  ctx.workdir = fs::temp_directory_path() / "silverdt-acceptance";
  std::string workdir, only, expect_fail, report;
  CLI::App app{"silverdt acceptance suite"};
  app.add_option("--cli", ctx.cli, "silverdt executable");
  app.add_option("--workdir", workdir, "scratch directory");
  app.add_option("--soak-docs", ctx.soak_docs, "documents in the scale soak");
  app.add_option("--only", only, "comma-separated criteria to run");
  app.add_option("--expect-fail", expect_fail,
                 "comma-separated criteria known to fail; the exit status is 0 only when the "
                 "failures are exactly these");
  app.add_option("--report", report, "also write the result lines to this file");
  CLI11_PARSE(app, argc, argv);
  if (!workdir.empty()) ctx.workdir = workdir;

  const std::set<int> selected = parse_list(only);
  const std::set<int> expected = parse_list(expect_fail);
  auto wanted = [&](int c) { return selected.empty() || selected.count(c); };

  const std::vector<std::string> names{
      "",
      "space-bound table reproduction",
      "Catalan tree counts",
      "beam/exact oracle equivalence",
      "beam monotonicity",
      "stochastic selector calibration",
      "halving metric identity",
      "constituent counts",
      "determinism across worker counts",
      "sentence-first compliance",
      "scale soak"};
  std::map<int, Outcome> results;

  if (wanted(10)) results[10] = scale_soak(ctx);
  const std::vector<std::pair<int, Outcome (*)(const Context&)>> simple{
      {1, table_reproduction}, {2, catalan_check},        {3, oracle_equivalence},
      {4, beam_monotonicity},  {5, selector_calibration}, {6, metric_identity}};
  for (const auto& [c, fn] : simple)
    if (wanted(c)) results[c] = fn(ctx);
  if (wanted(7) || wanted(8) || wanted(9)) {
    const GenerationRun run = generation_run(ctx);
    if (wanted(7)) results[7] = constituent_counts(run);
    if (wanted(8)) results[8] = determinism(run);
    if (wanted(9)) results[9] = sentence_first(run);
  }

  std::string text;
  int failed = 0, surprises = 0;
  for (const auto& [c, r] : results) {
    const bool known = expected.count(c) > 0;
    std::string note;
    if (!r.pass && known) note = " [known failure]";
    if (r.pass && known) note = " [expected to fail but passed]";
    text += fmt("criterion %2d %s  %s: %s%s\n", c, r.pass ? "PASS" : "FAIL", names[c].c_str(),
                r.detail.c_str(), note.c_str());
    failed += !r.pass;
    surprises += r.pass == known;
  }
  text += fmt("%zu criteria, %d passed, %d failed\n", results.size(),
              static_cast<int>(results.size()) - failed, failed);
  std::fputs(text.c_str(), stdout);
  if (!report.empty()) std::ofstream(report) << text;
  return surprises == 0 ? 0 : 1;
}
