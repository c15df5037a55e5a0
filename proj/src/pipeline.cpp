#include "silverdt/pipeline.hpp"

#include <atomic>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "random_util.hpp"

namespace silverdt {

void RunConfig::validate() const {
  if (workers < 1) throw UsageError("workers must be at least 1");
  if (max_edus && *max_edus < 1) throw UsageError("max_edus must be positive");
  selector.validate();
}

std::uint64_t document_seed(std::uint64_t global_seed, std::string_view doc_id) {
  return detail::splitmix64(detail::splitmix64(global_seed) ^ detail::fnv1a(doc_id));
}

DiscourseTree build_tree(const AnnotatedDocument& doc, const RunConfig& config) {
  if (config.max_edus && doc.size() > *config.max_edus)
    throw CapacityError("over cap: " + std::to_string(doc.size()) + " EDUs > max_edus " +
                        std::to_string(*config.max_edus));
  SelectorConfig selector = config.selector;
  selector.rng_seed = document_seed(config.global_seed, doc.doc_id);
  const int cap = selector.with_nuclearity ? kExactCapNuclearity : kExactCapStructure;
  if (config.exact && doc.size() <= cap) return exact_cky(doc, selector.with_nuclearity);
  return beam_cky(doc, selector);
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
}

namespace {

struct Slot {
  std::optional<DiscourseTree> tree;
  std::string error;
};

std::vector<Slot> map_documents(std::span<const AnnotatedDocument> docs, const RunConfig& config) {
  std::vector<Slot> slots(docs.size());
  parallel_for(docs.size(), config.workers, [&](std::size_t i) {
    try {
      slots[i].tree = build_tree(docs[i], config);
    } catch (const std::exception& e) {
      slots[i].error = e.what();
    }
  });
  return slots;
}

std::string_view mode_name(SelectionMode m) {
  return m == SelectionMode::Deterministic ? "det" : "stoch";
}

}  // namespace

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["config"] = {
      {"mode", mode_name(config.selector.mode)},
      {"beam_size", config.selector.beam_size},
      {"epsilon", config.selector.epsilon},
      {"with_nuclearity", config.selector.with_nuclearity},
      {"exact", config.exact},
      {"max_edus", config.max_edus ? nlohmann::ordered_json(*config.max_edus) : nlohmann::ordered_json()},
      {"workers", config.workers},
      {"output_format", to_string(config.output_format)},
  };
  j["global_seed"] = config.global_seed;
  j["input_lines"] = input_lines;
  j["processed"] = processed;
  j["skipped"] = skipped;
  j["mean_root_distance"] = mean_root_distance;
  auto& list = j["skips"] = nlohmann::ordered_json::array();
  for (const auto& s : skips) list.push_back({{"line", s.line}, {"doc_id", s.doc_id}, {"reason", s.reason}});
  return j.dump(2);
}

GenerationResult generate_treebank(std::span<const AnnotatedDocument> docs, const RunConfig& config) {
  config.validate();
  GenerationResult result;
  result.manifest.config = config;
  result.manifest.input_lines = docs.size();
  auto slots = map_documents(docs, config);
  double sum = 0.0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Slot& s = slots[i];
    if (s.tree && result.treebank.find(s.tree->doc_id())) s = {std::nullopt, "duplicate doc_id"};
    if (!s.tree) {
      result.manifest.skips.push_back({i + 1, docs[i].doc_id, s.error});
      continue;
    }
    sum += s.tree->root_distance();
    result.treebank.add(std::move(*s.tree));
  }
  result.manifest.processed = result.treebank.size();
  result.manifest.skipped = result.manifest.skips.size();
  if (result.manifest.processed) result.manifest.mean_root_distance = sum / result.manifest.processed;
  return result;
}

Manifest generate_stream(std::istream& in, std::ostream& out, const RunConfig& config,
                         std::size_t batch_size) {
  config.validate();
  IngestOptions options;
  options.max_edus = config.max_edus;
  RecordReader reader(in, options);

  Manifest manifest;
  manifest.config = config;
  std::unordered_set<std::string> seen;
  std::vector<AnnotatedDocument> batch;
  std::vector<std::size_t> lines;
  double sum = 0.0;
  bool done = false;
  while (!done) {
    batch.clear();
    lines.clear();
    while (batch.size() < std::max<std::size_t>(batch_size, 1)) {
      auto doc = reader.next();
      if (!doc) {
        done = true;
        break;
      }
      batch.push_back(std::move(*doc));
      lines.push_back(reader.lines_read());
    }
    auto slots = map_documents(batch, config);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      Slot& s = slots[i];
      if (s.tree && !seen.insert(s.tree->doc_id()).second) s = {std::nullopt, "duplicate doc_id"};
      if (!s.tree) {
        manifest.skips.push_back({lines[i], batch[i].doc_id, s.error});
        continue;
      }
      out << treebank_entry(*s.tree, config.output_format, &batch[i]);
      sum += s.tree->root_distance();
      ++manifest.processed;
    }
    if (!out) throw IoError("error while writing output");
  }
  for (const auto& r : reader.rejections()) manifest.skips.push_back(r);
  std::sort(manifest.skips.begin(), manifest.skips.end(),
            [](const Rejection& a, const Rejection& b) { return a.line < b.line; });
  manifest.input_lines = reader.lines_read();
  manifest.skipped = manifest.skips.size();
  if (manifest.processed) manifest.mean_root_distance = sum / static_cast<double>(manifest.processed);
  return manifest;
}

}  // namespace silverdt
