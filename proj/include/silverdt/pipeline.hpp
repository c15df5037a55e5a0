#ifndef SILVERDT_PIPELINE_HPP
#define SILVERDT_PIPELINE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "silverdt/chart.hpp"
#include "silverdt/core.hpp"
#include "silverdt/ingest.hpp"
#include "silverdt/serialize.hpp"

namespace silverdt {

struct RunConfig {
  SelectorConfig selector;
  std::optional<int> max_edus = kDefaultMaxEdus;
  int workers = 1;
  TreeFormat output_format = TreeFormat::Bracket;
  std::uint64_t global_seed = 0;
  /// Use exact CKY for documents under its cap; larger ones still go
  /// through the beam.
  bool exact = false;

  /// Throws UsageError / DomainError on a bad configuration.
  void validate() const;
};

/// Per-document random stream seed, a hash of (global seed, doc_id). The
/// result does not depend on processing order.
std::uint64_t document_seed(std::uint64_t global_seed, std::string_view doc_id);

/// Tree for one document under `config` (seed already derived per document).
DiscourseTree build_tree(const AnnotatedDocument& doc, const RunConfig& config);

struct Manifest {
  RunConfig config;
  std::size_t input_lines = 0;
  std::size_t processed = 0;
  std::size_t skipped = 0;
  double mean_root_distance = 0.0;
  std::vector<Rejection> skips;

  /// One JSON object, keys in fixed order.
  std::string to_json() const;
};

struct GenerationResult {
  Treebank treebank;
  Manifest manifest;
};

/// One tree per document in input order. Documents that fail are skipped
/// and logged in the manifest. Output is identical for any worker count.
GenerationResult generate_treebank(std::span<const AnnotatedDocument> docs, const RunConfig& config);

/// Calls `fn(i)` for i in [0, count) on `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Streaming variant: reads input records from `in`, writes treebank entries
/// to `out` in input order, batch by batch. Rejected input lines and failed
/// documents are both counted as skipped.
Manifest generate_stream(std::istream& in, std::ostream& out, const RunConfig& config,
                         std::size_t batch_size = 2048);

}  // namespace silverdt

#endif  // SILVERDT_PIPELINE_HPP
