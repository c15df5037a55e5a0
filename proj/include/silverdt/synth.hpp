#ifndef SILVERDT_SYNTH_HPP
#define SILVERDT_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "silverdt/core.hpp"

namespace silverdt {

/// How the document gold polarity is produced before noise is added.
enum class GoldModel {
  /// Root polarity of a random sentence-first tree built with the merge
  /// rules, so a noise-free gold is exactly reachable by some tree.
  PlantedTree,
  /// Attention-weighted mean of the EDU polarities.
  WeightedMean,
};

struct SynthOptions {
  std::size_t count = 10;
  std::uint64_t seed = 1;
  int min_edus = 2;
  int max_edus = 150;
  /// When > 0, lengths follow a geometric law shifted to min_edus with this
  /// mean, redrawn until <= max_edus. Otherwise lengths are uniform.
  double mean_edus = 0.0;
  int max_sentence_length = 4;
  double min_attention = 0.05;
  /// Half-width of the uniform noise added to the gold polarity.
  double noise = 0.05;
  GoldModel gold_model = GoldModel::PlantedTree;
  /// Probability that a planted merge uses the multi-nuclear rule.
  double multinuclear_rate = 0.3;
};

/// The i-th synthetic document (0-based). Each document draws from its own
/// stream derived from (seed, i).
AnnotatedDocument synth_document(const SynthOptions& options, std::size_t i);

/// Writes `options.count` input records, one per line.
void synth_corpus(const SynthOptions& options, std::ostream& out);

}  // namespace silverdt

#endif  // SILVERDT_SYNTH_HPP
