#ifndef SILVERDT_METRICS_HPP
#define SILVERDT_METRICS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "silverdt/core.hpp"

namespace silverdt {

/// OriginalParseval scores internal nodes (root included) labeled with their
/// nuclearity; RstParseval scores every non-root node labeled with its own
/// Nucleus/Satellite status.
enum class Convention { OriginalParseval, RstParseval };
enum class Aspect { Structure, Nuclearity };

std::string_view to_string(Convention c);
std::string_view to_string(Aspect a);

enum class ConstituentLabel : std::uint8_t { None, NN, NS, SN, Nucleus, Satellite };

std::string_view to_string(ConstituentLabel label);

struct Constituent {
  Span span;
  ConstituentLabel label = ConstituentLabel::None;

  friend auto operator<=>(const Constituent&, const Constituent&) = default;
};

struct ConstituentSet {
  Convention convention = Convention::OriginalParseval;
  Aspect aspect = Aspect::Structure;
  std::vector<Constituent> items;  // sorted by span; spans are unique

  std::size_t size() const { return items.size(); }
  const Constituent* find(Span span) const;
};

/// Throws AnnotationError when `aspect` is Nuclearity and an internal node
/// has no label.
ConstituentSet extract_constituents(const DiscourseTree& tree, Convention convention, Aspect aspect);

/// Labels counted in a confusion matrix: {NN, NS, SN} for OriginalParseval,
/// {N, S} for RstParseval.
std::vector<ConstituentLabel> confusion_labels(Convention convention);

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(Convention convention = Convention::OriginalParseval);

  Convention convention() const { return convention_; }
  const std::vector<ConstituentLabel>& labels() const { return labels_; }
  std::uint64_t at(ConstituentLabel gold, ConstituentLabel predicted) const;
  void add(ConstituentLabel gold, ConstituentLabel predicted, std::uint64_t count = 1);
  std::uint64_t total() const;
  std::uint64_t off_diagonal() const;
  std::string render() const;

 private:
  std::size_t slot(ConstituentLabel label) const;

  Convention convention_;
  std::vector<ConstituentLabel> labels_;
  std::vector<std::uint64_t> counts_;  // row-major, gold x predicted
};

struct EvalReport {
  Convention convention = Convention::OriginalParseval;
  Aspect aspect = Aspect::Structure;
  std::uint64_t matched = 0;
  std::uint64_t total = 0;
  /// Filled for the Nuclearity aspect, over spans present in both trees.
  ConfusionMatrix confusion;
  /// Set by the majority-class baseline.
  std::optional<ConstituentLabel> majority_label;

  double precision() const { return total == 0 ? 0.0 : static_cast<double>(matched) / total; }
  std::string render() const;
};

/// Per-document counts before micro-averaging.
EvalReport score_tree(const DiscourseTree& gold, const DiscourseTree& pred, Convention convention,
                      Aspect aspect);

/// Micro-averaged precision. Throws PairingError when the banks do not hold
/// the same doc_ids or a pair disagrees on EDU count.
EvalReport micro_precision(const Treebank& gold_bank, const Treebank& pred_bank,
                           Convention convention, Aspect aspect);

ConfusionMatrix confusion_matrix(const Treebank& gold_bank, const Treebank& pred_bank,
                                 Convention convention);

// ---------------------------------------------------------------------------
// Baselines. Branching trees carry attention-weighted scores but no
// nuclearity labels.

enum class Direction { Right, Left };

DiscourseTree right_branching(const AnnotatedDocument& doc);
DiscourseTree left_branching(const AnnotatedDocument& doc);
/// Branching chains inside every sentence, combined across sentences by a
/// chain in the same direction.
DiscourseTree hierarchical_branching(const AnnotatedDocument& doc, Direction direction);

/// Structure-only branching tree over n EDUs with zero scores, for scoring
/// against a gold treebank when the source documents are not at hand.
DiscourseTree branching_skeleton(std::string doc_id, int n, Direction direction);

/// Relabels every gold constituent with the most frequent training label and
/// scores nuclearity. Throws DomainError when the training bank is empty.
EvalReport majority_class_baseline(const Treebank& train_bank, const Treebank& eval_gold,
                                   Convention convention);

}  // namespace silverdt

#endif  // SILVERDT_METRICS_HPP
