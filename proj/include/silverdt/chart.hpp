#ifndef SILVERDT_CHART_HPP
#define SILVERDT_CHART_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "silverdt/core.hpp"

namespace silverdt {

enum class SelectionMode { Deterministic, Stochastic };

using Rng = std::mt19937_64;

struct SelectorConfig {
  SelectionMode mode = SelectionMode::Deterministic;
  std::size_t beam_size = 10;
  /// Lower clamp on |p - gl| before it is inverted into a score.
  double epsilon = 1e-4;
  std::uint64_t rng_seed = 0;
  /// Add the multi-nuclear candidate at every merge. Without it each merge
  /// yields only the attention-weighted candidate, labeled NS or SN.
  bool with_nuclearity = true;

  // Test hooks.
  /// Replaces the coverage schedule with a constant temperature.
  std::optional<double> temperature_override;
  /// Also prune the root cell by the configured mode before picking the
  /// minimum-distance tree.
  bool stochastic_root = false;

  /// Throws DomainError when beam_size < 1 or epsilon <= 0.
  void validate() const;
};

/// Number of distinct projective binary trees over n leaves, the Catalan
/// number C(n-1). Throws DomainError for n < 1.
BigInt count_projective_trees(int n);

/// Sentence-first merge constraint. A merge producing `span` from children
/// split after EDU `split` is admissible when the span lies inside one
/// sentence, or when both children are unions of complete sentences.
class AdmissibleSpans {
 public:
  explicit AdmissibleSpans(const AnnotatedDocument& doc);

  bool operator()(Span span, int split) const;
  /// True when some admissible tree can be rooted at `span`.
  bool cell_admissible(Span span) const;
  bool within_sentence(Span span) const;
  bool sentence_aligned(Span span) const;
  int size() const { return static_cast<int>(sentence_of_.size()) - 1; }

 private:
  std::vector<int> sentence_of_;  // 1-based by EDU
  std::vector<char> starts_;
  std::vector<char> ends_;
};

AdmissibleSpans admissible_spans(const AnnotatedDocument& doc);

/// Coverage-dependent temperature tau = (n - c) + 1. Throws DomainError
/// unless 1 <= c <= n.
double temperature(int n, int coverage);

/// Boltzmann-Gibbs distribution over 1 / max(d, epsilon) scores at
/// temperature tau. Throws DomainError on an empty input or tau <= 0.
std::vector<double> selection_probabilities(std::span<const double> distances, double tau,
                                            double epsilon);
std::vector<double> selection_probabilities(std::span<const SubtreeCandidate> candidates,
                                            double gold, double tau, double epsilon);

/// Picks min(B, |pool|) pool positions, returned in ascending order.
///
/// Deterministic: the B smallest distances, ties by position. Stochastic:
/// B distinct positions drawn without replacement from the softmax
/// distribution by sequential categorical draws, renormalizing after each.
/// Candidates whose weight underflows to zero fill any remaining slots in
/// deterministic order. Draws from `rng` only when the pool exceeds B.
std::vector<std::size_t> select_indices(std::span<const double> distances,
                                        const SelectorConfig& config, double tau, Rng& rng);

std::vector<SubtreeCandidate> select_candidates(std::span<const SubtreeCandidate> pool,
                                                double gold, const SelectorConfig& config,
                                                double tau, Rng& rng);

/// Upper-triangular table of candidate lists indexed by span.
class Chart {
 public:
  explicit Chart(int n) : n_(n), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {}

  int size() const { return n_; }
  std::vector<SubtreeCandidate>& cell(Span s) { return cells_[index(s)]; }
  const std::vector<SubtreeCandidate>& cell(Span s) const { return cells_[index(s)]; }
  const std::vector<SubtreeCandidate>& root_cell() const { return cell({1, n_}); }

  /// Rebuilds the tree rooted at `root` by following split points and child
  /// ranks back down the chart.
  DiscourseTree extract_tree(const SubtreeCandidate& root, const std::string& doc_id,
                             double gold) const;

 private:
  std::size_t index(Span s) const {
    return static_cast<std::size_t>(s.start - 1) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(s.end - 1);
  }

  int n_;
  std::vector<std::vector<SubtreeCandidate>> cells_;
};

inline constexpr int kExactCapStructure = 12;
inline constexpr int kExactCapNuclearity = 6;

/// Unpruned CKY chart holding every admissible subtree for every span.
class ExactChart {
 public:
  /// Throws CapacityError above the caps and ValidationError on an invalid
  /// document.
  ExactChart(const AnnotatedDocument& doc, bool with_nuclearity);

  const Chart& chart() const { return chart_; }
  std::size_t root_count() const { return chart_.root_cell().size(); }
  /// Minimum root distance; ties go to the earliest generated candidate.
  DiscourseTree best_tree() const;

 private:
  std::string doc_id_;
  double gold_;
  Chart chart_;
};

DiscourseTree exact_cky(const AnnotatedDocument& doc, bool with_nuclearity);

struct ChartStats {
  std::size_t cells_filled = 0;
  std::size_t candidates_generated = 0;
  std::size_t largest_pool = 0;
  std::size_t largest_cell = 0;
  /// Largest pool size divided by its allowed maximum 2 * B^2 * (L - 1).
  double pool_bound_ratio = 0.0;
};

/// Beam-constrained CKY. Cells are filled bottom-up by coverage; every pool
/// is pruned to B with tau = temperature(n, coverage). The returned tree is
/// the minimum-distance root candidate regardless of mode.
DiscourseTree beam_cky(const AnnotatedDocument& doc, const SelectorConfig& config,
                       ChartStats* stats = nullptr);

}  // namespace silverdt

#endif  // SILVERDT_CHART_HPP
