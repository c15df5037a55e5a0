#ifndef SILVERDT_AGGREGATION_HPP
#define SILVERDT_AGGREGATION_HPP

#include "silverdt/core.hpp"

namespace silverdt {

struct Aggregate {
  double polarity = 0.0;
  double attention = 0.0;
};

/// Attention-weighted combination of two adjacent subtrees:
///   p = (p_l * a_l + p_r * a_r) / (a_l + a_r),  a = (a_l + a_r) / 2.
/// When both attentions are zero the polarity falls back to the plain
/// average (the equal-weight limit) and the attention stays 0.
Aggregate aggregate_weighted(const SubtreeCandidate& left, const SubtreeCandidate& right);
Aggregate aggregate_weighted(double p_left, double a_left, double p_right, double a_right);

/// Multi-nuclear combination: plain average of polarity and of attention.
Aggregate aggregate_multinuclear(const SubtreeCandidate& left, const SubtreeCandidate& right);
Aggregate aggregate_multinuclear(double p_left, double a_left, double p_right, double a_right);

/// NS when the left child carries more attention, SN when the right does.
/// Ties resolve to NS.
Nuclearity assign_nuclearity(const SubtreeCandidate& left, const SubtreeCandidate& right);
Nuclearity assign_nuclearity(double a_left, double a_right);

struct MergeCandidatePair {
  SubtreeCandidate weighted;      // labeled NS or SN
  SubtreeCandidate multinuclear;  // labeled NN
};

/// Both merge candidates for two adjacent subtrees. Child ranks are copied
/// from `left_rank` / `right_rank`. Throws StructuralError when the spans
/// are not adjacent.
MergeCandidatePair make_merge_candidates(const SubtreeCandidate& left, const SubtreeCandidate& right,
                                         int left_rank = -1, int right_rank = -1);

/// |p - gold|, the quantity every selection step minimizes.
inline double sentiment_distance(double polarity, double gold) {
  const double d = polarity - gold;
  return d < 0 ? -d : d;
}
inline double sentiment_distance(const SubtreeCandidate& c, double gold) {
  return sentiment_distance(c.polarity, gold);
}

}  // namespace silverdt

#endif  // SILVERDT_AGGREGATION_HPP
