#include "silverdt/aggregation.hpp"

namespace silverdt {

Aggregate aggregate_weighted(double p_left, double a_left, double p_right, double a_right) {
  const double mass = a_left + a_right;
  if (mass == 0.0) return {(p_left + p_right) / 2.0, 0.0};
  return {(p_left * a_left + p_right * a_right) / mass, mass / 2.0};
}

Aggregate aggregate_weighted(const SubtreeCandidate& left, const SubtreeCandidate& right) {
  return aggregate_weighted(left.polarity, left.attention, right.polarity, right.attention);
}

Aggregate aggregate_multinuclear(double p_left, double a_left, double p_right, double a_right) {
  return {(p_left + p_right) / 2.0, (a_left + a_right) / 2.0};
}

Aggregate aggregate_multinuclear(const SubtreeCandidate& left, const SubtreeCandidate& right) {
  return aggregate_multinuclear(left.polarity, left.attention, right.polarity, right.attention);
}

Nuclearity assign_nuclearity(double a_left, double a_right) {
  return a_left >= a_right ? Nuclearity::NS : Nuclearity::SN;
}

Nuclearity assign_nuclearity(const SubtreeCandidate& left, const SubtreeCandidate& right) {
  return assign_nuclearity(left.attention, right.attention);
}

MergeCandidatePair make_merge_candidates(const SubtreeCandidate& left, const SubtreeCandidate& right,
                                         int left_rank, int right_rank) {
  if (left.span.end + 1 != right.span.start)
    throw StructuralError("merge of non-adjacent spans " + to_string(left.span) + " and " +
                          to_string(right.span));
  SubtreeCandidate base;
  base.span = {left.span.start, right.span.end};
  base.split = left.span.end;
  base.left_rank = left_rank;
  base.right_rank = right_rank;

  MergeCandidatePair pair{base, base};
  const Aggregate w = aggregate_weighted(left, right);
  pair.weighted.polarity = w.polarity;
  pair.weighted.attention = w.attention;
  pair.weighted.nuclearity = assign_nuclearity(left, right);

  const Aggregate m = aggregate_multinuclear(left, right);
  pair.multinuclear.polarity = m.polarity;
  pair.multinuclear.attention = m.attention;
  pair.multinuclear.nuclearity = Nuclearity::NN;
  return pair;
}

}  // namespace silverdt
