#include "silverdt/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "silverdt/aggregation.hpp"

namespace silverdt {

std::string_view to_string(Convention c) {
  return c == Convention::OriginalParseval ? "original-parseval" : "rst-parseval";
}

std::string_view to_string(Aspect a) { return a == Aspect::Structure ? "structure" : "nuclearity"; }

std::string_view to_string(ConstituentLabel label) {
  switch (label) {
    case ConstituentLabel::None: return "-";
    case ConstituentLabel::NN: return "NN";
    case ConstituentLabel::NS: return "NS";
    case ConstituentLabel::SN: return "SN";
    case ConstituentLabel::Nucleus: return "N";
    case ConstituentLabel::Satellite: return "S";
  }
  return "?";
}

namespace {

ConstituentLabel label_of(Nuclearity n) {
  switch (n) {
    case Nuclearity::NS: return ConstituentLabel::NS;
    case Nuclearity::SN: return ConstituentLabel::SN;
    case Nuclearity::NN: return ConstituentLabel::NN;
  }
  return ConstituentLabel::None;
}

Nuclearity require_label(const TreeNode& node) {
  if (!node.nuclearity)
    throw AnnotationError("internal node " + to_string(node.span) + " has no nuclearity label");
  return *node.nuclearity;
}

}  // namespace

const Constituent* ConstituentSet::find(Span span) const {
  auto it = std::lower_bound(items.begin(), items.end(), span,
                             [](const Constituent& c, Span s) { return c.span < s; });
  return it != items.end() && it->span == span ? &*it : nullptr;
}

ConstituentSet extract_constituents(const DiscourseTree& tree, Convention convention, Aspect aspect) {
  ConstituentSet set{convention, aspect, {}};
  const bool labeled = aspect == Aspect::Nuclearity;
  const auto& nodes = tree.nodes();

  if (convention == Convention::OriginalParseval) {
    for (const TreeNode& n : nodes) {
      if (n.is_leaf()) continue;
      set.items.push_back({n.span, labeled ? label_of(require_label(n)) : ConstituentLabel::None});
    }
  } else {
    for (const TreeNode& n : nodes) {
      if (n.is_leaf()) continue;
      ConstituentLabel left = ConstituentLabel::None;
      ConstituentLabel right = ConstituentLabel::None;
      if (labeled) {
        switch (require_label(n)) {
          case Nuclearity::NS:
            left = ConstituentLabel::Nucleus;
            right = ConstituentLabel::Satellite;
            break;
          case Nuclearity::SN:
            left = ConstituentLabel::Satellite;
            right = ConstituentLabel::Nucleus;
            break;
          case Nuclearity::NN:
            left = right = ConstituentLabel::Nucleus;
            break;
        }
      }
      set.items.push_back({tree.node(n.left).span, left});
      set.items.push_back({tree.node(n.right).span, right});
    }
  }
  std::sort(set.items.begin(), set.items.end());
  return set;
}

// ---------------------------------------------------------------------------

std::vector<ConstituentLabel> confusion_labels(Convention convention) {
  if (convention == Convention::OriginalParseval)
    return {ConstituentLabel::NN, ConstituentLabel::NS, ConstituentLabel::SN};
  return {ConstituentLabel::Nucleus, ConstituentLabel::Satellite};
}

ConfusionMatrix::ConfusionMatrix(Convention convention)
    : convention_(convention), labels_(confusion_labels(convention)),
      counts_(labels_.size() * labels_.size(), 0) {}

std::size_t ConfusionMatrix::slot(ConstituentLabel label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end())
    throw AnnotationError("label " + std::string(to_string(label)) + " not valid under " +
                          std::string(to_string(convention_)));
  return static_cast<std::size_t>(it - labels_.begin());
}

std::uint64_t ConfusionMatrix::at(ConstituentLabel gold, ConstituentLabel predicted) const {
  return counts_[slot(gold) * labels_.size() + slot(predicted)];
}

void ConfusionMatrix::add(ConstituentLabel gold, ConstituentLabel predicted, std::uint64_t count) {
  counts_[slot(gold) * labels_.size() + slot(predicted)] += count;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::off_diagonal() const {
  std::uint64_t t = total();
  for (std::size_t i = 0; i < labels_.size(); ++i) t -= counts_[i * labels_.size() + i];
  return t;
}

std::string ConfusionMatrix::render() const {
  std::ostringstream out;
  out << "gold\\pred";
  for (auto l : labels_) out << '\t' << to_string(l);
  out << '\n';
  for (auto g : labels_) {
    out << to_string(g);
    for (auto p : labels_) out << '\t' << at(g, p);
    out << '\n';
  }
  return out.str();
}

std::string EvalReport::render() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%s %s micro-precision: %.4f (%llu/%llu)\n",
                std::string(to_string(convention)).c_str(), std::string(to_string(aspect)).c_str(),
                precision(), static_cast<unsigned long long>(matched),
                static_cast<unsigned long long>(total));
  out << line;
  if (majority_label) out << "majority label: " << to_string(*majority_label) << '\n';
  if (aspect == Aspect::Nuclearity) {
    out << "confusion (spans present in both gold and predicted trees only):\n";
    out << confusion.render();
  }
  return out.str();
}

// ---------------------------------------------------------------------------

EvalReport score_tree(const DiscourseTree& gold, const DiscourseTree& pred, Convention convention,
                      Aspect aspect) {
  if (gold.leaf_count() != pred.leaf_count())
    throw PairingError("document '" + gold.doc_id() + "': gold has " +
                       std::to_string(gold.leaf_count()) + " EDUs, prediction has " +
                       std::to_string(pred.leaf_count()));
  EvalReport report;
  report.convention = convention;
  report.aspect = aspect;
  report.confusion = ConfusionMatrix(convention);
  const auto g = extract_constituents(gold, convention, aspect);
  const auto p = extract_constituents(pred, convention, aspect);
  report.total = g.size();
  for (const Constituent& c : g.items) {
    const Constituent* q = p.find(c.span);
    if (!q) continue;
    if (aspect == Aspect::Nuclearity) report.confusion.add(c.label, q->label);
    if (q->label == c.label) ++report.matched;
  }
  return report;
}

namespace {

template <typename Fn>
void for_each_pair(const Treebank& gold_bank, const Treebank& pred_bank, Fn&& fn) {
  if (gold_bank.size() != pred_bank.size())
    throw PairingError("gold bank has " + std::to_string(gold_bank.size()) +
                       " documents, prediction bank has " + std::to_string(pred_bank.size()));
  for (const DiscourseTree& g : gold_bank.trees()) {
    const DiscourseTree* p = pred_bank.find(g.doc_id());
    if (!p) throw PairingError("document '" + g.doc_id() + "' missing from prediction bank");
    fn(g, *p);
  }
}

}  // namespace

EvalReport micro_precision(const Treebank& gold_bank, const Treebank& pred_bank,
                           Convention convention, Aspect aspect) {
  EvalReport total;
  total.convention = convention;
  total.aspect = aspect;
  total.confusion = ConfusionMatrix(convention);
  for_each_pair(gold_bank, pred_bank, [&](const DiscourseTree& g, const DiscourseTree& p) {
    const EvalReport r = score_tree(g, p, convention, aspect);
    total.matched += r.matched;
    total.total += r.total;
    if (aspect == Aspect::Nuclearity)
      for (auto gl : r.confusion.labels())
        for (auto pl : r.confusion.labels()) total.confusion.add(gl, pl, r.confusion.at(gl, pl));
  });
  return total;
}

ConfusionMatrix confusion_matrix(const Treebank& gold_bank, const Treebank& pred_bank,
                                 Convention convention) {
  return micro_precision(gold_bank, pred_bank, convention, Aspect::Nuclearity).confusion;
}

// ---------------------------------------------------------------------------

namespace {

int merge(TreeBuilder& b, int left, int right) {
  const TreeNode& l = b.node(left);
  const TreeNode& r = b.node(right);
  const Aggregate agg = aggregate_weighted(l.polarity, l.attention, r.polarity, r.attention);
  return b.add_internal(left, right, agg.polarity, agg.attention, std::nullopt);
}

int chain(TreeBuilder& b, const std::vector<int>& parts, Direction direction) {
  if (direction == Direction::Right) {
    int t = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) t = merge(b, parts[i], t);
    return t;
  }
  int t = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) t = merge(b, t, parts[i]);
  return t;
}

DiscourseTree branching(const AnnotatedDocument& doc, Direction direction) {
  require_valid(doc);
  TreeBuilder b;
  std::vector<int> leaves;
  for (const Edu& e : doc.edus) leaves.push_back(b.add_leaf(e));
  const int root = chain(b, leaves, direction);
  return std::move(b).finish(doc.doc_id, root, doc.gold_polarity);
}

}  // namespace

DiscourseTree right_branching(const AnnotatedDocument& doc) { return branching(doc, Direction::Right); }
DiscourseTree left_branching(const AnnotatedDocument& doc) { return branching(doc, Direction::Left); }

DiscourseTree hierarchical_branching(const AnnotatedDocument& doc, Direction direction) {
  require_valid(doc);
  TreeBuilder b;
  std::vector<int> sentences;
  for (const Span& s : doc.sentence_spans) {
    std::vector<int> leaves;
    for (int i = s.start; i <= s.end; ++i) leaves.push_back(b.add_leaf(doc.edu(i)));
    sentences.push_back(chain(b, leaves, direction));
  }
  const int root = chain(b, sentences, direction);
  return std::move(b).finish(doc.doc_id, root, doc.gold_polarity);
}

DiscourseTree branching_skeleton(std::string doc_id, int n, Direction direction) {
  if (n < 1) throw DomainError("branching tree needs at least one EDU");
  TreeBuilder b;
  std::vector<int> leaves;
  for (int i = 1; i <= n; ++i) leaves.push_back(b.add_leaf(i, 0.0, 0.0));
  const int root = chain(b, leaves, direction);
  return std::move(b).finish(std::move(doc_id), root, 0.0);
}

EvalReport majority_class_baseline(const Treebank& train_bank, const Treebank& eval_gold,
                                   Convention convention) {
  if (train_bank.empty()) throw DomainError("majority baseline needs a non-empty training bank");
  const auto labels = confusion_labels(convention);
  std::vector<std::uint64_t> counts(labels.size(), 0);
  for (const DiscourseTree& t : train_bank.trees()) {
    for (const Constituent& c : extract_constituents(t, convention, Aspect::Nuclearity).items) {
      auto it = std::find(labels.begin(), labels.end(), c.label);
      ++counts[static_cast<std::size_t>(it - labels.begin())];
    }
  }
  // Ties go to the earlier label in confusion order.
  const auto best = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  const ConstituentLabel majority = labels[best];

  EvalReport report;
  report.convention = convention;
  report.aspect = Aspect::Nuclearity;
  report.confusion = ConfusionMatrix(convention);
  report.majority_label = majority;
  for (const DiscourseTree& t : eval_gold.trees()) {
    for (const Constituent& c : extract_constituents(t, convention, Aspect::Nuclearity).items) {
      ++report.total;
      report.confusion.add(c.label, majority);
      if (c.label == majority) ++report.matched;
    }
  }
  return report;
}

}  // namespace silverdt
