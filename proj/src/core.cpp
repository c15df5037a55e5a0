#include "silverdt/core.hpp"

#include <algorithm>
#include <cmath>

namespace silverdt {

std::optional<double> clamp_to_range(double value, double lo, double hi) {
  if (std::isnan(value)) return std::nullopt;
  if (value < lo - kRangeTolerance || value > hi + kRangeTolerance) return std::nullopt;
  return std::clamp(value, lo, hi);
}

std::string to_string(Span s) {
  return "(" + std::to_string(s.start) + "," + std::to_string(s.end) + ")";
}

std::string_view to_string(Nuclearity label) {
  switch (label) {
    case Nuclearity::NS: return "NS";
    case Nuclearity::SN: return "SN";
    case Nuclearity::NN: return "NN";
  }
  return "??";
}

std::optional<Nuclearity> parse_nuclearity(std::string_view text) {
  if (text == "NS" || text == "N-S") return Nuclearity::NS;
  if (text == "SN" || text == "S-N") return Nuclearity::SN;
  if (text == "NN" || text == "N-N") return Nuclearity::NN;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string ValidationResult::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.message;
  }
  return out;
}

ValidationResult validate_document(const AnnotatedDocument& doc) {
  ValidationResult result;
  auto report = [&](std::string field, int index, std::string message) {
    result.violations.push_back({std::move(field), index, std::move(message)});
  };

  const int n = doc.size();
  if (n < 1) report("edus", 0, "document has no EDUs");

  if (!(doc.gold_polarity >= kPolarityMin && doc.gold_polarity <= kPolarityMax))
    report("gold_polarity", 0, "gold polarity out of range");

  for (int i = 1; i <= n; ++i) {
    const Edu& e = doc.edu(i);
    const std::string at = " at EDU " + std::to_string(i);
    if (e.index != i) report("index", i, "non-contiguous EDU index" + at);
    if (e.text.empty()) report("text", i, "empty text" + at);
    if (!(e.polarity >= kPolarityMin && e.polarity <= kPolarityMax))
      report("polarity", i, "polarity out of range" + at);
    if (!(e.attention >= kAttentionMin && e.attention <= kAttentionMax))
      report("attention", i, "attention out of range" + at);
  }

  if (doc.sentence_spans.empty()) {
    report("sentence_spans", 0, "no sentence spans");
    return result;
  }
  int expected = 1;
  for (std::size_t k = 0; k < doc.sentence_spans.size(); ++k) {
    const Span s = doc.sentence_spans[k];
    const int pos = static_cast<int>(k) + 1;
    if (s.start > s.end) {
      report("sentence_spans", pos, "inverted sentence span " + to_string(s));
      continue;
    }
    if (s.start < expected) {
      report("sentence_spans", pos, "overlapping sentence spans");
    } else if (s.start > expected) {
      report("sentence_spans", pos, "gap before sentence span " + to_string(s));
    }
    expected = std::max(expected, s.end + 1);
  }
  if (expected - 1 != n)
    report("sentence_spans", 0, "sentence spans do not cover EDUs 1.." + std::to_string(n));
  return result;
}

void require_valid(const AnnotatedDocument& doc) {
  auto r = validate_document(doc);
  if (!r.ok()) throw ValidationError("document '" + doc.doc_id + "': " + r.summary());
}

SubtreeCandidate make_leaf(const Edu& edu) {
  SubtreeCandidate c;
  c.span = {edu.index, edu.index};
  c.polarity = edu.polarity;
  c.attention = edu.attention;
  return c;
}

// ---------------------------------------------------------------------------

DiscourseTree::DiscourseTree(std::string doc_id, std::vector<TreeNode> nodes, int root,
                             double root_distance)
    : doc_id_(std::move(doc_id)), nodes_(std::move(nodes)), root_(root),
      root_distance_(root_distance) {
  if (root_ < 0 || root_ >= static_cast<int>(nodes_.size()))
    throw StructuralError("root index out of range");
  if (root_distance_ < 0.0 || std::isnan(root_distance_))
    throw StructuralError("negative root distance");
  const auto leaves = in_order_leaves(*this);
  if (this->root().span.start != 1) throw StructuralError("root span must start at EDU 1");
  for (std::size_t i = 0; i < leaves.size(); ++i)
    if (leaves[i] != static_cast<int>(i) + 1) throw StructuralError("tree is not projective");
}

bool DiscourseTree::fully_labeled() const {
  for (const auto& n : nodes_)
    if (!n.is_leaf() && !n.nuclearity) return false;
  return true;
}

bool operator==(const DiscourseTree& a, const DiscourseTree& b) {
  if (a.doc_id_ != b.doc_id_ || a.root_distance_ != b.root_distance_) return false;
  // Compare structurally so that node storage order does not matter.
  auto same = [&](auto&& self, int i, int j) -> bool {
    const TreeNode& x = a.node(i);
    const TreeNode& y = b.node(j);
    if (x.span != y.span || x.polarity != y.polarity || x.attention != y.attention ||
        x.nuclearity != y.nuclearity || x.is_leaf() != y.is_leaf())
      return false;
    if (x.is_leaf()) return true;
    return self(self, x.left, y.left) && self(self, x.right, y.right);
  };
  return same(same, a.root_, b.root_);
}

std::vector<int> in_order_leaves(const DiscourseTree& tree) {
  const auto& nodes = tree.nodes();
  const int count = static_cast<int>(nodes.size());
  std::vector<int> leaves;
  std::vector<char> visited(nodes.size(), 0);
  std::vector<int> stack{tree.root_index()};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    if (i < 0 || i >= count) throw StructuralError("dangling child index " + std::to_string(i));
    if (visited[static_cast<std::size_t>(i)]) throw StructuralError("cycle or shared node in tree");
    visited[static_cast<std::size_t>(i)] = 1;
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    if (n.span.start < 1 || n.span.start > n.span.end)
      throw StructuralError("invalid span " + to_string(n.span));
    if (n.is_leaf()) {
      if (n.right >= 0) throw StructuralError("node with a single child");
      if (n.span.width() != 1) throw StructuralError("leaf covering " + to_string(n.span));
      leaves.push_back(n.span.start);
      continue;
    }
    if (n.right < 0 || n.left >= count || n.right >= count)
      throw StructuralError("dangling child index");
    const Span l = nodes[static_cast<std::size_t>(n.left)].span;
    const Span r = nodes[static_cast<std::size_t>(n.right)].span;
    if (l.start != n.span.start || r.end != n.span.end || l.end + 1 != r.start)
      throw StructuralError("children " + to_string(l) + "," + to_string(r) +
                            " do not concatenate to " + to_string(n.span));
    stack.push_back(n.right);
    stack.push_back(n.left);
  }
  return leaves;
}

// ---------------------------------------------------------------------------

int TreeBuilder::add_leaf(const Edu& edu) { return add_leaf(edu.index, edu.polarity, edu.attention); }

int TreeBuilder::add_leaf(int index, double polarity, double attention) {
  TreeNode n;
  n.span = {index, index};
  n.polarity = polarity;
  n.attention = attention;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int TreeBuilder::add_internal(int left, int right, double polarity, double attention,
                              std::optional<Nuclearity> nuclearity) {
  TreeNode n;
  n.span = {node(left).span.start, node(right).span.end};
  n.polarity = polarity;
  n.attention = attention;
  n.nuclearity = nuclearity;
  n.left = left;
  n.right = right;
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

DiscourseTree TreeBuilder::finish(std::string doc_id, int root, double gold_polarity) && {
  const double distance = std::abs(node(root).polarity - gold_polarity);
  return DiscourseTree(std::move(doc_id), std::move(nodes_), root, distance);
}

// ---------------------------------------------------------------------------

void Treebank::add(DiscourseTree tree) {
  auto [it, inserted] = index_.try_emplace(tree.doc_id(), trees_.size());
  if (!inserted) throw ValidationError("duplicate doc_id '" + tree.doc_id() + "' in treebank");
  trees_.push_back(std::move(tree));
}

const DiscourseTree* Treebank::find(std::string_view doc_id) const {
  auto it = index_.find(std::string(doc_id));
  return it == index_.end() ? nullptr : &trees_[it->second];
}

}  // namespace silverdt
