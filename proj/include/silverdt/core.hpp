#ifndef SILVERDT_CORE_HPP
#define SILVERDT_CORE_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace silverdt {

using BigInt = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error { public: using Error::Error; };
class StructuralError : public Error { public: using Error::Error; };
class CapacityError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class PairingError : public Error { public: using Error::Error; };
class AnnotationError : public Error { public: using Error::Error; };
class UsageError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

// ---------------------------------------------------------------------------
// Scores

inline constexpr double kPolarityMin = -1.0;
inline constexpr double kPolarityMax = 1.0;
inline constexpr double kAttentionMin = 0.0;
inline constexpr double kAttentionMax = 1.0;

/// Values this close outside their range are clamped on ingestion; anything
/// further out is rejected.
inline constexpr double kRangeTolerance = 1e-9;

/// Clamps `value` into [lo, hi] when it is within kRangeTolerance of the
/// interval. Returns nullopt when it is further out (or NaN).
std::optional<double> clamp_to_range(double value, double lo, double hi);

// ---------------------------------------------------------------------------
// Spans and labels

/// Inclusive range of 1-based EDU indices.
struct Span {
  int start = 1;
  int end = 1;

  constexpr int width() const { return end - start + 1; }
  constexpr bool contains(int edu) const { return start <= edu && edu <= end; }

  friend constexpr auto operator<=>(const Span&, const Span&) = default;
};

std::string to_string(Span s);

enum class Nuclearity : std::uint8_t { NS, SN, NN };

std::string_view to_string(Nuclearity label);
/// Accepts "NS", "SN", "NN" and the hyphenated forms "N-S", "S-N", "N-N".
std::optional<Nuclearity> parse_nuclearity(std::string_view text);

// ---------------------------------------------------------------------------
// Documents

struct Edu {
  int index = 1;
  std::string text;
  double polarity = 0.0;
  double attention = 0.0;
};

struct AnnotatedDocument {
  std::string doc_id;
  double gold_polarity = 0.0;
  std::vector<Edu> edus;
  std::vector<Span> sentence_spans;

  int size() const { return static_cast<int>(edus.size()); }
  const Edu& edu(int index) const { return edus.at(static_cast<std::size_t>(index - 1)); }
};

struct Violation {
  std::string field;
  int index = 0;  // 1-based position the violation refers to, 0 if none
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  /// All messages joined with "; ".
  std::string summary() const;
};

ValidationResult validate_document(const AnnotatedDocument& doc);

/// Throws ValidationError carrying the violation summary when `doc` is invalid.
void require_valid(const AnnotatedDocument& doc);

// ---------------------------------------------------------------------------
// Trees

/// A chart entry. Children are addressed by the split point (last EDU of the
/// left child) and their rank inside the child cells, so a candidate is
/// meaningful only together with the chart that produced it.
struct SubtreeCandidate {
  Span span;
  double polarity = 0.0;
  double attention = 0.0;
  std::optional<Nuclearity> nuclearity;  // absent for leaves
  int split = 0;                          // 0 for leaves
  int left_rank = -1;
  int right_rank = -1;

  int coverage() const { return span.width(); }
  bool is_leaf() const { return split == 0; }
  Span left_span() const { return {span.start, split}; }
  Span right_span() const { return {split + 1, span.end}; }
};

SubtreeCandidate make_leaf(const Edu& edu);

/// Node of a finalized tree. Nodes live in a flat vector owned by the tree;
/// children are indices into that vector, -1 for leaves.
struct TreeNode {
  Span span;
  double polarity = 0.0;
  double attention = 0.0;
  std::optional<Nuclearity> nuclearity;
  int left = -1;
  int right = -1;

  bool is_leaf() const { return left < 0; }
};

class DiscourseTree {
 public:
  DiscourseTree() = default;
  /// Takes ownership of `nodes`; `root` indexes into it. Checks structure.
  DiscourseTree(std::string doc_id, std::vector<TreeNode> nodes, int root, double root_distance);

  const std::string& doc_id() const { return doc_id_; }
  void set_doc_id(std::string id) { doc_id_ = std::move(id); }
  double root_distance() const { return root_distance_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  const TreeNode& root() const { return node(root_); }
  int root_index() const { return root_; }
  int leaf_count() const { return root().span.width(); }

  /// True when every internal node carries a nuclearity label.
  bool fully_labeled() const;

  friend bool operator==(const DiscourseTree& a, const DiscourseTree& b);

 private:
  std::string doc_id_;
  std::vector<TreeNode> nodes_;
  int root_ = -1;
  double root_distance_ = 0.0;
};

/// Leaf EDU indices in left-to-right order. Throws StructuralError when the
/// node graph has a cycle, a dangling index, or children whose spans do not
/// concatenate to the parent span.
std::vector<int> in_order_leaves(const DiscourseTree& tree);

/// Incremental builder used by parsers and baselines; nodes are appended in
/// post-order.
class TreeBuilder {
 public:
  int add_leaf(const Edu& edu);
  int add_leaf(int index, double polarity, double attention);
  int add_internal(int left, int right, double polarity, double attention,
                   std::optional<Nuclearity> nuclearity);
  const TreeNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  DiscourseTree finish(std::string doc_id, int root, double gold_polarity) &&;

 private:
  std::vector<TreeNode> nodes_;
};

class Treebank {
 public:
  explicit Treebank(std::string name = {}) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  /// Throws ValidationError on a duplicate doc_id.
  void add(DiscourseTree tree);
  const DiscourseTree* find(std::string_view doc_id) const;
  const std::vector<DiscourseTree>& trees() const { return trees_; }
  std::size_t size() const { return trees_.size(); }
  bool empty() const { return trees_.empty(); }

 private:
  std::string name_;
  std::vector<DiscourseTree> trees_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace silverdt

#endif  // SILVERDT_CORE_HPP
