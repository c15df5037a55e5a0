#include "silverdt/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "silverdt/aggregation.hpp"

namespace silverdt {

void SelectorConfig::validate() const {
  if (beam_size < 1) throw DomainError("beam size must be at least 1");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (temperature_override && !(*temperature_override > 0.0))
    throw DomainError("temperature override must be positive");
}

BigInt count_projective_trees(int n) {
  if (n < 1) throw DomainError("tree count needs at least one EDU");
  // C(k) = C(k-1) * 2(2k-1) / (k+1), exact at every step.
  BigInt c = 1;
  for (int k = 1; k <= n - 1; ++k) c = c * (2 * (2 * k - 1)) / (k + 1);
  return c;
}

// ---------------------------------------------------------------------------

AdmissibleSpans::AdmissibleSpans(const AnnotatedDocument& doc)
    : sentence_of_(static_cast<std::size_t>(doc.size()) + 2, 0),
      starts_(static_cast<std::size_t>(doc.size()) + 2, 0),
      ends_(static_cast<std::size_t>(doc.size()) + 2, 0) {
  int sentence = 0;
  for (const Span& s : doc.sentence_spans) {
    ++sentence;
    if (s.start < 1 || s.end > doc.size()) continue;
    starts_[static_cast<std::size_t>(s.start)] = 1;
    ends_[static_cast<std::size_t>(s.end)] = 1;
    for (int i = s.start; i <= s.end; ++i) sentence_of_[static_cast<std::size_t>(i)] = sentence;
  }
  sentence_of_.resize(static_cast<std::size_t>(doc.size()) + 1);
}

bool AdmissibleSpans::within_sentence(Span span) const {
  return sentence_of_[static_cast<std::size_t>(span.start)] ==
         sentence_of_[static_cast<std::size_t>(span.end)];
}

bool AdmissibleSpans::sentence_aligned(Span span) const {
  return starts_[static_cast<std::size_t>(span.start)] && ends_[static_cast<std::size_t>(span.end)];
}

bool AdmissibleSpans::cell_admissible(Span span) const {
  return within_sentence(span) || sentence_aligned(span);
}

bool AdmissibleSpans::operator()(Span span, int split) const {
  if (split < span.start || split >= span.end) return false;
  if (within_sentence(span)) return true;
  return sentence_aligned({span.start, split}) && sentence_aligned({split + 1, span.end});
}

AdmissibleSpans admissible_spans(const AnnotatedDocument& doc) { return AdmissibleSpans(doc); }

double temperature(int n, int coverage) {
  if (coverage < 1 || coverage > n)
    throw DomainError("coverage " + std::to_string(coverage) + " outside [1, " +
                      std::to_string(n) + "]");
  return static_cast<double>(n - coverage) + 1.0;
}

// ---------------------------------------------------------------------------

namespace {

double score(double distance, double epsilon) { return 1.0 / std::max(distance, epsilon); }

/// Uniform on the open interval (0, 1) from the top 53 bits.
double open_uniform(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

}  // namespace

std::vector<double> selection_probabilities(std::span<const double> distances, double tau,
                                            double epsilon) {
  if (distances.empty()) throw DomainError("selection over an empty candidate list");
  if (!(tau > 0.0)) throw DomainError("temperature must be positive");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  std::vector<double> p(distances.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = score(distances[i], epsilon) / tau;
    top = std::max(top, p[i]);
  }
  double total = 0.0;
  for (double& x : p) {
    x = std::exp(x - top);
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

std::vector<double> selection_probabilities(std::span<const SubtreeCandidate> candidates,
                                            double gold, double tau, double epsilon) {
  std::vector<double> d;
  d.reserve(candidates.size());
  for (const auto& c : candidates) d.push_back(sentiment_distance(c, gold));
  return selection_probabilities(d, tau, epsilon);
}

namespace {

/// Fenwick tree over non-negative weights supporting removal and
/// inverse-CDF lookup.
class WeightTree {
 public:
  void assign(std::span<const double> weights) {
    size_ = weights.size();
    tree_.assign(size_ + 1, 0.0);
    for (std::size_t i = 1; i <= size_; ++i) {
      tree_[i] += weights[i - 1];
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= size_) tree_[parent] += tree_[i];
    }
    top_bit_ = 1;
    while (top_bit_ * 2 <= size_) top_bit_ *= 2;
  }

  void add(std::size_t i, double delta) {
    for (std::size_t k = i + 1; k <= size_; k += k & (~k + 1)) tree_[k] += delta;
  }

  double total() const {
    double sum = 0.0;
    for (std::size_t k = size_; k > 0; k -= k & (~k + 1)) sum += tree_[k];
    return sum;
  }

  /// Smallest index whose inclusive prefix sum exceeds `mass`; may return
  /// size() when rounding pushes `mass` past the total.
  std::size_t find(double mass) const {
    std::size_t pos = 0;
    for (std::size_t step = top_bit_; step > 0; step /= 2) {
      if (pos + step <= size_ && tree_[pos + step] <= mass) {
        pos += step;
        mass -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::size_t size_ = 0;
  std::size_t top_bit_ = 1;
  std::vector<double> tree_;
};

/// Sequential categorical draws without replacement, renormalizing after
/// every draw. Candidates whose weight underflows to zero are only taken
/// once every positive-weight candidate is gone, best score first.
void sample_without_replacement(std::span<const double> distances, const SelectorConfig& config,
                                double tau, Rng& rng, std::vector<std::size_t>& out) {
  thread_local std::vector<double> weight;
  thread_local std::vector<char> taken;
  thread_local WeightTree tree;
  const std::size_t size = distances.size();
  weight.resize(size);
  taken.assign(size, 0);

  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size; ++i) {
    weight[i] = score(distances[i], config.epsilon) / tau;
    top = std::max(top, weight[i]);
  }
  std::size_t positive = 0;
  for (std::size_t i = 0; i < size; ++i) {
    const double x = weight[i] - top;
    weight[i] = x < -746.0 ? 0.0 : std::exp(x);  // below the smallest subnormal
    if (weight[i] > 0.0) ++positive;
  }
  tree.assign(weight);

  out.clear();
  while (out.size() < config.beam_size && positive > 0) {
    std::size_t pick = tree.find(open_uniform(rng) * tree.total());
    if (pick >= size || taken[pick] || weight[pick] == 0.0) {
      // Rounding residue landed on a removed slot; take the nearest live one.
      pick = std::min(pick, size - 1);
      std::size_t lo = pick, hi = pick;
      while (true) {
        if (!taken[lo] && weight[lo] > 0.0) { pick = lo; break; }
        if (hi < size && !taken[hi] && weight[hi] > 0.0) { pick = hi; break; }
        if (lo > 0) --lo;
        if (hi < size) ++hi;
      }
    }
    taken[pick] = 1;
    tree.add(pick, -weight[pick]);
    --positive;
    out.push_back(pick);
  }
  if (out.size() < config.beam_size) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < size; ++i)
      if (!taken[i]) rest.push_back(i);
    const auto need = static_cast<std::ptrdiff_t>(config.beam_size - out.size());
    std::partial_sort(rest.begin(), rest.begin() + need, rest.end(), [&](std::size_t a, std::size_t b) {
      return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
    });
    out.insert(out.end(), rest.begin(), rest.begin() + need);
  }
}

}  // namespace

std::vector<std::size_t> select_indices(std::span<const double> distances,
                                        const SelectorConfig& config, double tau, Rng& rng) {
  const std::size_t size = distances.size();
  std::vector<std::size_t> order;
  if (size <= config.beam_size) {
    order.resize(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
  }

  if (config.mode == SelectionMode::Deterministic) {
    order.resize(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto keep = static_cast<std::ptrdiff_t>(config.beam_size);
    auto closer = [&](std::size_t a, std::size_t b) {
      return distances[a] < distances[b] || (distances[a] == distances[b] && a < b);
    };
    std::nth_element(order.begin(), order.begin() + keep - 1, order.end(), closer);
    order.resize(config.beam_size);
  } else {
    if (!(tau > 0.0)) throw DomainError("temperature must be positive");
    sample_without_replacement(distances, config, tau, rng, order);
  }
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<SubtreeCandidate> select_candidates(std::span<const SubtreeCandidate> pool,
                                                double gold, const SelectorConfig& config,
                                                double tau, Rng& rng) {
  if (pool.empty()) throw DomainError("selection over an empty pool");
  std::vector<double> d;
  d.reserve(pool.size());
  for (const auto& c : pool) d.push_back(sentiment_distance(c, gold));
  std::vector<SubtreeCandidate> out;
  for (std::size_t i : select_indices(d, config, tau, rng)) out.push_back(pool[i]);
  return out;
}

// ---------------------------------------------------------------------------

DiscourseTree Chart::extract_tree(const SubtreeCandidate& root, const std::string& doc_id,
                                  double gold) const {
  TreeBuilder builder;
  auto build = [&](auto&& self, const SubtreeCandidate& c) -> int {
    if (c.is_leaf()) return builder.add_leaf(c.span.start, c.polarity, c.attention);
    const auto& lcell = cell(c.left_span());
    const auto& rcell = cell(c.right_span());
    if (c.left_rank < 0 || c.right_rank < 0 ||
        static_cast<std::size_t>(c.left_rank) >= lcell.size() ||
        static_cast<std::size_t>(c.right_rank) >= rcell.size())
      throw StructuralError("chart back-pointer out of range at " + to_string(c.span));
    const int l = self(self, lcell[static_cast<std::size_t>(c.left_rank)]);
    const int r = self(self, rcell[static_cast<std::size_t>(c.right_rank)]);
    return builder.add_internal(l, r, c.polarity, c.attention, c.nuclearity);
  };
  const int top = build(build, root);
  return std::move(builder).finish(doc_id, top, gold);
}

namespace {

/// Appends every admissible merge for `span` to `pool` in generation order:
/// split point, left rank, right rank, weighted before multi-nuclear.
void generate_pool(const Chart& chart, const AdmissibleSpans& admissible, Span span,
                   bool with_nuclearity, std::vector<SubtreeCandidate>& pool) {
  for (int split = span.start; split < span.end; ++split) {
    if (!admissible(span, split)) continue;
    const auto& lcell = chart.cell({span.start, split});
    const auto& rcell = chart.cell({split + 1, span.end});
    for (std::size_t li = 0; li < lcell.size(); ++li) {
      const SubtreeCandidate& l = lcell[li];
      for (std::size_t ri = 0; ri < rcell.size(); ++ri) {
        const SubtreeCandidate& r = rcell[ri];
        SubtreeCandidate c;
        c.span = span;
        c.split = split;
        c.left_rank = static_cast<int>(li);
        c.right_rank = static_cast<int>(ri);
        const Aggregate w = aggregate_weighted(l, r);
        c.polarity = w.polarity;
        c.attention = w.attention;
        c.nuclearity = assign_nuclearity(l, r);
        pool.push_back(c);
        if (with_nuclearity) {
          const Aggregate m = aggregate_multinuclear(l, r);
          c.polarity = m.polarity;
          c.attention = m.attention;
          c.nuclearity = Nuclearity::NN;
          pool.push_back(c);
        }
      }
    }
  }
}

void seed_leaves(Chart& chart, const AnnotatedDocument& doc) {
  for (const Edu& e : doc.edus) chart.cell({e.index, e.index}).push_back(make_leaf(e));
}

std::size_t argmin_distance(std::span<const SubtreeCandidate> cell, double gold) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cell.size(); ++i) {
    const double d = sentiment_distance(cell[i], gold);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace

ExactChart::ExactChart(const AnnotatedDocument& doc, bool with_nuclearity)
    : doc_id_(doc.doc_id), gold_(doc.gold_polarity), chart_(std::max(doc.size(), 1)) {
  require_valid(doc);
  const int n = doc.size();
  const int cap = with_nuclearity ? kExactCapNuclearity : kExactCapStructure;
  if (n > cap)
    throw CapacityError("exact CKY is capped at " + std::to_string(cap) + " EDUs" +
                        (with_nuclearity ? " with nuclearity" : " (structure only)") + ", got " +
                        std::to_string(n));
  const AdmissibleSpans admissible(doc);
  seed_leaves(chart_, doc);
  for (int width = 2; width <= n; ++width) {
    for (int start = 1; start + width - 1 <= n; ++start) {
      const Span span{start, start + width - 1};
      if (!admissible.cell_admissible(span)) continue;
      generate_pool(chart_, admissible, span, with_nuclearity, chart_.cell(span));
    }
  }
}

DiscourseTree ExactChart::best_tree() const {
  const auto& root = chart_.root_cell();
  return chart_.extract_tree(root[argmin_distance(root, gold_)], doc_id_, gold_);
}

DiscourseTree exact_cky(const AnnotatedDocument& doc, bool with_nuclearity) {
  return ExactChart(doc, with_nuclearity).best_tree();
}

// ---------------------------------------------------------------------------

DiscourseTree beam_cky(const AnnotatedDocument& doc, const SelectorConfig& config,
                       ChartStats* stats) {
  require_valid(doc);
  config.validate();
  const int n = doc.size();
  const double gold = doc.gold_polarity;
  const AdmissibleSpans admissible(doc);
  Chart chart(n);
  seed_leaves(chart, doc);
  Rng rng(config.rng_seed);

  ChartStats local;
  local.cells_filled = static_cast<std::size_t>(n);
  local.largest_cell = 1;

  std::vector<SubtreeCandidate> pool;
  std::vector<double> distances;
  // The root cell is exploited, not explored, unless the hook says otherwise.
  SelectorConfig root_config = config;
  if (!config.stochastic_root) root_config.mode = SelectionMode::Deterministic;

  for (int width = 2; width <= n; ++width) {
    const double tau = config.temperature_override ? *config.temperature_override
                                                   : temperature(n, width);
    for (int start = 1; start + width - 1 <= n; ++start) {
      const Span span{start, start + width - 1};
      if (!admissible.cell_admissible(span)) continue;
      pool.clear();
      generate_pool(chart, admissible, span, config.with_nuclearity, pool);
      if (pool.empty()) continue;

      local.candidates_generated += pool.size();
      local.largest_pool = std::max(local.largest_pool, pool.size());
      const double bound = 2.0 * static_cast<double>(config.beam_size * config.beam_size) *
                           static_cast<double>(width - 1);
      local.pool_bound_ratio = std::max(local.pool_bound_ratio, static_cast<double>(pool.size()) / bound);

      distances.resize(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i)
        distances[i] = sentiment_distance(pool[i], gold);
      const auto keep = select_indices(distances, width == n ? root_config : config, tau, rng);
      auto& cell = chart.cell(span);
      cell.reserve(keep.size());
      for (std::size_t i : keep) cell.push_back(pool[i]);
      ++local.cells_filled;
      local.largest_cell = std::max(local.largest_cell, cell.size());
    }
  }
  if (stats) *stats = local;

  const auto& root = chart.root_cell();
  if (root.empty()) throw StructuralError("no admissible tree for document '" + doc.doc_id + "'");
  return chart.extract_tree(root[argmin_distance(root, gold)], doc.doc_id, gold);
}

}  // namespace silverdt
