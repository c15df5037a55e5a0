// Independent reference implementations used only by the tests. Nothing here
// calls into the chart code.
#ifndef SILVERDT_TESTS_ORACLE_HPP
#define SILVERDT_TESTS_ORACLE_HPP

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "silverdt/core.hpp"

namespace oracle {

using silverdt::BigInt;

inline BigInt catalan(int k) {
  std::vector<BigInt> c(static_cast<std::size_t>(k) + 1);
  c[0] = 1;
  for (int m = 1; m <= k; ++m)
    for (int i = 0; i < m; ++i) c[m] += c[i] * c[m - 1 - i];
  return c[k];
}

inline BigInt exact_space(int n) {
  BigInt total = 0;
  for (int i = 1; i <= n - 1; ++i) total += BigInt(4 * (n - i)) * catalan(i - 1);
  return total;
}

struct Value {
  double polarity;
  double attention;
};

inline Value weighted(Value l, Value r) {
  const double w = l.attention + r.attention;
  if (w == 0.0) return {(l.polarity + r.polarity) / 2.0, 0.0};
  return {(l.polarity * l.attention + r.polarity * r.attention) / w, w / 2.0};
}

inline Value averaged(Value l, Value r) {
  return {(l.polarity + r.polarity) / 2.0, (l.attention + r.attention) / 2.0};
}

/// Brute-force enumeration of every root value reachable over [s, e],
/// one entry per (shape, labeling).
class Enumerator {
 public:
  Enumerator(const silverdt::AnnotatedDocument& doc, bool nuclearity, bool sentences = true)
      : doc_(doc), nuclearity_(nuclearity), sentences_(sentences),
        sentence_(static_cast<std::size_t>(doc.size()) + 2, 0) {
    int id = 0;
    for (const auto& s : doc.sentence_spans) {
      ++id;
      for (int i = s.start; i <= s.end; ++i) sentence_[i] = id;
    }
  }

  bool starts_sentence(int i) const { return i == 1 || sentence_[i - 1] != sentence_[i]; }
  bool ends_sentence(int i) const { return i == doc_.size() || sentence_[i + 1] != sentence_[i]; }

  bool allowed(int s, int k, int e) const {
    if (!sentences_ || sentence_[s] == sentence_[e]) return true;
    return starts_sentence(s) && ends_sentence(k) && starts_sentence(k + 1) && ends_sentence(e);
  }

  std::vector<Value> roots(int s, int e) const {
    if (s == e) return {{doc_.edu(s).polarity, doc_.edu(s).attention}};
    std::vector<Value> out;
    for (int k = s; k < e; ++k) {
      if (!allowed(s, k, e)) continue;
      const auto left = roots(s, k);
      const auto right = roots(k + 1, e);
      for (const Value& l : left)
        for (const Value& r : right) {
          out.push_back(weighted(l, r));
          if (nuclearity_) out.push_back(averaged(l, r));
        }
    }
    return out;
  }

  std::vector<Value> roots() const { return roots(1, doc_.size()); }

  double best_distance() const {
    double best = INFINITY;
    for (const Value& v : roots()) best = std::min(best, std::abs(v.polarity - doc_.gold_polarity));
    return best;
  }

 private:
  const silverdt::AnnotatedDocument& doc_;
  bool nuclearity_;
  bool sentences_;
  std::vector<int> sentence_;
};

/// Random valid document with `n` EDUs and sentences of 1..max_sentence EDUs.
template <typename Rng>
silverdt::AnnotatedDocument random_document(int n, Rng& rng, int max_sentence = 3,
                                            std::string id = "doc") {
  std::uniform_real_distribution<double> pol(-1.0, 1.0), att(0.0, 1.0);
  std::uniform_int_distribution<int> len(1, max_sentence);
  silverdt::AnnotatedDocument doc;
  doc.doc_id = std::move(id);
  doc.gold_polarity = pol(rng);
  for (int i = 1; i <= n; ++i) doc.edus.push_back({i, "edu " + std::to_string(i), pol(rng), att(rng)});
  for (int s = 1; s <= n;) {
    const int e = std::min(n, s + len(rng) - 1);
    doc.sentence_spans.push_back({s, e});
    s = e + 1;
  }
  return doc;
}

/// Random binary tree over n leaves with random scores and, when `labeled`,
/// random nuclearity labels.
template <typename Rng>
silverdt::DiscourseTree random_tree(int n, Rng& rng, bool labeled = true, std::string id = "doc") {
  std::uniform_real_distribution<double> pol(-1.0, 1.0), att(0.0, 1.0);
  std::uniform_int_distribution<int> lab(0, 2);
  silverdt::TreeBuilder b;
  auto build = [&](auto&& self, int s, int e) -> int {
    if (s == e) return b.add_leaf(s, pol(rng), att(rng));
    const int k = std::uniform_int_distribution<int>(s, e - 1)(rng);
    const int l = self(self, s, k);
    const int r = self(self, k + 1, e);
    std::optional<silverdt::Nuclearity> label;
    if (labeled) label = static_cast<silverdt::Nuclearity>(lab(rng));
    return b.add_internal(l, r, pol(rng), att(rng), label);
  };
  const int root = build(build, 1, n);
  return std::move(b).finish(std::move(id), root, pol(rng));
}

}  // namespace oracle

#endif  // SILVERDT_TESTS_ORACLE_HPP
