#include "silverdt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "random_util.hpp"
#include "silverdt/aggregation.hpp"
#include "silverdt/ingest.hpp"

namespace silverdt {

namespace {

using detail::uniform;
using detail::uniform_int;

int draw_length(const SynthOptions& o, Rng& rng) {
  if (o.mean_edus <= 0.0) return uniform_int(rng, o.min_edus, o.max_edus);
  const double p = 1.0 / std::max(1.0, o.mean_edus - o.min_edus + 1.0);
  if (p >= 1.0) return o.min_edus;
  for (;;) {
    const double u = 1.0 - detail::unit(rng);  // (0, 1]
    const int n = o.min_edus + static_cast<int>(std::floor(std::log(u) / std::log1p(-p)));
    if (n <= o.max_edus) return n;
  }
}

/// Merges random adjacent pairs until one item is left.
Aggregate plant(std::vector<Aggregate> items, double multinuclear_rate, Rng& rng) {
  while (items.size() > 1) {
    const auto k = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(items.size()) - 2));
    const Aggregate& l = items[k];
    const Aggregate& r = items[k + 1];
    const bool nn = detail::unit(rng) < multinuclear_rate;
    items[k] = nn ? aggregate_multinuclear(l.polarity, l.attention, r.polarity, r.attention)
                  : aggregate_weighted(l.polarity, l.attention, r.polarity, r.attention);
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  }
  return items.front();
}

const char* kPositive[] = {"the staff was friendly", "food was great", "loved the dessert",
                           "prices were fair", "we will come back"};
const char* kNegative[] = {"the soup was cold", "service was slow", "the room was noisy",
                           "portions were tiny", "never again"};
const char* kNeutral[] = {"we ordered the special", "it was a tuesday", "the place is downtown",
                          "then we sat outside", "my friend had the fish"};

}  // namespace

AnnotatedDocument synth_document(const SynthOptions& o, std::size_t i) {
  if (o.min_edus < 1 || o.max_edus < o.min_edus) throw DomainError("bad EDU length range");
  if (o.max_sentence_length < 1) throw DomainError("sentence length must be positive");
  Rng rng(detail::splitmix64(detail::splitmix64(o.seed) ^ static_cast<std::uint64_t>(i)));

  AnnotatedDocument doc;
  char id[48];
  std::snprintf(id, sizeof id, "synth-%06zu", i);
  doc.doc_id = id;

  const int n = draw_length(o, rng);
  for (int k = 1; k <= n; ++k) {
    Edu e;
    e.index = k;
    e.polarity = uniform(rng, -1.0, 1.0);
    e.attention = uniform(rng, o.min_attention, 1.0);
    const auto pick = static_cast<std::size_t>(uniform_int(rng, 0, 4));
    e.text = e.polarity > 0.33 ? kPositive[pick] : e.polarity < -0.33 ? kNegative[pick] : kNeutral[pick];
    doc.edus.push_back(std::move(e));
  }
  for (int start = 1; start <= n;) {
    const int len = std::min(uniform_int(rng, 1, o.max_sentence_length), n - start + 1);
    doc.sentence_spans.push_back({start, start + len - 1});
    start += len;
  }

  double gold = 0.0;
  if (o.gold_model == GoldModel::WeightedMean) {
    double mass = 0.0;
    for (const Edu& e : doc.edus) {
      gold += e.polarity * e.attention;
      mass += e.attention;
    }
    gold = mass > 0.0 ? gold / mass : 0.0;
  } else {
    std::vector<Aggregate> sentences;
    for (const Span& s : doc.sentence_spans) {
      std::vector<Aggregate> leaves;
      for (int k = s.start; k <= s.end; ++k) leaves.push_back({doc.edu(k).polarity, doc.edu(k).attention});
      sentences.push_back(plant(std::move(leaves), o.multinuclear_rate, rng));
    }
    gold = plant(std::move(sentences), o.multinuclear_rate, rng).polarity;
  }
  if (o.noise > 0.0) gold += uniform(rng, -o.noise, o.noise);
  doc.gold_polarity = std::clamp(gold, kPolarityMin, kPolarityMax);
  return doc;
}

void synth_corpus(const SynthOptions& options, std::ostream& out) {
  for (std::size_t i = 0; i < options.count; ++i) out << to_input_record(synth_document(options, i)) << '\n';
}

}  // namespace silverdt
