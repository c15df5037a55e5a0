#include "silverdt/ingest.hpp"

#include <cstdio>
#include <fstream>
#include <istream>

#include <json.hpp>

namespace silverdt {

using json = nlohmann::json;

double star_to_polarity(int stars) {
  if (stars < 1 || stars > 5) throw DomainError("star rating " + std::to_string(stars) + " outside 1..5");
  return (stars - 3) / 2.0;
}

namespace {

struct Reject {
  std::string reason;
};

double checked_score(const json& value, double lo, double hi, const std::string& what,
                     const std::string& at = {}) {
  if (!value.is_number()) throw Reject{what + " is not a number" + at};
  const auto clamped = clamp_to_range(value.get<double>(), lo, hi);
  if (!clamped) throw Reject{what + " out of range" + at};
  return *clamped;
}

void build_document(const json& j, AnnotatedDocument& doc) {
  if (!j.is_object()) throw Reject{"record is not an object"};

  const auto id = j.find("doc_id");
  if (id == j.end() || !id->is_string() || id->get<std::string>().empty())
    throw Reject{"missing doc_id"};
  doc.doc_id = id->get<std::string>();

  const bool has_gold = j.contains("gold_polarity");
  const bool has_stars = j.contains("star_rating");
  if (has_gold == has_stars) throw Reject{"exactly one of gold_polarity / star_rating required"};
  if (has_gold) {
    doc.gold_polarity = checked_score(j["gold_polarity"], kPolarityMin, kPolarityMax, "gold_polarity");
  } else {
    const json& s = j["star_rating"];
    if (!s.is_number_integer() || s.get<int>() < 1 || s.get<int>() > 5)
      throw Reject{"star_rating must be an integer in 1..5"};
    doc.gold_polarity = star_to_polarity(s.get<int>());
  }

  const auto edus = j.find("edus");
  if (edus == j.end() || !edus->is_array() || edus->empty()) throw Reject{"edus must be a non-empty array"};
  int index = 0;
  for (const json& e : *edus) {
    ++index;
    const std::string at = " at EDU " + std::to_string(index);
    if (!e.is_object()) throw Reject{"edu is not an object" + at};
    Edu edu;
    edu.index = index;
    const auto text = e.find("text");
    if (text == e.end() || !text->is_string() || text->get<std::string>().empty())
      throw Reject{"text missing or empty" + at};
    edu.text = text->get<std::string>();
    if (!e.contains("polarity")) throw Reject{"polarity missing" + at};
    if (!e.contains("attention")) throw Reject{"attention missing" + at};
    edu.polarity = checked_score(e["polarity"], kPolarityMin, kPolarityMax, "polarity", at);
    edu.attention = checked_score(e["attention"], kAttentionMin, kAttentionMax, "attention", at);
    doc.edus.push_back(std::move(edu));
  }

  const auto spans = j.find("sentence_spans");
  if (spans == j.end() || !spans->is_array() || spans->empty())
    throw Reject{"sentence_spans must be a non-empty array"};
  for (const json& s : *spans) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer())
      throw Reject{"sentence span must be a [start, end] pair"};
    doc.sentence_spans.push_back({s[0].get<int>(), s[1].get<int>()});
  }
}

}  // namespace

RecordResult parse_input_record(std::string_view line, const IngestOptions& options) {
  RecordResult result;
  AnnotatedDocument doc;
  try {
    const json j = json::parse(line);
    build_document(j, doc);
    if (options.max_edus && doc.size() > *options.max_edus) {
      result.error = "over cap: " + std::to_string(doc.size()) + " EDUs > max_edus " +
                     std::to_string(*options.max_edus);
    } else if (const auto v = validate_document(doc); !v.ok()) {
      result.error = v.summary();
    } else {
      result.document = std::move(doc);
    }
  } catch (const json::exception& e) {
    result.error = std::string("malformed record: ") + e.what();
  } catch (const Reject& r) {
    result.error = r.reason;
  }
  if (!result.document) result.doc_id = doc.doc_id;
  return result;
}

std::string to_input_record(const AnnotatedDocument& doc) {
  // Scores are written with 17 significant digits so that parsing gives back
  // the exact doubles.
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = "{\"doc_id\":" + json(doc.doc_id).dump() + ",\"gold_polarity\":" + num(doc.gold_polarity) +
                    ",\"edus\":[";
  for (std::size_t i = 0; i < doc.edus.size(); ++i) {
    const Edu& e = doc.edus[i];
    if (i) out += ',';
    out += "{\"text\":" + json(e.text).dump() + ",\"polarity\":" + num(e.polarity) +
           ",\"attention\":" + num(e.attention) + "}";
  }
  out += "],\"sentence_spans\":[";
  for (std::size_t i = 0; i < doc.sentence_spans.size(); ++i) {
    if (i) out += ',';
    out += "[" + std::to_string(doc.sentence_spans[i].start) + "," +
           std::to_string(doc.sentence_spans[i].end) + "]";
  }
  out += "]}";
  return out;
}

// ---------------------------------------------------------------------------

RecordReader::RecordReader(std::istream& in, IngestOptions options)
    : in_(in), options_(std::move(options)) {
  if (!in_) throw IoError("input stream is not readable");
}

std::optional<AnnotatedDocument> RecordReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      rejections_.push_back({line_, {}, "empty line"});
      continue;
    }
    RecordResult r = parse_input_record(line, options_);
    if (r.document) return std::move(r.document);
    rejections_.push_back({line_, std::move(r.doc_id), "line " + std::to_string(line_) + ": " + r.error});
  }
  if (in_.bad()) throw IoError("error while reading input");
  return std::nullopt;
}

IngestResult ingest(std::istream& in, const IngestOptions& options) {
  RecordReader reader(in, options);
  IngestResult result;
  while (auto doc = reader.next()) result.documents.push_back(std::move(*doc));
  result.rejections = reader.rejections();
  result.lines = reader.lines_read();
  return result;
}

IngestResult ingest_file(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input '" + path + "'");
  return ingest(in, options);
}

}  // namespace silverdt
