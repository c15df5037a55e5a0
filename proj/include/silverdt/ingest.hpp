#ifndef SILVERDT_INGEST_HPP
#define SILVERDT_INGEST_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "silverdt/core.hpp"

namespace silverdt {

inline constexpr int kDefaultMaxEdus = 150;

struct IngestOptions {
  /// Documents with more EDUs are skipped, never truncated.
  std::optional<int> max_edus = kDefaultMaxEdus;
};

struct Rejection {
  std::size_t line = 0;  // 1-based input line
  std::string doc_id;    // empty when the record did not get that far
  std::string reason;
};

/// Maps a 1..5 star rating onto [-1, 1] in steps of 0.5. Throws DomainError
/// outside that range.
double star_to_polarity(int stars);

/// Parses one input record into a validated document. Scores within 1e-9 of
/// their range are clamped. Returns the rejection reason on failure.
struct RecordResult {
  std::optional<AnnotatedDocument> document;
  std::string doc_id;  // as far as it was read, for rejection logs
  std::string error;
};
RecordResult parse_input_record(std::string_view line, const IngestOptions& options = {});

/// Inverse of parse_input_record, one line without the trailing newline.
std::string to_input_record(const AnnotatedDocument& doc);

/// Line-at-a-time reader over an input stream.
class RecordReader {
 public:
  /// Throws IoError when the stream is not readable.
  RecordReader(std::istream& in, IngestOptions options);

  /// Next valid document, skipping (and logging) rejected lines.
  std::optional<AnnotatedDocument> next();

  std::size_t lines_read() const { return line_; }
  const std::vector<Rejection>& rejections() const { return rejections_; }

 private:
  std::istream& in_;
  IngestOptions options_;
  std::size_t line_ = 0;
  std::vector<Rejection> rejections_;
};

struct IngestResult {
  std::vector<AnnotatedDocument> documents;
  std::vector<Rejection> rejections;
  std::size_t lines = 0;

  /// True when there was input but every line was rejected.
  bool empty_corpus() const { return documents.empty() && lines > 0; }
};

IngestResult ingest(std::istream& in, const IngestOptions& options = {});
IngestResult ingest_file(const std::string& path, const IngestOptions& options = {});

}  // namespace silverdt

#endif  // SILVERDT_INGEST_HPP
