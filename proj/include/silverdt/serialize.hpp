#ifndef SILVERDT_SERIALIZE_HPP
#define SILVERDT_SERIALIZE_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "silverdt/core.hpp"

namespace silverdt {

enum class TreeFormat { Bracket, Records, Dis, Dot };

/// "bracket", "records" (also "structured-records", "jsonl"), "dis", "dot".
std::optional<TreeFormat> parse_format(std::string_view name);
std::string_view to_string(TreeFormat format);

/// Relation name written on every non-root node of dis-style output.
inline constexpr std::string_view kPlaceholderRelation = "span";

/// Renders one tree.
///
///   Bracket:  (NS (NN [1] [2]) [3]); unlabeled internal nodes omit the label.
///   Records:  one JSON object with doc_id, root_distance and the nested tree.
///   Dis:      parenthesized constituents with Nucleus/Satellite roles; EDU
///             text comes from `doc` when given.
///   Dot:      graphviz digraph, polarity as fill color, attention as size.
///
/// Numbers are printed fixed with 6 decimals.
std::string serialize_tree(const DiscourseTree& tree, TreeFormat format,
                           const AnnotatedDocument* doc = nullptr);

/// Parses the bracket form. Scores are not part of it and come back as 0.
/// Throws StructuralError on malformed input.
DiscourseTree parse_bracket(std::string_view text, std::string doc_id = {});

/// Parses one structured record. Throws StructuralError on malformed input.
DiscourseTree parse_record(std::string_view line);

/// Treebank line for `tree`: "doc_id<TAB>bracket" for Bracket, the record
/// for Records. Dis and Dot produce multi-line blocks.
std::string treebank_entry(const DiscourseTree& tree, TreeFormat format,
                           const AnnotatedDocument* doc = nullptr);

/// Reads a treebank written in Bracket or Records form; the form is
/// detected per line. Throws IoError on a bad stream, StructuralError on a
/// malformed line (with its line number).
Treebank read_treebank(std::istream& in, std::string name = {});
Treebank read_treebank_file(const std::string& path);

}  // namespace silverdt

#endif  // SILVERDT_SERIALIZE_HPP
