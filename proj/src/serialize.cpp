#include "silverdt/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace silverdt {

using json = nlohmann::json;

std::optional<TreeFormat> parse_format(std::string_view name) {
  if (name == "bracket") return TreeFormat::Bracket;
  if (name == "records" || name == "structured-records" || name == "jsonl") return TreeFormat::Records;
  if (name == "dis" || name == "dis-style") return TreeFormat::Dis;
  if (name == "dot") return TreeFormat::Dot;
  return std::nullopt;
}

std::string_view to_string(TreeFormat format) {
  switch (format) {
    case TreeFormat::Bracket: return "bracket";
    case TreeFormat::Records: return "records";
    case TreeFormat::Dis: return "dis";
    case TreeFormat::Dot: return "dot";
  }
  return "?";
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string json_string(std::string_view s) { return json(std::string(s)).dump(); }

void write_bracket(const DiscourseTree& t, int i, std::string& out) {
  const TreeNode& n = t.node(i);
  if (n.is_leaf()) {
    out += '[';
    out += std::to_string(n.span.start);
    out += ']';
    return;
  }
  out += '(';
  if (n.nuclearity) {
    out += to_string(*n.nuclearity);
    out += ' ';
  }
  write_bracket(t, n.left, out);
  out += ' ';
  write_bracket(t, n.right, out);
  out += ')';
}

void write_record_node(const DiscourseTree& t, int i, std::string& out) {
  const TreeNode& n = t.node(i);
  out += "{\"span\":[" + std::to_string(n.span.start) + "," + std::to_string(n.span.end) + "]";
  if (n.nuclearity) out += ",\"nuclearity\":\"" + std::string(to_string(*n.nuclearity)) + "\"";
  out += ",\"polarity\":" + fixed6(n.polarity) + ",\"attention\":" + fixed6(n.attention);
  if (!n.is_leaf()) {
    out += ",\"children\":[";
    write_record_node(t, n.left, out);
    out += ',';
    write_record_node(t, n.right, out);
    out += ']';
  }
  out += '}';
}

std::string_view role_name(bool nucleus) { return nucleus ? "Nucleus" : "Satellite"; }

std::string dis_text(const AnnotatedDocument* doc, int edu) {
  std::string text = doc && edu <= doc->size() ? doc->edu(edu).text : "EDU " + std::to_string(edu);
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

void write_dis(const DiscourseTree& t, int i, std::string_view role, int depth,
               const AnnotatedDocument* doc, std::string& out) {
  const TreeNode& n = t.node(i);
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out += indent + "( " + std::string(role);
  if (n.is_leaf())
    out += " (leaf " + std::to_string(n.span.start) + ")";
  else
    out += " (span " + std::to_string(n.span.start) + " " + std::to_string(n.span.end) + ")";
  if (role != "Root") out += " (rel2par " + std::string(kPlaceholderRelation) + ")";
  if (n.is_leaf()) {
    out += " (text _!" + dis_text(doc, n.span.start) + "_!) )\n";
    return;
  }
  out += '\n';
  if (!n.nuclearity)
    throw AnnotationError("dis-style output needs nuclearity on node " + to_string(n.span));
  const Nuclearity label = *n.nuclearity;
  write_dis(t, n.left, role_name(label != Nuclearity::SN), depth + 1, doc, out);
  write_dis(t, n.right, role_name(label != Nuclearity::NS), depth + 1, doc, out);
  out += indent + ")\n";
}

/// Red for negative, grey for neutral, green for positive polarity.
std::string polarity_color(double p) {
  const double red[3] = {215, 48, 39};
  const double grey[3] = {191, 191, 191};
  const double green[3] = {26, 152, 80};
  const double w = std::clamp(std::abs(p), 0.0, 1.0);
  const double* far = p < 0 ? red : green;
  char buf[8];
  int c[3];
  for (int k = 0; k < 3; ++k) c[k] = static_cast<int>(std::lround(grey[k] + (far[k] - grey[k]) * w));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
  return buf;
}

std::string write_dot(const DiscourseTree& t) {
  std::string out = "digraph " + json_string(t.doc_id().empty() ? "tree" : t.doc_id()) + " {\n";
  out += "  node [shape=circle, style=filled, fixedsize=true, fontsize=10];\n";
  for (std::size_t i = 0; i < t.nodes().size(); ++i) {
    const TreeNode& n = t.nodes()[i];
    const std::string label = n.is_leaf() ? std::to_string(n.span.start)
                                          : (n.nuclearity ? std::string(to_string(*n.nuclearity)) : "");
    out += "  n" + std::to_string(i) + " [label=\"" + label + "\", fillcolor=\"" +
           polarity_color(n.polarity) + "\", width=" + fixed6(0.3 + 0.9 * n.attention) +
           ", tooltip=\"p=" + fixed6(n.polarity) + " a=" + fixed6(n.attention) + "\"];\n";
  }
  for (std::size_t i = 0; i < t.nodes().size(); ++i) {
    const TreeNode& n = t.nodes()[i];
    if (n.is_leaf()) continue;
    out += "  n" + std::to_string(i) + " -> n" + std::to_string(n.left) + ";\n";
    out += "  n" + std::to_string(i) + " -> n" + std::to_string(n.right) + ";\n";
  }
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  DiscourseTree parse(std::string doc_id) {
    const int root = node();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return DiscourseTree(std::move(doc_id), std::move(nodes_), root, 0.0);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw StructuralError("bracket parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  int node() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '[') return leaf();
    if (text_[pos_] != '(') fail("expected '(' or '['");
    ++pos_;
    skip_ws();
    std::optional<Nuclearity> label;
    if (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != '[') {
      const std::size_t begin = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != '(' && text_[pos_] != '[')
        ++pos_;
      label = parse_nuclearity(text_.substr(begin, pos_ - begin));
      if (!label) fail("unknown label '" + std::string(text_.substr(begin, pos_ - begin)) + "'");
    }
    const int l = node();
    const int r = node();
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
    ++pos_;
    TreeNode n;
    n.span = {nodes_[static_cast<std::size_t>(l)].span.start, nodes_[static_cast<std::size_t>(r)].span.end};
    n.nuclearity = label;
    n.left = l;
    n.right = r;
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int leaf() {
    ++pos_;
    const std::size_t begin = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (begin == pos_ || pos_ >= text_.size() || text_[pos_] != ']') fail("malformed leaf");
    const int index = std::stoi(std::string(text_.substr(begin, pos_ - begin)));
    ++pos_;
    TreeNode n;
    n.span = {index, index};
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<TreeNode> nodes_;
};

int read_record_node(const json& j, std::vector<TreeNode>& nodes) {
  TreeNode n;
  const auto& span = j.at("span");
  n.span = {span.at(0).get<int>(), span.at(1).get<int>()};
  n.polarity = j.at("polarity").get<double>();
  n.attention = j.at("attention").get<double>();
  if (auto it = j.find("nuclearity"); it != j.end()) {
    n.nuclearity = parse_nuclearity(it->get<std::string>());
    if (!n.nuclearity) throw StructuralError("unknown nuclearity '" + it->get<std::string>() + "'");
  }
  if (auto it = j.find("children"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) throw StructuralError("internal node needs two children");
    n.left = read_record_node((*it)[0], nodes);
    n.right = read_record_node((*it)[1], nodes);
  }
  nodes.push_back(n);
  return static_cast<int>(nodes.size()) - 1;
}

}  // namespace

std::string serialize_tree(const DiscourseTree& tree, TreeFormat format, const AnnotatedDocument* doc) {
  std::string out;
  switch (format) {
    case TreeFormat::Bracket:
      write_bracket(tree, tree.root_index(), out);
      break;
    case TreeFormat::Records:
      out = "{\"doc_id\":" + json_string(tree.doc_id()) +
            ",\"root_distance\":" + fixed6(tree.root_distance()) + ",\"tree\":";
      write_record_node(tree, tree.root_index(), out);
      out += '}';
      break;
    case TreeFormat::Dis:
      write_dis(tree, tree.root_index(), "Root", 0, doc, out);
      break;
    case TreeFormat::Dot:
      out = write_dot(tree);
      break;
  }
  return out;
}

DiscourseTree parse_bracket(std::string_view text, std::string doc_id) {
  return BracketParser(text).parse(std::move(doc_id));
}

DiscourseTree parse_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
    std::vector<TreeNode> nodes;
    const int root = read_record_node(j.at("tree"), nodes);
    return DiscourseTree(j.at("doc_id").get<std::string>(), std::move(nodes), root,
                         j.value("root_distance", 0.0));
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed tree record: ") + e.what());
  }
}

std::string treebank_entry(const DiscourseTree& tree, TreeFormat format, const AnnotatedDocument* doc) {
  switch (format) {
    case TreeFormat::Bracket:
      return tree.doc_id() + "\t" + serialize_tree(tree, format, doc) + "\n";
    case TreeFormat::Records:
      return serialize_tree(tree, format, doc) + "\n";
    case TreeFormat::Dis:
      return "# " + tree.doc_id() + "\n" + serialize_tree(tree, format, doc) + "\n";
    case TreeFormat::Dot:
      return serialize_tree(tree, format, doc);
  }
  return {};
}

Treebank read_treebank(std::istream& in, std::string name) {
  if (!in) throw IoError("cannot read treebank stream");
  Treebank bank(std::move(name));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    try {
      if (line[first] == '{') {
        bank.add(parse_record(line));
      } else {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw StructuralError("expected 'doc_id<TAB>tree'");
        bank.add(parse_bracket(std::string_view(line).substr(tab + 1), line.substr(0, tab)));
      }
    } catch (const Error& e) {
      throw StructuralError("treebank line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError("error while reading treebank");
  return bank;
}

Treebank read_treebank_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open treebank '" + path + "'");
  return read_treebank(in, path);
}

}  // namespace silverdt
