#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mim::html {

struct Node;
using NodeList = std::vector<Node>;
using Attribute = std::pair<std::string, std::string>;

struct Element {
  std::string tag;  // lowercase
  std::vector<Attribute> attributes;
  NodeList children;
};

struct Text {
  std::string content;
};

struct Comment {
  std::string content;
};

/// script/style payload. Emitted verbatim, never tokenized, never rewritten.
struct RawText {
  std::string tag;  // "script" or "style"
  std::string content;
};

struct Node {
  std::variant<Element, Text, Comment, RawText> value;

  bool is_element() const { return std::holds_alternative<Element>(value); }
  bool is_text() const { return std::holds_alternative<Text>(value); }
  bool is_comment() const { return std::holds_alternative<Comment>(value); }
  bool is_raw_text() const { return std::holds_alternative<RawText>(value); }

  Element& element() { return std::get<Element>(value); }
  const Element& element() const { return std::get<Element>(value); }
  Text& text() { return std::get<Text>(value); }
  const Text& text() const { return std::get<Text>(value); }
  const Comment& comment() const { return std::get<Comment>(value); }
  const RawText& raw_text() const { return std::get<RawText>(value); }
};

/// Child-index sequence from the document root down to a node.
using NodePath = std::vector<std::size_t>;

struct DocumentTree {
  NodeList children;
};

bool structurally_equal(const DocumentTree& a, const DocumentTree& b);
bool structurally_equal(const Node& a, const Node& b);

/// Node lookup by path. Throws ErrorCode::InvalidArgument when the path
/// does not address a node.
const Node& node_at(const DocumentTree& tree, const NodePath& path);
Node& node_at(DocumentTree& tree, const NodePath& path);

std::string path_to_string(const NodePath& path);
NodePath path_from_string(std::string_view text);

struct Token {
  std::string text;
  std::size_t start;  // byte offset into the input
  std::size_t end;    // byte offset, exclusive
};

/// Splits text into word tokens. A token is a maximal run of letters and
/// digits; a hyphen or apostrophe joins two runs when flanked by word
/// characters on both sides ("far-left", "don't"). Offsets are byte
/// offsets into the UTF-8 input.
std::vector<Token> tokenize(std::string_view text);

/// One word occurrence inside a Text node, addressable for rewriting.
struct TextSpan {
  NodePath path;      // path of the Text node
  std::size_t start;  // byte offset into the Text content
  std::size_t end;    // exclusive
  std::string token;  // equals the addressed substring

  bool operator==(const TextSpan&) const = default;
};

struct ScopeSelector {
  enum class Kind { WholeDocument, CommentsOnly, PostBodyOnly };
  Kind kind = Kind::WholeDocument;
  std::string class_substring;  // non-empty unless WholeDocument

  static ScopeSelector whole_document() { return {Kind::WholeDocument, ""}; }
  static ScopeSelector comments_only(std::string substring = "comment") {
    return {Kind::CommentsOnly, std::move(substring)};
  }
  static ScopeSelector post_body_only(std::string substring = "post") {
    return {Kind::PostBodyOnly, std::move(substring)};
  }
};

/// Lenient parse of a practical HTML subset. Never fails on malformed
/// markup: unclosed tags are auto-closed at parent boundaries, unknown
/// tags are kept, stray close tags are dropped. script/style bodies
/// become RawText. Throws InvalidEncoding for non-UTF-8 input and
/// DepthExceeded when nesting exceeds 256.
DocumentTree parse_html(std::string_view bytes);

/// Emits the tree back to bytes: lowercase tags, attributes in original
/// order and double-quoted, Text content with & < > entity-escaped,
/// RawText verbatim. parse(serialize(t)) is structurally equal to t for
/// canonical trees, and serialize∘parse is idempotent on any input.
std::string serialize(const DocumentTree& tree);

/// Token spans of every Text node whose ancestor chain matches the scope,
/// in document order. RawText and Comment content never yield spans.
std::vector<TextSpan> select_spans(const DocumentTree& tree,
                                   const ScopeSelector& scope);

}  // namespace mim::html
