#include "mim/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "mim/error.hpp"

namespace mim::html {

namespace {

constexpr std::size_t kMaxDepth = 256;

bool is_void_element(std::string_view tag) {
  return tag == "br" || tag == "img" || tag == "hr" || tag == "meta" ||
         tag == "input" || tag == "link";
}

bool is_raw_text_element(std::string_view tag) {
  return tag == "script" || tag == "style";
}

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == ':';
}

// ---------------------------------------------------------------------------
// UTF-8
// ---------------------------------------------------------------------------

bool validate_utf8(std::string_view s) {
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
      i += 1;
      continue;
    }
    std::size_t len;
    unsigned cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char bk = static_cast<unsigned char>(s[i + k]);
      if ((bk & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (len == 2 && cp < 0x80) return false;    // overlong
    if (len == 3 && cp < 0x800) return false;   // overlong
    if (len == 4 && cp < 0x10000) return false; // overlong
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;  // surrogate
    if (cp > 0x10FFFF) return false;
    i += len;
  }
  return true;
}

// Decodes the codepoint starting at byte i; assumes valid UTF-8.
unsigned decode_cp(std::string_view s, std::size_t i, std::size_t* len) {
  const unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    *len = 1;
    return b0;
  }
  std::size_t n;
  unsigned cp;
  if ((b0 & 0xE0) == 0xC0) {
    n = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    n = 3;
    cp = b0 & 0x0F;
  } else {
    n = 4;
    cp = b0 & 0x07;
  }
  for (std::size_t k = 1; k < n; ++k)
    cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
  *len = n;
  return cp;
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// ---------------------------------------------------------------------------
// Word classification for tokenize
// ---------------------------------------------------------------------------

bool is_unicode_space(unsigned cp) {
  switch (cp) {
    case 0x00A0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_unicode_punct_or_symbol(unsigned cp) {
  if (cp >= 0x00A1 && cp <= 0x00BF) return true;  // Latin-1 punctuation
  if (cp == 0x00D7 || cp == 0x00F7) return true;
  if (cp >= 0x2010 && cp <= 0x205E) return true;  // general punctuation
  if (cp >= 0x2190 && cp <= 0x2BFF) return true;  // arrows, math, symbols
  if (cp >= 0x3001 && cp <= 0x303F) return true;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return true;
  if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
  if (cp >= 0x1F000) return true;                 // emoji and beyond
  return false;
}

bool is_word_cp(unsigned cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
           (cp >= 'A' && cp <= 'Z');
  }
  if (is_unicode_space(cp)) return false;
  if (is_unicode_punct_or_symbol(cp)) return false;
  return true;
}

bool is_joiner_cp(unsigned cp) {
  return cp == '-' || cp == '\'' || cp == 0x2019;  // hyphen, apostrophes
}

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

// Decodes the entity at s[i] (s[i] == '&'). On success appends the decoded
// text and returns bytes consumed; returns 0 to treat '&' literally.
std::size_t decode_entity(std::string_view s, std::size_t i, std::string& out) {
  static constexpr std::array<std::pair<std::string_view, unsigned>, 6> kNamed{{
      {"&amp;", '&'},
      {"&lt;", '<'},
      {"&gt;", '>'},
      {"&quot;", '"'},
      {"&apos;", '\''},
      {"&nbsp;", 0x00A0},
  }};
  for (const auto& [name, cp] : kNamed) {
    if (s.substr(i, name.size()) == name) {
      append_utf8(out, cp);
      return name.size();
    }
  }
  if (s.substr(i, 2) == "&#") {
    std::size_t j = i + 2;
    int base = 10;
    if (j < s.size() && (s[j] == 'x' || s[j] == 'X')) {
      base = 16;
      ++j;
    }
    std::size_t digits_begin = j;
    while (j < s.size() &&
           (base == 10 ? std::isdigit(static_cast<unsigned char>(s[j]))
                       : std::isxdigit(static_cast<unsigned char>(s[j]))))
      ++j;
    if (j > digits_begin && j < s.size() && s[j] == ';') {
      unsigned cp = 0;
      auto [ptr, ec] = std::from_chars(s.data() + digits_begin, s.data() + j,
                                       cp, base);
      if (ec == std::errc() && ptr == s.data() + j && cp <= 0x10FFFF &&
          !(cp >= 0xD800 && cp <= 0xDFFF)) {
        append_utf8(out, cp);
        return j + 1 - i;
      }
    }
  }
  return 0;
}

void append_escaped_text(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
}

void append_escaped_attr(std::string& out, std::string_view value) {
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view input) : in_(input) {}

  DocumentTree run() {
    DocumentTree tree;
    stack_.push_back(&tree.children);
    open_tags_.push_back("");  // sentinel for the root
    while (pos_ < in_.size()) {
      if (in_[pos_] == '<') {
        flush_text();
        parse_markup();
      } else {
        consume_text_char();
      }
    }
    flush_text();
    return tree;
  }

 private:
  NodeList& current() { return *stack_.back(); }

  void push_node(Node node) { current().push_back(std::move(node)); }

  void consume_text_char() {
    if (in_[pos_] == '&') {
      std::size_t used = decode_entity(in_, pos_, text_);
      if (used > 0) {
        pos_ += used;
        return;
      }
    }
    text_.push_back(in_[pos_]);
    ++pos_;
  }

  void flush_text() {
    if (text_.empty()) return;
    // Merge with a preceding Text sibling so adjacent text stays one node.
    if (!current().empty() && current().back().is_text()) {
      current().back().text().content += text_;
    } else {
      push_node(Node{Text{text_}});
    }
    text_.clear();
  }

  void parse_markup() {
    if (in_.substr(pos_, 4) == "<!--") {
      parse_comment();
      return;
    }
    if (pos_ + 1 < in_.size() && (in_[pos_ + 1] == '!' || in_[pos_ + 1] == '?')) {
      parse_bogus_comment();
      return;
    }
    if (pos_ + 1 < in_.size() && in_[pos_ + 1] == '/') {
      parse_close_tag();
      return;
    }
    if (pos_ + 1 < in_.size() && is_name_start(in_[pos_ + 1])) {
      parse_open_tag();
      return;
    }
    // A lone '<' is literal text.
    text_.push_back('<');
    ++pos_;
  }

  void parse_comment() {
    pos_ += 4;
    std::size_t end = in_.find("-->", pos_);
    std::string content;
    if (end == std::string_view::npos) {
      content = std::string(in_.substr(pos_));
      pos_ = in_.size();
    } else {
      content = std::string(in_.substr(pos_, end - pos_));
      pos_ = end + 3;
    }
    push_node(Node{Comment{std::move(content)}});
  }

  // <!doctype ...>, <?xml ...> and friends are kept as Comment nodes.
  void parse_bogus_comment() {
    pos_ += 2;
    std::size_t end = in_.find('>', pos_);
    std::string content;
    if (end == std::string_view::npos) {
      content = std::string(in_.substr(pos_));
      pos_ = in_.size();
    } else {
      content = std::string(in_.substr(pos_, end - pos_));
      pos_ = end + 1;
    }
    push_node(Node{Comment{std::move(content)}});
  }

  void parse_close_tag() {
    pos_ += 2;
    std::string name;
    while (pos_ < in_.size() && is_name_char(in_[pos_]))
      name.push_back(ascii_lower(in_[pos_++]));
    while (pos_ < in_.size() && in_[pos_] != '>') ++pos_;
    if (pos_ < in_.size()) ++pos_;
    if (name.empty()) return;
    // Close up to the matching open tag; drop the close tag if unmatched.
    for (std::size_t i = open_tags_.size(); i-- > 1;) {
      if (open_tags_[i] == name) {
        open_tags_.resize(i);
        stack_.resize(i);
        return;
      }
    }
  }

  void parse_open_tag() {
    ++pos_;
    std::string tag;
    while (pos_ < in_.size() && is_name_char(in_[pos_]))
      tag.push_back(ascii_lower(in_[pos_++]));

    std::vector<Attribute> attrs;
    bool self_closing = false;
    while (pos_ < in_.size() && in_[pos_] != '>') {
      if (in_[pos_] == '/' && pos_ + 1 < in_.size() && in_[pos_ + 1] == '>') {
        self_closing = true;
        pos_ += 1;
        break;
      }
      if (std::isspace(static_cast<unsigned char>(in_[pos_]))) {
        ++pos_;
        continue;
      }
      parse_attribute(attrs);
    }
    if (pos_ < in_.size()) ++pos_;  // consume '>'

    if (is_raw_text_element(tag)) {
      push_node(Node{RawText{tag, consume_raw_text(tag)}});
      return;
    }

    Element element{tag, std::move(attrs), {}};
    if (self_closing || is_void_element(tag)) {
      push_node(Node{std::move(element)});
      return;
    }
    if (stack_.size() > kMaxDepth)
      raise(ErrorCode::DepthExceeded,
            "nesting deeper than " + std::to_string(kMaxDepth));
    push_node(Node{std::move(element)});
    stack_.push_back(&current().back().element().children);
    open_tags_.push_back(tag);
  }

  void parse_attribute(std::vector<Attribute>& attrs) {
    std::string name;
    while (pos_ < in_.size() && in_[pos_] != '=' && in_[pos_] != '>' &&
           in_[pos_] != '/' &&
           !std::isspace(static_cast<unsigned char>(in_[pos_])))
      name.push_back(ascii_lower(in_[pos_++]));
    if (name.empty()) {  // stray '=' or '/'; skip one char to make progress
      ++pos_;
      return;
    }
    std::string value;
    if (pos_ < in_.size() && in_[pos_] == '=') {
      ++pos_;
      while (pos_ < in_.size() &&
             std::isspace(static_cast<unsigned char>(in_[pos_])))
        ++pos_;
      if (pos_ < in_.size() && (in_[pos_] == '"' || in_[pos_] == '\'')) {
        const char quote = in_[pos_++];
        std::size_t start = pos_;
        while (pos_ < in_.size() && in_[pos_] != quote) ++pos_;
        value = decode_attr(in_.substr(start, pos_ - start));
        if (pos_ < in_.size()) ++pos_;
      } else {
        std::size_t start = pos_;
        while (pos_ < in_.size() && in_[pos_] != '>' &&
               !std::isspace(static_cast<unsigned char>(in_[pos_])))
          ++pos_;
        value = decode_attr(in_.substr(start, pos_ - start));
      }
    }
    attrs.emplace_back(std::move(name), std::move(value));
  }

  static std::string decode_attr(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
      if (raw[i] == '&') {
        std::size_t used = decode_entity(raw, i, out);
        if (used > 0) {
          i += used;
          continue;
        }
      }
      out.push_back(raw[i++]);
    }
    return out;
  }

  // Raw content runs to the matching close tag, case-insensitively.
  std::string consume_raw_text(const std::string& tag) {
    const std::string needle = "</" + tag;
    std::size_t i = pos_;
    while (i < in_.size()) {
      if (in_[i] == '<' && to_lower(in_.substr(i, needle.size())) == needle) {
        std::string content(in_.substr(pos_, i - pos_));
        std::size_t end = in_.find('>', i);
        pos_ = (end == std::string_view::npos) ? in_.size() : end + 1;
        return content;
      }
      ++i;
    }
    std::string content(in_.substr(pos_));
    pos_ = in_.size();
    return content;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::string text_;
  std::vector<NodeList*> stack_;
  std::vector<std::string> open_tags_;
};

void serialize_node(const Node& node, std::string& out) {
  if (node.is_text()) {
    append_escaped_text(out, node.text().content);
    return;
  }
  if (node.is_comment()) {
    out += "<!--";
    out += node.comment().content;
    out += "-->";
    return;
  }
  if (node.is_raw_text()) {
    const auto& raw = node.raw_text();
    out += "<" + raw.tag + ">";
    out += raw.content;
    out += "</" + raw.tag + ">";
    return;
  }
  const Element& el = node.element();
  out += "<" + el.tag;
  for (const auto& [name, value] : el.attributes) {
    out += " " + name + "=\"";
    append_escaped_attr(out, value);
    out += "\"";
  }
  out += ">";
  if (is_void_element(el.tag)) return;
  for (const Node& child : el.children) serialize_node(child, out);
  out += "</" + el.tag + ">";
}

bool scope_matches_class(const ScopeSelector& scope,
                         const std::vector<const Element*>& ancestors) {
  if (scope.kind == ScopeSelector::Kind::WholeDocument) return true;
  for (const Element* el : ancestors) {
    for (const auto& [name, value] : el->attributes) {
      if (name == "class" &&
          value.find(scope.class_substring) != std::string::npos)
        return true;
    }
  }
  return false;
}

void collect_spans(const NodeList& nodes, const ScopeSelector& scope,
                   NodePath& path, std::vector<const Element*>& ancestors,
                   std::vector<TextSpan>& out) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& node = nodes[i];
    path.push_back(i);
    if (node.is_text()) {
      if (scope_matches_class(scope, ancestors)) {
        for (const Token& token : tokenize(node.text().content))
          out.push_back(TextSpan{path, token.start, token.end, token.text});
      }
    } else if (node.is_element()) {
      ancestors.push_back(&node.element());
      collect_spans(node.element().children, scope, path, ancestors, out);
      ancestors.pop_back();
    }
    path.pop_back();
  }
}

}  // namespace

DocumentTree parse_html(std::string_view bytes) {
  if (!validate_utf8(bytes))
    raise(ErrorCode::InvalidEncoding, "input is not valid UTF-8");
  return Parser(bytes).run();
}

std::string serialize(const DocumentTree& tree) {
  std::string out;
  for (const Node& node : tree.children) serialize_node(node, out);
  return out;
}

std::vector<TextSpan> select_spans(const DocumentTree& tree,
                                   const ScopeSelector& scope) {
  if (scope.kind != ScopeSelector::Kind::WholeDocument &&
      scope.class_substring.empty())
    raise(ErrorCode::InvalidArgument, "scope requires a class substring");
  std::vector<TextSpan> out;
  NodePath path;
  std::vector<const Element*> ancestors;
  collect_spans(tree.children, scope, path, ancestors, out);
  return out;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    std::size_t len;
    unsigned cp = decode_cp(text, i, &len);
    if (!is_word_cp(cp)) {
      i += len;
      continue;
    }
    const std::size_t start = i;
    i += len;
    while (i < n) {
      std::size_t l2;
      unsigned c2 = decode_cp(text, i, &l2);
      if (is_word_cp(c2)) {
        i += l2;
        continue;
      }
      if (is_joiner_cp(c2) && i + l2 < n) {
        std::size_t l3;
        unsigned c3 = decode_cp(text, i + l2, &l3);
        if (is_word_cp(c3)) {
          i += l2 + l3;
          continue;
        }
      }
      break;
    }
    tokens.push_back(Token{std::string(text.substr(start, i - start)), start, i});
  }
  return tokens;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.value.index() != b.value.index()) return false;
  if (a.is_text()) return a.text().content == b.text().content;
  if (a.is_comment()) return a.comment().content == b.comment().content;
  if (a.is_raw_text())
    return a.raw_text().tag == b.raw_text().tag &&
           a.raw_text().content == b.raw_text().content;
  const Element& ea = a.element();
  const Element& eb = b.element();
  if (ea.tag != eb.tag || ea.attributes != eb.attributes ||
      ea.children.size() != eb.children.size())
    return false;
  for (std::size_t i = 0; i < ea.children.size(); ++i)
    if (!structurally_equal(ea.children[i], eb.children[i])) return false;
  return true;
}

bool structurally_equal(const DocumentTree& a, const DocumentTree& b) {
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(a.children[i], b.children[i])) return false;
  return true;
}

const Node& node_at(const DocumentTree& tree, const NodePath& path) {
  const NodeList* nodes = &tree.children;
  const Node* node = nullptr;
  for (std::size_t depth = 0; depth < path.size(); ++depth) {
    const std::size_t index = path[depth];
    if (index >= nodes->size())
      raise(ErrorCode::InvalidArgument,
            "node path out of range: " + path_to_string(path));
    node = &(*nodes)[index];
    if (depth + 1 < path.size()) {
      if (!node->is_element())
        raise(ErrorCode::InvalidArgument,
              "node path crosses a leaf: " + path_to_string(path));
      nodes = &node->element().children;
    }
  }
  if (node == nullptr)
    raise(ErrorCode::InvalidArgument, "empty node path");
  return *node;
}

Node& node_at(DocumentTree& tree, const NodePath& path) {
  return const_cast<Node&>(
      node_at(static_cast<const DocumentTree&>(tree), path));
}

std::string path_to_string(const NodePath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out.push_back('.');
    out += std::to_string(path[i]);
  }
  return out;
}

NodePath path_from_string(std::string_view text) {
  NodePath path;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t value = 0;
    auto [ptr, ec] =
        std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc() || ptr == text.data() + i)
      raise(ErrorCode::ParseError, "bad node path: " + std::string(text));
    path.push_back(value);
    i = static_cast<std::size_t>(ptr - text.data());
    if (i < text.size()) {
      if (text[i] != '.')
        raise(ErrorCode::ParseError, "bad node path: " + std::string(text));
      ++i;
    }
  }
  return path;
}

}  // namespace mim::html
