#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "generators.hpp"
#include "mim/error.hpp"
#include "mim/html.hpp"

using namespace mim;
using namespace mim::html;

namespace {

std::vector<std::string> span_tokens(const std::vector<TextSpan>& spans) {
  std::vector<std::string> tokens;
  for (const auto& span : spans) tokens.push_back(span.token);
  return tokens;
}

}  // namespace

TEST_CASE("parse minimal well-formed document") {
  const auto tree = parse_html("<p>hi</p>");
  REQUIRE(tree.children.size() == 1);
  const auto& p = tree.children[0];
  REQUIRE(p.is_element());
  CHECK(p.element().tag == "p");
  REQUIRE(p.element().children.size() == 1);
  CHECK(p.element().children[0].is_text());
  CHECK(p.element().children[0].text().content == "hi");
}

TEST_CASE("parse comment-classed block node by node") {
  const auto tree =
      parse_html("<div class=\"comment\"><p>far-left pundits</p></div>");

  DocumentTree expected;
  Element p{"p", {}, {}};
  p.children.push_back(Node{Text{"far-left pundits"}});
  Element div{"div", {{"class", "comment"}}, {}};
  div.children.push_back(Node{std::move(p)});
  expected.children.push_back(Node{std::move(div)});

  CHECK(structurally_equal(tree, expected));
}

TEST_CASE("script content becomes RawText and yields no spans") {
  const auto tree = parse_html("<p>a<script>var liberal=1</script>b</p>");
  REQUIRE(tree.children.size() == 1);
  const auto& children = tree.children[0].element().children;
  REQUIRE(children.size() == 3);
  CHECK(children[0].is_text());
  CHECK(children[0].text().content == "a");
  REQUIRE(children[1].is_raw_text());
  CHECK(children[1].raw_text().tag == "script");
  CHECK(children[1].raw_text().content == "var liberal=1");
  CHECK(children[2].text().content == "b");

  const auto spans = select_spans(tree, ScopeSelector::whole_document());
  CHECK(span_tokens(spans) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("lenient parsing of malformed markup") {
  // Unclosed tags close at the parent boundary.
  const auto tree = parse_html("<div><p>a</div>b");
  REQUIRE(tree.children.size() == 2);
  CHECK(tree.children[0].element().tag == "div");
  CHECK(tree.children[1].text().content == "b");

  // Stray close tags are dropped; unknown tags are kept.
  const auto tree2 = parse_html("</b><widget>x</widget>");
  REQUIRE(tree2.children.size() == 1);
  CHECK(tree2.children[0].element().tag == "widget");

  // Void elements take no children.
  const auto tree3 = parse_html("<p>a<br>b</p>");
  REQUIRE(tree3.children[0].element().children.size() == 3);
  CHECK(tree3.children[0].element().children[1].element().tag == "br");

  // A lone '<' is text.
  const auto tree4 = parse_html("a < b");
  REQUIRE(tree4.children.size() == 1);
  CHECK(tree4.children[0].text().content == "a < b");
}

TEST_CASE("parse rejects non-UTF-8 input") {
  std::string bad = "<p>hi</p>";
  bad.push_back(static_cast<char>(0xFF));
  CHECK_THROWS_WITH_AS(parse_html(bad), doctest::Contains("InvalidEncoding"),
                       Error);
  try {
    parse_html(bad);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidEncoding);
  }
}

TEST_CASE("parse rejects pathological nesting depth") {
  std::string deep;
  for (int i = 0; i < 257; ++i) deep += "<div>";
  try {
    parse_html(deep);
    FAIL("expected DepthExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DepthExceeded);
  }

  std::string ok;
  for (int i = 0; i < 256; ++i) ok += "<div>";
  CHECK_NOTHROW(parse_html(ok));
}

TEST_CASE("serialize round trips and escapes text") {
  CHECK(serialize(parse_html("<p>hi</p>")) == "<p>hi</p>");

  DocumentTree tree;
  tree.children.push_back(Node{Text{"a<b"}});
  CHECK(serialize(tree) == "a&lt;b");
}

TEST_CASE("parse(serialize(t)) is structurally equal to t on 500 fuzz trees") {
  testgen::Rng rng(0xDEC0DEull);
  for (int i = 0; i < 500; ++i) {
    const auto tree = testgen::make_round_trip_tree(rng);
    const auto reparsed = parse_html(serialize(tree));
    REQUIRE(structurally_equal(tree, reparsed));
  }
}

TEST_CASE("serialize-parse normalization is idempotent on messy inputs") {
  const std::vector<std::string> inputs = {
      "<p>hi",
      "<P CLASS=comment>x</P>",
      "<div><span>a</div>b</span>",
      "a<b",
      "<!DOCTYPE html><p>x</p>",
      "<ul><li>a<li>b</ul>",
      "<p>a&amp;b&unknown;</p>",
      "<img src=x.png><br/>",
      "<p title='single'>t</p>",
      "<!-- note -->tail",
      "<script>if (a<b) { run() }</script>",
      "text &#65; &#x42; &nbsp; done",
  };
  for (const auto& input : inputs) {
    const std::string once = serialize(parse_html(input));
    const std::string twice = serialize(parse_html(once));
    CHECK(once == twice);
  }
}

TEST_CASE("select_spans whole document") {
  const auto tree = parse_html("<p>hi</p>");
  const auto spans = select_spans(tree, ScopeSelector::whole_document());
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].token == "hi");
  CHECK(spans[0].path == NodePath{0, 0});
}

TEST_CASE("select_spans comments scope filters by ancestor class") {
  const auto tree =
      parse_html("<p>x</p><div class=\"comment\"><p>y z</p></div>");
  const auto comment_spans =
      select_spans(tree, ScopeSelector::comments_only("comment"));
  CHECK(span_tokens(comment_spans) == std::vector<std::string>{"y", "z"});

  const auto all_spans = select_spans(tree, ScopeSelector::whole_document());
  CHECK(span_tokens(all_spans) == std::vector<std::string>{"x", "y", "z"});

  // Substring matching: class="comment-list" matches "comment".
  const auto tree2 =
      parse_html("<div class=\"comment-list\"><p>w</p></div>");
  CHECK(select_spans(tree2, ScopeSelector::comments_only("comment")).size() ==
        1);
}

TEST_CASE("select_spans on raw-text-only document is empty") {
  const auto tree = parse_html("<script>var a = 1;</script>");
  CHECK(select_spans(tree, ScopeSelector::whole_document()).empty());
}

TEST_CASE("scope monotonicity: comments spans are a subset of document spans") {
  testgen::Rng rng(0xBEEFull);
  for (int i = 0; i < 50; ++i) {
    const auto fuzz = testgen::make_lexicon(rng);
    const auto tree = testgen::make_document(rng, fuzz.lexicon);
    std::set<std::tuple<NodePath, std::size_t, std::size_t>> whole;
    for (const auto& span :
         select_spans(tree, ScopeSelector::whole_document()))
      whole.insert({span.path, span.start, span.end});
    for (const auto& span :
         select_spans(tree, ScopeSelector::comments_only("comment")))
      CHECK(whole.count({span.path, span.start, span.end}) == 1);
  }
}

TEST_CASE("tokenize keeps hyphenated compounds together") {
  const auto tokens = tokenize("far-left pundits");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].text == "far-left");
  CHECK(tokens[1].text == "pundits");
}

TEST_CASE("tokenize of empty string") { CHECK(tokenize("").empty()); }

TEST_CASE("tokenize offsets are byte offsets") {
  const auto tokens = tokenize("Alexandria Ocasio-Cortez!");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].text == "Alexandria");
  CHECK(tokens[0].start == 0);
  CHECK(tokens[0].end == 10);
  CHECK(tokens[1].text == "Ocasio-Cortez");
  CHECK(tokens[1].start == 11);
  CHECK(tokens[1].end == 24);
}

TEST_CASE("tokenize joins interior apostrophes, not edges") {
  const auto tokens = tokenize("don't 'quote' --dash");
  std::vector<std::string> texts;
  for (const auto& t : tokens) texts.push_back(t.text);
  CHECK(texts == std::vector<std::string>{"don't", "quote", "dash"});
}

TEST_CASE("tokenize handles multi-byte letters") {
  const auto tokens = tokenize("caf\xc3\xa9 au lait");
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0].text == "caf\xc3\xa9");
  CHECK(tokens[0].end == 5);  // 4 letters, one of them 2 bytes
}

TEST_CASE("token cover: ordered, non-overlapping, text equals slice") {
  testgen::Rng rng(0x70C4ull);
  const auto fuzz = testgen::make_lexicon(rng);
  for (int i = 0; i < 200; ++i) {
    const std::string text = testgen::make_sentence(rng, fuzz.lexicon, true);
    std::size_t previous_end = 0;
    for (const auto& token : tokenize(text)) {
      CHECK(token.start >= previous_end);
      CHECK(token.start < token.end);
      CHECK(token.end <= text.size());
      CHECK(text.substr(token.start, token.end - token.start) == token.text);
      previous_end = token.end;
    }
  }
}

TEST_CASE("node_at resolves paths and rejects bad ones") {
  const auto tree = parse_html("<div><p>a</p><p>b</p></div>");
  CHECK(node_at(tree, {0, 1, 0}).text().content == "b");
  CHECK_THROWS_AS(node_at(tree, {0, 5}), Error);
  CHECK_THROWS_AS(node_at(tree, {}), Error);
  CHECK(path_from_string("0.1.0") == NodePath{0, 1, 0});
  CHECK(path_to_string({0, 1, 0}) == "0.1.0");
}
