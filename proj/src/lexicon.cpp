#include "mim/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "mim/error.hpp"
#include "mim/html.hpp"

namespace mim {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_single_token(const std::string& text) {
  const auto tokens = html::tokenize(text);
  return tokens.size() == 1 && tokens.front().text == text;
}

void check_source_token(const std::string& source, int line) {
  if (!is_single_token(source))
    raise(ErrorCode::ParseError, "line " + std::to_string(line) +
                                     ": source must be a single token: \"" +
                                     source + "\"");
}

std::vector<std::string> split_candidates(const std::string& text, int line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t bar = text.find('|', start);
    std::string part = trim(std::string_view(text).substr(
        start, bar == std::string::npos ? std::string::npos : bar - start));
    if (part.empty())
      raise(ErrorCode::ParseError,
            "line " + std::to_string(line) + ": empty replacement");
    out.push_back(std::move(part));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

}  // namespace

bool ascii_iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char ca = a[i];
    char cb = b[i];
    if (ca >= 'A' && ca <= 'Z') ca = static_cast<char>(ca - 'A' + 'a');
    if (cb >= 'A' && cb <= 'Z') cb = static_cast<char>(cb - 'A' + 'a');
    if (ca != cb) return false;
  }
  return true;
}

std::string ascii_lower_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string ascii_upper_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

Lexicon load_lexicon(std::string_view bytes, std::string name) {
  Lexicon lexicon;
  lexicon.name = std::move(name);
  std::unordered_set<std::string> sources;  // case-folded

  auto claim_source = [&](const std::string& token, int line) {
    const std::string folded = ascii_lower_copy(token);
    if (!sources.insert(folded).second)
      raise(ErrorCode::DuplicateSource,
            "line " + std::to_string(line) + ": \"" + token + "\"");
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= bytes.size()) {
    const std::size_t nl = bytes.find('\n', pos);
    std::string line = trim(bytes.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = (nl == std::string_view::npos) ? bytes.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;

    // "<->" must be checked before "->": the former contains the latter.
    const std::size_t swap_arrow = line.find("<->");
    if (swap_arrow != std::string::npos) {
      std::string a = trim(std::string_view(line).substr(0, swap_arrow));
      std::string b = trim(std::string_view(line).substr(swap_arrow + 3));
      if (a.empty() || b.empty())
        raise(ErrorCode::ParseError,
              "line " + std::to_string(line_no) + ": malformed swap");
      check_source_token(a, line_no);
      check_source_token(b, line_no);
      if (ascii_iequals(a, b))
        raise(ErrorCode::SelfMapping,
              "line " + std::to_string(line_no) + ": \"" + a + "\"");
      claim_source(a, line_no);
      claim_source(b, line_no);
      lexicon.entries.push_back(LexiconEntry{a, b, Direction::Swap, {b}});
      continue;
    }

    const std::size_t arrow = line.find("->");
    if (arrow == std::string::npos)
      raise(ErrorCode::ParseError,
            "line " + std::to_string(line_no) + ": expected -> or <->");
    std::string source = trim(std::string_view(line).substr(0, arrow));
    std::string rest = trim(std::string_view(line).substr(arrow + 2));
    if (source.empty() || rest.empty())
      raise(ErrorCode::ParseError,
            "line " + std::to_string(line_no) + ": malformed mapping");
    check_source_token(source, line_no);
    std::vector<std::string> candidates = split_candidates(rest, line_no);
    for (const std::string& candidate : candidates)
      if (ascii_iequals(source, candidate))
        raise(ErrorCode::SelfMapping,
              "line " + std::to_string(line_no) + ": \"" + source + "\"");
    claim_source(source, line_no);
    lexicon.entries.push_back(LexiconEntry{source, candidates.front(),
                                           Direction::OneWay,
                                           std::move(candidates)});
  }
  return lexicon;
}

std::string serialize_lexicon(const Lexicon& lexicon) {
  std::string out;
  for (const LexiconEntry& entry : lexicon.entries) {
    if (entry.direction == Direction::Swap) {
      out += entry.source + " <-> " + entry.replacement + "\n";
      continue;
    }
    out += entry.source + " -> " + entry.candidates.front();
    for (std::size_t i = 1; i < entry.candidates.size(); ++i)
      out += " | " + entry.candidates[i];
    out += "\n";
  }
  return out;
}

std::optional<Match> find_match(std::string_view token,
                                const Lexicon& lexicon) {
  for (const LexiconEntry& entry : lexicon.entries) {
    if (ascii_iequals(token, entry.source))
      return Match{entry.replacement, &entry};
    if (entry.direction == Direction::Swap &&
        ascii_iequals(token, entry.replacement))
      return Match{entry.source, &entry};
  }
  return std::nullopt;
}

const Lexicon& study_lexicon() {
  static const Lexicon lexicon = load_lexicon(
      "liberal -> conservative\n"
      "far-left -> far-right\n"
      "over-parented -> under-parented\n"
      "more -> less\n"
      "Trump -> Alexandria Ocasio-Cortez\n",
      "study");
  return lexicon;
}

const Lexicon& pilot_lexicon() {
  static const Lexicon lexicon =
      load_lexicon("Commander <-> Organizer\n", "pilot");
  return lexicon;
}

}  // namespace mim
