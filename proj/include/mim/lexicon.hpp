#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mim {

enum class Direction { OneWay, Swap };

/// One valence mapping. `source` is always a single token; `replacement`
/// may be multi-word for OneWay entries. For Swap entries both sides act
/// as sources and must be single tokens. `candidates` holds the full
/// alternative set for OneWay entries written as `source -> a | b | c`;
/// `replacement` is always candidates.front().
struct LexiconEntry {
  std::string source;       // canonical casing
  std::string replacement;  // canonical casing
  Direction direction = Direction::OneWay;
  std::vector<std::string> candidates;
};

struct Lexicon {
  std::string name;
  std::vector<LexiconEntry> entries;
};

struct Match {
  std::string replacement;  // canonical casing; for Swap, the opposite side
  const LexiconEntry* entry;
};

/// Parses the lexicon text format:
///
///   # comment line
///   source -> replacement            one-way
///   source -> alt1 | alt2 | alt3     one-way with a candidate set
///   a <-> b                          bidirectional swap
///
/// Invariant violations are rejected: duplicate case-insensitive sources
/// (DuplicateSource), source equal to its replacement (SelfMapping),
/// multi-token sources or malformed lines (ParseError).
Lexicon load_lexicon(std::string_view bytes, std::string name = "lexicon");

std::string serialize_lexicon(const Lexicon& lexicon);

/// Case-insensitive token lookup. OneWay entries match only their source;
/// Swap entries match either side and yield the other. Returns an empty
/// optional when nothing matches.
std::optional<Match> find_match(std::string_view token, const Lexicon& lexicon);

/// liberal->conservative, far-left->far-right, over-parented->under-parented,
/// more->less, Trump->Alexandria Ocasio-Cortez.
const Lexicon& study_lexicon();

/// Commander <-> Organizer.
const Lexicon& pilot_lexicon();

/// ASCII-only case-insensitive string equality.
bool ascii_iequals(std::string_view a, std::string_view b);
std::string ascii_lower_copy(std::string_view s);
std::string ascii_upper_copy(std::string_view s);

}  // namespace mim
