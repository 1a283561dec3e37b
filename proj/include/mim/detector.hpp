#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mim/html.hpp"
#include "mim/lexicon.hpp"

namespace mim {

/// SHA-256 over the visible-text token stream (tokens joined by '\n',
/// RawText and Comment content excluded). Equal token streams give equal
/// digests; markup and attribute changes do not affect it.
struct ContentDigest {
  std::string hex;
  bool operator==(const ContentDigest&) const = default;
};

ContentDigest digest(const html::DocumentTree& tree);

/// One token-level difference between the canonical and observed streams.
struct Divergence {
  enum class Kind { Substitution, Insertion, Deletion };
  Kind kind = Kind::Substitution;

  // Substitution only.
  std::string before;
  std::string after;

  // Insertion/Deletion: the run of unmatched tokens.
  std::vector<std::string> tokens;

  // Anchor spans (first affected token on each side, when that side has one).
  std::optional<html::TextSpan> canonical_span;
  std::optional<html::TextSpan> observed_span;
};

struct ValenceInversionFlag {
  std::string entry_source;  // canonical source of the matched entry
  std::string before;
  std::string after;
};

struct BidirectionalSwapFlag {
  std::string a;
  std::string b;
};

enum class Verdict { Clean, Suspicious };

struct DetectionReport {
  bool digest_match = true;
  ContentDigest canonical_digest;
  ContentDigest observed_digest;
  std::vector<Divergence> divergences;
  std::vector<ValenceInversionFlag> valence_inversions;
  std::vector<BidirectionalSwapFlag> bidirectional_swaps;
  Verdict verdict = Verdict::Clean;
};

/// Longest-common-subsequence alignment over the two visible-token
/// streams. Within each unmatched gap, tokens are paired positionally into
/// Substitutions; leftover runs become one Insertion or Deletion. Output is
/// in document order.
std::vector<Divergence> diff_tokens(const html::DocumentTree& canonical,
                                    const html::DocumentTree& observed);

/// Flags substitutions that match a reference lexicon entry in either
/// direction (case-insensitive) as ValenceInversion; entries with
/// multi-word replacements are recognized as a Substitution followed by
/// the Insertion of the remaining replacement tokens. Simultaneous (a→b)
/// and (b→a) substitutions raise BidirectionalSwap. Verdict is Suspicious
/// iff any flag or any Substitution exists.
DetectionReport classify(const std::vector<Divergence>& divergences,
                         const std::vector<Lexicon>& reference_lexicons);

/// digest + diff_tokens + classify over two parsed documents.
DetectionReport detect(const html::DocumentTree& canonical,
                       const html::DocumentTree& observed,
                       const std::vector<Lexicon>& reference_lexicons);

std::string format_report(const DetectionReport& report);

}  // namespace mim
