#include "mim/detector.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

#include "mim/sha256.hpp"

namespace mim {

namespace {

std::vector<html::TextSpan> visible_tokens(const html::DocumentTree& tree) {
  return html::select_spans(tree, html::ScopeSelector::whole_document());
}

// LCS match pairs via dynamic programming over suffixes. The backtrack
// prefers matching equal tokens as early as possible, which keeps gap
// boundaries deterministic.
std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(
    const std::vector<html::TextSpan>& a, const std::vector<html::TextSpan>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::uint32_t> dp((n + 1) * (m + 1), 0);
  auto at = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      if (a[i].token == b[j].token)
        dp[at(i, j)] = dp[at(i + 1, j + 1)] + 1;
      else
        dp[at(i, j)] = std::max(dp[at(i + 1, j)], dp[at(i, j + 1)]);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n && j < m) {
    if (a[i].token == b[j].token &&
        dp[at(i, j)] == dp[at(i + 1, j + 1)] + 1) {
      pairs.emplace_back(i, j);
      ++i;
      ++j;
    } else if (dp[at(i + 1, j)] >= dp[at(i, j + 1)]) {
      ++i;
    } else {
      ++j;
    }
  }
  return pairs;
}

void emit_gap(const std::vector<html::TextSpan>& a, std::size_t a_begin,
              std::size_t a_end, const std::vector<html::TextSpan>& b,
              std::size_t b_begin, std::size_t b_end,
              std::vector<Divergence>& out) {
  const std::size_t na = a_end - a_begin;
  const std::size_t nb = b_end - b_begin;
  const std::size_t paired = std::min(na, nb);
  for (std::size_t k = 0; k < paired; ++k) {
    Divergence d;
    d.kind = Divergence::Kind::Substitution;
    d.before = a[a_begin + k].token;
    d.after = b[b_begin + k].token;
    d.canonical_span = a[a_begin + k];
    d.observed_span = b[b_begin + k];
    out.push_back(std::move(d));
  }
  if (na > paired) {
    Divergence d;
    d.kind = Divergence::Kind::Deletion;
    for (std::size_t k = a_begin + paired; k < a_end; ++k)
      d.tokens.push_back(a[k].token);
    d.canonical_span = a[a_begin + paired];
    out.push_back(std::move(d));
  }
  if (nb > paired) {
    Divergence d;
    d.kind = Divergence::Kind::Insertion;
    for (std::size_t k = b_begin + paired; k < b_end; ++k)
      d.tokens.push_back(b[k].token);
    d.observed_span = b[b_begin + paired];
    out.push_back(std::move(d));
  }
}

// Entry match helper for multi-word replacements: true when the
// substitution at index i, together with the immediately following
// insertion, spells out source -> replacement tokens.
bool matches_multiword(const std::vector<Divergence>& divergences,
                       std::size_t i, const std::string& source,
                       const std::vector<std::string>& replacement_tokens) {
  const Divergence& sub = divergences[i];
  if (!ascii_iequals(sub.before, source)) return false;
  if (!ascii_iequals(sub.after, replacement_tokens.front())) return false;
  if (replacement_tokens.size() == 1) return true;
  if (i + 1 >= divergences.size()) return false;
  const Divergence& next = divergences[i + 1];
  if (next.kind != Divergence::Kind::Insertion) return false;
  if (next.tokens.size() < replacement_tokens.size() - 1) return false;
  for (std::size_t k = 1; k < replacement_tokens.size(); ++k)
    if (!ascii_iequals(next.tokens[k - 1], replacement_tokens[k]))
      return false;
  return true;
}

}  // namespace

ContentDigest digest(const html::DocumentTree& tree) {
  std::string stream;
  for (const html::TextSpan& span : visible_tokens(tree)) {
    if (!stream.empty()) stream.push_back('\n');
    stream += span.token;
  }
  return ContentDigest{sha256_hex(stream)};
}

std::vector<Divergence> diff_tokens(const html::DocumentTree& canonical,
                                    const html::DocumentTree& observed) {
  const auto a = visible_tokens(canonical);
  const auto b = visible_tokens(observed);
  const auto pairs = lcs_pairs(a, b);

  std::vector<Divergence> out;
  std::size_t ai = 0;
  std::size_t bi = 0;
  for (const auto& [pi, pj] : pairs) {
    emit_gap(a, ai, pi, b, bi, pj, out);
    ai = pi + 1;
    bi = pj + 1;
  }
  emit_gap(a, ai, a.size(), b, bi, b.size(), out);
  return out;
}

DetectionReport classify(const std::vector<Divergence>& divergences,
                         const std::vector<Lexicon>& reference_lexicons) {
  DetectionReport report;
  report.divergences = divergences;
  report.digest_match = divergences.empty();

  bool any_substitution = false;

  // ValenceInversion: substitution matching an entry in either direction.
  std::set<std::string> flagged_entries;
  for (std::size_t i = 0; i < divergences.size(); ++i) {
    const Divergence& d = divergences[i];
    if (d.kind != Divergence::Kind::Substitution) continue;
    any_substitution = true;
    for (const Lexicon& lexicon : reference_lexicons) {
      for (const LexiconEntry& entry : lexicon.entries) {
        const auto replacement_tokens = html::tokenize(entry.replacement);
        std::vector<std::string> forward;
        for (const auto& t : replacement_tokens) forward.push_back(t.text);
        bool hit = matches_multiword(divergences, i, entry.source, forward);
        // Reverse direction: replacement restored back to the source.
        if (!hit && forward.size() == 1 &&
            ascii_iequals(d.before, forward.front()) &&
            ascii_iequals(d.after, entry.source))
          hit = true;
        if (hit && flagged_entries.insert(entry.source).second)
          report.valence_inversions.push_back(
              ValenceInversionFlag{entry.source, d.before, d.after});
      }
    }
  }

  // BidirectionalSwap: both (a -> b) and (b -> a) present.
  std::set<std::pair<std::string, std::string>> sub_pairs;
  for (const Divergence& d : divergences) {
    if (d.kind != Divergence::Kind::Substitution) continue;
    sub_pairs.insert({ascii_lower_copy(d.before), ascii_lower_copy(d.after)});
  }
  std::set<std::pair<std::string, std::string>> swap_pairs;
  for (const auto& [x, y] : sub_pairs) {
    if (x < y && sub_pairs.count({y, x}) > 0) swap_pairs.insert({x, y});
  }
  for (const auto& [x, y] : swap_pairs) {
    // Report with canonical lexicon casing when a reference entry covers it.
    std::string a = x;
    std::string b = y;
    for (const Lexicon& lexicon : reference_lexicons) {
      for (const LexiconEntry& entry : lexicon.entries) {
        if (entry.direction != Direction::Swap) continue;
        if ((ascii_iequals(entry.source, x) &&
             ascii_iequals(entry.replacement, y)) ||
            (ascii_iequals(entry.source, y) &&
             ascii_iequals(entry.replacement, x))) {
          a = entry.source;
          b = entry.replacement;
        }
      }
    }
    report.bidirectional_swaps.push_back(BidirectionalSwapFlag{a, b});
  }

  const bool any_flag = !report.valence_inversions.empty() ||
                        !report.bidirectional_swaps.empty();
  report.verdict = (any_flag || any_substitution) ? Verdict::Suspicious
                                                  : Verdict::Clean;
  return report;
}

DetectionReport detect(const html::DocumentTree& canonical,
                       const html::DocumentTree& observed,
                       const std::vector<Lexicon>& reference_lexicons) {
  DetectionReport report =
      classify(diff_tokens(canonical, observed), reference_lexicons);
  report.canonical_digest = digest(canonical);
  report.observed_digest = digest(observed);
  report.digest_match = report.canonical_digest == report.observed_digest;
  return report;
}

std::string format_report(const DetectionReport& report) {
  std::string out;
  out += "verdict:      ";
  out += report.verdict == Verdict::Clean ? "Clean" : "Suspicious";
  out += "\n";
  out += "digest_match: ";
  out += report.digest_match ? "yes" : "no";
  out += "\n";
  if (!report.canonical_digest.hex.empty())
    out += "canonical:    sha256 " + report.canonical_digest.hex + "\n";
  if (!report.observed_digest.hex.empty())
    out += "observed:     sha256 " + report.observed_digest.hex + "\n";
  out += "divergences:  " + std::to_string(report.divergences.size()) + "\n";
  for (const Divergence& d : report.divergences) {
    switch (d.kind) {
      case Divergence::Kind::Substitution:
        out += "  [substitution] \"" + d.before + "\" -> \"" + d.after + "\"";
        break;
      case Divergence::Kind::Insertion: {
        out += "  [insertion]";
        for (const std::string& t : d.tokens) out += " \"" + t + "\"";
        break;
      }
      case Divergence::Kind::Deletion: {
        out += "  [deletion]";
        for (const std::string& t : d.tokens) out += " \"" + t + "\"";
        break;
      }
    }
    if (d.canonical_span)
      out += " at " + html::path_to_string(d.canonical_span->path) + "[" +
             std::to_string(d.canonical_span->start) + "," +
             std::to_string(d.canonical_span->end) + ")";
    out += "\n";
  }
  for (const auto& flag : report.valence_inversions)
    out += "  [valence-inversion] entry \"" + flag.entry_source + "\": \"" +
           flag.before + "\" -> \"" + flag.after + "\"\n";
  for (const auto& flag : report.bidirectional_swaps)
    out += "  [bidirectional-swap] \"" + flag.a + "\" <-> \"" + flag.b +
           "\"\n";
  return out;
}

}  // namespace mim
