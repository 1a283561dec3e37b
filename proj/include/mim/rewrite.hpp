#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mim/html.hpp"
#include "mim/lexicon.hpp"
#include "mim/markov.hpp"

namespace mim {

enum class Occurrence { All, FirstOnly, CommentsOnly };

/// Which matches get rewritten and where. Occurrence::CommentsOnly requires
/// a CommentsOnly scope; the factories keep the two consistent.
struct RewritePolicy {
  Occurrence occurrence = Occurrence::All;
  html::ScopeSelector scope = html::ScopeSelector::whole_document();
  bool preserve_case = true;

  static RewritePolicy all() { return {}; }
  static RewritePolicy first_only() {
    return {Occurrence::FirstOnly, html::ScopeSelector::whole_document(), true};
  }
  static RewritePolicy comments_only(std::string class_substring = "comment") {
    return {Occurrence::CommentsOnly,
            html::ScopeSelector::comments_only(std::move(class_substring)),
            true};
  }
};

/// Throws InvalidArgument when the occurrence/scope coupling is violated.
void validate_policy(const RewritePolicy& policy);

std::string occurrence_name(Occurrence occurrence);
std::string scope_kind_name(html::ScopeSelector::Kind kind);

/// One applied substitution. `span` addresses the original document;
/// `original` is the document text there and `replacement` the
/// casing-adjusted text that goes in.
struct Swap {
  html::TextSpan span;
  std::string original;
  std::string replacement;
  std::string entry_source;  // canonical lexicon source
};

/// Complete audit of a rewrite. Swaps are in document order and
/// non-overlapping; inverting them on the output restores the input.
struct RewriteLog {
  std::vector<Swap> swaps;
  std::string lexicon_name;
  RewritePolicy policy;
  std::string input_digest;   // sha256 of the input serialization
  std::string output_digest;  // sha256 of the output serialization
};

/// Scans the scoped spans of the original document in document order and
/// plans one swap per matched token. FirstOnly keeps only the first match
/// per lexicon entry. Matches are computed against the original document
/// only; planned replacements are never rescanned. When a model is given,
/// entries with several candidates are resolved by the model using the k
/// tokens preceding the match site.
std::vector<Swap> plan_swaps(const html::DocumentTree& tree,
                             const Lexicon& lexicon,
                             const RewritePolicy& policy,
                             const TokenModel* model = nullptr);

/// Applies non-overlapping swaps, per Text node in descending offset order.
/// Throws StaleSwap when a span's text does not match its recorded original.
html::DocumentTree apply_swaps(const html::DocumentTree& tree,
                               const std::vector<Swap>& swaps);

/// Undoes a rewrite: replaces each swap's replacement in the output with
/// its original, restoring the input text exactly.
html::DocumentTree invert_swaps(const html::DocumentTree& tree,
                                const std::vector<Swap>& swaps);

struct RewriteResult {
  html::DocumentTree tree;
  RewriteLog log;
};

RewriteResult rewrite(const html::DocumentTree& tree, const Lexicon& lexicon,
                      const RewritePolicy& policy,
                      const TokenModel* model = nullptr);

/// Casing transfer: lowercase occurrence gives a lowercase replacement,
/// Capitalized gives a first-letter-uppercased one, ALL-CAPS an uppercased
/// one. Multi-word replacements keep their lexicon casing verbatim.
std::string apply_casing(std::string_view occurrence,
                         std::string_view replacement);

/// Line-oriented machine format: header `# key: value` lines, then one
/// swap per line as `path\tstart\tend\toriginal\treplacement\tentry`.
std::string serialize_log(const RewriteLog& log);
RewriteLog parse_log(std::string_view text);

/// Human-readable summary of a rewrite.
std::string format_log_report(const RewriteLog& log);

}  // namespace mim
