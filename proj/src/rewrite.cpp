#include "mim/rewrite.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <unordered_set>

#include "mim/error.hpp"
#include "mim/sha256.hpp"

namespace mim {

namespace {

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }

enum class CaseShape { Lower, Capitalized, Caps, Mixed };

CaseShape classify_case(std::string_view token) {
  std::size_t cased = 0;
  std::size_t upper = 0;
  bool first_cased_upper = false;
  bool rest_lower = true;
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char c = token[i];
    if (!is_ascii_upper(c) && !is_ascii_lower(c)) continue;
    if (cased == 0) first_cased_upper = is_ascii_upper(c);
    else if (is_ascii_upper(c)) rest_lower = false;
    if (is_ascii_upper(c)) ++upper;
    ++cased;
  }
  if (cased == 0 || upper == 0) return CaseShape::Lower;
  if (upper == cased && cased >= 2) return CaseShape::Caps;
  if (first_cased_upper && rest_lower) return CaseShape::Capitalized;
  return CaseShape::Mixed;
}

std::string first_letter_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_ascii_lower(c)) {
      c = static_cast<char>(c - 'a' + 'A');
      break;
    }
    if (is_ascii_upper(c)) break;
  }
  return out;
}

bool spans_overlap(const Swap& a, const Swap& b) {
  if (a.span.path != b.span.path) return false;
  return a.span.start < b.span.end && b.span.start < a.span.end;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    lines.emplace_back(text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
  }
  return lines;
}

std::string tsv_escape(std::string_view field) {
  std::string out;
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string tsv_unescape(std::string_view field) {
  std::string out;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == '\\' && i + 1 < field.size()) {
      ++i;
      switch (field[i]) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        default: out.push_back(field[i]);
      }
    } else {
      out.push_back(field[i]);
    }
  }
  return out;
}

}  // namespace

void validate_policy(const RewritePolicy& policy) {
  if (policy.occurrence == Occurrence::CommentsOnly &&
      policy.scope.kind != html::ScopeSelector::Kind::CommentsOnly)
    raise(ErrorCode::InvalidArgument,
          "comments-only occurrence requires a comments scope");
  if (policy.scope.kind != html::ScopeSelector::Kind::WholeDocument &&
      policy.scope.class_substring.empty())
    raise(ErrorCode::InvalidArgument, "scope requires a class substring");
}

std::string occurrence_name(Occurrence occurrence) {
  switch (occurrence) {
    case Occurrence::All: return "all";
    case Occurrence::FirstOnly: return "first";
    case Occurrence::CommentsOnly: return "comments";
  }
  return "all";
}

std::string scope_kind_name(html::ScopeSelector::Kind kind) {
  switch (kind) {
    case html::ScopeSelector::Kind::WholeDocument: return "document";
    case html::ScopeSelector::Kind::CommentsOnly: return "comments";
    case html::ScopeSelector::Kind::PostBodyOnly: return "post-body";
  }
  return "document";
}

std::string apply_casing(std::string_view occurrence,
                         std::string_view replacement) {
  if (replacement.find(' ') != std::string_view::npos)
    return std::string(replacement);  // multi-word: lexicon casing verbatim
  switch (classify_case(occurrence)) {
    case CaseShape::Lower: return ascii_lower_copy(replacement);
    case CaseShape::Capitalized:
      return first_letter_upper(ascii_lower_copy(replacement));
    case CaseShape::Caps: return ascii_upper_copy(replacement);
    case CaseShape::Mixed: return std::string(replacement);
  }
  return std::string(replacement);
}

std::vector<Swap> plan_swaps(const html::DocumentTree& tree,
                             const Lexicon& lexicon,
                             const RewritePolicy& policy,
                             const TokenModel* model) {
  validate_policy(policy);
  const auto spans = html::select_spans(tree, policy.scope);
  std::vector<Swap> swaps;
  std::unordered_set<std::string> seen_entries;  // FirstOnly, by source

  // Rolling window of the tokens preceding the current span, used as the
  // model context when an entry offers several candidates.
  std::vector<std::string> preceding;

  for (const html::TextSpan& span : spans) {
    const auto match = find_match(span.token, lexicon);
    if (!match) {
      preceding.push_back(span.token);
      continue;
    }
    if (policy.occurrence == Occurrence::FirstOnly &&
        !seen_entries.insert(match->entry->source).second) {
      preceding.push_back(span.token);
      continue;
    }

    std::string canonical = match->replacement;
    if (model != nullptr && match->entry->direction == Direction::OneWay &&
        match->entry->candidates.size() > 1) {
      TokenModel::Context context;
      const std::size_t k = model->order();
      const std::size_t have = std::min(k, preceding.size());
      context.assign(preceding.end() - have, preceding.end());
      canonical = model->choose_replacement(context, match->entry->candidates);
    }

    const std::string replacement =
        policy.preserve_case ? apply_casing(span.token, canonical) : canonical;
    if (replacement != span.token)
      swaps.push_back(Swap{span, span.token, replacement,
                           match->entry->source});
    preceding.push_back(span.token);
  }
  return swaps;
}

html::DocumentTree apply_swaps(const html::DocumentTree& tree,
                               const std::vector<Swap>& swaps) {
  for (std::size_t i = 0; i < swaps.size(); ++i)
    for (std::size_t j = i + 1; j < swaps.size(); ++j)
      if (spans_overlap(swaps[i], swaps[j]))
        raise(ErrorCode::InvalidArgument, "overlapping swaps");

  html::DocumentTree out = tree;

  // Group per Text node, then patch in descending offset order so earlier
  // offsets stay valid.
  std::map<html::NodePath, std::vector<const Swap*>> by_node;
  for (const Swap& swap : swaps) by_node[swap.span.path].push_back(&swap);

  for (auto& [path, node_swaps] : by_node) {
    html::Node& node = html::node_at(out, path);
    if (!node.is_text())
      raise(ErrorCode::StaleSwap,
            "swap path does not address a text node: " +
                html::path_to_string(path));
    std::string& content = node.text().content;
    std::sort(node_swaps.begin(), node_swaps.end(),
              [](const Swap* a, const Swap* b) {
                return a->span.start > b->span.start;
              });
    for (const Swap* swap : node_swaps) {
      if (swap->span.end > content.size() ||
          content.compare(swap->span.start,
                          swap->span.end - swap->span.start,
                          swap->original) != 0)
        raise(ErrorCode::StaleSwap,
              "document text at " + html::path_to_string(path) + "[" +
                  std::to_string(swap->span.start) + "," +
                  std::to_string(swap->span.end) + ") does not match \"" +
                  swap->original + "\"");
      content.replace(swap->span.start, swap->span.end - swap->span.start,
                      swap->replacement);
    }
  }
  return out;
}

html::DocumentTree invert_swaps(const html::DocumentTree& tree,
                                const std::vector<Swap>& swaps) {
  // Recompute each swap's position in the rewritten document by shifting
  // original offsets with the cumulative size delta, then swap back.
  std::map<html::NodePath, std::vector<const Swap*>> by_node;
  for (const Swap& swap : swaps) by_node[swap.span.path].push_back(&swap);

  std::vector<Swap> inverse;
  for (auto& [path, node_swaps] : by_node) {
    std::sort(node_swaps.begin(), node_swaps.end(),
              [](const Swap* a, const Swap* b) {
                return a->span.start < b->span.start;
              });
    std::ptrdiff_t delta = 0;
    for (const Swap* swap : node_swaps) {
      Swap reverse;
      reverse.span.path = path;
      reverse.span.start = static_cast<std::size_t>(
          static_cast<std::ptrdiff_t>(swap->span.start) + delta);
      reverse.span.end = reverse.span.start + swap->replacement.size();
      reverse.span.token = swap->replacement;
      reverse.original = swap->replacement;
      reverse.replacement = swap->original;
      reverse.entry_source = swap->entry_source;
      inverse.push_back(std::move(reverse));
      delta += static_cast<std::ptrdiff_t>(swap->replacement.size()) -
               static_cast<std::ptrdiff_t>(swap->original.size());
    }
  }
  return apply_swaps(tree, inverse);
}

RewriteResult rewrite(const html::DocumentTree& tree, const Lexicon& lexicon,
                      const RewritePolicy& policy, const TokenModel* model) {
  RewriteResult result;
  result.log.lexicon_name = lexicon.name;
  result.log.policy = policy;
  result.log.input_digest = sha256_hex(html::serialize(tree));
  result.log.swaps = plan_swaps(tree, lexicon, policy, model);
  result.tree = apply_swaps(tree, result.log.swaps);
  result.log.output_digest = sha256_hex(html::serialize(result.tree));
  return result;
}

std::string serialize_log(const RewriteLog& log) {
  std::string out;
  out += "# lexicon: " + log.lexicon_name + "\n";
  out += "# policy: " + occurrence_name(log.policy.occurrence) + "\n";
  out += "# scope: " + scope_kind_name(log.policy.scope.kind);
  if (!log.policy.scope.class_substring.empty())
    out += " " + log.policy.scope.class_substring;
  out += "\n";
  out += "# preserve_case: ";
  out += log.policy.preserve_case ? "true" : "false";
  out += "\n";
  out += "# input_digest: " + log.input_digest + "\n";
  out += "# output_digest: " + log.output_digest + "\n";
  for (const Swap& swap : log.swaps) {
    out += html::path_to_string(swap.span.path);
    out += "\t" + std::to_string(swap.span.start);
    out += "\t" + std::to_string(swap.span.end);
    out += "\t" + tsv_escape(swap.original);
    out += "\t" + tsv_escape(swap.replacement);
    out += "\t" + tsv_escape(swap.entry_source);
    out += "\n";
  }
  return out;
}

RewriteLog parse_log(std::string_view text) {
  RewriteLog log;
  auto header = [&](const std::string& line, const char* key)
      -> std::optional<std::string> {
    const std::string prefix = std::string("# ") + key + ": ";
    if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return std::nullopt;
  };
  for (const std::string& line : split_lines(text)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (auto v = header(line, "lexicon")) log.lexicon_name = *v;
      else if (auto v2 = header(line, "policy")) {
        if (*v2 == "first") log.policy.occurrence = Occurrence::FirstOnly;
        else if (*v2 == "comments") log.policy.occurrence = Occurrence::CommentsOnly;
        else log.policy.occurrence = Occurrence::All;
      } else if (auto v3 = header(line, "scope")) {
        const std::size_t space = v3->find(' ');
        const std::string kind = v3->substr(0, space);
        const std::string cls =
            space == std::string::npos ? "" : v3->substr(space + 1);
        if (kind == "comments")
          log.policy.scope = html::ScopeSelector::comments_only(
              cls.empty() ? "comment" : cls);
        else if (kind == "post-body")
          log.policy.scope = html::ScopeSelector::post_body_only(
              cls.empty() ? "post" : cls);
        else
          log.policy.scope = html::ScopeSelector::whole_document();
      } else if (auto v4 = header(line, "preserve_case")) {
        log.policy.preserve_case = (*v4 == "true");
      } else if (auto v5 = header(line, "input_digest")) {
        log.input_digest = *v5;
      } else if (auto v6 = header(line, "output_digest")) {
        log.output_digest = *v6;
      }
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(
          start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 6)
      raise(ErrorCode::ParseError, "log line needs 6 fields: " + line);
    Swap swap;
    swap.span.path = html::path_from_string(fields[0]);
    auto parse_size = [&](const std::string& s) {
      std::size_t value = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
      if (ec != std::errc() || p != s.data() + s.size())
        raise(ErrorCode::ParseError, "bad offset in log line: " + line);
      return value;
    };
    swap.span.start = parse_size(fields[1]);
    swap.span.end = parse_size(fields[2]);
    swap.original = tsv_unescape(fields[3]);
    swap.replacement = tsv_unescape(fields[4]);
    swap.entry_source = tsv_unescape(fields[5]);
    swap.span.token = swap.original;
    log.swaps.push_back(std::move(swap));
  }
  return log;
}

std::string format_log_report(const RewriteLog& log) {
  std::string out;
  out += "lexicon:  " + log.lexicon_name + "\n";
  out += "policy:   " + occurrence_name(log.policy.occurrence) + ", scope " +
         scope_kind_name(log.policy.scope.kind);
  if (!log.policy.scope.class_substring.empty())
    out += " (class~\"" + log.policy.scope.class_substring + "\")";
  out += "\n";
  out += "input:    sha256 " + log.input_digest + "\n";
  out += "output:   sha256 " + log.output_digest + "\n";
  out += "swaps:    " + std::to_string(log.swaps.size()) + "\n";
  for (const Swap& swap : log.swaps) {
    out += "  " + html::path_to_string(swap.span.path) + " [" +
           std::to_string(swap.span.start) + "," +
           std::to_string(swap.span.end) + ") \"" + swap.original +
           "\" -> \"" + swap.replacement + "\" (entry " + swap.entry_source +
           ")\n";
  }
  return out;
}

}  // namespace mim
