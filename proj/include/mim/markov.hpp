#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mim {

/// Order-k token transition model. Counts map a k-token context to the
/// tokens observed after it. Immutable after training; safe to score from
/// concurrent threads.
class TokenModel {
 public:
  using Context = std::vector<std::string>;

  /// Counts (context, next) pairs across all sequences. Sequences shorter
  /// than k+1 tokens are skipped; throws EmptyCorpus when no sequence
  /// contributes, InvalidArgument when k < 1.
  static TokenModel train(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t order);

  std::size_t order() const { return order_; }
  const std::set<std::string>& vocabulary() const { return vocabulary_; }

  /// count(context, token) / total(context) when both were seen; otherwise
  /// add-one smoothing over the vocabulary: (count+1) / (total+|V|).
  /// A context of the wrong length counts as unseen.
  double transition_prob(const Context& context, std::string_view token) const;

  /// Argmax of transition_prob over the candidates; ties broken by
  /// lexicographic order of the candidate token. Throws InvalidArgument on
  /// an empty candidate list.
  std::string choose_replacement(const Context& left_context,
                                 const std::vector<std::string>& candidates) const;

  std::size_t count(const Context& context, std::string_view token) const;
  std::size_t context_total(const Context& context) const;

  /// Flat count file: `order <k>`, `vocab <token>` lines, then
  /// `count <ctx...> <next> <n>` lines, tab-separated.
  std::string serialize() const;
  static TokenModel parse(std::string_view text);

 private:
  TokenModel() = default;

  std::size_t order_ = 1;
  std::map<Context, std::map<std::string, std::size_t, std::less<>>> counts_;
  std::map<Context, std::size_t> totals_;
  std::set<std::string> vocabulary_;
};

}  // namespace mim
