#include "mim/markov.hpp"

#include <charconv>

#include "mim/error.hpp"

namespace mim {

TokenModel TokenModel::train(
    const std::vector<std::vector<std::string>>& corpus, std::size_t order) {
  if (order < 1) raise(ErrorCode::InvalidArgument, "order must be >= 1");
  TokenModel model;
  model.order_ = order;
  bool contributed = false;
  for (const auto& sequence : corpus) {
    if (sequence.size() <= order) continue;
    contributed = true;
    for (const std::string& token : sequence) model.vocabulary_.insert(token);
    for (std::size_t i = 0; i + order < sequence.size(); ++i) {
      Context context(sequence.begin() + i, sequence.begin() + i + order);
      model.counts_[context][sequence[i + order]] += 1;
      model.totals_[context] += 1;
    }
  }
  if (!contributed)
    raise(ErrorCode::EmptyCorpus,
          "no sequence longer than the model order (" + std::to_string(order) +
              ")");
  return model;
}

std::size_t TokenModel::count(const Context& context,
                              std::string_view token) const {
  const auto it = counts_.find(context);
  if (it == counts_.end()) return 0;
  const auto jt = it->second.find(token);
  return jt == it->second.end() ? 0 : jt->second;
}

std::size_t TokenModel::context_total(const Context& context) const {
  const auto it = totals_.find(context);
  return it == totals_.end() ? 0 : it->second;
}

double TokenModel::transition_prob(const Context& context,
                                   std::string_view token) const {
  const std::size_t n = count(context, token);
  const std::size_t total = context_total(context);
  if (n > 0) return static_cast<double>(n) / static_cast<double>(total);
  return 1.0 / (static_cast<double>(total) +
                static_cast<double>(vocabulary_.size()));
}

std::string TokenModel::choose_replacement(
    const Context& left_context,
    const std::vector<std::string>& candidates) const {
  if (candidates.empty())
    raise(ErrorCode::InvalidArgument, "no candidates to choose from");
  const std::string* best = nullptr;
  double best_prob = -1.0;
  for (const std::string& candidate : candidates) {
    const double prob = transition_prob(left_context, candidate);
    if (prob > best_prob || (prob == best_prob && candidate < *best)) {
      best = &candidate;
      best_prob = prob;
    }
  }
  return *best;
}

std::string TokenModel::serialize() const {
  std::string out = "order\t" + std::to_string(order_) + "\n";
  for (const std::string& token : vocabulary_) out += "vocab\t" + token + "\n";
  for (const auto& [context, next_counts] : counts_) {
    for (const auto& [token, n] : next_counts) {
      out += "count";
      for (const std::string& c : context) out += "\t" + c;
      out += "\t" + token + "\t" + std::to_string(n) + "\n";
    }
  }
  return out;
}

TokenModel TokenModel::parse(std::string_view text) {
  TokenModel model;
  bool have_order = false;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.emplace_back(line.substr(
          start, tab == std::string_view::npos ? std::string_view::npos
                                               : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }

    auto bad = [&](const char* why) {
      raise(ErrorCode::ParseError,
            "model line " + std::to_string(line_no) + ": " + why);
    };
    if (fields[0] == "order") {
      if (fields.size() != 2) bad("expected one order value");
      std::size_t value = 0;
      auto [p, ec] = std::from_chars(fields[1].data(),
                                     fields[1].data() + fields[1].size(), value);
      if (ec != std::errc() || value < 1) bad("bad order");
      (void)p;
      model.order_ = value;
      have_order = true;
    } else if (fields[0] == "vocab") {
      if (fields.size() != 2) bad("expected one vocab token");
      model.vocabulary_.insert(fields[1]);
    } else if (fields[0] == "count") {
      if (!have_order) bad("count before order");
      if (fields.size() != model.order_ + 3) bad("wrong field count");
      Context context(fields.begin() + 1, fields.begin() + 1 + model.order_);
      const std::string& token = fields[model.order_ + 1];
      const std::string& count_text = fields[model.order_ + 2];
      std::size_t n = 0;
      auto [p, ec] = std::from_chars(
          count_text.data(), count_text.data() + count_text.size(), n);
      if (ec != std::errc() || n < 1) bad("bad count");
      (void)p;
      model.counts_[context][token] += n;
      model.totals_[context] += n;
    } else {
      bad("unknown record type");
    }
  }
  if (!have_order) raise(ErrorCode::ParseError, "model file has no order line");
  return model;
}

}  // namespace mim
