#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mim/error.hpp"
#include "mim/html.hpp"
#include "mim/markov.hpp"

using namespace mim;

namespace {

std::vector<std::string> tokens_of(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& token : html::tokenize(text)) out.push_back(token.text);
  return out;
}

}  // namespace

TEST_CASE("train counts transitions by hand-checkable example") {
  const auto model = TokenModel::train({tokens_of("a b c a b d")}, 1);
  CHECK(model.count({"a"}, "b") == 2);
  CHECK(model.count({"b"}, "c") == 1);
  CHECK(model.count({"b"}, "d") == 1);
  CHECK(model.count({"c"}, "a") == 1);
  CHECK(model.context_total({"a"}) == 2);
  CHECK(model.context_total({"b"}) == 2);
  CHECK(model.vocabulary().size() == 4);
}

TEST_CASE("sequences shorter than order + 1 are skipped") {
  try {
    TokenModel::train({tokens_of("x")}, 1);
    FAIL("expected EmptyCorpus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyCorpus);
  }
  // A short sequence is skipped, a long one still contributes.
  const auto model = TokenModel::train({tokens_of("x"), tokens_of("a b")}, 1);
  CHECK(model.count({"a"}, "b") == 1);
}

TEST_CASE("counts accumulate across sequences") {
  const auto model =
      TokenModel::train({tokens_of("a b"), tokens_of("a b")}, 1);
  CHECK(model.count({"a"}, "b") == 2);
}

TEST_CASE("transition probabilities: seen, certain, and smoothed") {
  const auto model = TokenModel::train({tokens_of("a b c a b d")}, 1);
  CHECK(model.transition_prob({"b"}, "c") == doctest::Approx(0.5));
  CHECK(model.transition_prob({"a"}, "b") == doctest::Approx(1.0));
  // Unseen context: uniform over |V| = 4.
  CHECK(model.transition_prob({"z"}, "a") == doctest::Approx(0.25));
  // Seen context, unseen token: add-one smoothing (0+1)/(2+4).
  CHECK(model.transition_prob({"a"}, "d") == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("per-context unsmoothed probabilities sum to one") {
  const auto model = TokenModel::train(
      {tokens_of("a b c a b d"), tokens_of("d c b a a")}, 1);
  for (const std::string context : {"a", "b", "c", "d"}) {
    double sum = 0.0;
    for (const std::string& token : model.vocabulary()) {
      const std::size_t count = model.count({context}, token);
      const std::size_t total = model.context_total({context});
      if (count > 0) sum += static_cast<double>(count) / total;
    }
    CHECK(std::fabs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("choose_replacement takes the argmax") {
  const auto model = TokenModel::train({tokens_of("a b c a b d")}, 1);
  CHECK(model.choose_replacement({"a"}, {"b", "d"}) == "b");
  CHECK(model.choose_replacement({"a"}, {"d"}) == "d");
}

TEST_CASE("choose_replacement breaks ties lexicographically") {
  const auto model = TokenModel::train({tokens_of("a b c a b d")}, 1);
  // Unseen context: both candidates have equal smoothed probability.
  CHECK(model.choose_replacement({"zz"}, {"y", "x"}) == "x");
  CHECK(model.choose_replacement({"zz"}, {"x", "y"}) == "x");
}

TEST_CASE("choose_replacement rejects an empty candidate list") {
  const auto model = TokenModel::train({tokens_of("a b")}, 1);
  CHECK_THROWS_AS(model.choose_replacement({"a"}, {}), Error);
}

TEST_CASE("choose_replacement is deterministic over repeated invocations") {
  const auto model = TokenModel::train({tokens_of("a b c a b d")}, 1);
  const auto first = model.choose_replacement({"b"}, {"c", "d"});
  for (int i = 0; i < 100; ++i)
    CHECK(model.choose_replacement({"b"}, {"c", "d"}) == first);
}

TEST_CASE("training is order-insensitive across corpus files") {
  const std::vector<std::vector<std::string>> forward = {
      tokens_of("a b c a"), tokens_of("c b a d"), tokens_of("d d a")};
  std::vector<std::vector<std::string>> backward(forward.rbegin(),
                                                 forward.rend());
  const auto m1 = TokenModel::train(forward, 1);
  const auto m2 = TokenModel::train(backward, 1);
  CHECK(m1.serialize() == m2.serialize());
}

TEST_CASE("order-2 contexts") {
  const auto model = TokenModel::train({tokens_of("a b c a b d")}, 2);
  CHECK(model.count({"a", "b"}, "c") == 1);
  CHECK(model.count({"a", "b"}, "d") == 1);
  CHECK(model.transition_prob({"a", "b"}, "c") == doctest::Approx(0.5));
  // Wrong-length context counts as unseen.
  CHECK(model.transition_prob({"a"}, "b") == doctest::Approx(0.25));
}

TEST_CASE("order must be at least one") {
  CHECK_THROWS_AS(TokenModel::train({tokens_of("a b")}, 0), Error);
}

TEST_CASE("model persists through the flat count format") {
  const auto model = TokenModel::train(
      {tokens_of("a b c a b d"), tokens_of("b context stays")}, 1);
  const auto reparsed = TokenModel::parse(model.serialize());
  CHECK(reparsed.serialize() == model.serialize());
  CHECK(reparsed.order() == 1);
  CHECK(reparsed.transition_prob({"a"}, "b") ==
        model.transition_prob({"a"}, "b"));
  CHECK_THROWS_AS(TokenModel::parse("count\ta\tb\t1\n"), Error);
  CHECK_THROWS_AS(TokenModel::parse(""), Error);
}
