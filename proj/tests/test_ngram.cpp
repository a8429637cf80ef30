#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "reltag/error.hpp"
#include "reltag/ngram.hpp"
#include "reltag/random.hpp"

using namespace reltag;

namespace {

std::vector<TaggedSentence> tags_only(const std::vector<std::vector<std::string>>& rows, TagSet& ts) {
  std::vector<TaggedSentence> out;
  for (const auto& r : rows) {
    TaggedSentence s;
    for (const auto& t : r) s.push_back({"w", ts.add(t)});
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("collect_ngrams counts within sentences") {
  TagSet ts;
  const auto s = tags_only({{"DT", "NN", "VB"}}, ts);
  const TagId dt = 0, nn = 1, vb = 2;

  auto bi = collect_ngrams(s, 2);
  CHECK(bi.counts.size() == 2);
  CHECK(bi.counts.at({dt, nn}) == 1);
  CHECK(bi.counts.at({nn, vb}) == 1);

  auto tri = collect_ngrams(s, 3);
  CHECK(tri.counts.size() == 1);
  CHECK(tri.counts.at({dt, nn, vb}) == 1);

  const auto twice = collect_ngrams({s[0], s[0]}, 2);
  CHECK(twice.counts.at({dt, nn}) == 2);
  CHECK(twice.counts.at({nn, vb}) == 2);

  CHECK_THROWS_AS(collect_ngrams(s, 4), ValidationError);
}

TEST_CASE("n-gram totals match tokens minus (n-1) per sentence") {
  Rng rng(5);
  TagSet ts;
  for (int t = 0; t < 6; ++t) ts.add("T" + std::to_string(t));
  std::vector<TaggedSentence> corpus;
  for (int s = 0; s < 200; ++s) {
    TaggedSentence sent;
    const auto len = 3 + rng.below(10);
    for (std::uint64_t i = 0; i < len; ++i) sent.push_back({"w", static_cast<TagId>(rng.below(6))});
    corpus.push_back(sent);
  }
  for (int order : {2, 3}) {
    const auto t = collect_ngrams(corpus, order);
    CHECK(t.ngram_total() == t.token_count() - (order - 1) * t.sentence_count());
    for (const auto& [seq, c] : t.counts) CHECK(c >= 1);
    const auto cs = ngrams_to_constraints(t);
    CHECK(cs.size() == t.counts.size() * static_cast<std::size_t>(order));
    for (const auto& c : cs) CHECK(std::isfinite(c.compatibility));
  }
}

TEST_CASE("PMI of a pair that always co-occurs") {
  // "A B" and "B A": p(A)=p(B)=0.5 and p(A,B)=0.5 over the two bigram events,
  // so log2(0.5/0.25) = 1
  TagSet ts;
  const auto s = tags_only({{"A", "B"}, {"B", "A"}}, ts);
  const auto t = collect_ngrams(s, 2);
  const auto cs = ngrams_to_constraints(t);
  REQUIRE(cs.size() == 4);
  CHECK(cs[0].compatibility == doctest::Approx(1.0).epsilon(1e-15));

  // only ever "A B": p(A,B)=1, log2(1/0.25) = 2
  const auto always = ngrams_to_constraints(collect_ngrams(tags_only({{"A", "B"}, {"A", "B"}}, ts), 2));
  CHECK(always[0].compatibility == doctest::Approx(2.0).epsilon(1e-15));

  // one constraint targets A with B at +1, the other B with A at -1
  CHECK(cs[0].target_tag == 0);
  REQUIRE(cs[0].right.size() == 1);
  CHECK(*cs[0].right[0].offset == 1);
  CHECK(cs[0].right[0].test.tags == std::vector<TagId>{1});
  CHECK(cs[1].target_tag == 1);
  REQUIRE(cs[1].left.size() == 1);
  CHECK(*cs[1].left[0].offset == -1);
}

TEST_CASE("PMI is zero for independent tags") {
  // every ordered pair of {A,B} equally often, unigrams uniform
  TagSet ts;
  const auto s = tags_only({{"A", "A"}, {"A", "B"}, {"B", "A"}, {"B", "B"}}, ts);
  const auto t = collect_ngrams(s, 2);
  for (const auto& c : ngrams_to_constraints(t)) CHECK(c.compatibility == doctest::Approx(0.0));
}

TEST_CASE("unseen n-grams produce no constraint") {
  TagSet ts;
  const auto s = tags_only({{"A", "B"}}, ts);
  ts.add("C");
  const auto cs = ngrams_to_constraints(collect_ngrams(s, 2));
  for (const auto& c : cs) CHECK(c.target_tag != 2);
  CHECK_THROWS_AS(ngrams_to_constraints(NgramTable{}), ValidationError);
}

TEST_CASE("trigram constraints anchor at each position") {
  TagSet ts;
  const auto s = tags_only({{"A", "B", "C"}}, ts);
  const auto cs = ngrams_to_constraints(collect_ngrams(s, 3));
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].left.empty());
  CHECK(cs[0].right.size() == 2);
  CHECK(cs[1].left.size() == 1);
  CHECK(cs[1].right.size() == 1);
  CHECK(*cs[2].left[0].offset == -2);
  CHECK(*cs[2].left[1].offset == -1);
}

TEST_CASE("add-one transitions") {
  TagSet ts;
  // counts {(A,B):3, (A,C):1}
  const auto s = tags_only({{"A", "B"}, {"A", "B"}, {"A", "B"}, {"A", "C"}}, ts);
  const auto tr = transition_probabilities(collect_ngrams(s, 2), 3);
  CHECK(tr.next[0][1] == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
  CHECK(tr.next[0][2] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
  CHECK(tr.next[0][0] == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  for (double p : tr.next[1]) CHECK(p == doctest::Approx(1.0 / 3.0));  // empty row
  for (const auto& row : tr.next) {
    double sum = 0.0;
    for (double p : row) sum += p;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
  double sum = 0.0;
  for (double p : tr.start) sum += p;
  CHECK(std::abs(sum - 1.0) <= 1e-12);

  const auto uni = tags_only({{"A", "A"}, {"A", "B"}, {"A", "C"}}, ts);
  const auto u = transition_probabilities(collect_ngrams(uni, 2), 3);
  CHECK(u.next[0][0] == doctest::Approx(u.next[0][1]));
  CHECK(u.next[0][1] == doctest::Approx(u.next[0][2]));

  CHECK_THROWS_AS(transition_probabilities(collect_ngrams(s, 3), 3), ValidationError);
}

TEST_CASE("n-gram file round trip") {
  TagSet ts;
  const auto s = tags_only({{"DT", "NN", "VB"}, {"NN", "VB", "DT", "NN"}}, ts);
  for (int order : {2, 3}) {
    const auto t = collect_ngrams(s, order);
    std::ostringstream out;
    write_ngrams(out, t, ts);
    TagSet ts2;
    std::istringstream in(out.str());
    const auto back = parse_ngrams(in, ts2);
    std::ostringstream again;
    write_ngrams(again, back, ts2);
    CHECK(again.str() == out.str());
    CHECK(back.order == order);
    CHECK(back.ngram_total() == t.ngram_total());
  }
  TagSet ts3;
  std::istringstream bad("DT NN\n");
  CHECK_THROWS_AS(parse_ngrams(bad, ts3), ParseError);
}
