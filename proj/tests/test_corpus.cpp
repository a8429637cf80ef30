#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "reltag/corpus.hpp"
#include "reltag/error.hpp"
#include "reltag/random.hpp"

using namespace reltag;

namespace {

std::vector<TaggedSentence> parse(const std::string& text, TagSet& ts) {
  std::istringstream in(text);
  return parse_tagged_corpus(in, ts);
}

std::string serialize(const std::vector<TaggedSentence>& s, const TagSet& ts) {
  std::ostringstream out;
  write_tagged_corpus(out, s, ts);
  return out.str();
}

}  // namespace

TEST_CASE("corpus tokens split at the last underscore") {
  TagSet ts;
  auto s = parse("the_DT dog_NN", ts);
  REQUIRE(s.size() == 1);
  CHECK(s[0][0] == Token{"the", ts.id("DT")});
  CHECK(s[0][1] == Token{"dog", ts.id("NN")});

  s = parse("failing_VBG to_TO voluntarily_RB", ts);
  CHECK(s[0][0].word == "failing");
  CHECK(ts.symbol(s[0][0].tag) == "VBG");
  CHECK(ts.symbol(s[0][2].tag) == "RB");

  s = parse("New_York_NNP x__SYM", ts);
  CHECK(s[0][0].word == "New_York");
  CHECK(ts.symbol(s[0][0].tag) == "NNP");
  CHECK(s[0][1].word == "x_");
}

TEST_CASE("malformed tokens report line and token column") {
  TagSet ts;
  try {
    parse("the_DT dog_NN\nbad token", ts);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
  CHECK_THROWS_AS(parse("dog_", ts), ParseError);
  CHECK_THROWS_AS(parse("_NN", ts), ParseError);
}

TEST_CASE("validating policy rejects unknown tags") {
  TagSet ts(std::vector<std::string>{"DT", "NN"});
  std::istringstream in("the_DT dog_VB");
  CHECK_THROWS_AS(parse_tagged_corpus(in, ts, TagPolicy::kValidate), ParseError);
  CHECK(ts.size() == 2);
}

TEST_CASE("blank lines are skipped") {
  TagSet ts;
  auto s = parse("the_DT dog_NN\n\n   \nfailing_VBG to_TO\n", ts);
  CHECK(s.size() == 2);
}

TEST_CASE("corpus round trip on fixtures") {
  for (const auto& entry : std::filesystem::directory_iterator(RELTAG_FIXTURES)) {
    if (entry.path().extension() != ".tagged") continue;
    CAPTURE(entry.path().string());
    TagSet ts;
    const auto first = read_tagged_corpus(entry.path().string(), ts);
    CHECK(!first.empty());
    TagSet ts2;
    const auto again = parse(serialize(first, ts), ts2);
    CHECK(serialize(again, ts2) == serialize(first, ts));
    REQUIRE(again.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      REQUIRE(again[i].size() == first[i].size());
      for (std::size_t j = 0; j < first[i].size(); ++j) {
        CHECK(again[i][j].word == first[i][j].word);
        CHECK(ts2.symbol(again[i][j].tag) == ts.symbol(first[i][j].tag));
      }
    }
  }
}

TEST_CASE("tag set basics") {
  TagSet ts;
  CHECK(ts.add("NN") == 0);
  CHECK(ts.add("DT") == 1);
  CHECK(ts.add("NN") == 0);
  CHECK(ts.find("VB") == std::nullopt);
  CHECK_THROWS_AS(ts.id("VB"), ValidationError);
  CHECK_THROWS(ts.add("A B"));
  CHECK_THROWS(ts.add(""));
  ts.add(",");
  ts.add("``");
  ts.add("PRP$");
  ts.set_default_open_class();
  CHECK(ts.open_class() == std::vector<TagId>{0, 1, 4});
  CHECK_THROWS_AS(ts.set_open_class({7}), ValidationError);
}

TEST_CASE("build_lexicon counts occurrences") {
  TagSet ts;
  const auto s = parse("the_DT the_DT the_JJ\nThe_DT", ts);
  const auto lex = build_lexicon(s);
  const auto* the = lex.find("the");
  REQUIRE(the);
  CHECK(the->at(ts.id("DT")) == 2);
  CHECK(the->at(ts.id("JJ")) == 1);
  CHECK(lex.find("The")->at(ts.id("DT")) == 1);  // case-sensitive keys
  CHECK(lex.find("dog") == nullptr);
  CHECK(lex.total("the") == 3);
}

TEST_CASE("lexicon file format") {
  TagSet ts;
  std::istringstream in("the CD 1 DT 47715 JJ 7 NN 1 NNP 6 VBP 1\nonce IN 10 RB 30\n");
  const auto lex = parse_lexicon(in, ts);
  CHECK(lex.find("the")->at(ts.id("DT")) == 47715);
  CHECK(lex.total("the") == 47731);
  std::ostringstream out;
  write_lexicon(out, lex, ts);
  CHECK(out.str() == "once IN 10 RB 30\nthe CD 1 DT 47715 JJ 7 NN 1 NNP 6 VBP 1\n");

  std::istringstream bad1("the DT\n");
  CHECK_THROWS_AS(parse_lexicon(bad1, ts), ParseError);
  std::istringstream bad2("the DT 0\n");
  CHECK_THROWS_AS(parse_lexicon(bad2, ts), ParseError);
  std::istringstream bad3("the DT x\n");
  CHECK_THROWS_AS(parse_lexicon(bad3, ts), ParseError);
}

TEST_CASE("filter_lexicon") {
  TagSet ts;
  std::istringstream in("the CD 1 DT 47715 JJ 7 NN 1 NNP 6 VBP 1\ndog NN 5\n");
  const auto lex = parse_lexicon(in, ts);

  std::istringstream c("the DT\n");
  const auto corrections = parse_corrections(c, ts);
  const auto filtered = filter_lexicon(lex, corrections);
  CHECK(filtered.find("the")->size() == 1);
  CHECK(filtered.find("the")->at(ts.id("DT")) == 47715);
  CHECK(*filtered.find("dog") == *lex.find("dog"));

  CHECK(filter_lexicon(lex, {}) == lex);
  CHECK(filter_lexicon(filtered, corrections) == filtered);  // idempotent

  CHECK_THROWS_AS(filter_lexicon(lex, {{"dog", {ts.id("DT")}}}), InvalidCorrection);
  CHECK_THROWS_AS(filter_lexicon(lex, {{"cat", {ts.id("NN")}}}), InvalidCorrection);
}

TEST_CASE("lexical_distribution") {
  TagSet ts(std::vector<std::string>{"DT", "JJ", "NN", "VB", "."});
  ts.set_default_open_class();
  Lexicon lex;
  lex.add("the", ts.id("DT"), 3);
  lex.add("the", ts.id("JJ"), 1);
  lex.add("dog", ts.id("NN"), 2);

  auto d = lexical_distribution(lex, ts, "the");
  CHECK(d.known);
  CHECK(d.tags == std::vector<TagId>{0, 1});
  CHECK(d.probs[0] == 0.75);
  CHECK(d.probs[1] == 0.25);

  d = lexical_distribution(lex, ts, "dog");
  CHECK(d.probs == std::vector<double>{1.0});

  d = lexical_distribution(lex, ts, "zebra");
  CHECK_FALSE(d.known);
  CHECK(d.tags.size() == 4);
  for (double p : d.probs) CHECK(p == 0.25);

  TagSet closed(std::vector<std::string>{","});
  closed.set_default_open_class();
  CHECK_THROWS_AS(lexical_distribution(lex, closed, "zebra"), ValidationError);
}

TEST_CASE("lexical distributions sum to one") {
  Rng rng(11);
  TagSet ts;
  for (int t = 0; t < 12; ++t) ts.add("T" + std::to_string(t));
  ts.set_default_open_class();
  Lexicon lex;
  for (int w = 0; w < 300; ++w)
    for (int k = 0; k < 1 + static_cast<int>(rng.below(5)); ++k)
      lex.add("w" + std::to_string(w), static_cast<TagId>(rng.below(12)), 1 + static_cast<std::int64_t>(rng.below(1000)));
  for (int w = 0; w < 310; ++w) {
    const auto d = lexical_distribution(lex, ts, "w" + std::to_string(w));
    const double sum = std::accumulate(d.probs.begin(), d.probs.end(), 0.0);
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("split_corpus") {
  std::vector<TaggedSentence> s(10);
  for (std::size_t i = 0; i < s.size(); ++i) s[i].push_back({"w" + std::to_string(i), 0});
  auto a = split_corpus(s, {0.8, 0.1, 0.1}, 7);
  CHECK(a.train.size() == 8);
  CHECK(a.tune.size() == 1);
  CHECK(a.test.size() == 1);
  CHECK(a.warnings.empty());
  auto b = split_corpus(s, {0.8, 0.1, 0.1}, 7);
  CHECK(a.train == b.train);
  CHECK(a.tune == b.tune);
  CHECK(a.test == b.test);

  // partition: every sentence exactly once
  std::vector<std::string> seen;
  for (const auto* part : {&a.train, &a.tune, &a.test})
    for (const auto& x : *part) seen.push_back(x[0].word);
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
  CHECK(seen.size() == 10);

  std::vector<TaggedSentence> h(100);
  for (std::size_t i = 0; i < h.size(); ++i) h[i].push_back({"w" + std::to_string(i), 0});
  auto c = split_corpus(h, {0.5, 0.25, 0.25}, 1);
  CHECK(c.train.size() == 50);
  CHECK(c.tune.size() == 25);
  CHECK(c.test.size() == 25);

  auto d = split_corpus(std::vector<TaggedSentence>(s.begin(), s.begin() + 3), {0.8, 0.1, 0.1}, 1);
  CHECK_FALSE(d.warnings.empty());

  CHECK_THROWS_AS(split_corpus(s, {0.5, 0.1, 0.1}, 1), ValidationError);
  CHECK_THROWS_AS(split_corpus(s, {1.0, 0.0, 0.0}, 1), ValidationError);
}

TEST_CASE("corpus_stats") {
  TagSet ts;
  auto s = parse("a_X b_Y c_X", ts);
  ts.set_default_open_class();
  auto st = corpus_stats(s, build_lexicon(s), ts);
  CHECK(st.word_count == 3);
  CHECK(st.ambiguous_fraction == 0.0);
  CHECK(st.ambiguity_ratio_overall == 1.0);

  // one token of a 3-tag word and one of a 1-tag word
  Lexicon lex;
  lex.add("x", ts.add("A"));
  lex.add("x", ts.add("B"));
  lex.add("x", ts.add("C"));
  lex.add("y", ts.id("A"));
  ts.set_default_open_class();
  std::vector<TaggedSentence> two{{{"x", ts.id("A")}, {"y", ts.id("A")}}};
  st = corpus_stats(two, lex, ts);
  CHECK(st.ambiguous_fraction == 0.5);
  CHECK(st.ambiguity_ratio_overall == 2.0);
  CHECK(st.ambiguity_ratio_ambiguous == 3.0);
}
