#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reltag/constraint.hpp"
#include "reltag/error.hpp"
#include "reltag/ngram.hpp"
#include "reltag/parallel.hpp"
#include "reltag/synth.hpp"

using namespace reltag;

namespace {

struct Setup {
  SynthSpec spec = read_synth_spec(std::string(RELTAG_DATA) + "/synth_agreement.json");
  TagSet ts = spec.tagset();
  std::vector<TaggedSentence> train = generate_synthetic_corpus(spec, 20000, 1);
  std::vector<TaggedSentence> test = generate_synthetic_corpus(spec, 5000, 2);
  Lexicon lex = build_lexicon(train);
  LearnerParams params;
};

}  // namespace

TEST_CASE("parallel tree learning equals serial") {
  Setup s;
  const auto classes = select_classes(s.lex, s.ts, s.params);
  REQUIRE(classes.size() >= 2);
  const auto a = learn_trees_serial(classes, s.train, s.params, 99);
  const auto b = learn_trees(classes, s.train, s.params, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].tree == b[k].tree);
    CHECK(a[k].prior == b[k].prior);
    CHECK(a[k].holdout_errors == b[k].holdout_errors);
    CHECK(serialize_constraints(compile_tree(a[k], s.params.window), s.ts) ==
          serialize_constraints(compile_tree(b[k], s.params.window), s.ts));
  }
}

TEST_CASE("parallel tagging equals serial") {
  Setup s;
  const auto bigrams = ConstraintSet(ngrams_to_constraints(collect_ngrams(s.train, 2)));
  const auto sentences = words_of(s.test);
  RelaxParams p;
  const auto relax = Tagger::relaxation(s.lex, s.ts, bigrams, p);
  const auto a = tag_corpus_serial(relax, sentences);
  const auto b = tag_corpus(relax, sentences);
  CHECK(a.tags == b.tags);
  REQUIRE(a.diagnostics.size() == b.diagnostics.size());
  for (std::size_t i = 0; i < a.diagnostics.size(); ++i) {
    CHECK(a.diagnostics[i].iterations == b.diagnostics[i].iterations);
    CHECK(a.diagnostics[i].max_change == b.diagnostics[i].max_change);
    CHECK(a.diagnostics[i].instantiations == b.diagnostics[i].instantiations);
  }

  const auto tr = transition_probabilities(collect_ngrams(s.train, 2), s.ts.size());
  const auto hmm = Tagger::viterbi(s.lex, s.ts, tr);
  CHECK(tag_corpus(hmm, sentences).tags == tag_corpus_serial(hmm, sentences).tags);
  CHECK(max_threads() >= 1);
}

TEST_CASE("errors inside the parallel loop reach the caller") {
  TagSet closed(std::vector<std::string>{","});
  closed.set_default_open_class();
  Lexicon lex;
  lex.add("x", 0);
  std::vector<std::vector<std::string>> sentences(200, {"x"});
  sentences[137] = {"unknown"};
  const auto ml = Tagger::most_likely(lex, closed);
  CHECK_THROWS_AS(tag_corpus(ml, sentences), ValidationError);
  CHECK_THROWS_AS(tag_corpus_serial(ml, sentences), ValidationError);
}
