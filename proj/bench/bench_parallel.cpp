// Serial reference vs OpenMP kernels: relaxation tagging over sentences and
// per-class tree learning. Outputs must match; times are best of --repeats.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <CLI11.hpp>

#include "reltag/constraint.hpp"
#include "reltag/ngram.hpp"
#include "reltag/parallel.hpp"
#include "reltag/synth.hpp"

using namespace reltag;

namespace {

double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP timings"};
  std::string spec_path = std::string(RELTAG_DATA) + "/synth_agreement.json";
  std::size_t train_tokens = 100000;
  std::size_t test_tokens = 100000;
  int repeats = 3;
  std::uint64_t seed = 1;
  app.add_option("--spec", spec_path, "generator spec")->check(CLI::ExistingFile);
  app.add_option("--train-tokens", train_tokens);
  app.add_option("--test-tokens", test_tokens);
  app.add_option("--repeats", repeats)->check(CLI::PositiveNumber);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  const auto spec = read_synth_spec(spec_path);
  const auto ts = spec.tagset();
  const auto train = generate_synthetic_corpus(spec, train_tokens, seed);
  const auto test = words_of(generate_synthetic_corpus(spec, test_tokens, seed + 1));
  const auto lex = build_lexicon(train);
  LearnerParams params;
  const auto classes = select_classes(lex, ts, params);

  std::vector<LearnedTree> trees_s, trees_p;
  const double learn_s = best_of(repeats, [&] { trees_s = learn_trees_serial(classes, train, params, seed); });
  const double learn_p = best_of(repeats, [&] { trees_p = learn_trees(classes, train, params, seed); });
  bool same_trees = trees_s.size() == trees_p.size();
  for (std::size_t k = 0; same_trees && k < trees_s.size(); ++k) same_trees = trees_s[k].tree == trees_p[k].tree;

  ConstraintSet cs(ngrams_to_constraints(collect_ngrams(train, 2)));
  for (const auto& t : trees_s) {
    ConstraintSet learned(compile_tree(t, params.window));
    cs.append(learned);
  }
  const auto tagger = Tagger::relaxation(lex, ts, cs, RelaxParams{});
  CorpusTagging tag_s, tag_p;
  const double tag_serial = best_of(repeats, [&] { tag_s = tag_corpus_serial(tagger, test); });
  const double tag_parallel = best_of(repeats, [&] { tag_p = tag_corpus(tagger, test); });
  const bool same_tags = tag_s.tags == tag_p.tags;

  std::printf("threads %d  train %zu tokens  test %zu sentences  constraints %zu  classes %zu\n\n", max_threads(),
              train_tokens, test.size(), cs.size(), classes.size());
  std::printf("%-14s %10s %10s %8s %6s\n", "kernel", "serial s", "openmp s", "speedup", "same");
  std::printf("%-14s %10.3f %10.3f %8.2f %6s\n", "trees learn", learn_s, learn_p, learn_s / learn_p,
              same_trees ? "yes" : "NO");
  std::printf("%-14s %10.3f %10.3f %8.2f %6s\n", "relax tag BC", tag_serial, tag_parallel, tag_serial / tag_parallel,
              same_tags ? "yes" : "NO");
  std::printf("\nbench kernel=trees serial=%.6f openmp=%.6f same=%d\n", learn_s, learn_p, same_trees);
  std::printf("bench kernel=tag serial=%.6f openmp=%.6f same=%d\n", tag_serial, tag_parallel, same_tags);
  return same_trees && same_tags ? 0 : 1;
}
