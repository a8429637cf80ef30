// reltag: command-line front end for training, tagging and evaluation.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reltag/constraint.hpp"
#include "reltag/corpus.hpp"
#include "reltag/error.hpp"
#include "reltag/eval.hpp"
#include "reltag/ngram.hpp"
#include "reltag/parallel.hpp"
#include "reltag/relax.hpp"
#include "reltag/synth.hpp"
#include "reltag/tagger.hpp"
#include "reltag/tree.hpp"

using namespace reltag;

namespace {

struct Options {
  // shared flags
  std::vector<std::string> models;
  std::string window = "3,2";
  double purity = 0.99;
  std::int64_t min_examples = 10;
  double chi2_alpha = 0.05;
  std::size_t top_k = 40;
  int max_iter = 50;
  double epsilon = 1e-3;
  std::string support_norm = "rational";
  double divisor = 1.0;
  std::uint64_t seed = 1;
  bool serial = false;

  // inputs and outputs
  std::string corpus;
  std::string lexicon;
  std::string corrections;
  std::string bigrams;
  std::string trigrams;
  std::string learned;
  std::string hand;
  std::string input;
  std::string predicted;
  std::string out;
  std::string constraints_out;
  std::string trees_out;
  std::string diagnostics;
  std::string spec;
  std::string open_class;
  int order = 2;
  bool tagged_input = false;
  std::size_t tokens = 10000;
  std::size_t error_rows = 10;
  double train_fraction = 0.8;
  double tune_fraction = 0.1;
  double test_fraction = 0.1;
};

Window parse_window(const std::string& text) {
  Window w;
  char comma = 0;
  std::istringstream is(text);
  if (!(is >> w.left >> comma >> w.right) || comma != ',' || w.left < 0 || w.right < 0 || !is.eof())
    throw ValidationError("--window expects LEFT,RIGHT, got '" + text + "'");
  return w;
}

LearnerParams learner_params(const Options& o) {
  LearnerParams p;
  p.purity_threshold = o.purity;
  p.min_examples = o.min_examples;
  p.chi2_alpha = o.chi2_alpha;
  p.window = parse_window(o.window);
  p.top_k_classes = o.top_k;
  p.validate();
  return p;
}

RelaxParams relax_params(const Options& o) {
  RelaxParams p;
  p.max_iterations = o.max_iter;
  p.epsilon = o.epsilon;
  p.normalization = o.support_norm == "clamp" ? SupportNormalization::kClamp : SupportNormalization::kRational;
  p.divisor = o.divisor;
  p.seed = o.seed;
  p.validate();
  return p;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

// Writes to `path`, or stdout when the path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("cannot write " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string read_text(const std::string& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply_open_class(const Options& o, TagSet& tagset) {
  if (o.open_class.empty()) {
    tagset.set_default_open_class();
    return;
  }
  std::vector<TagId> ids;
  std::istringstream is(o.open_class);
  std::string sym;
  while (std::getline(is, sym, ','))
    if (!sym.empty()) ids.push_back(tagset.id(sym));
  tagset.set_open_class(std::move(ids));
}

// Everything `tag` and `eval` need. All files share one tag set; symbols are
// interned in the order lexicon, n-gram tables, gold corpus.
struct Resources {
  TagSet tagset;
  Lexicon lex;
  std::optional<NgramTable> bigram_table;
  ModelResources models;
};

void load_tables(const Options& o, Resources& r) {
  if (o.lexicon.empty()) throw ValidationError("--lexicon is required");
  {
    auto in = open_in(o.lexicon);
    r.lex = parse_lexicon(in, r.tagset);
  }
  if (!o.bigrams.empty()) {
    auto in = open_in(o.bigrams);
    r.bigram_table = parse_ngrams(in, r.tagset);
    if (r.bigram_table->order != 2) throw ValidationError(o.bigrams + " is not a bigram table");
  }
  if (!o.trigrams.empty()) {
    auto in = open_in(o.trigrams);
    auto table = parse_ngrams(in, r.tagset);
    if (table.order != 3) throw ValidationError(o.trigrams + " is not a trigram table");
    r.models.trigrams = ConstraintSet(ngrams_to_constraints(table));
  }
}

// Constraint files are read after every tag symbol is known.
void load_constraints(const Options& o, Resources& r) {
  apply_open_class(o, r.tagset);
  if (r.bigram_table) {
    r.models.bigrams = ConstraintSet(ngrams_to_constraints(*r.bigram_table));
    r.models.transitions = transition_probabilities(*r.bigram_table, r.tagset.size());
  }
  if (!o.learned.empty()) r.models.learned = read_constraints(o.learned, r.tagset, ConstraintSource::kLearned);
  if (!o.hand.empty()) r.models.hand = read_constraints(o.hand, r.tagset, ConstraintSource::kHandWritten);
}

void require_sources(const ModelCombination& m, const Resources& r, const Options& o) {
  auto need = [](bool want, bool have, const char* flag) {
    if (want && !have) throw ValidationError(std::string("model needs ") + flag);
  };
  need(m.baseline == ModelCombination::Baseline::kHmm, r.models.transitions.has_value(), "--bigrams");
  need(m.bigrams, !o.bigrams.empty(), "--bigrams");
  need(m.trigrams, !o.trigrams.empty(), "--trigrams");
  need(m.learned, !o.learned.empty(), "--learned");
  need(m.hand, !o.hand.empty(), "--hand");
}

struct BuiltTagger {
  ConstraintSet joined;
  std::unique_ptr<Tagger> tagger;
};

// Tagger holds references, so the joined set lives next to it.
std::unique_ptr<BuiltTagger> build_tagger(const ModelCombination& m, const Resources& r, const Options& o) {
  require_sources(m, r, o);
  auto b = std::make_unique<BuiltTagger>();
  switch (m.baseline) {
    case ModelCombination::Baseline::kMostLikely:
      b->tagger = std::make_unique<Tagger>(Tagger::most_likely(r.lex, r.tagset));
      break;
    case ModelCombination::Baseline::kHmm:
      b->tagger = std::make_unique<Tagger>(Tagger::viterbi(r.lex, r.tagset, *r.models.transitions));
      break;
    case ModelCombination::Baseline::kNone:
      b->joined = join_models(m, r.models);
      b->tagger = std::make_unique<Tagger>(Tagger::relaxation(r.lex, r.tagset, b->joined, relax_params(o)));
      break;
  }
  return b;
}

CorpusTagging run_tagger(const Tagger& t, const std::vector<std::vector<std::string>>& words, bool serial) {
  return serial ? tag_corpus_serial(t, words) : tag_corpus(t, words);
}

void write_diagnostics(std::ostream& out, const CorpusTagging& tagging) {
  char buf[96];
  for (std::size_t s = 0; s < tagging.diagnostics.size(); ++s) {
    const auto& d = tagging.diagnostics[s];
    std::snprintf(buf, sizeof buf, "%zu %d %.6g %zu\n", s + 1, d.iterations, d.max_change, d.instantiations);
    out << buf;
  }
}

// ---------------------------------------------------------------- commands

void cmd_stats(const Options& o) {
  TagSet tagset;
  Lexicon lex;
  if (!o.lexicon.empty()) {
    auto in = open_in(o.lexicon);
    lex = parse_lexicon(in, tagset);
  }
  const auto sentences = read_tagged_corpus(o.corpus, tagset);
  if (o.lexicon.empty()) lex = build_lexicon(sentences);
  apply_open_class(o, tagset);
  const auto s = corpus_stats(sentences, lex, tagset);
  const auto classes = extract_ambiguity_classes(lex, tagset);
  std::size_t tokens = 0;
  for (const auto& sent : sentences) tokens += sent.size();

  std::cout << std::left << std::setw(28) << "sentences" << sentences.size() << '\n'
            << std::setw(28) << "words" << s.word_count << '\n'
            << std::setw(28) << "tags" << tagset.size() << '\n'
            << std::setw(28) << "lexicon entries" << lex.size() << '\n'
            << std::setw(28) << "ambiguity classes" << classes.size() << '\n'
            << std::setw(28) << "ambiguous words" << std::fixed << std::setprecision(2)
            << 100.0 * s.ambiguous_fraction << "%\n"
            << std::setw(28) << "tags/word (ambiguous)" << s.ambiguity_ratio_ambiguous << '\n'
            << std::setw(28) << "tags/word (overall)" << s.ambiguity_ratio_overall << '\n';
  std::cout << std::defaultfloat << std::setprecision(6);
  std::cout << "stats sentences=" << sentences.size() << " words=" << s.word_count << " ambiguous=" << s.ambiguous_count
            << " ambiguous_fraction=" << s.ambiguous_fraction << " ratio_ambiguous=" << s.ambiguity_ratio_ambiguous
            << " ratio_overall=" << s.ambiguity_ratio_overall << '\n';
}

void cmd_split(const Options& o) {
  TagSet tagset;
  const auto sentences = read_tagged_corpus(o.corpus, tagset);
  const auto split = split_corpus(sentences, {o.train_fraction, o.tune_fraction, o.test_fraction}, o.seed);
  for (const auto& w : split.warnings) std::cerr << "warning: " << w << '\n';
  const std::string base = o.out.empty() ? o.corpus : o.out;
  for (const auto& [name, part] : {std::pair{"train", &split.train}, {"tune", &split.tune}, {"test", &split.test}}) {
    std::ofstream f(base + "." + name);
    if (!f) throw Error("cannot write " + base + "." + name);
    write_tagged_corpus(f, *part, tagset);
    std::cout << "split part=" << name << " sentences=" << part->size() << " file=" << base << "." << name << '\n';
  }
}

void cmd_lexicon_build(const Options& o) {
  TagSet tagset;
  const auto train = read_tagged_corpus(o.corpus, tagset);
  Output out(o.out);
  write_lexicon(out.get(), build_lexicon(train), tagset);
}

void cmd_lexicon_filter(const Options& o) {
  TagSet tagset;
  Lexicon lex;
  {
    auto in = open_in(o.lexicon);
    lex = parse_lexicon(in, tagset);
  }
  auto in = open_in(o.corrections);
  const auto corrections = parse_corrections(in, tagset);
  const auto filtered = filter_lexicon(lex, corrections);
  Output out(o.out);
  write_lexicon(out.get(), filtered, tagset);
}

void cmd_ngrams_collect(const Options& o) {
  TagSet tagset;
  const auto train = read_tagged_corpus(o.corpus, tagset);
  const auto table = collect_ngrams(train, o.order);
  {
    Output out(o.out);
    write_ngrams(out.get(), table, tagset);
  }
  if (!o.constraints_out.empty()) {
    Output out(o.constraints_out);
    write_constraints(out.get(), ngrams_to_constraints(table), tagset);
  }
  std::cerr << "ngrams order=" << o.order << " distinct=" << table.counts.size() << " total=" << table.ngram_total()
            << '\n';
}

void cmd_trees_learn(const Options& o) {
  const auto params = learner_params(o);
  TagSet tagset;
  Lexicon lex;
  if (!o.lexicon.empty()) {
    auto in = open_in(o.lexicon);
    lex = parse_lexicon(in, tagset);
  }
  const auto train = read_tagged_corpus(o.corpus, tagset);
  if (o.lexicon.empty()) lex = build_lexicon(train);

  const auto classes = select_classes(lex, tagset, params);
  const auto t0 = std::chrono::steady_clock::now();
  const auto trees = o.serial ? learn_trees_serial(classes, train, params, o.seed)
                              : learn_trees(classes, train, params, o.seed);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<Constraint> all;
  std::unique_ptr<std::ofstream> dump;
  if (!o.trees_out.empty()) {
    dump = std::make_unique<std::ofstream>(o.trees_out);
    if (!*dump) throw Error("cannot write " + o.trees_out);
  }
  std::size_t unpruned = 0, pruned = 0, leaves = 0;
  std::cout << std::left << std::setw(24) << "class" << std::right << std::setw(9) << "examples" << std::setw(9)
            << "grown" << std::setw(9) << "pruned" << std::setw(9) << "leaves" << std::setw(12) << "constraints"
            << '\n';
  std::ostringstream records;
  for (const auto& t : trees) {
    auto cs = compile_tree(t, params.window);
    std::string name;
    for (auto tag : t.cls.tags) name += (name.empty() ? "" : "_") + tagset.symbol(tag);
    std::cout << std::left << std::setw(24) << name << std::right << std::setw(9) << t.cls.example_count
              << std::setw(9) << t.unpruned_nodes << std::setw(9) << t.tree.node_count() << std::setw(9)
              << t.tree.leaf_count() << std::setw(12) << cs.size() << '\n';
    records << "tree class=" << name << " examples=" << t.cls.example_count << " unpruned_nodes=" << t.unpruned_nodes
            << " nodes=" << t.tree.node_count() << " leaves=" << t.tree.leaf_count() << " constraints=" << cs.size()
            << '\n';
    unpruned += t.unpruned_nodes;
    pruned += t.tree.node_count();
    leaves += t.tree.leaf_count();
    if (dump) write_tree(*dump, t, tagset, params.window);
    all.insert(all.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
  }
  std::cout << records.str();
  std::cout << "trees classes=" << trees.size() << " unpruned_nodes=" << unpruned << " nodes=" << pruned
            << " leaves=" << leaves << " constraints=" << all.size() << " seconds=" << secs << '\n';
  Output out(o.out);
  write_constraints(out.get(), all, tagset);
}

// Tag symbols for constraint checking come from a lexicon or corpus.
TagSet tagset_for_constraints(const Options& o) {
  TagSet tagset;
  if (!o.lexicon.empty()) {
    auto in = open_in(o.lexicon);
    (void)parse_lexicon(in, tagset);
  }
  if (!o.corpus.empty()) (void)read_tagged_corpus(o.corpus, tagset);
  if (tagset.size() == 0) throw ValidationError("give --lexicon or --corpus to define the tag set");
  return tagset;
}

void cmd_constraints_compile(const Options& o) {
  const TagSet tagset = tagset_for_constraints(o);
  const auto parsed = parse_constraints(read_text(o.input), tagset);
  Output out(o.out);
  write_constraints(out.get(), parsed.constraints, tagset);
}

void cmd_constraints_check(const Options& o) {
  const TagSet tagset = tagset_for_constraints(o);
  const auto parsed = parse_constraints(read_text(o.input), tagset);
  std::size_t repeated = 0, negated = 0, word_targets = 0;
  for (const auto& c : parsed.constraints) {
    word_targets += !c.target_words.empty();
    for (const auto* side : {&c.left, &c.right})
      for (const auto& item : *side) {
        repeated += item.repeated;
        negated += item.test.kind == TestKind::kNotTags;
      }
  }
  std::cout << "constraints file=" << o.input << " count=" << parsed.constraints.size()
            << " macros=" << parsed.macros.size() << " word_targets=" << word_targets << " repeated_items=" << repeated
            << " negated_items=" << negated << '\n';
}

std::vector<std::vector<std::string>> read_input_words(const Options& o, TagSet& tagset) {
  if (o.tagged_input) return words_of(read_tagged_corpus(o.input, tagset));
  auto in = open_in(o.input);
  return parse_raw_text(in);
}

void cmd_tag(const Options& o) {
  Resources r;
  load_tables(o, r);
  auto words = read_input_words(o, r.tagset);
  load_constraints(o, r);
  if (o.models.size() != 1) throw ValidationError("tag takes exactly one --models value");
  const auto m = ModelCombination::parse(o.models.front());
  const auto built = build_tagger(m, r, o);
  const auto tagging = run_tagger(*built->tagger, words, o.serial);

  std::vector<TaggedSentence> out_corpus(words.size());
  for (std::size_t s = 0; s < words.size(); ++s)
    for (std::size_t i = 0; i < words[s].size(); ++i) out_corpus[s].push_back({words[s][i], tagging.tags[s][i]});
  Output out(o.out);
  write_tagged_corpus(out.get(), out_corpus, r.tagset);
  if (!o.diagnostics.empty() && m.uses_relaxation()) {
    Output d(o.diagnostics);
    write_diagnostics(d.get(), tagging);
  }
}

void cmd_eval(const Options& o) {
  Resources r;
  load_tables(o, r);
  const auto gold = read_tagged_corpus(o.input, r.tagset);
  load_constraints(o, r);
  const auto words = words_of(gold);

  std::vector<std::pair<std::string, EvalReport>> rows;
  std::ostringstream records;
  if (!o.predicted.empty()) {
    const auto pred = read_tagged_corpus(o.predicted, r.tagset, TagPolicy::kValidate);
    std::vector<std::vector<TagId>> tags;
    for (const auto& s : pred) {
      tags.emplace_back();
      for (const auto& t : s) tags.back().push_back(t.tag);
    }
    rows.emplace_back("file", evaluate(gold, tags, r.lex, r.tagset));
    write_eval_records(records, "file", rows.back().second, r.tagset);
  }
  std::unique_ptr<Output> diag;
  if (!o.diagnostics.empty()) diag = std::make_unique<Output>(o.diagnostics);
  for (const auto& spec : o.models) {
    const auto m = ModelCombination::parse(spec);
    const auto built = build_tagger(m, r, o);
    const auto tagging = run_tagger(*built->tagger, words, o.serial);
    rows.emplace_back(m.label(), evaluate(gold, tagging.tags, r.lex, r.tagset));
    write_eval_records(records, m.label(), rows.back().second, r.tagset);
    if (diag && m.uses_relaxation()) {
      diag->get() << "# model=" << m.label() << '\n';
      write_diagnostics(diag->get(), tagging);
    }
  }
  if (rows.empty()) throw ValidationError("nothing to evaluate: give --models or --predicted");
  write_accuracy_table(std::cout, rows);
  std::cout << '\n';
  write_error_table(std::cout, rows, r.tagset, o.error_rows);
  std::cout << '\n' << records.str();
}

void cmd_synth(const Options& o) {
  const auto spec = read_synth_spec(o.spec);
  const auto corpus = generate_synthetic_corpus(spec, o.tokens, o.seed);
  Output out(o.out);
  write_tagged_corpus(out.get(), corpus, spec.tagset());
}

// ---------------------------------------------------------------- flag wiring

void add_relax_flags(CLI::App* app, Options& o) {
  app->add_option("--max-iter", o.max_iter, "relaxation iteration limit")->check(CLI::PositiveNumber);
  app->add_option("--epsilon", o.epsilon, "stop when no weight moves more than this")->check(CLI::NonNegativeNumber);
  app->add_option("--support-norm", o.support_norm, "support normalization")
      ->check(CLI::IsMember({"rational", "clamp"}));
  app->add_option("--divisor", o.divisor, "support pre-scale divisor")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "random seed");
  app->add_flag("--serial", o.serial, "tag sentences on one thread");
}

void add_model_sources(CLI::App* app, Options& o) {
  app->add_option("--lexicon", o.lexicon, "lexicon file")->required();
  app->add_option("--bigrams", o.bigrams, "bigram table (B constraints, HMM transitions)");
  app->add_option("--trigrams", o.trigrams, "trigram table (T constraints)");
  app->add_option("--learned", o.learned, "learned constraints (C)");
  app->add_option("--hand", o.hand, "hand-written constraints (H)");
  app->add_option("--open-class", o.open_class, "comma separated tags for unknown words");
}

void add_learner_flags(CLI::App* app, Options& o) {
  app->add_option("--window", o.window, "left,right context sizes");
  app->add_option("--purity", o.purity, "stop splitting above this majority share");
  app->add_option("--min-examples", o.min_examples, "stop splitting below this many examples");
  app->add_option("--chi2-alpha", o.chi2_alpha, "significance level for branch merging");
  app->add_option("--top-k", o.top_k, "learn trees for this many ambiguity classes");
  app->add_option("--seed", o.seed, "holdout seed");
  app->add_flag("--serial", o.serial, "learn trees on one thread");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reltag: relaxation-labelling part-of-speech tagger"};
  app.require_subcommand(1);
  Options o;

  auto* stats = app.add_subcommand("stats", "corpus and lexicon statistics");
  stats->add_option("--corpus", o.corpus, "tagged corpus")->required()->check(CLI::ExistingFile);
  stats->add_option("--lexicon", o.lexicon, "lexicon (default: built from the corpus)");
  stats->add_option("--open-class", o.open_class, "comma separated tags for unknown words");

  auto* split = app.add_subcommand("split", "seeded train/tune/test split");
  split->add_option("--corpus", o.corpus, "tagged corpus")->required()->check(CLI::ExistingFile);
  split->add_option("--out", o.out, "output prefix (default: corpus path)");
  split->add_option("--train", o.train_fraction);
  split->add_option("--tune", o.tune_fraction);
  split->add_option("--test", o.test_fraction);
  split->add_option("--seed", o.seed, "shuffle seed");

  auto* lexicon = app.add_subcommand("lexicon", "build or filter a lexicon");
  lexicon->require_subcommand(1);
  auto* lex_build = lexicon->add_subcommand("build", "lexicon from a tagged corpus");
  lex_build->add_option("--corpus", o.corpus)->required()->check(CLI::ExistingFile);
  lex_build->add_option("--out", o.out);
  auto* lex_filter = lexicon->add_subcommand("filter", "apply manual corrections");
  lex_filter->add_option("--lexicon", o.lexicon)->required()->check(CLI::ExistingFile);
  lex_filter->add_option("--corrections", o.corrections)->required()->check(CLI::ExistingFile);
  lex_filter->add_option("--out", o.out);

  auto* ngrams = app.add_subcommand("ngrams", "n-gram statistics");
  ngrams->require_subcommand(1);
  auto* ng_collect = ngrams->add_subcommand("collect", "count bigrams or trigrams");
  ng_collect->add_option("--corpus", o.corpus)->required()->check(CLI::ExistingFile);
  ng_collect->add_option("--order", o.order)->check(CLI::Range(2, 3));
  ng_collect->add_option("--out", o.out);
  ng_collect->add_option("--constraints-out", o.constraints_out, "also write the PMI constraints");

  auto* trees = app.add_subcommand("trees", "decision tree learning");
  trees->require_subcommand(1);
  auto* tr_learn = trees->add_subcommand("learn", "learn one tree per ambiguity class and compile constraints");
  tr_learn->add_option("--corpus", o.corpus, "training corpus")->required()->check(CLI::ExistingFile);
  tr_learn->add_option("--lexicon", o.lexicon, "lexicon (default: built from the corpus)");
  tr_learn->add_option("--out", o.out, "constraint output");
  tr_learn->add_option("--trees-out", o.trees_out, "tree dump");
  add_learner_flags(tr_learn, o);

  auto* constraints = app.add_subcommand("constraints", "constraint files");
  constraints->require_subcommand(1);
  auto* c_compile = constraints->add_subcommand("compile", "expand macros and write canonical constraints");
  auto* c_check = constraints->add_subcommand("check", "parse and summarize a constraint file");
  for (auto* c : {c_compile, c_check}) {
    c->add_option("input", o.input, "constraint file")->required()->check(CLI::ExistingFile);
    c->add_option("--lexicon", o.lexicon, "tag symbols from this lexicon");
    c->add_option("--corpus", o.corpus, "tag symbols from this corpus");
  }
  c_compile->add_option("--out", o.out);

  auto* tag = app.add_subcommand("tag", "tag text with one model combination");
  tag->add_option("input", o.input, "raw text, one sentence per line")->required()->check(CLI::ExistingFile);
  tag->add_flag("--tagged", o.tagged_input, "input is a tagged corpus; its tags are ignored");
  tag->add_option("--models", o.models, "ML, HMM or letters from B,T,C,H")->required()->expected(1);
  tag->add_option("--out", o.out);
  tag->add_option("--diagnostics", o.diagnostics, "relaxation records per sentence");
  add_model_sources(tag, o);
  add_relax_flags(tag, o);

  auto* eval = app.add_subcommand("eval", "accuracy and error pairs against a gold corpus");
  eval->add_option("gold", o.input, "gold tagged corpus")->required()->check(CLI::ExistingFile);
  eval->add_option("--models", o.models, "repeatable: ML, HMM or letters from B,T,C,H");
  eval->add_option("--predicted", o.predicted, "evaluate a tagged file instead of / besides models");
  eval->add_option("--errors", o.error_rows, "rows in the error table");
  eval->add_option("--diagnostics", o.diagnostics, "relaxation records per sentence");
  add_model_sources(eval, o);
  add_relax_flags(eval, o);

  auto* synth = app.add_subcommand("synth", "generate a synthetic tagged corpus");
  synth->add_option("--spec", o.spec, "JSON generator spec")->required()->check(CLI::ExistingFile);
  synth->add_option("--tokens", o.tokens, "minimum token count");
  synth->add_option("--seed", o.seed);
  synth->add_option("--out", o.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stats) cmd_stats(o);
    else if (*split) cmd_split(o);
    else if (*lex_build) cmd_lexicon_build(o);
    else if (*lex_filter) cmd_lexicon_filter(o);
    else if (*ng_collect) cmd_ngrams_collect(o);
    else if (*tr_learn) cmd_trees_learn(o);
    else if (*c_compile) cmd_constraints_compile(o);
    else if (*c_check) cmd_constraints_check(o);
    else if (*tag) cmd_tag(o);
    else if (*eval) cmd_eval(o);
    else if (*synth) cmd_synth(o);
  } catch (const std::exception& e) {
    std::cerr << "reltag: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
