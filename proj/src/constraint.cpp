#include "reltag/constraint.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "reltag/error.hpp"

namespace reltag {

std::string_view to_string(ConstraintSource source) {
  switch (source) {
    case ConstraintSource::kHandWritten: return "hand-written";
    case ConstraintSource::kLearned: return "learned";
    case ConstraintSource::kBigram: return "bigram";
    case ConstraintSource::kTrigram: return "trigram";
  }
  return "?";
}

bool Constraint::applies_to_word(std::string_view word) const {
  return target_words.empty() ||
         std::find(target_words.begin(), target_words.end(), word) != target_words.end();
}

// ---------------------------------------------------------------- ConstraintSet

ConstraintSet::ConstraintSet(std::vector<Constraint> constraints) {
  for (auto& c : constraints) add(std::move(c));
}

void ConstraintSet::add(Constraint c) {
  constraints_.push_back(std::move(c));
  index(constraints_.size() - 1);
}

void ConstraintSet::append(const ConstraintSet& other) {
  for (const auto& c : other.constraints_) add(c);
}

void ConstraintSet::index(std::size_t i) {
  const auto& c = constraints_[i];
  if (c.target_words.empty()) {
    any_word_[c.target_tag].push_back(i);
    return;
  }
  for (const auto& w : c.target_words) by_word_[{w, c.target_tag}].push_back(i);
}

std::vector<std::size_t> ConstraintSet::lookup(std::string_view word, TagId tag) const {
  std::vector<std::size_t> out;
  if (auto it = any_word_.find(tag); it != any_word_.end()) out = it->second;
  if (!by_word_.empty()) {
    auto it = by_word_.find(std::pair<std::string, TagId>(std::string(word), tag));
    if (it != by_word_.end()) {
      out.insert(out.end(), it->second.begin(), it->second.end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }
  return out;
}

// ---------------------------------------------------------------- parser

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  Parser(std::string_view text, const TagSet& tagset, ConstraintSource source)
      : text_(text), tagset_(tagset), source_(source) {}

  ParsedConstraints run() {
    ParsedConstraints out;
    skip();
    while (!at_end()) {
      if (peek() == '%') {
        parse_macro();
      } else {
        out.constraints.push_back(parse_constraint());
      }
      skip();
    }
    out.macros = std::move(macros_);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  char get() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void skip() {
    for (;;) {
      while (!at_end() && is_space(peek())) get();
      if (text_.substr(pos_, 2) == "//") {
        while (!at_end() && peek() != '\n') get();
        continue;
      }
      return;
    }
  }

  void expect(char c) {
    skip();
    if (at_end()) fail(std::string("unexpected end of input, expected '") + c + "'");
    if (peek() != c) fail(std::string("expected '") + c + "', found '" + peek() + "'");
    get();
  }

  std::string read_name() {
    // after the opening '%'
    std::string name;
    while (!at_end() && peek() != '%') {
      if (is_space(peek())) fail("unterminated macro name");
      name += get();
    }
    if (at_end()) fail("unterminated macro name");
    get();
    if (name.empty()) fail("empty macro name");
    return name;
  }

  std::string read_quoted() {
    // at the opening quote
    const std::size_t start_line = line_;
    get();
    std::string word;
    for (;;) {
      if (at_end()) throw ParseError("unterminated quoted word", start_line);
      char c = get();
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) throw ParseError("unterminated quoted word", start_line);
        c = get();
      }
      word += c;
    }
    if (word.empty()) fail("empty quoted word");
    return word;
  }

  TagId resolve_tag(const std::string& symbol) const {
    auto id = tagset_.find(symbol);
    if (!id) fail("tag '" + symbol + "' is not in the tag set");
    return *id;
  }

  // '[' elem+ ']'
  ContextTest parse_set() {
    expect('[');
    ContextTest test;
    bool has_tags = false;
    bool has_words = false;
    for (;;) {
      skip();
      if (at_end()) fail("unbalanced '[': missing ']'");
      if (peek() == ']') {
        get();
        break;
      }
      if (peek() == '"') {
        test.words.push_back(read_quoted());
        has_words = true;
        continue;
      }
      std::string sym;
      bool closed = false;
      while (!at_end() && !is_space(peek())) {
        if (peek() == ']') {
          get();
          closed = true;
          break;
        }
        if (peek() == ';' || peek() == '[') fail("unbalanced '[': missing ']'");
        sym += get();
      }
      if (!sym.empty()) {
        if (sym == kOutOfSentenceSymbol) {
          test.out_of_sentence = true;
        } else {
          test.tags.push_back(resolve_tag(sym));
        }
        has_tags = true;
      }
      if (closed) break;
    }
    if (has_tags && has_words) fail("a set cannot mix tags and quoted words");
    if (!has_tags && !has_words) fail("empty set");
    if (has_words) {
      test.kind = TestKind::kWords;
      std::vector<std::string> uniq;
      for (auto& w : test.words)
        if (std::find(uniq.begin(), uniq.end(), w) == uniq.end()) uniq.push_back(std::move(w));
      test.words = std::move(uniq);
    } else {
      std::sort(test.tags.begin(), test.tags.end());
      test.tags.erase(std::unique(test.tags.begin(), test.tags.end()), test.tags.end());
    }
    return test;
  }

  ContextTest lookup_macro() {
    // at '%'
    get();
    const std::string name = read_name();
    auto it = macros_.find(name);
    if (it == macros_.end()) fail("unknown macro '%" + name + "%'");
    return it->second;
  }

  ContextTest parse_test() {
    skip();
    if (at_end()) fail("unexpected end of input in test");
    bool negated = false;
    if (peek() == '-') {
      get();
      negated = true;
      skip();
    }
    ContextTest test;
    if (peek() == '[') {
      test = parse_set();
    } else if (peek() == '%') {
      test = lookup_macro();
    } else if (peek() == '"') {
      test.kind = TestKind::kWords;
      test.words.push_back(read_quoted());
    } else {
      fail(std::string("expected a test, found '") + peek() + "'");
    }
    if (negated) {
      if (test.kind != TestKind::kTags) fail("only tag sets can be negated");
      test.kind = TestKind::kNotTags;
    }
    return test;
  }

  void parse_macro() {
    get();  // '%'
    const std::string name = read_name();
    expect('=');
    skip();
    if (peek() != '[') fail("macro body must be a set");
    ContextTest body = parse_set();
    expect(';');
    macros_[name] = std::move(body);
  }

  double parse_number() {
    skip();
    const std::size_t start = pos_;
    if (peek() == '+') ++pos_;
    while (!at_end() && !is_space(peek()) && peek() != '(' && peek() != '<' && peek() != ';' &&
           !(peek() == '/' && text_.substr(pos_, 2) == "//"))
      ++pos_;
    std::string_view tok = text_.substr(start, pos_ - start);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
      fail("expected a compatibility value, found '" + std::string(text_.substr(start, pos_ - start)) + "'");
    if (!std::isfinite(v)) fail("compatibility must be finite");
    return v;
  }

  int parse_offset() {
    const std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') get();
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) get();
    std::string_view tok = text_.substr(start, pos_ - start);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("malformed offset");
    if (v == 0) fail("offset 0 is the target itself");
    expect(':');
    return v;
  }

  ContextItem parse_item() {
    ContextItem item;
    if (peek() == '(') {
      get();
      item.test = parse_test();
      expect(')');
      if (peek() == '+') {
        get();
        item.repeated = true;
      }
    } else {
      item.offset = parse_offset();
      item.test = parse_test();
    }
    return item;
  }

  void parse_target(Constraint& c) {
    get();  // '<'
    skip();
    if (peek() == '[') {
      const ContextTest words = parse_set();
      if (words.kind != TestKind::kWords) fail("target word list must hold quoted words");
      c.target_words = words.words;
      expect(',');
    }
    skip();
    std::string sym;
    while (!at_end() && peek() != '>' && !is_space(peek())) {
      if (peek() == ';' || peek() == '\n') break;
      sym += get();
    }
    skip();
    if (peek() != '>') fail("unbalanced '<': missing '>'");
    get();
    if (sym.empty()) fail("missing target tag");
    c.target_tag = resolve_tag(sym);
  }

  Constraint parse_constraint() {
    Constraint c;
    c.source = source_;
    c.compatibility = parse_number();
    bool seen_target = false;
    for (;;) {
      skip();
      if (at_end()) fail("missing ';' at end of constraint");
      const char ch = peek();
      if (ch == ';') {
        get();
        break;
      }
      if (ch == '<') {
        if (seen_target) fail("constraint has two targets");
        parse_target(c);
        seen_target = true;
        continue;
      }
      if (ch == '(' || ch == '+' || ch == '-' || std::isdigit(static_cast<unsigned char>(ch))) {
        ContextItem item = parse_item();
        if (item.offset) {
          // explicit offsets carry their own side
          (*item.offset < 0 ? c.left : c.right).push_back(std::move(item));
        } else {
          (seen_target ? c.right : c.left).push_back(std::move(item));
        }
        continue;
      }
      if (ch == '%' ) fail("missing ';' at end of constraint");
      if (ch == ')' ) fail("unbalanced ')'");
      fail(std::string("unexpected '") + ch + "' in constraint");
    }
    if (!seen_target) fail("constraint has no target");
    return c;
  }

  std::string_view text_;
  const TagSet& tagset_;
  ConstraintSource source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  MacroTable macros_;
};

void write_quoted(std::ostream& out, const std::string& w) {
  out << '"';
  for (char c : w) {
    if (c == '"' || c == '\\') out << '\\';
    out << c;
  }
  out << '"';
}

void write_test(std::ostream& out, const ContextTest& t, const TagSet& tagset) {
  switch (t.kind) {
    case TestKind::kWords:
      if (t.words.size() == 1) {
        write_quoted(out, t.words.front());
      } else {
        out << '[';
        for (std::size_t i = 0; i < t.words.size(); ++i) {
          if (i) out << ' ';
          write_quoted(out, t.words[i]);
        }
        out << ']';
      }
      return;
    case TestKind::kNotTags:
      out << '-';
      [[fallthrough]];
    case TestKind::kTags: {
      out << '[';
      bool first = true;
      for (TagId id : t.tags) {
        if (!first) out << ' ';
        out << tagset.symbol(id);
        first = false;
      }
      if (t.out_of_sentence) out << (first ? "" : " ") << kOutOfSentenceSymbol;
      out << ']';
      return;
    }
  }
}

void write_item(std::ostream& out, const ContextItem& item, const TagSet& tagset) {
  if (item.offset) {
    out << *item.offset << ':';
    write_test(out, item.test, tagset);
    return;
  }
  out << '(';
  write_test(out, item.test, tagset);
  out << ')';
  if (item.repeated) out << '+';
}

}  // namespace

ParsedConstraints parse_constraints(std::string_view text, const TagSet& tagset, ConstraintSource source) {
  return Parser(text, tagset, source).run();
}

ConstraintSet read_constraints(const std::string& path, const TagSet& tagset, ConstraintSource source) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open constraint file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ConstraintSet(parse_constraints(buf.str(), tagset, source).constraints);
}

void write_constraints(std::ostream& out, std::span<const Constraint> constraints, const TagSet& tagset) {
  char num[64];
  for (const auto& c : constraints) {
    auto res = std::to_chars(num, num + sizeof num, c.compatibility);
    out << std::string_view(num, static_cast<std::size_t>(res.ptr - num));
    for (const auto& item : c.left) {
      out << ' ';
      write_item(out, item, tagset);
    }
    out << " <";
    if (!c.target_words.empty()) {
      out << '[';
      for (std::size_t i = 0; i < c.target_words.size(); ++i) {
        if (i) out << ' ';
        write_quoted(out, c.target_words[i]);
      }
      out << "],";
    }
    out << tagset.symbol(c.target_tag) << '>';
    for (const auto& item : c.right) {
      out << ' ';
      write_item(out, item, tagset);
    }
    out << ";\n";
  }
}

std::string serialize_constraints(std::span<const Constraint> constraints, const TagSet& tagset) {
  std::ostringstream out;
  write_constraints(out, constraints, tagset);
  return out.str();
}

// ---------------------------------------------------------------- instantiation

namespace {

using Bindings = std::vector<FactorList>;

// Binds `item` at `pos` (signed, may fall outside the sentence). Returns
// false when the anchoring is inapplicable.
bool bind(const ContextItem& item, std::ptrdiff_t pos, std::span<const std::string> words, FactorList& out) {
  const auto n = static_cast<std::ptrdiff_t>(words.size());
  const bool inside = pos >= 0 && pos < n;
  const auto& t = item.test;
  if (!inside) return t.kind == TestKind::kTags && t.out_of_sentence;
  if (t.kind == TestKind::kWords)
    return std::find(t.words.begin(), t.words.end(), words[static_cast<std::size_t>(pos)]) != t.words.end();
  out.push_back(Factor{static_cast<std::size_t>(pos), t.tags, t.kind == TestKind::kNotTags});
  return true;
}

// Items ordered nearest-first, `dir` = -1 (left) or +1 (right).
void enumerate_side(std::span<const ContextItem> items, std::size_t k, std::ptrdiff_t target,
                    std::ptrdiff_t cursor, int dir, std::span<const std::string> words, FactorList& current,
                    Bindings& out) {
  if (k == items.size()) {
    out.push_back(current);
    return;
  }
  const auto& item = items[k];
  const std::size_t mark = current.size();
  if (item.offset) {
    const std::ptrdiff_t pos = target + *item.offset;
    if (bind(item, pos, words, current))
      enumerate_side(items, k + 1, target, pos, dir, words, current, out);
    current.resize(mark);
    return;
  }
  if (!item.repeated) {
    const std::ptrdiff_t pos = cursor + dir;
    if (bind(item, pos, words, current))
      enumerate_side(items, k + 1, target, pos, dir, words, current, out);
    current.resize(mark);
    return;
  }
  // spans of length 0, 1, ... that stay inside the sentence
  const auto n = static_cast<std::ptrdiff_t>(words.size());
  std::ptrdiff_t end = cursor;
  for (;;) {
    enumerate_side(items, k + 1, target, end, dir, words, current, out);
    const std::ptrdiff_t next = end + dir;
    if (next < 0 || next >= n) break;
    if (!bind(item, next, words, current)) break;
    end = next;
  }
  current.resize(mark);
}

}  // namespace

std::vector<FactorList> instantiate(const Constraint& constraint, std::span<const std::string> words,
                                    std::size_t i, TagId tag) {
  if (constraint.target_tag != tag || i >= words.size() || !constraint.applies_to_word(words[i])) return {};
  const auto target = static_cast<std::ptrdiff_t>(i);

  std::vector<ContextItem> left_near_first(constraint.left.rbegin(), constraint.left.rend());
  Bindings left;
  Bindings right;
  FactorList scratch;
  enumerate_side(left_near_first, 0, target, target, -1, words, scratch, left);
  if (left.empty()) return {};
  scratch.clear();
  enumerate_side(constraint.right, 0, target, target, +1, words, scratch, right);
  if (right.empty()) return {};

  std::vector<FactorList> out;
  out.reserve(left.size() * right.size());
  for (const auto& l : left) {
    for (const auto& r : right) {
      FactorList f = l;
      f.insert(f.end(), r.begin(), r.end());
      out.push_back(std::move(f));
    }
  }
  return out;
}

}  // namespace reltag

// ---------------------------------------------------------------- tree compilation

namespace reltag {

namespace {

struct PathTest {
  std::size_t attribute;
  const std::vector<std::int32_t>* group;
};

void compile_node(const TreeNode& node, const AmbiguityClass& cls, std::span<const double> prior,
                  const Window& window, std::vector<PathTest>& path, std::vector<Constraint>& out) {
  if (!node.is_leaf()) {
    for (std::size_t g = 0; g < node.children.size(); ++g) {
      path.push_back({node.attribute, &node.groups[g]});
      compile_node(node.children[g], cls, prior, window, path, out);
      path.pop_back();
    }
    return;
  }

  Constraint base;
  base.source = ConstraintSource::kLearned;
  std::vector<std::pair<int, ContextItem>> items;
  for (const auto& t : path) {
    const int off = window.offset(t.attribute);
    if (off == 0) {
      for (auto v : *t.group) base.target_words.push_back(cls.member_words[static_cast<std::size_t>(v)]);
      continue;
    }
    ContextItem item;
    item.offset = off;
    for (auto v : *t.group) {
      if (v == kOutOfSentence) {
        item.test.out_of_sentence = true;
      } else {
        item.test.tags.push_back(v);
      }
    }
    std::sort(item.test.tags.begin(), item.test.tags.end());
    items.emplace_back(off, std::move(item));
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [off, item] : items) (off < 0 ? base.left : base.right).push_back(std::move(item));

  for (std::size_t l = 0; l < cls.tags.size(); ++l) {
    Constraint c = base;
    c.target_tag = cls.tags[l];
    c.compatibility = std::log2(node.distribution[l] / prior[l]);
    out.push_back(std::move(c));
  }
}

}  // namespace

std::vector<Constraint> compile_tree(const TreeNode& tree, const AmbiguityClass& cls, std::span<const double> prior,
                                     const Window& window) {
  if (prior.size() != cls.tags.size()) throw ValidationError("prior does not match the class size");
  std::vector<Constraint> out;
  std::vector<PathTest> path;
  compile_node(tree, cls, prior, window, path, out);
  return out;
}

}  // namespace reltag
