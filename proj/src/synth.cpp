#include "reltag/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reltag/error.hpp"
#include "reltag/random.hpp"

namespace reltag {

namespace {

void check_row(std::span<const double> row, const std::string& what) {
  double total = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError(what + ": negative or non-finite probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << what << ": probabilities sum to " << total << ", not 1";
    throw ValidationError(os.str());
  }
}

}  // namespace

void SynthSpec::validate() const {
  const std::size_t n = tags.size();
  if (n == 0) throw ValidationError("synthetic spec has no tags");
  for (const auto& t : tags)
    if (!TagSet::is_valid_symbol(t)) throw ValidationError("invalid tag symbol '" + t + "'");
  if (start.size() != n) throw ValidationError("start row has wrong size");
  check_row(start, "start");
  if (transitions.size() != n) throw ValidationError("transition matrix has wrong size");
  for (std::size_t a = 0; a < n; ++a) {
    if (transitions[a].size() != n) throw ValidationError("transition row " + tags[a] + " has wrong size");
    check_row(transitions[a], "transitions of " + tags[a]);
  }
  for (const auto& [key, row] : second_order) {
    if (key.first >= n || key.second >= n || row.size() != n) throw ValidationError("malformed second-order row");
    check_row(row, "second-order row " + tags[key.first] + " " + tags[key.second]);
  }
  if (emissions.size() != n) throw ValidationError("emission table has wrong size");
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<double> p;
    for (const auto& [w, q] : emissions[t]) {
      if (w.empty() || w.find_first_of(" \t\r\n") != std::string::npos)
        throw ValidationError("emission word for " + tags[t] + " is empty or has whitespace");
      p.push_back(q);
    }
    check_row(p, "emissions of " + tags[t]);
  }
  std::vector<double> p;
  for (const auto& [len, q] : lengths) {
    if (len == 0) throw ValidationError("sentence length 0");
    p.push_back(q);
  }
  check_row(p, "lengths");
}

TagSet SynthSpec::tagset() const {
  TagSet ts(tags);
  ts.set_default_open_class();
  return ts;
}

SynthSpec parse_synth_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("synthetic spec: ") + e.what());
  }
  try {
    SynthSpec s;
    s.tags = j.at("tags").get<std::vector<std::string>>();
    const std::size_t n = s.tags.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i)
      if (!index.emplace(s.tags[i], i).second) throw ValidationError("duplicate tag '" + s.tags[i] + "'");
    auto tag_index = [&](const std::string& t) {
      auto it = index.find(t);
      if (it == index.end()) throw ValidationError("unknown tag '" + t + "' in synthetic spec");
      return it->second;
    };
    auto row = [&](const nlohmann::json& obj) {
      std::vector<double> r(n, 0.0);
      for (const auto& [k, v] : obj.items()) r[tag_index(k)] = v.get<double>();
      return r;
    };
    s.start = row(j.at("start"));
    s.transitions.assign(n, std::vector<double>(n, 0.0));
    for (const auto& [k, v] : j.at("transitions").items()) s.transitions[tag_index(k)] = row(v);
    if (j.contains("second_order")) {
      for (const auto& [k, v] : j.at("second_order").items()) {
        std::istringstream ks(k);
        std::string a, b, extra;
        if (!(ks >> a >> b) || (ks >> extra)) throw ValidationError("second-order key '" + k + "' is not 'TAG TAG'");
        s.second_order[{tag_index(a), tag_index(b)}] = row(v);
      }
    }
    s.emissions.resize(n);
    for (const auto& [k, v] : j.at("emissions").items()) {
      auto& e = s.emissions[tag_index(k)];
      for (const auto& [w, p] : v.items()) e.emplace_back(w, p.get<double>());
    }
    for (const auto& [k, v] : j.at("lengths").items()) {
      std::size_t len = 0;
      try {
        len = static_cast<std::size_t>(std::stoul(k));
      } catch (const std::exception&) {
        throw ValidationError("sentence length '" + k + "' is not a number");
      }
      s.lengths.emplace_back(len, v.get<double>());
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("synthetic spec: ") + e.what());
  }
}

SynthSpec read_synth_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_synth_spec(ss.str());
}

std::vector<TaggedSentence> generate_synthetic_corpus(const SynthSpec& spec, std::size_t tokens, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  std::vector<double> length_p;
  for (const auto& [len, p] : spec.lengths) length_p.push_back(p);
  std::vector<std::vector<double>> emit_p(spec.tags.size());
  for (std::size_t t = 0; t < spec.tags.size(); ++t)
    for (const auto& [w, p] : spec.emissions[t]) emit_p[t].push_back(p);

  std::vector<TaggedSentence> out;
  std::size_t produced = 0;
  while (produced < tokens) {
    const std::size_t len = spec.lengths[rng.pick(length_p)].first;
    TaggedSentence s;
    s.reserve(len);
    std::vector<std::size_t> tags;
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t t;
      if (i == 0) {
        t = rng.pick(spec.start);
      } else {
        const std::vector<double>* row = &spec.transitions[tags[i - 1]];
        if (i >= 2) {
          auto it = spec.second_order.find({tags[i - 2], tags[i - 1]});
          if (it != spec.second_order.end()) row = &it->second;
        }
        t = rng.pick(*row);
      }
      tags.push_back(t);
      s.push_back({spec.emissions[t][rng.pick(emit_p[t])].first, static_cast<TagId>(t)});
    }
    produced += len;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> expected_tag_frequencies(const SynthSpec& spec) {
  spec.validate();
  const std::size_t n = spec.tags.size();
  std::size_t max_len = 0;
  double mean_len = 0.0;
  for (const auto& [len, p] : spec.lengths) {
    max_len = std::max(max_len, len);
    mean_len += static_cast<double>(len) * p;
  }
  // survive[k] = p(sentence has a position k)
  std::vector<double> survive(max_len, 0.0);
  for (const auto& [len, p] : spec.lengths)
    for (std::size_t k = 0; k < len; ++k) survive[k] += p;

  std::vector<double> freq(n, 0.0);
  // joint distribution over (t_{k-1}, t_k); row n stands for "no previous tag"
  std::vector<std::vector<double>> joint(n + 1, std::vector<double>(n, 0.0));
  joint[n] = spec.start;
  for (std::size_t k = 0; k < max_len; ++k) {
    for (std::size_t a = 0; a <= n; ++a)
      for (std::size_t b = 0; b < n; ++b) freq[b] += survive[k] * joint[a][b];
    std::vector<std::vector<double>> next(n + 1, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a <= n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        const double p = joint[a][b];
        if (p == 0.0) continue;
        const std::vector<double>* row = &spec.transitions[b];
        if (a < n) {
          auto it = spec.second_order.find({a, b});
          if (it != spec.second_order.end()) row = &it->second;
        }
        for (std::size_t c = 0; c < n; ++c) next[b][c] += p * (*row)[c];
      }
    }
    joint = std::move(next);
  }
  for (auto& f : freq) f /= mean_len;
  return freq;
}

double expected_most_likely_accuracy(const SynthSpec& spec) {
  const auto freq = expected_tag_frequencies(spec);
  std::map<std::string, std::pair<double, double>> words;  // word -> (Σ_t p(w,t), max_t p(w,t))
  for (std::size_t t = 0; t < spec.tags.size(); ++t) {
    std::map<std::string, double> joint;
    for (const auto& [w, p] : spec.emissions[t]) joint[w] += freq[t] * p;
    for (const auto& [w, p] : joint) {
      auto& e = words[w];
      e.first += p;
      e.second = std::max(e.second, p);
    }
  }
  double acc = 0.0;
  for (const auto& [w, e] : words) acc += e.second;
  return acc;
}

}  // namespace reltag
