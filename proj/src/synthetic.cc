#include "xlingua/synthetic.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_set>

#include <fmt/format.h>
#include "json.hpp"

#include "io_util.h"
#include "xlingua/error.h"

namespace xlingua {

void SyntheticSpec::validate() const {
  auto positive = [](std::size_t v, const char *name) {
    if (v == 0) throw ConfigError(fmt::format("{} must be positive", name));
  };
  positive(n_descriptors, "n_descriptors");
  positive(n_train_docs, "n_train_docs");
  positive(n_test_pairs, "n_test_pairs");
  positive(vocab_size_per_lang, "vocab_size_per_lang");
  positive(lemmas_per_descriptor, "lemmas_per_descriptor");
  positive(max_labels_per_doc, "max_labels_per_doc");
  if (lemmas_per_descriptor < 2 || lemmas_per_descriptor > vocab_size_per_lang) {
    throw ConfigError("lemmas_per_descriptor must lie in [2, vocab_size_per_lang]");
  }
  if (max_labels_per_doc > n_descriptors) {
    throw ConfigError("max_labels_per_doc exceeds n_descriptors");
  }
  if (!(doc_length_mean > 0.0) || !(doc_length_std >= 0.0)) {
    throw ConfigError("doc_length_mean must be positive and doc_length_std nonnegative");
  }
  if (!(target_length_inflation > 0.0) || !(length_ratio_std >= 0.0)) {
    throw ConfigError("target_length_inflation must be positive, length_ratio_std nonnegative");
  }
  if (!(length_outlier_rate >= 0.0 && length_outlier_rate <= 1.0) ||
      !(length_outlier_std >= 0.0)) {
    throw ConfigError("length_outlier_rate must lie in [0, 1], length_outlier_std nonnegative");
  }
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw ConfigError("noise_rate must lie in [0, 1)");
  if (!(revision_rate >= 0.0 && revision_rate <= 1.0) || !(revision_length_change > 0.0)) {
    throw ConfigError("revision_rate must lie in [0, 1], revision_length_change be positive");
  }
  if (!(translation_drift >= 0.0 && translation_drift <= 1.0)) {
    throw ConfigError("translation_drift must lie in [0, 1]");
  }
  if (!(homonym_rate >= 0.0 && homonym_rate < 1.0)) {
    throw ConfigError("homonym_rate must lie in [0, 1)");
  }
  if (!(burstiness >= 0.0 && burstiness <= 1.0)) {
    throw ConfigError("burstiness must lie in [0, 1]");
  }
  if (!(label_count_skew >= 0.0)) throw ConfigError("label_count_skew must be nonnegative");
  if (!(src_chars_per_unit >= 0.0)) throw ConfigError("src_chars_per_unit must be nonnegative");
  if (src_lang.empty() || tgt_lang.empty() || src_lang == tgt_lang) {
    throw ConfigError("src_lang and tgt_lang must be distinct, nonempty codes");
  }
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SyntheticSpec, n_descriptors, n_train_docs,
                                                n_test_pairs, vocab_size_per_lang,
                                                lemmas_per_descriptor, doc_length_mean,
                                                doc_length_std, target_length_inflation,
                                                length_ratio_std, length_outlier_rate,
                                                length_outlier_std, revision_rate,
                                                revision_length_change, noise_rate,
                                                translation_drift, homonym_rate,
                                                max_labels_per_doc, label_count_skew,
                                                src_chars_per_unit, bursty_lemmas,
                                                burstiness, src_lang, tgt_lang,
                                                rng_seed)

SyntheticSpec load_synthetic_spec(const std::filesystem::path &path) {
  const auto text = detail::read_file(path);
  SyntheticSpec spec;
  try {
    spec = nlohmann::json::parse(text).get<SyntheticSpec>();
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
  spec.validate();
  return spec;
}

void save_synthetic_spec(const SyntheticSpec &spec, const std::filesystem::path &path) {
  auto out = detail::open_output(path);
  out << nlohmann::json(spec).dump(2) << '\n';
  detail::finish_output(out, path);
}

namespace {

// Distributions written out by hand: the standard library ones are not
// specified bit-for-bit, and corpora must be reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * n); }
  bool chance(double p) { return uniform() < p; }
  double normal() {
    // Box-Muller; the second value is discarded to keep the stream simple.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  std::size_t pick(const std::vector<double> &cumulative) {
    const double x = uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                 cumulative.size() - 1);
  }
  template <typename T>
  void shuffle(std::vector<T> &v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> zipf_cdf(std::size_t n, double exponent) {
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    cdf[i] = acc;
  }
  return cdf;
}

const std::vector<std::string> kEnglishStopwords = {
    "the", "of", "and", "to", "in", "by", "for", "with", "on", "at",
    "is", "that", "this", "from", "as", "be", "are", "or", "an", "a"};
const std::vector<std::string> kSpanishStopwords = {
    "de", "la", "el", "en", "y", "los", "las", "del", "por", "con",
    "para", "que", "un", "una", "se", "al", "es", "lo", "como", "su"};

std::vector<std::string> make_vocab(Rng &rng, std::size_t n, bool target_style,
                                    const std::unordered_set<std::string> &taken) {
  static const std::vector<std::string> src_onsets = {"b", "c", "d", "f", "g", "h", "k", "l",
                                                      "m", "n", "p", "r", "s", "t", "v", "w",
                                                      "st", "tr", "pl", "gr", "sh", "th"};
  static const std::vector<std::string> src_nuclei = {"a", "e", "i", "o", "u", "ea", "ou"};
  static const std::vector<std::string> src_codas = {"", "", "n", "r", "t", "l", "ck", "nd"};
  static const std::vector<std::string> tgt_onsets = {"b", "c", "d", "f", "g", "j", "l", "m",
                                                      "n", "ñ", "p", "r", "s", "t", "v", "ll",
                                                      "ch", "qu", "br", "pr", "cr"};
  static const std::vector<std::string> tgt_nuclei = {"a", "e", "i", "o", "u", "á", "é",
                                                      "ó", "ia", "ue"};
  static const std::vector<std::string> tgt_codas = {"", "", "", "n", "r", "s", "l"};
  const auto &onsets = target_style ? tgt_onsets : src_onsets;
  const auto &nuclei = target_style ? tgt_nuclei : src_nuclei;
  const auto &codas = target_style ? tgt_codas : src_codas;

  std::unordered_set<std::string> seen = taken;
  std::vector<std::string> words;
  words.reserve(n);
  while (words.size() < n) {
    const std::size_t syllables = 2 + rng.below(3);
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
      w += onsets[rng.below(onsets.size())];
      w += nuclei[rng.below(nuclei.size())];
    }
    w += codas[rng.below(codas.size())];
    if (target_style && rng.chance(0.5)) w += rng.chance(0.5) ? "o" : "a";
    if (seen.insert(w).second && seen.insert(w + "s").second) words.push_back(std::move(w));
  }
  return words;
}

std::string upper_ascii(std::string s) {
  for (auto &c : s) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return s;
}

// Lemma of the r-th single-word item of a topic.
std::size_t single_lemma(const SyntheticWorld::Topic &topic, std::size_t r) {
  for (const auto &item : topic.items) {
    if (item.lemmas.size() != 1) continue;
    if (r-- == 0) return item.lemmas.front();
  }
  return topic.items.back().lemmas.front();
}

SyntheticWorld build_world(const SyntheticSpec &spec, Rng &rng) {
  SyntheticWorld w;
  w.spec = spec;
  w.src_stopwords = kEnglishStopwords;
  w.tgt_stopwords = kSpanishStopwords;
  const std::unordered_set<std::string> src_taken(kEnglishStopwords.begin(),
                                                  kEnglishStopwords.end());
  const std::unordered_set<std::string> tgt_taken(kSpanishStopwords.begin(),
                                                  kSpanishStopwords.end());
  const std::size_t v = spec.vocab_size_per_lang;
  w.src_vocab = make_vocab(rng, v, false, src_taken);
  w.tgt_vocab = make_vocab(rng, v, true, tgt_taken);

  w.to_tgt.resize(v);
  std::iota(w.to_tgt.begin(), w.to_tgt.end(), 0);
  rng.shuffle(w.to_tgt);

  w.src_variant.resize(v);
  w.tgt_variant.resize(v);
  for (std::size_t i = 0; i < v; ++i) {
    if (rng.chance(0.6)) w.src_variant[i] = w.src_vocab[i] + "s";
    if (rng.chance(0.6)) w.tgt_variant[i] = w.tgt_vocab[i] + "s";
  }

  for (std::size_t d = 0; d < spec.n_descriptors; ++d) {
    SyntheticWorld::Topic topic;
    topic.code = DescriptorCode{static_cast<std::uint32_t>(1001 + d)};
    std::vector<std::size_t> pool(v);
    std::iota(pool.begin(), pool.end(), 0);
    // Partial Fisher-Yates for a distinct sample.
    for (std::size_t i = 0; i < spec.lemmas_per_descriptor; ++i) {
      std::swap(pool[i], pool[i + rng.below(v - i)]);
    }
    for (std::size_t i = 0; i < spec.lemmas_per_descriptor; ++i) {
      topic.items.push_back({{pool[i]}});
    }
    // A few frequent two-word compounds per topic.
    for (std::size_t c = 0; c + 1 < std::min<std::size_t>(6, spec.lemmas_per_descriptor); c += 2) {
      const auto pos = static_cast<std::ptrdiff_t>(c + 1);
      topic.items.insert(topic.items.begin() + pos, {{pool[c], pool[c + 1]}});
    }
    topic.cumulative = zipf_cdf(topic.items.size(), 0.9);
    w.topics.push_back(std::move(topic));
  }

  // Homonymy: a topic lemma may share its target word with the lemma of the
  // same rank in another topic, so target documents leak into that topic.
  if (spec.n_descriptors > 1) {
    for (std::size_t d = 0; d < w.topics.size(); ++d) {
      for (std::size_t r = 0; r < spec.lemmas_per_descriptor; ++r) {
        if (!rng.chance(spec.homonym_rate)) continue;
        std::size_t other = rng.below(w.topics.size() - 1);
        if (other >= d) ++other;
        const auto a = single_lemma(w.topics[d], r);
        const auto b = single_lemma(w.topics[other], r);
        w.to_tgt[a] = w.to_tgt[b];
      }
    }
  }

  w.background_order.resize(v);
  std::iota(w.background_order.begin(), w.background_order.end(), 0);
  rng.shuffle(w.background_order);
  w.background_cumulative = zipf_cdf(v, 1.0);
  return w;
}

Thesaurus build_thesaurus(const SyntheticWorld &w) {
  std::vector<Descriptor> descriptors;
  std::map<int, std::size_t> field_head;
  for (std::size_t d = 0; d < w.topics.size(); ++d) {
    const auto &topic = w.topics[d];
    Descriptor desc;
    desc.code = topic.code;
    desc.field_id = static_cast<int>(d % 5) + 1;
    desc.microthesaurus_id = static_cast<int>(d % 12) + 1;
    const auto &head = topic.items.front().lemmas.front();
    const auto &second = topic.items[2 % topic.items.size()].lemmas.front();
    desc.labels[w.spec.src_lang] =
        upper_ascii(w.src_vocab[head] + " " + w.src_vocab[second]);
    desc.labels[w.spec.tgt_lang] =
        upper_ascii(w.tgt_vocab[w.to_tgt[second]] + " " + w.tgt_vocab[w.to_tgt[head]]);
    descriptors.push_back(std::move(desc));
  }
  for (std::size_t d = 0; d < descriptors.size(); ++d) {
    auto [it, fresh] = field_head.emplace(descriptors[d].field_id, d);
    if (!fresh) {
      descriptors[d].broader.insert(descriptors[it->second].code);
      descriptors[it->second].narrower.insert(descriptors[d].code);
    }
    if (d % 7 == 0 && d + 1 < descriptors.size()) {
      descriptors[d].related.insert(descriptors[d + 1].code);
      descriptors[d + 1].related.insert(descriptors[d].code);
    }
  }
  return Thesaurus::build({w.spec.src_lang, w.spec.tgt_lang}, std::move(descriptors));
}

LanguageResources build_resources(const SyntheticWorld &w, bool target) {
  std::set<std::string> stopwords;
  for (const auto &s : target ? w.tgt_stopwords : w.src_stopwords) stopwords.insert(s);
  std::map<std::string, std::string> lexicon;
  const auto &vocab = target ? w.tgt_vocab : w.src_vocab;
  const auto &variants = target ? w.tgt_variant : w.src_variant;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (!variants[i].empty()) lexicon[variants[i]] = vocab[i];
  }
  std::set<std::vector<std::string>> compounds;
  for (const auto &topic : w.topics) {
    for (const auto &item : topic.items) {
      if (item.lemmas.size() < 2) continue;
      if (target) {
        compounds.insert(
            {w.tgt_vocab[w.to_tgt[item.lemmas[1]]], w.tgt_vocab[w.to_tgt[item.lemmas[0]]]});
      } else {
        compounds.insert({w.src_vocab[item.lemmas[0]], w.src_vocab[item.lemmas[1]]});
      }
    }
  }
  return LanguageResources::create(target ? w.spec.tgt_lang : w.spec.src_lang,
                                   std::move(stopwords), std::move(lexicon),
                                   {compounds.begin(), compounds.end()});
}

// One content unit of a document: a topic item or a background lemma.
struct Draw {
  bool background = false;
  std::size_t topic = 0;
  std::size_t item = 0;
  std::size_t lemma = 0;  // background only
};

struct DocPlan {
  std::set<DescriptorCode> labels;
  std::vector<std::size_t> topics;
  std::vector<double> mixture_cdf;
  std::vector<std::size_t> bursty;  // lemmas this document keeps repeating
};

DocPlan plan_document(const SyntheticWorld &w, Rng &rng) {
  DocPlan plan;
  // P(k) proportional to k^label_count_skew.
  std::vector<double> k_cdf;
  double k_acc = 0.0;
  for (std::size_t j = 1; j <= w.spec.max_labels_per_doc; ++j) {
    k_cdf.push_back(k_acc += std::pow(static_cast<double>(j), w.spec.label_count_skew));
  }
  const std::size_t k = 1 + rng.pick(k_cdf);
  std::vector<std::size_t> chosen;
  while (chosen.size() < k) {
    const std::size_t t = rng.below(w.topics.size());
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
  }
  double acc = 0.0;
  for (auto t : chosen) {
    plan.topics.push_back(t);
    plan.labels.insert(w.topics[t].code);
    acc += 0.2 + rng.uniform();
    plan.mixture_cdf.push_back(acc);
  }
  for (std::size_t i = 0; i < w.spec.bursty_lemmas; ++i) {
    plan.bursty.push_back(rng.below(w.src_vocab.size()));
  }
  return plan;
}

Draw draw_unit(const SyntheticWorld &w, const DocPlan &plan, double noise_rate, Rng &rng) {
  Draw d;
  if (rng.chance(noise_rate)) {
    d.background = true;
    if (!plan.bursty.empty() && rng.chance(w.spec.burstiness)) {
      d.lemma = plan.bursty[rng.below(plan.bursty.size())];
    } else {
      d.lemma = w.background_order[rng.pick(w.background_cumulative)];
    }
  } else {
    const std::size_t slot = rng.pick(plan.mixture_cdf);
    d.topic = plan.topics[slot];
    d.item = rng.pick(w.topics[d.topic].cumulative);
  }
  return d;
}

std::vector<std::size_t> unit_lemmas(const SyntheticWorld &w, const Draw &d) {
  if (d.background) return {d.lemma};
  return w.topics[d.topic].items[d.item].lemmas;
}

std::uint64_t text_length(const std::vector<std::string> &words) {
  std::uint64_t n = words.empty() ? 0 : words.size() - 1;
  for (const auto &word : words) n += utf8_length(word);
  return n;
}

void capitalize(std::string &word) {
  if (!word.empty() && word[0] >= 'a' && word[0] <= 'z') word[0] = static_cast<char>(word[0] - 32);
}

// Renders units as words. Sentence breaks and surface variants are random;
// stopwords are inserted separately.
std::vector<std::string> render_units(const SyntheticWorld &w, const std::vector<Draw> &units,
                                      bool target, Rng &rng) {
  std::vector<std::string> words;
  for (const auto &u : units) {
    auto lemmas = unit_lemmas(w, u);
    if (target) {
      for (auto &l : lemmas) l = w.to_tgt[l];
      if (lemmas.size() == 2) std::swap(lemmas[0], lemmas[1]);
    }
    for (auto l : lemmas) {
      const auto &variant = target ? w.tgt_variant[l] : w.src_variant[l];
      const auto &base = target ? w.tgt_vocab[l] : w.src_vocab[l];
      words.push_back(!variant.empty() && rng.chance(0.3) ? variant : base);
    }
  }
  return words;
}

void punctuate(std::vector<std::string> &words, Rng &rng) {
  bool sentence_start = true;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (sentence_start) capitalize(words[i]);
    sentence_start = false;
    if (i + 1 == words.size() || rng.chance(1.0 / 14.0)) {
      words[i] += '.';
      sentence_start = true;
    } else if (rng.chance(1.0 / 25.0)) {
      words[i] += ',';
    }
  }
}

std::string join_words(const std::vector<std::string> &words) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) text.push_back(' ');
    text += words[i];
  }
  return text;
}

// Inserts stopwords at random gaps until the text reaches target_chars.
void pad_with_stopwords(std::vector<std::string> &words, const std::vector<std::string> &stops,
                        std::uint64_t target_chars, Rng &rng) {
  std::uint64_t len = text_length(words);
  while (len < target_chars) {
    const auto &sw = stops[rng.below(stops.size())];
    const std::uint64_t added = utf8_length(sw) + 1;
    // Stop when one more word would overshoot further than we undershoot.
    if (len + added > target_chars && (len + added - target_chars) > (target_chars - len)) break;
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.below(words.size() + 1)), sw);
    len += added;
  }
}

DocumentPair make_pair(const SyntheticWorld &w, const DocPlan &plan, std::size_t n_units,
                       bool outlier, double noise_rate, Rng &rng, const std::string &pair_id) {
  const auto &spec = w.spec;

  std::vector<Draw> src_units;
  src_units.reserve(n_units);
  for (std::size_t i = 0; i < n_units; ++i) src_units.push_back(draw_unit(w, plan, noise_rate, rng));

  auto tgt_units = src_units;
  for (auto &u : tgt_units) {
    if (rng.chance(spec.translation_drift)) u = draw_unit(w, plan, noise_rate, rng);
  }

  // Source text: content words with roughly one stopword per three units.
  auto src_words = render_units(w, src_units, false, rng);
  {
    std::vector<std::string> with_stops;
    with_stops.reserve(src_words.size() * 4 / 3);
    for (auto &word : src_words) {
      if (rng.chance(0.33)) with_stops.push_back(w.src_stopwords[rng.below(w.src_stopwords.size())]);
      with_stops.push_back(std::move(word));
    }
    src_words = std::move(with_stops);
  }
  if (spec.src_chars_per_unit > 0.0) {
    pad_with_stopwords(src_words, w.src_stopwords,
                       static_cast<std::uint64_t>(spec.src_chars_per_unit * static_cast<double>(n_units)),
                       rng);
  }
  punctuate(src_words, rng);
  std::string src_text = join_words(src_words);

  // Target text: translated content padded with stopwords to the drawn ratio.
  double ratio = spec.target_length_inflation +
                 (outlier ? spec.length_outlier_std : spec.length_ratio_std) * rng.normal();
  ratio = std::clamp(ratio, 0.5, 2.0);
  const auto target_chars =
      static_cast<std::uint64_t>(std::llround(ratio * static_cast<double>(utf8_length(src_text))));
  auto tgt_words = render_units(w, tgt_units, true, rng);
  // Punctuation adds characters too, so reserve for it before padding.
  const std::uint64_t punct_budget = tgt_words.size() / 12;
  pad_with_stopwords(tgt_words, w.tgt_stopwords,
                     target_chars > punct_budget ? target_chars - punct_budget : 0, rng);
  punctuate(tgt_words, rng);

  DocumentPair pair;
  pair.pair_id = pair_id;
  pair.src = RawDocument{pair_id + "." + spec.src_lang, spec.src_lang, std::move(src_text),
                         plan.labels};
  pair.tgt = RawDocument{pair_id + "." + spec.tgt_lang, spec.tgt_lang, join_words(tgt_words),
                         plan.labels};
  return pair;
}

}  // namespace

ParallelCorpus generate_pairs(const SyntheticWorld &world, std::size_t n, double noise_rate,
                              std::uint64_t seed, const std::string &prefix) {
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) throw ConfigError("noise_rate must lie in [0, 1)");
  Rng rng(seed);
  ParallelCorpus corpus;
  corpus.src_lang = world.spec.src_lang;
  corpus.tgt_lang = world.spec.tgt_lang;
  corpus.pairs.reserve(n);
  const auto &spec = world.spec;
  // Exact counts per set keep small test sets comparable across seeds.
  auto mark = [&](double rate, std::size_t first) {
    std::vector<bool> flags(n, false);
    if (first >= n) return flags;
    std::vector<std::size_t> idx(n - first);
    std::iota(idx.begin(), idx.end(), first);
    rng.shuffle(idx);
    const auto count = std::min(idx.size(), static_cast<std::size_t>(std::llround(rate * n)));
    for (std::size_t i = 0; i < count; ++i) flags[idx[i]] = true;
    return flags;
  };
  const auto outliers = mark(spec.length_outlier_rate, 0);
  const auto revisions = mark(spec.revision_rate, 1);
  std::vector<std::pair<DocPlan, std::size_t>> earlier;
  for (std::size_t i = 0; i < n; ++i) {
    DocPlan plan;
    std::size_t n_units = 0;
    if (revisions[i]) {
      // A revised version: same subject matter, clearly different length.
      const auto &[base_plan, base_units] = earlier[rng.below(earlier.size())];
      plan = base_plan;
      double scale = 1.0 + spec.revision_length_change * (0.5 + rng.uniform());
      if (rng.chance(0.5)) scale = 1.0 / scale;
      n_units = static_cast<std::size_t>(
          std::max(20.0, std::round(static_cast<double>(base_units) * scale)));
    } else {
      plan = plan_document(world, rng);
      const double raw_len = spec.doc_length_mean + spec.doc_length_std * rng.normal();
      n_units = static_cast<std::size_t>(std::max(20.0, std::round(raw_len)));
    }
    corpus.pairs.push_back(make_pair(world, plan, n_units, outliers[i], noise_rate, rng,
                                     fmt::format("{}{:04d}", prefix, i)));
    earlier.emplace_back(std::move(plan), n_units);
  }
  return corpus;
}

SyntheticCorpus generate_synthetic(const SyntheticSpec &spec) {
  spec.validate();
  Rng rng(derive_seed(spec.rng_seed, 0));
  SyntheticCorpus out;
  out.world = build_world(spec, rng);
  out.thesaurus = build_thesaurus(out.world);
  out.src_resources = build_resources(out.world, false);
  out.tgt_resources = build_resources(out.world, true);
  out.train = generate_pairs(out.world, spec.n_train_docs, spec.noise_rate,
                             derive_seed(spec.rng_seed, 1), "r");
  out.test = generate_pairs(out.world, spec.n_test_pairs, spec.noise_rate,
                            derive_seed(spec.rng_seed, 2), "t");
  return out;
}

void save_synthetic(const SyntheticCorpus &corpus, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  save_synthetic_spec(corpus.world.spec, dir / "spec.json");
  save_thesaurus(corpus.thesaurus, dir / "thesaurus.txt");
  save_resources(corpus.src_resources, dir / "resources");
  save_resources(corpus.tgt_resources, dir / "resources");
  save_parallel_corpus(corpus.train, dir, "train");
  save_parallel_corpus(corpus.test, dir, "test");
}

}  // namespace xlingua
