#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xlingua/corpus.h"
#include "xlingua/text_normalize.h"
#include "xlingua/thesaurus.h"

namespace xlingua {

// Parameters of the synthetic bilingual world used in place of a real
// manually indexed corpus.
struct SyntheticSpec {
  std::size_t n_descriptors = 30;
  std::size_t n_train_docs = 300;  // training pairs (per language side)
  std::size_t n_test_pairs = 100;
  std::size_t vocab_size_per_lang = 2000;
  std::size_t lemmas_per_descriptor = 48;
  double doc_length_mean = 120.0;  // content tokens
  double doc_length_std = 3.0;
  // Source texts are written to roughly this many characters per content
  // token, padded with stopwords; 0 leaves them unpadded.
  double src_chars_per_unit = 14.0;
  // Centre of the per-pair tgt/src character ratio draw. Realized ratios run
  // about 0.015 higher: target punctuation is only roughly budgeted.
  double target_length_inflation = 1.135;
  double length_ratio_std = 0.03;
  // Some pairs are loosely aligned (annexes, omitted tables); their ratio
  // is drawn with the wider spread.
  double length_outlier_rate = 0.03;
  double length_outlier_std = 0.8;
  // Share of pairs that revise an earlier pair of the same set: same labels
  // and topic mix, fresh wording, length scaled by 1 +- change * U(0.5, 1.5).
  double revision_rate = 0.2;
  double revision_length_change = 0.1;
  double noise_rate = 0.3;  // share of background tokens
  // Share of a translation's content tokens that are re-drawn instead of
  // carried over through the vocabulary mapping.
  double translation_drift = 0.15;
  // Share of target lemmas that are ambiguous between two source lemmas.
  double homonym_rate = 0.1;
  std::size_t max_labels_per_doc = 4;
  // A document gets k labels with probability proportional to k^skew.
  double label_count_skew = 20.0;
  // Each document repeats a few of its own background lemmas; burstiness is
  // the share of background tokens taken from that small set.
  std::size_t bursty_lemmas = 8;
  double burstiness = 0.5;
  std::string src_lang = "en";
  std::string tgt_lang = "es";
  std::uint64_t rng_seed = 20040501;

  // Throws ConfigError.
  void validate() const;
};

SyntheticSpec load_synthetic_spec(const std::filesystem::path &path);  // JSON
void save_synthetic_spec(const SyntheticSpec &spec, const std::filesystem::path &path);

// Hidden generative model behind a synthetic corpus. Kept so that extra test
// sets can be drawn from the same world.
struct SyntheticWorld {
  SyntheticSpec spec;
  std::vector<std::string> src_vocab;
  std::vector<std::string> tgt_vocab;
  std::vector<std::size_t> to_tgt;      // src lemma index -> tgt lemma index
  std::vector<std::string> src_stopwords;
  std::vector<std::string> tgt_stopwords;
  std::vector<std::string> src_variant;  // inflected surface form per src lemma ("" if none)
  std::vector<std::string> tgt_variant;

  struct TopicItem {
    std::vector<std::size_t> lemmas;  // src lemma indices; 2 for a compound
  };
  struct Topic {
    DescriptorCode code;
    std::vector<TopicItem> items;
    std::vector<double> cumulative;  // item sampling CDF
  };
  std::vector<Topic> topics;
  std::vector<std::size_t> background_order;  // Zipf rank -> src lemma index
  std::vector<double> background_cumulative;
};

struct SyntheticCorpus {
  SyntheticWorld world;
  Thesaurus thesaurus;
  LanguageResources src_resources;
  LanguageResources tgt_resources;
  ParallelCorpus train;  // both sides carry manual descriptors
  ParallelCorpus test;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec &spec);

// Draws n more labelled translation pairs from an existing world. Pair ids
// get the given prefix so they do not clash with other sets.
ParallelCorpus generate_pairs(const SyntheticWorld &world, std::size_t n, double noise_rate,
                              std::uint64_t seed, const std::string &prefix);

// Writes thesaurus.txt, spec.json, resources/<lang>/..., train.* and test.*.
void save_synthetic(const SyntheticCorpus &corpus, const std::filesystem::path &dir);

}  // namespace xlingua
