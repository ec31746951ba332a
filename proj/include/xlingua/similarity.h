#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xlingua/descriptor_assigner.h"
#include "xlingua/text_normalize.h"

namespace xlingua {

inline constexpr double kDefaultSameLanguageBias = 0.83;
inline constexpr double kDefaultThreshold = 0.70;
inline constexpr double kDefaultDedupeThreshold = 0.95;
inline constexpr double kSigmaFloor = 1e-6;

// What the search layer needs to know about one document.
struct DocumentRepr {
  std::string id;
  std::string lang;
  std::uint64_t char_length = 0;
  DescriptorVector vector;
};

// Mean and standard deviation of char_length(tgt) / char_length(src).
struct LengthStats {
  double mu = 1.0;
  double sigma = 1.0;

  bool operator==(const LengthStats &) const = default;
};

class LengthModel {
 public:
  using Key = std::pair<std::string, std::string>;  // (src_lang, tgt_lang)

  // Throws ConfigError unless mu > 0 and sigma > 0.
  void set(const std::string &src_lang, const std::string &tgt_lang, LengthStats stats);
  // Same-language entries are centred on a ratio of 1.
  void set_same_language(const std::string &lang, double sigma) { set(lang, lang, {1.0, sigma}); }

  const LengthStats *find(const std::string &src_lang, const std::string &tgt_lang) const;
  // Throws ConfigError for a missing pair.
  const LengthStats &at(const std::string &src_lang, const std::string &tgt_lang) const;

  const std::map<Key, LengthStats> &pairs() const { return pairs_; }

 private:
  std::map<Key, LengthStats> pairs_;
};

struct SimilarityOptions {
  bool use_length_factor = true;
  // Ablation: rank by the length factor alone, cosine ignored.
  bool length_factor_only = false;
  double same_language_bias = kDefaultSameLanguageBias;
  double threshold = kDefaultThreshold;
  std::size_t top_k = 10;

  // Throws ConfigError.
  void validate() const;
};

struct ScoreBreakdown {
  double raw_cosine = 0.0;
  double length_factor = 1.0;  // 1 when the length factor is disabled
  double bias = 1.0;           // same_language_bias when it applied
  double final_score = 0.0;
};

struct RankedMatch {
  std::string candidate_id;
  std::string candidate_lang;
  double raw_cosine = 0.0;
  double length_factor = 1.0;
  double final_score = 0.0;
  std::size_t rank = 0;
};

// Cosine over the union of descriptor codes; 0 when either side is empty.
double cosine(const DescriptorVector &a, const DescriptorVector &b);

// exp(-0.5 ((r - mu) / sigma)^2) with r = tgt_len / src_len. Throws
// InvalidArgument for src_len == 0 and ConfigError for an unknown pair.
double length_factor(std::uint64_t src_len, std::uint64_t tgt_len, const std::string &src_lang,
                     const std::string &tgt_lang, const LengthModel &model);

// cosine, times the length factor when enabled, times the same-language
// bias when the candidate shares the query's language.
ScoreBreakdown similarity(const DocumentRepr &query, const DocumentRepr &candidate,
                          const SimilarityOptions &opts, const LengthModel &model);

// Scores every candidate except the query itself (matched by id) and returns
// the top_k by descending final score, ties by ascending candidate id.
// Throws InvalidArgument when no candidate remains.
std::vector<RankedMatch> find_most_similar(const DocumentRepr &query,
                                           std::span<const DocumentRepr> candidates,
                                           const SimilarityOptions &opts,
                                           const LengthModel &model);

// The rank-1 match if its final score reaches opts.threshold.
std::optional<RankedMatch> detect_translation(const DocumentRepr &query,
                                              std::span<const DocumentRepr> candidates,
                                              const SimilarityOptions &opts,
                                              const LengthModel &model);

struct LengthSample {
  std::uint64_t src_len = 0;
  std::uint64_t tgt_len = 0;
};

// Sample mean and (n-1) standard deviation of the length ratios; sigma is
// floored at kSigmaFloor. Throws InvalidArgument for fewer than two samples
// or a zero-length source.
LengthStats estimate_length_model(std::span<const LengthSample> samples);
LengthStats estimate_length_model(
    std::span<const std::pair<NormalizedDocument, NormalizedDocument>> pairs);

// PAIR <src> <tgt> <mu> <sigma>
void write_length_model(const LengthModel &model, std::ostream &out);
LengthModel parse_length_model(std::istream &in, const std::string &source = "<stream>");
void save_length_model(const LengthModel &model, const std::filesystem::path &path);
LengthModel load_length_model(const std::filesystem::path &path);

// ---- near-duplicate filtering ----

inline constexpr std::size_t kShingleSize = 5;

// Sorted, de-duplicated character n-grams (code points) of the raw text.
// Texts shorter than n contribute themselves as a single shingle.
std::vector<std::string> char_shingles(std::string_view text, std::size_t n = kShingleSize);

// Jaccard of two sorted shingle sets; two empty sets count as identical.
double jaccard(std::span<const std::string> a, std::span<const std::string> b);

struct DuplicatePair {
  std::string kept_id;
  std::string removed_id;
  double jaccard = 0.0;
};

struct DedupeResult {
  std::vector<RawDocument> kept;  // ascending id order
  std::vector<DuplicatePair> removed;
};

// Walks the documents in id order and drops each one whose shingle Jaccard
// with an earlier kept document reaches the threshold. Throws
// InvalidArgument for mixed languages.
DedupeResult dedupe(std::span<const RawDocument> docs, double threshold = kDefaultDedupeThreshold);

}  // namespace xlingua
