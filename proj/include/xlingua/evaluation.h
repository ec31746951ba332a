#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlingua/corpus.h"
#include "xlingua/descriptor_assigner.h"
#include "xlingua/profile_trainer.h"
#include "xlingua/similarity.h"
#include "xlingua/synthetic.h"

namespace xlingua {

// Experiment layouts.
enum class ExperimentMode {
  kTargetOnly,              // T1ES: src queries, tgt collection
  kReverse,                 // T1SE: tgt queries, src collection
  kLengthOnly,              // T1ESLF: length factor alone, cosine ignored
  kMerged,                  // T3: several test sets merged into one collection
  kBilingual,               // BIL: src queries, src+tgt collection, no bias
  kBilingualWeighted,       // BILW: as BIL with the same-language bias
  kHalfBilingual,           // TH1B: random half of the pairs, no bias
  kHalfBilingualWeighted,   // TH1BW: random half of the pairs, with bias
};

std::string_view mode_id(ExperimentMode mode);
// Throws ConfigError for an unknown id.
ExperimentMode parse_mode(std::string_view id);
std::vector<ExperimentMode> all_modes();

struct EncodedPair {
  std::string pair_id;
  DocumentRepr src;
  DocumentRepr tgt;
};

// A test set after normalization and descriptor assignment.
struct EncodedCorpus {
  std::string src_lang;
  std::string tgt_lang;
  std::vector<EncodedPair> pairs;
};

struct ExperimentOptions {
  // Bias is taken from here for the weighted modes (and forced to 1 for the
  // unweighted ones); threshold feeds the recall/noise columns.
  SimilarityOptions similarity;
  std::uint64_t half_seed = 7;
};

struct QueryOutcome {
  std::string query_id;
  std::size_t true_rank = 0;
  double true_score = 0.0;
  double best_other_score = 0.0;  // best-scoring non-translation
  bool true_ranks_first = false;
};

struct VariantResult {
  bool length_factor = false;
  double precision_at_1 = 0.0;
  double precision_at_3 = 0.0;
  std::map<std::size_t, std::size_t> rank_histogram;  // rank of the true translation
  double recall_at_threshold = 0.0;
  double noise_at_threshold = 0.0;
  std::vector<QueryOutcome> outcomes;
};

struct EvaluationReport {
  std::string mode;
  std::size_t queries = 0;
  std::size_t collection_size = 0;
  double same_language_bias = 1.0;
  double threshold = kDefaultThreshold;
  VariantResult without_lf;
  VariantResult with_lf;
};

// Throws ConfigError when the number of test sets does not fit the mode
// (T3 needs at least two, every other mode exactly one).
EvaluationReport run_experiment(ExperimentMode mode, std::span<const EncodedCorpus> test_sets,
                                const LengthModel &model, const ExperimentOptions &opts);

struct ThresholdPoint {
  double threshold = 0.0;
  double recall = 0.0;  // true translation ranked first and passed
  double noise = 0.0;   // a non-translation ranked first and passed
};

// 0.00, 0.01, ..., 1.00
std::vector<double> default_threshold_grid();

// Throws InvalidArgument for an empty outcome set.
std::vector<ThresholdPoint> sweep_threshold(std::span<const QueryOutcome> outcomes,
                                            std::span<const double> grid);
ThresholdPoint evaluate_threshold(std::span<const QueryOutcome> outcomes, double threshold);

// Tab-separated, one header line, one row per variant.
void write_report(const EvaluationReport &report, std::ostream &out);
void save_report(const EvaluationReport &report, const std::filesystem::path &path);
void write_sweep(std::span<const ThresholdPoint> sweep, std::ostream &out);

// ---- end-to-end plumbing ----

std::vector<NormalizedDocument> normalize_all(std::span<const RawDocument> docs,
                                              const LanguageResources &res);

EncodedCorpus encode_corpus(const ParallelCorpus &corpus, const LanguageResources &src_res,
                            const LanguageResources &tgt_res, const DescriptorAssigner &src,
                            const DescriptorAssigner &tgt, std::size_t k = kDefaultTopDescriptors);

// Translation pairs say nothing about how lengths vary between related
// documents of one language, so that spread is configured.
inline constexpr double kDefaultSameLanguageSigma = 0.3;

// Estimates src->tgt and tgt->src entries from translation pairs and adds
// same-language entries with mu 1 and the given sigma.
LengthModel estimate_length_models(const ParallelCorpus &train,
                                   double same_language_sigma = kDefaultSameLanguageSigma);

// Profiles, length model and encoded test sets.
struct Benchmark {
  ProfileSet src_profiles;
  ProfileSet tgt_profiles;
  LengthModel length_model;
  std::vector<EncodedCorpus> tests;
};

Benchmark prepare_benchmark(const Thesaurus &thesaurus, const LanguageResources &src_res,
                            const LanguageResources &tgt_res, const ParallelCorpus &train,
                            std::span<const ParallelCorpus> tests,
                            const TrainingConfig &config = {},
                            std::size_t k = kDefaultTopDescriptors);
// Uses corpus.test as the only test set.
Benchmark prepare_benchmark(const SyntheticCorpus &corpus, const TrainingConfig &config = {},
                            std::size_t k = kDefaultTopDescriptors);

}  // namespace xlingua
