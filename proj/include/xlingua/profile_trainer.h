#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xlingua/text_normalize.h"
#include "xlingua/thesaurus.h"

namespace xlingua {

// Token-level 2x2 table for one (lemma, descriptor) pair. S is the set of
// training documents manually indexed with the descriptor.
struct ContingencyTable {
  std::uint64_t k11 = 0;  // lemma inside S
  std::uint64_t k12 = 0;  // other tokens inside S
  std::uint64_t k21 = 0;  // lemma outside S
  std::uint64_t k22 = 0;  // other tokens outside S

  bool operator==(const ContingencyTable &) const = default;
};

enum class IdfVariant {
  kLogNOverDf,         // ln(N / df)
  kLogNOverDfPlusOne,  // ln(N / (df + 1)) + 1
};

struct TrainingConfig {
  std::uint32_t min_doc_freq = 2;
  double g2_threshold = 3.84;  // chi-square, 1 dof, 95%
  std::size_t max_associates = 300;
  IdfVariant idf_variant = IdfVariant::kLogNOverDfPlusOne;

  // Throws ConfigError.
  void validate() const;
};

std::string to_string(IdfVariant variant);
IdfVariant parse_idf_variant(std::string_view name);

struct Associate {
  std::string lemma;
  double weight = 0.0;

  bool operator==(const Associate &) const = default;
};

struct AssociateProfile {
  DescriptorCode descriptor;
  std::string lang;
  std::vector<Associate> associates;  // descending weight, ties by lemma
  double norm = 0.0;                  // Euclidean norm of the weights

  // Sorts nothing; checks ordering/positivity and fills norm. Throws
  // ValidationError.
  static AssociateProfile make(DescriptorCode descriptor, std::string lang,
                               std::vector<Associate> associates);
};

struct CorpusStats {
  std::uint64_t n_docs = 0;
  std::map<std::string, std::uint32_t> doc_freq;
};

// The trained classifier for one language.
struct ProfileSet {
  std::string lang;
  std::map<DescriptorCode, AssociateProfile> profiles;
  TrainingConfig config;
  CorpusStats corpus_stats;
};

// Throws InvalidArgument on an empty corpus or an empty subset S.
ContingencyTable build_contingency(std::string_view lemma, DescriptorCode descriptor,
                                   std::span<const NormalizedDocument> corpus);

// Dunning's G^2 = 2 * sum O ln(O/E). Degenerate tables (a zero row or
// column) score 0.
double log_likelihood(const ContingencyTable &table);

// Throws InvalidArgument when df is 0 under kLogNOverDf or the lemma is
// unknown to the corpus statistics.
double idf(std::string_view lemma, const CorpusStats &stats, IdfVariant variant);
double idf_value(std::uint64_t n_docs, std::uint64_t df, IdfVariant variant);

// Associate weight = G^2 * idf for lemmas that pass min_doc_freq within S,
// the g2 threshold, and the positive-association test (k11 > E11).
// Throws InvalidArgument on an empty or mixed-language corpus and
// ValidationError when no descriptor has a training document or a document
// references a code the thesaurus lacks.
ProfileSet train_profiles(std::span<const NormalizedDocument> corpus, const Thesaurus &thesaurus,
                          const TrainingConfig &config);

// PROFILESET <lang> <N_docs>
// P <code>
// A <lemma> <weight with 6 decimals>
void write_profile_set(const ProfileSet &set, std::ostream &out);
ProfileSet parse_profile_set(std::istream &in, const std::string &source = "<stream>");
void save_profile_set(const ProfileSet &set, const std::filesystem::path &path);
ProfileSet load_profile_set(const std::filesystem::path &path);

}  // namespace xlingua
