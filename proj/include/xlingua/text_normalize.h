#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "xlingua/thesaurus.h"

namespace xlingua {

// Per-language normalization resources: a stopword list, a surface-form to
// lemma lexicon, and the multiword compounds that get joined with '_'.
class LanguageResources {
 public:
  LanguageResources() = default;

  // Throws ValidationError when a stopword is not in the lemma space (the
  // lexicon rewrites it), when a compound is shorter than two lemmas, or
  // when a compound consists of stopwords only.
  static LanguageResources create(std::string lang, std::set<std::string> stopwords,
                                  std::map<std::string, std::string> lexicon,
                                  std::vector<std::vector<std::string>> compounds);

  const std::string &lang() const { return lang_; }
  const std::set<std::string> &stopwords() const { return stopwords_; }
  const std::map<std::string, std::string> &lexicon() const { return lexicon_; }
  const std::vector<std::vector<std::string>> &compounds() const { return compounds_; }

  bool is_stopword(std::string_view lemma) const;
  // Identity fallback for unknown surface forms.
  std::string lemmatize(std::string_view surface) const;
  // Greedy longest-match, left to right.
  std::vector<std::string> join_compounds(const std::vector<std::string> &lemmas) const;

 private:
  std::string lang_;
  std::set<std::string> stopwords_;
  std::map<std::string, std::string> lexicon_;
  std::vector<std::vector<std::string>> compounds_;

  std::unordered_set<std::string> stopword_index_;
  std::unordered_map<std::string, std::string> lexicon_index_;
  std::unordered_set<std::string> compound_index_;  // members joined by ' '
  std::size_t max_compound_len_ = 0;
};

struct RawDocument {
  std::string id;
  std::string lang;
  std::string text;
  std::optional<std::set<DescriptorCode>> manual_descriptors;
};

struct NormalizedDocument {
  std::string id;
  std::string lang;
  std::map<std::string, std::uint32_t> lemma_freq;
  std::uint64_t char_length = 0;  // code points of the raw text
  std::uint64_t token_count = 0;  // surface tokens before compounding/stopwords
  std::set<DescriptorCode> manual_descriptors;  // carried over for training
};

// Maximal runs of letters and digits, lowercased. Input is UTF-8; invalid
// bytes are treated as separators.
std::vector<std::string> tokenize(std::string_view text);

// Number of Unicode code points in a UTF-8 string.
std::uint64_t utf8_length(std::string_view text);

// tokenize -> lemmatize -> join compounds -> drop stopwords -> count.
// Throws InvalidArgument if doc.lang differs from res.lang().
NormalizedDocument normalize(const RawDocument &doc, const LanguageResources &res);

// Resource directory layout: <dir>/<lang>/stopwords.txt (one lemma per
// line), lexicon.tsv (surface<TAB>lemma), compounds.txt (space separated
// lemma sequence per line). Missing files mean empty resources.
LanguageResources load_resources(const std::filesystem::path &dir, const std::string &lang);
void save_resources(const LanguageResources &res, const std::filesystem::path &dir);

}  // namespace xlingua
