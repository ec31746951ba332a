#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "xlingua/profile_trainer.h"
#include "xlingua/text_normalize.h"
#include "xlingua/thesaurus.h"

namespace xlingua {

inline constexpr std::size_t kDefaultTopDescriptors = 100;

struct DescriptorScore {
  DescriptorCode code;
  double score = 0.0;

  bool operator==(const DescriptorScore &) const = default;
};

// Sparse top-K descriptor representation of one document. Entries are in
// rank order: descending score, ties by ascending code. Scores lie in (0, 1].
struct DescriptorVector {
  std::string doc_id;
  std::string lang;
  std::vector<DescriptorScore> entries;
  bool empty_document = false;  // set when the input had no lemmas

  std::optional<double> score_of(DescriptorCode code) const;
  bool empty() const { return entries.empty(); }
};

// Ranks descriptors for documents of one language by the cosine between the
// document's lemma counts and each profile's associate weights. Holds an
// inverted lemma index over a ProfileSet; the ProfileSet must outlive it.
class DescriptorAssigner {
 public:
  explicit DescriptorAssigner(const ProfileSet &profiles);

  const std::string &lang() const { return profiles_->lang; }

  // Throws InvalidArgument on language mismatch or k == 0. An empty
  // document yields an empty vector with empty_document set.
  DescriptorVector assign(const NormalizedDocument &doc,
                          std::size_t k = kDefaultTopDescriptors) const;

 private:
  struct Posting {
    std::size_t profile;
    double weight;
  };

  const ProfileSet *profiles_;
  std::vector<DescriptorCode> codes_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
};

DescriptorVector assign(const NormalizedDocument &doc, const ProfileSet &profiles,
                        std::size_t k = kDefaultTopDescriptors);

}  // namespace xlingua
