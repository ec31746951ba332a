#include "xlingua/descriptor_assigner.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "xlingua/error.h"

namespace xlingua {

std::optional<double> DescriptorVector::score_of(DescriptorCode code) const {
  for (const auto &e : entries) {
    if (e.code == code) return e.score;
  }
  return std::nullopt;
}

DescriptorAssigner::DescriptorAssigner(const ProfileSet &profiles) : profiles_(&profiles) {
  for (const auto &[code, profile] : profiles.profiles) {
    if (profile.norm <= 0.0) continue;
    const std::size_t idx = codes_.size();
    codes_.push_back(code);
    norms_.push_back(profile.norm);
    for (const auto &a : profile.associates) postings_[a.lemma].push_back({idx, a.weight});
  }
}

DescriptorVector DescriptorAssigner::assign(const NormalizedDocument &doc, std::size_t k) const {
  if (k == 0) throw InvalidArgument("k must be positive");
  if (doc.lang != profiles_->lang) {
    throw InvalidArgument(fmt::format("document '{}' is '{}' but profiles are '{}'", doc.id,
                                      doc.lang, profiles_->lang));
  }
  DescriptorVector out;
  out.doc_id = doc.id;
  out.lang = doc.lang;
  if (doc.lemma_freq.empty()) {
    out.empty_document = true;
    return out;
  }

  // Reduce counts by their gcd so that integer multiples of a document map
  // to bit-identical scores.
  std::uint32_t g = 0;
  for (const auto &[lemma, count] : doc.lemma_freq) g = std::gcd(g, count);

  double doc_sq = 0.0;
  std::vector<double> dots(codes_.size(), 0.0);
  for (const auto &[lemma, count] : doc.lemma_freq) {
    const double c = count / g;
    doc_sq += c * c;
    auto it = postings_.find(lemma);
    if (it == postings_.end()) continue;
    for (const auto &p : it->second) dots[p.profile] += c * p.weight;
  }
  const double doc_norm = std::sqrt(doc_sq);

  for (std::size_t i = 0; i < codes_.size(); ++i) {
    if (dots[i] <= 0.0) continue;
    const double score = std::min(1.0, dots[i] / (doc_norm * norms_[i]));
    out.entries.push_back({codes_[i], score});
  }
  // codes_ is ascending, so a stable sort keeps ties in code order.
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const DescriptorScore &a, const DescriptorScore &b) {
                     return a.score > b.score;
                   });
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

DescriptorVector assign(const NormalizedDocument &doc, const ProfileSet &profiles,
                        std::size_t k) {
  return DescriptorAssigner(profiles).assign(doc, k);
}

}  // namespace xlingua
