#include "xlingua/profile_trainer.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "io_util.h"
#include "xlingua/error.h"

namespace xlingua {

void TrainingConfig::validate() const {
  if (min_doc_freq < 1) throw ConfigError("min_doc_freq must be at least 1");
  if (!(g2_threshold >= 0.0) || !std::isfinite(g2_threshold)) {
    throw ConfigError("g2_threshold must be a finite nonnegative number");
  }
  if (max_associates < 1) throw ConfigError("max_associates must be at least 1");
}

std::string to_string(IdfVariant variant) {
  switch (variant) {
    case IdfVariant::kLogNOverDf:
      return "log_n_over_df";
    case IdfVariant::kLogNOverDfPlusOne:
      return "log_n_over_df_plus_one";
  }
  return "?";
}

IdfVariant parse_idf_variant(std::string_view name) {
  if (name == "log_n_over_df") return IdfVariant::kLogNOverDf;
  if (name == "log_n_over_df_plus_one") return IdfVariant::kLogNOverDfPlusOne;
  throw ConfigError(fmt::format("unknown idf variant '{}'", name));
}

AssociateProfile AssociateProfile::make(DescriptorCode descriptor, std::string lang,
                                        std::vector<Associate> associates) {
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < associates.size(); ++i) {
    const double w = associates[i].weight;
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError(fmt::format("profile {}: associate '{}' has non-positive weight",
                                        descriptor.value, associates[i].lemma));
    }
    if (i > 0 && w > associates[i - 1].weight) {
      throw ValidationError(fmt::format("profile {}: associates not in descending weight order",
                                        descriptor.value));
    }
    sum_sq += w * w;
  }
  AssociateProfile p;
  p.descriptor = descriptor;
  p.lang = std::move(lang);
  p.associates = std::move(associates);
  p.norm = std::sqrt(sum_sq);
  return p;
}

ContingencyTable build_contingency(std::string_view lemma, DescriptorCode descriptor,
                                   std::span<const NormalizedDocument> corpus) {
  if (corpus.empty()) throw InvalidArgument("empty training corpus");
  ContingencyTable t;
  bool subset_nonempty = false;
  for (const auto &doc : corpus) {
    const bool in_subset = doc.manual_descriptors.count(descriptor) != 0;
    subset_nonempty |= in_subset;
    for (const auto &[l, n] : doc.lemma_freq) {
      const bool match = l == lemma;
      if (in_subset) {
        (match ? t.k11 : t.k12) += n;
      } else {
        (match ? t.k21 : t.k22) += n;
      }
    }
  }
  if (!subset_nonempty) {
    throw InvalidArgument(
        fmt::format("descriptor {} has no training document", descriptor.value));
  }
  return t;
}

double log_likelihood(const ContingencyTable &table) {
  const double k[2][2] = {{static_cast<double>(table.k11), static_cast<double>(table.k12)},
                          {static_cast<double>(table.k21), static_cast<double>(table.k22)}};
  const double rows[2] = {k[0][0] + k[0][1], k[1][0] + k[1][1]};
  const double cols[2] = {k[0][0] + k[1][0], k[0][1] + k[1][1]};
  const double n = rows[0] + rows[1];
  if (rows[0] == 0 || rows[1] == 0 || cols[0] == 0 || cols[1] == 0) return 0.0;

  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (k[i][j] == 0) continue;
      // O ln(O/E) with E = row * col / n, kept as a single ratio.
      sum += k[i][j] * std::log(k[i][j] * n / (rows[i] * cols[j]));
    }
  }
  return std::max(0.0, 2.0 * sum);
}

double idf_value(std::uint64_t n_docs, std::uint64_t df, IdfVariant variant) {
  const double n = static_cast<double>(n_docs);
  switch (variant) {
    case IdfVariant::kLogNOverDf:
      if (df == 0) throw InvalidArgument("idf undefined for df = 0");
      return std::log(n / static_cast<double>(df));
    case IdfVariant::kLogNOverDfPlusOne:
      return std::log(n / (static_cast<double>(df) + 1.0)) + 1.0;
  }
  return 0.0;
}

double idf(std::string_view lemma, const CorpusStats &stats, IdfVariant variant) {
  auto it = stats.doc_freq.find(std::string(lemma));
  const std::uint64_t df = it == stats.doc_freq.end() ? 0 : it->second;
  return idf_value(stats.n_docs, df, variant);
}

namespace {

struct SubsetCounts {
  std::uint64_t tokens = 0;
  std::unordered_map<std::string, std::pair<std::uint64_t, std::uint32_t>> lemmas;  // tok, docs
};

}  // namespace

ProfileSet train_profiles(std::span<const NormalizedDocument> corpus, const Thesaurus &thesaurus,
                          const TrainingConfig &config) {
  config.validate();
  if (corpus.empty()) throw InvalidArgument("empty training corpus");
  const std::string &lang = corpus.front().lang;

  ProfileSet set;
  set.lang = lang;
  set.config = config;
  set.corpus_stats.n_docs = corpus.size();

  std::uint64_t total_tokens = 0;
  std::unordered_map<std::string, std::uint64_t> lemma_total;
  std::map<DescriptorCode, SubsetCounts> subsets;

  for (const auto &doc : corpus) {
    if (doc.lang != lang) {
      throw InvalidArgument(fmt::format("training corpus mixes languages '{}' and '{}'", lang,
                                        doc.lang));
    }
    for (const auto &[lemma, n] : doc.lemma_freq) {
      total_tokens += n;
      lemma_total[lemma] += n;
      ++set.corpus_stats.doc_freq[lemma];
    }
    for (auto code : doc.manual_descriptors) {
      if (!thesaurus.contains(code)) {
        throw ValidationError(fmt::format("document '{}' is indexed with unknown descriptor {}",
                                          doc.id, code.value));
      }
      auto &s = subsets[code];
      for (const auto &[lemma, n] : doc.lemma_freq) {
        s.tokens += n;
        auto &entry = s.lemmas[lemma];
        entry.first += n;
        entry.second += 1;
      }
    }
  }
  if (subsets.empty()) throw ValidationError("no descriptor has any training document");

  for (const auto &[code, subset] : subsets) {
    std::vector<Associate> candidates;
    for (const auto &[lemma, counts] : subset.lemmas) {
      const auto [k11, subset_df] = counts;
      if (subset_df < config.min_doc_freq) continue;
      ContingencyTable t;
      t.k11 = k11;
      t.k12 = subset.tokens - k11;
      t.k21 = lemma_total.at(lemma) - k11;
      t.k22 = (total_tokens - subset.tokens) - t.k21;
      // Positive association: observed k11 above its expectation
      // (k11 + k12)(k11 + k21) / N.
      const auto lhs = static_cast<unsigned __int128>(k11) * total_tokens;
      const auto rhs = static_cast<unsigned __int128>(t.k11 + t.k12) * (t.k11 + t.k21);
      if (lhs <= rhs) continue;
      const double g2 = log_likelihood(t);
      if (g2 < config.g2_threshold) continue;
      const double weight =
          g2 * idf_value(set.corpus_stats.n_docs, set.corpus_stats.doc_freq.at(lemma),
                         config.idf_variant);
      // Anything that would print as 0.000000 cannot survive a save/load.
      if (!(weight >= 5e-7)) continue;
      candidates.push_back({lemma, weight});
    }
    if (candidates.empty()) continue;
    std::sort(candidates.begin(), candidates.end(), [](const Associate &a, const Associate &b) {
      if (a.weight != b.weight) return a.weight > b.weight;
      return a.lemma < b.lemma;
    });
    if (candidates.size() > config.max_associates) candidates.resize(config.max_associates);
    set.profiles.emplace(code, AssociateProfile::make(code, lang, std::move(candidates)));
  }
  return set;
}

void write_profile_set(const ProfileSet &set, std::ostream &out) {
  out << fmt::format("PROFILESET {} {}\n", set.lang, set.corpus_stats.n_docs);
  for (const auto &[code, profile] : set.profiles) {
    out << "P " << code.value << '\n';
    for (const auto &a : profile.associates) {
      out << fmt::format("A {} {:.6f}\n", a.lemma, a.weight);
    }
  }
}

ProfileSet parse_profile_set(std::istream &in, const std::string &source) {
  ProfileSet set;
  bool have_header = false;
  std::optional<DescriptorCode> current;
  std::vector<Associate> associates;
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](std::string_view what) {
    return ParseError(fmt::format("{}:{}: {}", source, line_no, what));
  };
  auto flush = [&] {
    if (!current) return;
    if (set.profiles.count(*current)) {
      throw ValidationError(fmt::format("{}: profile {} appears twice", source, current->value));
    }
    set.profiles.emplace(*current,
                         AssociateProfile::make(*current, set.lang, std::move(associates)));
    associates.clear();
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = detail::split_ws(line);
    if (f[0] == "PROFILESET") {
      if (have_header) throw fail("duplicate PROFILESET header");
      if (f.size() != 3 || !detail::parse_int(f[2], set.corpus_stats.n_docs)) {
        throw fail("expected 'PROFILESET <lang> <N_docs>'");
      }
      set.lang = std::string(f[1]);
      have_header = true;
    } else if (!have_header) {
      throw fail("missing PROFILESET header");
    } else if (f[0] == "P") {
      DescriptorCode code;
      if (f.size() != 2 || !detail::parse_int(f[1], code.value) || code.value == 0) {
        throw fail("expected 'P <code>'");
      }
      flush();
      current = code;
    } else if (f[0] == "A") {
      if (!current) throw fail("associate line before any profile");
      Associate a;
      if (f.size() != 3 || !detail::parse_double(f[2], a.weight)) {
        throw fail("expected 'A <lemma> <weight>'");
      }
      a.lemma = std::string(f[1]);
      associates.push_back(std::move(a));
    } else {
      throw fail(fmt::format("unknown record tag '{}'", f[0]));
    }
  }
  if (in.bad()) throw IoError(fmt::format("read failed for '{}'", source));
  if (!have_header) throw ParseError(fmt::format("{}: missing PROFILESET header", source));
  flush();
  return set;
}

void save_profile_set(const ProfileSet &set, const std::filesystem::path &path) {
  auto out = detail::open_output(path);
  write_profile_set(set, out);
  detail::finish_output(out, path);
}

ProfileSet load_profile_set(const std::filesystem::path &path) {
  auto in = detail::open_input(path);
  return parse_profile_set(in, path.string());
}

}  // namespace xlingua
