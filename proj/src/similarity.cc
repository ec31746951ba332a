#include "xlingua/similarity.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "io_util.h"
#include "xlingua/error.h"

namespace xlingua {

void LengthModel::set(const std::string &src_lang, const std::string &tgt_lang,
                      LengthStats stats) {
  if (!(stats.mu > 0.0) || !std::isfinite(stats.mu)) {
    throw ConfigError(fmt::format("length model {}->{}: mu must be positive", src_lang, tgt_lang));
  }
  if (!(stats.sigma > 0.0) || !std::isfinite(stats.sigma)) {
    throw ConfigError(
        fmt::format("length model {}->{}: sigma must be positive", src_lang, tgt_lang));
  }
  pairs_[{src_lang, tgt_lang}] = stats;
}

const LengthStats *LengthModel::find(const std::string &src_lang,
                                     const std::string &tgt_lang) const {
  auto it = pairs_.find({src_lang, tgt_lang});
  return it == pairs_.end() ? nullptr : &it->second;
}

const LengthStats &LengthModel::at(const std::string &src_lang,
                                   const std::string &tgt_lang) const {
  if (const auto *s = find(src_lang, tgt_lang)) return *s;
  throw ConfigError(fmt::format("length model has no entry for {}->{}", src_lang, tgt_lang));
}

void SimilarityOptions::validate() const {
  if (!(same_language_bias > 0.0 && same_language_bias <= 1.0)) {
    throw ConfigError("same_language_bias must lie in (0, 1]");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("threshold must lie in [0, 1]");
  }
  if (top_k < 1) throw ConfigError("top_k must be positive");
}

namespace {

std::vector<DescriptorScore> by_code(const DescriptorVector &v) {
  auto entries = v.entries;
  std::sort(entries.begin(), entries.end(),
            [](const DescriptorScore &a, const DescriptorScore &b) { return a.code < b.code; });
  return entries;
}

}  // namespace

double cosine(const DescriptorVector &a, const DescriptorVector &b) {
  if (a.entries.empty() || b.entries.empty()) return 0.0;
  const auto x = by_code(a);
  const auto y = by_code(b);

  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (const auto &e : x) xx += e.score * e.score;
  for (const auto &e : y) yy += e.score * e.score;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].code < y[j].code) {
      ++i;
    } else if (y[j].code < x[i].code) {
      ++j;
    } else {
      xy += x[i].score * y[j].score;
      ++i;
      ++j;
    }
  }
  if (xy <= 0.0) return 0.0;
  // sqrt(xx * yy) keeps self-similarity at exactly 1.
  return std::clamp(xy / std::sqrt(xx * yy), 0.0, 1.0);
}

double length_factor(std::uint64_t src_len, std::uint64_t tgt_len, const std::string &src_lang,
                     const std::string &tgt_lang, const LengthModel &model) {
  if (src_len == 0) throw InvalidArgument("length factor undefined for an empty source");
  const auto &stats = model.at(src_lang, tgt_lang);
  const double r = static_cast<double>(tgt_len) / static_cast<double>(src_len);
  const double z = (r - stats.mu) / stats.sigma;
  return std::exp(-0.5 * z * z);
}

ScoreBreakdown similarity(const DocumentRepr &query, const DocumentRepr &candidate,
                          const SimilarityOptions &opts, const LengthModel &model) {
  ScoreBreakdown s;
  s.raw_cosine = cosine(query.vector, candidate.vector);
  double score = opts.length_factor_only ? 1.0 : s.raw_cosine;
  if (opts.use_length_factor) {
    s.length_factor = length_factor(query.char_length, candidate.char_length, query.lang,
                                    candidate.lang, model);
    score *= s.length_factor;
  }
  if (candidate.lang == query.lang) {
    s.bias = opts.same_language_bias;
    score *= s.bias;
  }
  s.final_score = score;
  return s;
}

std::vector<RankedMatch> find_most_similar(const DocumentRepr &query,
                                           std::span<const DocumentRepr> candidates,
                                           const SimilarityOptions &opts,
                                           const LengthModel &model) {
  opts.validate();
  std::vector<RankedMatch> matches;
  matches.reserve(candidates.size());
  for (const auto &c : candidates) {
    if (c.id == query.id) continue;
    const auto s = similarity(query, c, opts, model);
    matches.push_back({c.id, c.lang, s.raw_cosine, s.length_factor, s.final_score, 0});
  }
  if (matches.empty()) {
    throw InvalidArgument(fmt::format("no candidates to compare with '{}'", query.id));
  }
  const auto better = [](const RankedMatch &a, const RankedMatch &b) {
    if (a.final_score != b.final_score) return a.final_score > b.final_score;
    return a.candidate_id < b.candidate_id;
  };
  const std::size_t keep = std::min(opts.top_k, matches.size());
  std::partial_sort(matches.begin(), matches.begin() + static_cast<std::ptrdiff_t>(keep),
                    matches.end(), better);
  matches.resize(keep);
  for (std::size_t i = 0; i < matches.size(); ++i) matches[i].rank = i + 1;
  return matches;
}

std::optional<RankedMatch> detect_translation(const DocumentRepr &query,
                                              std::span<const DocumentRepr> candidates,
                                              const SimilarityOptions &opts,
                                              const LengthModel &model) {
  auto top_opts = opts;
  top_opts.top_k = 1;
  auto best = find_most_similar(query, candidates, top_opts, model);
  if (best.front().final_score >= opts.threshold) return std::move(best.front());
  return std::nullopt;
}

LengthStats estimate_length_model(std::span<const LengthSample> samples) {
  if (samples.size() < 2) {
    throw InvalidArgument("estimating a length model needs at least two pairs");
  }
  std::vector<double> ratios;
  ratios.reserve(samples.size());
  for (const auto &s : samples) {
    if (s.src_len == 0) throw InvalidArgument("zero-length source document in length sample");
    ratios.push_back(static_cast<double>(s.tgt_len) / static_cast<double>(s.src_len));
  }
  double mean = 0.0;
  for (double r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  double ss = 0.0;
  for (double r : ratios) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / static_cast<double>(ratios.size() - 1));
  return {mean, std::max(sd, kSigmaFloor)};
}

LengthStats estimate_length_model(
    std::span<const std::pair<NormalizedDocument, NormalizedDocument>> pairs) {
  std::vector<LengthSample> samples;
  samples.reserve(pairs.size());
  for (const auto &[src, tgt] : pairs) samples.push_back({src.char_length, tgt.char_length});
  return estimate_length_model(samples);
}

void write_length_model(const LengthModel &model, std::ostream &out) {
  for (const auto &[key, stats] : model.pairs()) {
    out << fmt::format("PAIR {} {} {:.9f} {:.9f}\n", key.first, key.second, stats.mu,
                       stats.sigma);
  }
}

LengthModel parse_length_model(std::istream &in, const std::string &source) {
  LengthModel model;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto f = detail::split_ws(line);
    LengthStats stats;
    if (f.size() != 5 || f[0] != "PAIR" || !detail::parse_double(f[3], stats.mu) ||
        !detail::parse_double(f[4], stats.sigma)) {
      throw ParseError(
          fmt::format("{}:{}: expected 'PAIR <src> <tgt> <mu> <sigma>'", source, line_no));
    }
    model.set(std::string(f[1]), std::string(f[2]), stats);
  }
  if (in.bad()) throw IoError(fmt::format("read failed for '{}'", source));
  return model;
}

void save_length_model(const LengthModel &model, const std::filesystem::path &path) {
  auto out = detail::open_output(path);
  write_length_model(model, out);
  detail::finish_output(out, path);
}

LengthModel load_length_model(const std::filesystem::path &path) {
  auto in = detail::open_input(path);
  return parse_length_model(in, path.string());
}

}  // namespace xlingua
