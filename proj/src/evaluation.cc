#include "xlingua/evaluation.h"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>
#include <unordered_set>

#include <fmt/format.h>

#include "io_util.h"
#include "xlingua/error.h"

namespace xlingua {

namespace {

struct ModeInfo {
  ExperimentMode mode;
  std::string_view id;
};

constexpr ModeInfo kModes[] = {
    {ExperimentMode::kTargetOnly, "T1ES"},
    {ExperimentMode::kReverse, "T1SE"},
    {ExperimentMode::kLengthOnly, "T1ESLF"},
    {ExperimentMode::kMerged, "T3"},
    {ExperimentMode::kBilingual, "BIL"},
    {ExperimentMode::kBilingualWeighted, "BILW"},
    {ExperimentMode::kHalfBilingual, "TH1B"},
    {ExperimentMode::kHalfBilingualWeighted, "TH1BW"},
};

struct Query {
  const DocumentRepr *doc;
  std::string truth_id;
};

struct Layout {
  std::vector<Query> queries;
  std::vector<DocumentRepr> collection;
  bool weighted = false;
  bool length_only = false;
};

std::vector<std::size_t> half_selection(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 engine(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[engine() % i]);
  idx.resize(n / 2);
  std::sort(idx.begin(), idx.end());
  return idx;
}

Layout build_layout(ExperimentMode mode, std::span<const EncodedCorpus> sets,
                    std::uint64_t half_seed) {
  if (mode == ExperimentMode::kMerged) {
    if (sets.size() < 2) throw ConfigError("mode T3 needs at least two test sets");
  } else if (sets.size() != 1) {
    throw ConfigError(fmt::format("mode {} needs exactly one test set, got {}", mode_id(mode),
                                  sets.size()));
  }
  for (const auto &s : sets) {
    if (s.pairs.empty()) throw ConfigError("empty test set");
    if (s.src_lang != sets.front().src_lang || s.tgt_lang != sets.front().tgt_lang) {
      throw ConfigError("merged test sets disagree on languages");
    }
  }

  Layout layout;
  const auto &pairs = sets.front().pairs;
  switch (mode) {
    case ExperimentMode::kTargetOnly:
    case ExperimentMode::kLengthOnly:
      for (const auto &p : pairs) {
        layout.queries.push_back({&p.src, p.tgt.id});
        layout.collection.push_back(p.tgt);
      }
      layout.length_only = mode == ExperimentMode::kLengthOnly;
      break;
    case ExperimentMode::kReverse:
      for (const auto &p : pairs) {
        layout.queries.push_back({&p.tgt, p.src.id});
        layout.collection.push_back(p.src);
      }
      break;
    case ExperimentMode::kMerged:
      for (const auto &s : sets) {
        for (const auto &p : s.pairs) {
          layout.queries.push_back({&p.src, p.tgt.id});
          layout.collection.push_back(p.tgt);
        }
      }
      break;
    case ExperimentMode::kBilingual:
    case ExperimentMode::kBilingualWeighted:
      for (const auto &p : pairs) {
        layout.queries.push_back({&p.src, p.tgt.id});
        layout.collection.push_back(p.src);
        layout.collection.push_back(p.tgt);
      }
      layout.weighted = mode == ExperimentMode::kBilingualWeighted;
      break;
    case ExperimentMode::kHalfBilingual:
    case ExperimentMode::kHalfBilingualWeighted:
      if (pairs.size() < 2) throw ConfigError("half-sized modes need at least two pairs");
      for (auto i : half_selection(pairs.size(), half_seed)) {
        const auto &p = pairs[i];
        layout.queries.push_back({&p.src, p.tgt.id});
        layout.collection.push_back(p.src);
        layout.collection.push_back(p.tgt);
      }
      layout.weighted = mode == ExperimentMode::kHalfBilingualWeighted;
      break;
  }

  std::unordered_set<std::string> ids;
  for (const auto &d : layout.collection) {
    if (!ids.insert(d.id).second) {
      throw ConfigError(fmt::format("document id '{}' occurs twice in the collection", d.id));
    }
  }
  return layout;
}

VariantResult run_variant(const Layout &layout, const LengthModel &model,
                          SimilarityOptions opts, double threshold) {
  VariantResult result;
  result.length_factor = opts.use_length_factor;
  opts.top_k = layout.collection.size();
  std::size_t hits1 = 0, hits3 = 0;
  for (const auto &q : layout.queries) {
    const auto matches = find_most_similar(*q.doc, layout.collection, opts, model);
    QueryOutcome o;
    o.query_id = q.doc->id;
    bool have_other = false;
    for (const auto &m : matches) {
      if (m.candidate_id == q.truth_id) {
        o.true_rank = m.rank;
        o.true_score = m.final_score;
      } else if (!have_other) {
        o.best_other_score = m.final_score;
        have_other = true;
      }
    }
    if (o.true_rank == 0) {
      throw ConfigError(fmt::format("translation '{}' missing from the collection", q.truth_id));
    }
    o.true_ranks_first = o.true_rank == 1;
    hits1 += o.true_rank == 1;
    hits3 += o.true_rank <= 3;
    ++result.rank_histogram[o.true_rank];
    result.outcomes.push_back(std::move(o));
  }
  const double n = static_cast<double>(layout.queries.size());
  result.precision_at_1 = hits1 / n;
  result.precision_at_3 = hits3 / n;
  const auto at = evaluate_threshold(result.outcomes, threshold);
  result.recall_at_threshold = at.recall;
  result.noise_at_threshold = at.noise;
  return result;
}

}  // namespace

std::string_view mode_id(ExperimentMode mode) {
  for (const auto &m : kModes) {
    if (m.mode == mode) return m.id;
  }
  return "?";
}

ExperimentMode parse_mode(std::string_view id) {
  for (const auto &m : kModes) {
    if (m.id == id) return m.mode;
  }
  throw ConfigError(fmt::format("unknown experiment mode '{}'", id));
}

std::vector<ExperimentMode> all_modes() {
  std::vector<ExperimentMode> out;
  for (const auto &m : kModes) out.push_back(m.mode);
  return out;
}

EvaluationReport run_experiment(ExperimentMode mode, std::span<const EncodedCorpus> test_sets,
                                const LengthModel &model, const ExperimentOptions &opts) {
  opts.similarity.validate();
  const auto layout = build_layout(mode, test_sets, opts.half_seed);

  SimilarityOptions sim = opts.similarity;
  sim.same_language_bias = layout.weighted ? opts.similarity.same_language_bias : 1.0;
  sim.length_factor_only = layout.length_only;

  EvaluationReport report;
  report.mode = std::string(mode_id(mode));
  report.queries = layout.queries.size();
  report.collection_size = layout.collection.size();
  report.same_language_bias = sim.same_language_bias;
  report.threshold = opts.similarity.threshold;

  sim.use_length_factor = false;
  report.without_lf = run_variant(layout, model, sim, report.threshold);
  sim.use_length_factor = true;
  report.with_lf = run_variant(layout, model, sim, report.threshold);
  return report;
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
  return grid;
}

ThresholdPoint evaluate_threshold(std::span<const QueryOutcome> outcomes, double threshold) {
  if (outcomes.empty()) throw InvalidArgument("threshold evaluation needs outcomes");
  std::size_t recalled = 0, noisy = 0;
  for (const auto &o : outcomes) {
    if (o.true_ranks_first) {
      recalled += o.true_score >= threshold;
    } else {
      noisy += o.best_other_score >= threshold;
    }
  }
  const double n = static_cast<double>(outcomes.size());
  return {threshold, recalled / n, noisy / n};
}

std::vector<ThresholdPoint> sweep_threshold(std::span<const QueryOutcome> outcomes,
                                            std::span<const double> grid) {
  if (outcomes.empty()) throw InvalidArgument("threshold sweep needs outcomes");
  std::vector<ThresholdPoint> table;
  table.reserve(grid.size());
  for (double t : grid) table.push_back(evaluate_threshold(outcomes, t));
  return table;
}

void write_report(const EvaluationReport &report, std::ostream &out) {
  out << "mode\tvariant\tqueries\tcollection\tbias\tthreshold\tprecision_at_1\tprecision_at_3\t"
         "recall_at_threshold\tnoise_at_threshold\trank_histogram\n";
  for (const auto *v : {&report.without_lf, &report.with_lf}) {
    std::string hist;
    for (const auto &[rank, count] : v->rank_histogram) {
      if (!hist.empty()) hist += ';';
      hist += fmt::format("{}:{}", rank, count);
    }
    out << fmt::format("{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{:.6f}\t{}\n",
                       report.mode, v->length_factor ? "lf" : "no_lf", report.queries,
                       report.collection_size, report.same_language_bias, report.threshold,
                       v->precision_at_1, v->precision_at_3, v->recall_at_threshold,
                       v->noise_at_threshold, hist);
  }
}

void save_report(const EvaluationReport &report, const std::filesystem::path &path) {
  auto out = detail::open_output(path);
  write_report(report, out);
  detail::finish_output(out, path);
}

void write_sweep(std::span<const ThresholdPoint> sweep, std::ostream &out) {
  out << "threshold\trecall\tnoise\n";
  for (const auto &p : sweep) {
    out << fmt::format("{:.2f}\t{:.6f}\t{:.6f}\n", p.threshold, p.recall, p.noise);
  }
}

std::vector<NormalizedDocument> normalize_all(std::span<const RawDocument> docs,
                                              const LanguageResources &res) {
  std::vector<NormalizedDocument> out;
  out.reserve(docs.size());
  for (const auto &d : docs) out.push_back(normalize(d, res));
  return out;
}

namespace {

DocumentRepr encode(const RawDocument &doc, const LanguageResources &res,
                    const DescriptorAssigner &assigner, std::size_t k) {
  const auto norm = normalize(doc, res);
  return DocumentRepr{doc.id, doc.lang, norm.char_length, assigner.assign(norm, k)};
}

}  // namespace

EncodedCorpus encode_corpus(const ParallelCorpus &corpus, const LanguageResources &src_res,
                            const LanguageResources &tgt_res, const DescriptorAssigner &src,
                            const DescriptorAssigner &tgt, std::size_t k) {
  EncodedCorpus out;
  out.src_lang = corpus.src_lang;
  out.tgt_lang = corpus.tgt_lang;
  out.pairs.reserve(corpus.pairs.size());
  for (const auto &p : corpus.pairs) {
    out.pairs.push_back(
        {p.pair_id, encode(p.src, src_res, src, k), encode(p.tgt, tgt_res, tgt, k)});
  }
  return out;
}

LengthModel estimate_length_models(const ParallelCorpus &train, double same_language_sigma) {
  std::vector<LengthSample> forward, backward;
  for (const auto &p : train.pairs) {
    const auto s = utf8_length(p.src.text);
    const auto t = utf8_length(p.tgt.text);
    forward.push_back({s, t});
    backward.push_back({t, s});
  }
  LengthModel model;
  const auto fwd = estimate_length_model(forward);
  const auto bwd = estimate_length_model(backward);
  model.set(train.src_lang, train.tgt_lang, fwd);
  model.set(train.tgt_lang, train.src_lang, bwd);
  model.set_same_language(train.src_lang, same_language_sigma);
  model.set_same_language(train.tgt_lang, same_language_sigma);
  return model;
}

Benchmark prepare_benchmark(const Thesaurus &thesaurus, const LanguageResources &src_res,
                            const LanguageResources &tgt_res, const ParallelCorpus &train,
                            std::span<const ParallelCorpus> tests, const TrainingConfig &config,
                            std::size_t k) {
  std::vector<RawDocument> src_docs, tgt_docs;
  for (const auto &p : train.pairs) {
    src_docs.push_back(p.src);
    tgt_docs.push_back(p.tgt);
  }
  Benchmark b;
  b.src_profiles = train_profiles(normalize_all(src_docs, src_res), thesaurus, config);
  b.tgt_profiles = train_profiles(normalize_all(tgt_docs, tgt_res), thesaurus, config);
  b.length_model = estimate_length_models(train);
  const DescriptorAssigner src(b.src_profiles);
  const DescriptorAssigner tgt(b.tgt_profiles);
  for (const auto &test : tests) {
    b.tests.push_back(encode_corpus(test, src_res, tgt_res, src, tgt, k));
  }
  return b;
}

Benchmark prepare_benchmark(const SyntheticCorpus &corpus, const TrainingConfig &config,
                            std::size_t k) {
  return prepare_benchmark(corpus.thesaurus, corpus.src_resources, corpus.tgt_resources,
                           corpus.train, std::span(&corpus.test, 1), config, k);
}

}  // namespace xlingua
