#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "xlingua/error.h"
#include "xlingua/evaluation.h"

using namespace xlingua;
namespace fs = std::filesystem;

namespace {

SyntheticSpec small_spec() {
  SyntheticSpec s;
  s.n_descriptors = 8;
  s.n_train_docs = 80;
  s.n_test_pairs = 20;
  s.vocab_size_per_lang = 400;
  s.lemmas_per_descriptor = 20;
  s.rng_seed = 99;
  return s;
}

fs::path scratch(const std::string &name) {
  const auto dir = fs::temp_directory_path() / ("xlingua_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::map<std::string, std::string> read_tree(const fs::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

std::string report_text(const EvaluationReport &r) {
  std::ostringstream out;
  write_report(r, out);
  return out.str();
}

DescriptorVector random_vec(std::mt19937 &rng, int dims, int nnz) {
  std::uniform_real_distribution<double> s(0.05, 1.0);
  std::map<std::uint32_t, double> m;
  while (static_cast<int>(m.size()) < nnz) m[1 + rng() % dims] = s(rng);
  DescriptorVector v;
  for (auto [c, x] : m) v.entries.push_back({{c}, x});
  std::sort(v.entries.begin(), v.entries.end(), [](auto &a, auto &b) {
    return a.score != b.score ? a.score > b.score : a.code < b.code;
  });
  return v;
}

std::map<std::uint32_t, double> dense(const DescriptorVector &v) {
  std::map<std::uint32_t, double> m;
  for (const auto &e : v.entries) m[e.code.value] = e.score;
  return m;
}

// Twenty pairs whose target vector is a noisy copy of the source.
EncodedCorpus micro_corpus(std::mt19937 &rng) {
  EncodedCorpus c{"en", "es", {}};
  std::normal_distribution<double> ratio(1.135, 0.05);
  for (int i = 0; i < 20; ++i) {
    EncodedPair p;
    p.pair_id = "p" + std::to_string(i);
    const auto base = random_vec(rng, 12, 2 + rng() % 4);
    auto noisy = base;
    for (auto &e : noisy.entries) e.score *= 0.6 + 0.8 * (rng() % 1000) / 1000.0;
    if (rng() % 2) noisy.entries.push_back({{static_cast<std::uint32_t>(13 + rng() % 5)}, 0.3});
    std::sort(noisy.entries.begin(), noisy.entries.end(), [](auto &a, auto &b) {
      return a.score != b.score ? a.score > b.score : a.code < b.code;
    });
    const std::uint64_t len = 400 + rng() % 800;
    p.src = {"en" + std::to_string(i), "en", len, base};
    p.tgt = {"es" + std::to_string(i), "es",
             static_cast<std::uint64_t>(std::llround(len * ratio(rng))), noisy};
    c.pairs.push_back(std::move(p));
  }
  return c;
}

}  // namespace

TEST(SyntheticSpec, ValidateAndJson) {
  auto s = small_spec();
  EXPECT_NO_THROW(s.validate());
  const auto dir = scratch("spec");
  save_synthetic_spec(s, dir / "spec.json");
  const auto back = load_synthetic_spec(dir / "spec.json");
  EXPECT_EQ(back.n_descriptors, 8u);
  EXPECT_EQ(back.rng_seed, 99u);
  EXPECT_EQ(back.target_length_inflation, s.target_length_inflation);

  // Missing keys take the defaults.
  std::ofstream(dir / "partial.json") << R"({"n_test_pairs": 7})";
  const auto partial = load_synthetic_spec(dir / "partial.json");
  EXPECT_EQ(partial.n_test_pairs, 7u);
  EXPECT_EQ(partial.n_descriptors, SyntheticSpec{}.n_descriptors);

  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_THROW(load_synthetic_spec(dir / "broken.json"), ParseError);
  EXPECT_THROW(load_synthetic_spec(dir / "missing.json"), IoError);

  s.max_labels_per_doc = 20;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.noise_rate = 1.0;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.src_lang = s.tgt_lang;
  EXPECT_THROW(s.validate(), ConfigError);
  s = small_spec();
  s.lemmas_per_descriptor = 1;
  EXPECT_THROW(s.validate(), ConfigError);
  fs::remove_all(dir);
}

TEST(Synthetic, DeterministicFiles) {
  const auto a = scratch("synth_a"), b = scratch("synth_b");
  save_synthetic(generate_synthetic(small_spec()), a);
  save_synthetic(generate_synthetic(small_spec()), b);
  const auto ta = read_tree(a), tb = read_tree(b);
  EXPECT_FALSE(ta.empty());
  EXPECT_EQ(ta, tb);

  auto other = small_spec();
  other.rng_seed = 100;
  const auto c = scratch("synth_c");
  save_synthetic(generate_synthetic(other), c);
  EXPECT_NE(read_tree(c), ta);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST(Synthetic, Shape) {
  const auto spec = small_spec();
  const auto corpus = generate_synthetic(spec);
  EXPECT_EQ(corpus.thesaurus.size(), spec.n_descriptors);
  EXPECT_EQ(corpus.train.pairs.size(), spec.n_train_docs);
  EXPECT_EQ(corpus.test.pairs.size(), spec.n_test_pairs);
  EXPECT_NO_THROW(corpus.train.validate());
  EXPECT_NO_THROW(corpus.test.validate());
  for (const auto &p : corpus.train.pairs) {
    ASSERT_TRUE(p.src.manual_descriptors.has_value());
    EXPECT_GE(p.src.manual_descriptors->size(), 1u);
    EXPECT_LE(p.src.manual_descriptors->size(), spec.max_labels_per_doc);
    EXPECT_EQ(p.src.manual_descriptors, p.tgt.manual_descriptors);
    EXPECT_EQ(p.src.lang, "en");
    EXPECT_EQ(p.tgt.lang, "es");
  }
  EXPECT_EQ(corpus.src_resources.lang(), "en");
  EXPECT_EQ(corpus.tgt_resources.lang(), "es");
}

TEST(Synthetic, SavedCorpusReloads) {
  const auto corpus = generate_synthetic(small_spec());
  const auto dir = scratch("synth_reload");
  save_synthetic(corpus, dir);
  const auto train = load_parallel_corpus(dir, "train");
  ASSERT_EQ(train.pairs.size(), corpus.train.pairs.size());
  for (std::size_t i = 0; i < train.pairs.size(); ++i) {
    EXPECT_EQ(train.pairs[i].pair_id, corpus.train.pairs[i].pair_id);
    EXPECT_EQ(train.pairs[i].src.text, corpus.train.pairs[i].src.text);
    EXPECT_EQ(train.pairs[i].tgt.text, corpus.train.pairs[i].tgt.text);
    EXPECT_EQ(train.pairs[i].src.manual_descriptors, corpus.train.pairs[i].src.manual_descriptors);
  }
  const auto th = load_thesaurus(dir / "thesaurus.txt");
  EXPECT_EQ(th.size(), corpus.thesaurus.size());
  const auto res = load_resources(dir / "resources", "es");
  EXPECT_EQ(res.stopwords(), corpus.tgt_resources.stopwords());
  fs::remove_all(dir);
}

TEST(Synthetic, NoiselessSingleLabelPairsAgreeOnTopDescriptor) {
  auto spec = small_spec();
  spec.noise_rate = 0.0;
  spec.max_labels_per_doc = 1;
  const auto corpus = generate_synthetic(spec);
  const auto bench = prepare_benchmark(corpus);
  for (const auto &p : bench.tests.front().pairs) {
    ASSERT_FALSE(p.src.vector.empty());
    ASSERT_FALSE(p.tgt.vector.empty());
    EXPECT_EQ(p.src.vector.entries[0].code, p.tgt.vector.entries[0].code) << p.pair_id;
  }
}

TEST(Synthetic, LengthInflationRecovered) {
  auto spec = small_spec();
  spec.n_train_docs = 250;
  const auto corpus = generate_synthetic(spec);
  const auto model = estimate_length_models(corpus.train);
  double sum = 0.0;
  for (const auto &p : corpus.train.pairs) {
    sum += static_cast<double>(utf8_length(p.tgt.text)) / static_cast<double>(utf8_length(p.src.text));
  }
  EXPECT_NEAR(model.at("en", "es").mu, sum / static_cast<double>(corpus.train.pairs.size()), 1e-12);
  // Drawn around 1.135, overshooting slightly.
  EXPECT_GE(model.at("en", "es").mu, 1.135);
  EXPECT_LE(model.at("en", "es").mu, 1.135 + 0.03);
  EXPECT_EQ(model.at("en", "en").mu, 1.0);
  EXPECT_EQ(model.at("es", "es").sigma, kDefaultSameLanguageSigma);
}

TEST(Synthetic, ExtraPairsFromSameWorld) {
  const auto corpus = generate_synthetic(small_spec());
  const auto extra = generate_pairs(corpus.world, 12, 0.3, 5, "x_");
  ASSERT_EQ(extra.pairs.size(), 12u);
  EXPECT_EQ(extra.pairs[0].pair_id.rfind("x_", 0), 0u);
  EXPECT_NO_THROW(extra.validate());
  const auto again = generate_pairs(corpus.world, 12, 0.3, 5, "x_");
  EXPECT_EQ(again.pairs[3].src.text, extra.pairs[3].src.text);
}

TEST(ParallelCorpus, ValidateRejectsBadInput) {
  ParallelCorpus c{"en", "es", {}};
  c.pairs.push_back({"p", {"a", "en", "x", {}}, {"b", "es", "y", {}}});
  EXPECT_NO_THROW(c.validate());
  auto dup = c;
  dup.pairs.push_back(dup.pairs[0]);
  EXPECT_THROW(dup.validate(), ValidationError);
  auto lang = c;
  lang.pairs[0].tgt.lang = "fr";
  EXPECT_THROW(lang.validate(), ValidationError);
}

TEST(Manifest, RoundTrip) {
  const auto dir = scratch("manifest");
  std::ofstream(dir / "a.txt") << "Transport of dangerous goods.";
  std::ofstream(dir / "b.txt") << "Mercancías peligrosas.";
  write_manifest({{"a", "en", "a.txt", {{3}, {1}}}, {"b", "es", "b.txt", {}}}, dir / "m.tsv");
  const auto entries = read_manifest(dir / "m.tsv");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].descriptors, (std::set<DescriptorCode>{{1}, {3}}));
  const auto docs = load_documents(dir / "m.tsv");
  EXPECT_EQ(docs[1].text, "Mercancías peligrosas.");
  EXPECT_EQ(docs[0].manual_descriptors, (std::set<DescriptorCode>{{1}, {3}}));
  EXPECT_FALSE(docs[1].manual_descriptors.has_value());

  std::ofstream(dir / "bad.tsv") << "only\ttwo\n";
  EXPECT_THROW(read_manifest(dir / "bad.tsv"), ParseError);
  std::ofstream(dir / "dangling.tsv") << "z\ten\tnope.txt\t\n";
  EXPECT_THROW(load_documents(dir / "dangling.tsv"), IoError);
  EXPECT_THROW(read_manifest(dir / "none.tsv"), IoError);
  fs::remove_all(dir);
}

TEST(Experiment, ExactCopiesGivePerfectPrecision) {
  std::mt19937 rng(5);
  EncodedCorpus c{"en", "es", {}};
  for (int i = 0; i < 15; ++i) {
    const auto v = random_vec(rng, 30, 3 + rng() % 5);
    c.pairs.push_back({"p" + std::to_string(i), {"e" + std::to_string(i), "en", 100, v},
                       {"s" + std::to_string(i), "es", 114, v}});
  }
  LengthModel m;
  m.set("en", "es", {1.135, 0.05});
  const auto r = run_experiment(ExperimentMode::kTargetOnly, std::span(&c, 1), m, {});
  EXPECT_EQ(r.without_lf.precision_at_1, 1.0);
  EXPECT_EQ(r.with_lf.precision_at_1, 1.0);
  EXPECT_EQ(r.queries, 15u);
  EXPECT_EQ(r.collection_size, 15u);
}

TEST(Experiment, ModeAndSetMismatch) {
  std::mt19937 rng(6);
  const auto c = micro_corpus(rng);
  LengthModel m;
  m.set("en", "es", {1.135, 0.05});
  EXPECT_THROW(run_experiment(ExperimentMode::kMerged, std::span(&c, 1), m, {}), ConfigError);
  const std::vector<EncodedCorpus> two{c, c};
  EXPECT_THROW(run_experiment(ExperimentMode::kTargetOnly, two, m, {}), ConfigError);
  EXPECT_THROW(parse_mode("T9"), ConfigError);
  for (auto mode : all_modes()) EXPECT_EQ(parse_mode(mode_id(mode)), mode);
}

// Every number in the report recomputed by exhaustive scoring and counting.
TEST(Experiment, MicroCorpusMatchesHandDrivenRun) {
  std::mt19937 rng(7);
  const auto corpus = micro_corpus(rng);
  LengthModel model;
  model.set("en", "es", {1.135, 0.05});
  model.set("es", "en", {0.881, 0.04});
  model.set_same_language("en", 0.3);
  model.set_same_language("es", 0.3);
  ExperimentOptions opts;
  opts.similarity.threshold = 0.5;

  struct Case {
    ExperimentMode mode;
    bool bilingual, weighted, reverse, lf_only;
  };
  const Case cases[] = {
      {ExperimentMode::kTargetOnly, false, false, false, false},
      {ExperimentMode::kReverse, false, false, true, false},
      {ExperimentMode::kLengthOnly, false, false, false, true},
      {ExperimentMode::kBilingual, true, false, false, false},
      {ExperimentMode::kBilingualWeighted, true, true, false, false},
  };
  for (const auto &cs : cases) {
    const auto report = run_experiment(cs.mode, std::span(&corpus, 1), model, opts);
    for (bool lf : {false, true}) {
      std::vector<const DocumentRepr *> coll;
      for (const auto &p : corpus.pairs) {
        if (cs.bilingual) coll.push_back(&p.src);
        coll.push_back(cs.reverse ? &p.src : &p.tgt);
      }
      std::size_t at1 = 0, at3 = 0, recalled = 0, noisy = 0;
      std::map<std::size_t, std::size_t> hist;
      for (const auto &p : corpus.pairs) {
        const auto &q = cs.reverse ? p.tgt : p.src;
        const auto &truth = cs.reverse ? p.src.id : p.tgt.id;
        std::vector<std::pair<double, std::string>> scored;
        for (const auto *c : coll) {
          if (c->id == q.id) continue;
          double s = cs.lf_only ? 1.0 : oracle::cosine(dense(q.vector), dense(c->vector));
          if (lf) {
            const auto &st = model.at(q.lang, c->lang);
            const double z = (double(c->char_length) / double(q.char_length) - st.mu) / st.sigma;
            s *= std::exp(-0.5 * z * z);
          }
          if (cs.weighted && c->lang == q.lang) s *= 0.83;
          scored.push_back({s, c->id});
        }
        std::sort(scored.begin(), scored.end(), [](auto &x, auto &y) {
          return x.first != y.first ? x.first > y.first : x.second < y.second;
        });
        std::size_t rank = 0;
        for (std::size_t i = 0; i < scored.size(); ++i) {
          if (scored[i].second == truth) rank = i + 1;
        }
        ++hist[rank];
        at1 += rank == 1;
        at3 += rank <= 3;
        if (rank == 1) {
          recalled += scored[0].first >= 0.5;
        } else {
          noisy += scored[0].first >= 0.5;
        }
      }
      const auto &v = lf ? report.with_lf : report.without_lf;
      SCOPED_TRACE(std::string(mode_id(cs.mode)) + (lf ? " lf" : " no_lf"));
      EXPECT_EQ(v.precision_at_1, at1 / 20.0);
      EXPECT_EQ(v.precision_at_3, at3 / 20.0);
      EXPECT_EQ(v.rank_histogram, hist);
      EXPECT_EQ(v.recall_at_threshold, recalled / 20.0);
      EXPECT_EQ(v.noise_at_threshold, noisy / 20.0);
    }
    EXPECT_EQ(report.collection_size, cs.bilingual ? 40u : 20u);
    EXPECT_EQ(report.same_language_bias, cs.weighted ? 0.83 : 1.0);
  }
}

TEST(Experiment, HalfModesUseHalfThePairs) {
  std::mt19937 rng(8);
  const auto corpus = micro_corpus(rng);
  LengthModel model;
  model.set("en", "es", {1.135, 0.05});
  model.set_same_language("en", 0.3);
  const auto r = run_experiment(ExperimentMode::kHalfBilingualWeighted, std::span(&corpus, 1), model, {});
  EXPECT_EQ(r.queries, 10u);
  EXPECT_EQ(r.collection_size, 20u);
}

TEST(Sweep, EdgesAndMonotonicity) {
  std::vector<QueryOutcome> all_first;
  for (int i = 0; i < 10; ++i) all_first.push_back({"q", 1, 0.3 + 0.05 * i, 0.1, true});
  const auto grid = default_threshold_grid();
  ASSERT_EQ(grid.size(), 101u);
  const auto sw = sweep_threshold(all_first, grid);
  EXPECT_EQ(sw.front().recall, 1.0);
  EXPECT_EQ(evaluate_threshold(all_first, 1.0 + 1e-9).recall, 0.0);

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<QueryOutcome> mixed;
  for (int i = 0; i < 200; ++i) {
    const bool first = u(rng) < 0.8;
    mixed.push_back({"q" + std::to_string(i), first ? 1u : 2u, u(rng), u(rng), first});
  }
  const auto table = sweep_threshold(mixed, grid);
  for (std::size_t i = 1; i < table.size(); ++i) {
    EXPECT_LE(table[i].recall, table[i - 1].recall);
    EXPECT_LE(table[i].noise, table[i - 1].noise);
  }
  EXPECT_THROW(sweep_threshold({}, grid), InvalidArgument);
}

TEST(Experiment, ReportsAreDeterministic) {
  const auto a = prepare_benchmark(generate_synthetic(small_spec()));
  const auto b = prepare_benchmark(generate_synthetic(small_spec()));
  for (auto mode : {ExperimentMode::kTargetOnly, ExperimentMode::kBilingualWeighted,
                    ExperimentMode::kHalfBilingual}) {
    EXPECT_EQ(report_text(run_experiment(mode, a.tests, a.length_model, {})),
              report_text(run_experiment(mode, b.tests, b.length_model, {})));
  }
}
