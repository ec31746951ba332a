#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "xlingua/corpus.h"
#include "xlingua/descriptor_assigner.h"
#include "xlingua/error.h"
#include "xlingua/evaluation.h"
#include "xlingua/profile_trainer.h"
#include "xlingua/similarity.h"
#include "xlingua/synthetic.h"
#include "xlingua/text_normalize.h"
#include "xlingua/thesaurus.h"

namespace fs = std::filesystem;
using namespace xlingua;

namespace {

LanguageResources resources_for(const std::string &dir, const std::string &lang) {
  if (dir.empty()) return LanguageResources::create(lang, {}, {}, {});
  return load_resources(dir, lang);
}

std::string read_text(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Normalizes and encodes every manifest document with the profile set of its
// language. Documents in other languages are rejected.
struct Encoder {
  std::map<std::string, ProfileSet> profiles;
  std::map<std::string, LanguageResources> resources;
  std::size_t k = kDefaultTopDescriptors;

  void add(ProfileSet set, const std::string &resource_dir) {
    const auto lang = set.lang;
    resources.insert_or_assign(lang, resources_for(resource_dir, lang));
    profiles.insert_or_assign(lang, std::move(set));
  }

  DocumentRepr encode(const RawDocument &doc) const {
    auto p = profiles.find(doc.lang);
    if (p == profiles.end()) {
      throw ValidationError(
          fmt::format("document '{}' is in '{}', no profile set for it", doc.id, doc.lang));
    }
    const auto norm = normalize(doc, resources.at(doc.lang));
    return DocumentRepr{doc.id, doc.lang, norm.char_length, assign(norm, p->second, k)};
  }
};

void print_matches(const std::string &query_id, const std::vector<RankedMatch> &matches) {
  for (const auto &m : matches) {
    fmt::print("{}\t{}\t{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\n", query_id, m.rank, m.candidate_id,
               m.candidate_lang, m.raw_cosine, m.length_factor, m.final_score);
  }
}

LengthModel length_model_or_empty(const std::string &path) {
  return path.empty() ? LengthModel{} : load_length_model(path);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"xlingua: cross-lingual document similarity over a shared descriptor space"};
  app.require_subcommand(1);

  // train
  auto *train = app.add_subcommand("train", "train associate profiles for one language");
  std::string corpus_path, thesaurus_path, resource_dir, out_path, train_lang;
  TrainingConfig config;
  std::string idf_name = to_string(config.idf_variant);
  train->add_option("--corpus", corpus_path, "manifest of manually indexed documents")->required();
  train->add_option("--thesaurus", thesaurus_path, "thesaurus file")->required();
  train->add_option("--resources", resource_dir, "resource directory (<dir>/<lang>/...)");
  train->add_option("--out", out_path, "profile set to write")->required();
  train->add_option("--lang", train_lang, "use only documents in this language");
  train->add_option("--min-doc-freq", config.min_doc_freq);
  train->add_option("--g2-threshold", config.g2_threshold);
  train->add_option("--max-associates", config.max_associates);
  train->add_option("--idf", idf_name, "log_n_over_df or log_n_over_df_plus_one");

  // assign
  auto *assign_cmd = app.add_subcommand("assign", "assign descriptors to one document");
  std::string profiles_path, doc_path, doc_id;
  std::size_t top = kDefaultTopDescriptors;
  assign_cmd->add_option("--profiles", profiles_path)->required();
  assign_cmd->add_option("--doc", doc_path, "plain text file")->required();
  assign_cmd->add_option("--top", top);
  assign_cmd->add_option("--resources", resource_dir);
  assign_cmd->add_option("--thesaurus", thesaurus_path, "for labels");
  assign_cmd->add_option("--id", doc_id, "document id (default: file stem)");

  // similar
  auto *similar = app.add_subcommand("similar", "rank candidates for one query document");
  std::string src_profiles, tgt_profiles, candidates_path, length_model_path, query_id;
  SimilarityOptions opts;
  bool no_lf = false;
  for (auto *cmd : {similar, app.add_subcommand("find-translations",
                                                "report likely translations above a threshold")}) {
    cmd->add_option("--profiles-src", src_profiles)->required();
    cmd->add_option("--profiles-tgt", tgt_profiles)->required();
    cmd->add_option("--candidates", candidates_path, "manifest")->required();
    cmd->add_option("--length-model", length_model_path);
    cmd->add_option("--bias", opts.same_language_bias);
    cmd->add_flag("--no-lf", no_lf);
    cmd->add_option("--resources", resource_dir);
    cmd->add_option("--top-descriptors", top);
  }
  similar->add_option("--query", query_id, "id of the query in the candidate manifest")
      ->required();
  similar->add_option("--top", opts.top_k);
  auto *find = app.get_subcommand("find-translations");
  find->add_option("--threshold", opts.threshold);

  // dedupe
  auto *dedupe_cmd = app.add_subcommand("dedupe", "drop near-duplicate documents");
  std::string docs_path;
  double dedupe_threshold = kDefaultDedupeThreshold;
  dedupe_cmd->add_option("--docs", docs_path, "manifest")->required();
  dedupe_cmd->add_option("--threshold", dedupe_threshold);

  // gen-corpus
  auto *gen = app.add_subcommand("gen-corpus", "write a synthetic bilingual corpus");
  std::string spec_path, out_dir;
  gen->add_option("--spec", spec_path, "JSON spec (defaults when omitted)");
  gen->add_option("--out", out_dir)->required();

  // length-model
  auto *lm_cmd = app.add_subcommand("length-model", "estimate length ratios from translation pairs");
  std::string pairs_dir, pairs_name = "train";
  double same_sigma = kDefaultSameLanguageSigma;
  lm_cmd->add_option("--data", pairs_dir, "directory holding <name>.* pair files")->required();
  lm_cmd->add_option("--name", pairs_name);
  lm_cmd->add_option("--same-language-sigma", same_sigma);
  lm_cmd->add_option("--out", out_path)->required();

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "run one experiment of the matrix");
  std::string mode_name, data_dir, sweep_path;
  std::vector<std::string> extra_tests;
  std::size_t merged_sets = 3;
  evaluate->add_option("--mode", mode_name, "T1ES, T1SE, T1ESLF, T3, BIL, BILW, TH1B, TH1BW")
      ->required();
  evaluate->add_option("--out", out_path, "report file")->required();
  auto *spec_opt = evaluate->add_option("--spec", spec_path, "generate the benchmark from a spec");
  evaluate->add_option("--data", data_dir, "directory written by gen-corpus")->excludes(spec_opt);
  evaluate->add_option("--extra-test", extra_tests, "more test sets in --data (for T3)");
  evaluate->add_option("--merged-sets", merged_sets, "test sets drawn for T3 with --spec");
  evaluate->add_option("--sweep", sweep_path, "also write the threshold sweep (with LF)");
  evaluate->add_option("--bias", opts.same_language_bias);
  evaluate->add_option("--threshold", opts.threshold);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // Usage errors count as validation errors.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*train) {
      config.idf_variant = parse_idf_variant(idf_name);
      config.validate();
      const auto thesaurus = load_thesaurus(thesaurus_path);
      auto docs = load_documents(corpus_path);
      if (docs.empty()) throw ValidationError("corpus manifest lists no documents");
      const auto lang = train_lang.empty() ? docs.front().lang : train_lang;
      std::erase_if(docs, [&](const RawDocument &d) { return d.lang != lang; });
      if (docs.empty()) throw ValidationError(fmt::format("no documents in '{}'", lang));
      const auto set =
          train_profiles(normalize_all(docs, resources_for(resource_dir, lang)), thesaurus, config);
      save_profile_set(set, out_path);
      fmt::print(stderr, "trained {} profiles for '{}' from {} documents\n", set.profiles.size(),
                 lang, docs.size());
    } else if (*assign_cmd) {
      const auto set = load_profile_set(profiles_path);
      std::optional<Thesaurus> thesaurus;
      if (!thesaurus_path.empty()) thesaurus = load_thesaurus(thesaurus_path);
      RawDocument doc{doc_id.empty() ? fs::path(doc_path).stem().string() : doc_id, set.lang,
                      read_text(doc_path), std::nullopt};
      const auto vec =
          assign(normalize(doc, resources_for(resource_dir, set.lang)), set, top);
      for (const auto &e : vec.entries) {
        std::string label;
        if (thesaurus && thesaurus->contains(e.code)) label = thesaurus->label_of(e.code, set.lang);
        fmt::print("{}\t{}\t{:.6f}\t{}\n", doc.id, e.code.value, e.score, label);
      }
    } else if (*similar || *find) {
      opts.use_length_factor = !no_lf && !length_model_path.empty();
      opts.validate();
      Encoder enc;
      enc.k = top;
      auto src_set = load_profile_set(src_profiles);
      const auto src_lang = src_set.lang;
      enc.add(std::move(src_set), resource_dir);
      enc.add(load_profile_set(tgt_profiles), resource_dir);
      if (enc.profiles.size() != 2) throw ValidationError("both profile sets are in one language");
      const auto model = length_model_or_empty(length_model_path);
      std::vector<DocumentRepr> reprs;
      for (const auto &doc : load_documents(candidates_path)) reprs.push_back(enc.encode(doc));
      if (*similar) {
        auto q = std::find_if(reprs.begin(), reprs.end(),
                              [&](const DocumentRepr &r) { return r.id == query_id; });
        if (q == reprs.end()) {
          throw ValidationError(fmt::format("query '{}' is not in the manifest", query_id));
        }
        print_matches(query_id, find_most_similar(*q, reprs, opts, model));
      } else {
        // Queries are the source-language documents, candidates the target ones.
        std::vector<DocumentRepr> targets;
        for (const auto &r : reprs) {
          if (r.lang != src_lang) targets.push_back(r);
        }
        if (targets.empty()) throw ValidationError("no target-language candidates");
        for (const auto &r : reprs) {
          if (r.lang != src_lang) continue;
          if (auto m = detect_translation(r, targets, opts, model)) {
            fmt::print("{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\n", r.id, m->candidate_id, m->raw_cosine,
                       m->length_factor, m->final_score);
          }
        }
      }
    } else if (*dedupe_cmd) {
      std::map<std::string, std::vector<RawDocument>> by_lang;
      for (auto &d : load_documents(docs_path)) by_lang[d.lang].push_back(std::move(d));
      for (const auto &[lang, docs] : by_lang) {
        for (const auto &p : dedupe(docs, dedupe_threshold).removed) {
          fmt::print("{}\t{}\t{:.6f}\n", p.kept_id, p.removed_id, p.jaccard);
        }
      }
    } else if (*gen) {
      const auto spec = spec_path.empty() ? SyntheticSpec{} : load_synthetic_spec(spec_path);
      save_synthetic(generate_synthetic(spec), out_dir);
    } else if (*lm_cmd) {
      save_length_model(estimate_length_models(load_parallel_corpus(pairs_dir, pairs_name), same_sigma),
                        out_path);
    } else if (*evaluate) {
      const auto mode = parse_mode(mode_name);
      opts.validate();
      Benchmark bench;
      if (!data_dir.empty()) {
        const fs::path dir(data_dir);
        const auto thesaurus = load_thesaurus(dir / "thesaurus.txt");
        const auto train_set = load_parallel_corpus(dir, "train");
        const auto src_res = load_resources(dir / "resources", train_set.src_lang);
        const auto tgt_res = load_resources(dir / "resources", train_set.tgt_lang);
        std::vector<ParallelCorpus> tests{load_parallel_corpus(dir, "test")};
        for (const auto &name : extra_tests) tests.push_back(load_parallel_corpus(dir, name));
        bench = prepare_benchmark(thesaurus, src_res, tgt_res, train_set, tests);
      } else {
        const auto spec = spec_path.empty() ? SyntheticSpec{} : load_synthetic_spec(spec_path);
        const auto corpus = generate_synthetic(spec);
        std::vector<ParallelCorpus> tests{corpus.test};
        if (mode == ExperimentMode::kMerged) {
          for (std::size_t i = 1; i < merged_sets; ++i) {
            tests.push_back(generate_pairs(corpus.world, spec.n_test_pairs, spec.noise_rate,
                                           spec.rng_seed + 7919 * i, fmt::format("m{}_", i)));
          }
        }
        bench = prepare_benchmark(corpus.thesaurus, corpus.src_resources, corpus.tgt_resources,
                                  corpus.train, tests);
      }
      ExperimentOptions eo;
      eo.similarity = opts;
      std::span<const EncodedCorpus> sets(bench.tests);
      if (mode != ExperimentMode::kMerged) sets = sets.first(1);
      const auto report = run_experiment(mode, sets, bench.length_model, eo);
      save_report(report, out_path);
      if (!sweep_path.empty()) {
        const auto grid = default_threshold_grid();
        const auto sweep = sweep_threshold(report.with_lf.outcomes, grid);
        std::ofstream out(sweep_path);
        if (!out) throw IoError(fmt::format("cannot write '{}'", sweep_path));
        write_sweep(sweep, out);
      }
      write_report(report, std::cout);
    }
  } catch (const Error &e) {
    fmt::print(stderr, "xlingua: {}\n", e.what());
    return e.kind() == ErrorKind::kIo ? 2 : 1;
  } catch (const std::exception &e) {
    fmt::print(stderr, "xlingua: {}\n", e.what());
    return 1;
  }
  return 0;
}
