#include "xlingua/corpus.h"

#include <map>
#include <unordered_set>

#include <fmt/format.h>

#include "io_util.h"
#include "xlingua/error.h"

namespace xlingua {

std::vector<ManifestEntry> read_manifest(const std::filesystem::path &manifest) {
  auto in = detail::open_input(manifest);
  const auto base = manifest.parent_path();
  std::vector<ManifestEntry> entries;
  std::unordered_set<std::string> ids;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (detail::trim(raw).empty() || raw.front() == '#') continue;
    const auto cols = detail::split_char(raw, '\t');
    if (cols.size() != 3 && cols.size() != 4) {
      throw ParseError(fmt::format("{}:{}: expected 'id<TAB>lang<TAB>path<TAB>codes'",
                                   manifest.string(), line_no));
    }
    ManifestEntry e;
    e.id = std::string(cols[0]);
    e.lang = std::string(cols[1]);
    if (e.id.empty() || e.lang.empty() || cols[2].empty()) {
      throw ParseError(fmt::format("{}:{}: empty id, language or path", manifest.string(),
                                   line_no));
    }
    if (!ids.insert(e.id).second) {
      throw ValidationError(fmt::format("{}:{}: duplicate document id '{}'", manifest.string(),
                                        line_no, e.id));
    }
    e.path = std::filesystem::path(std::string(cols[2]));
    if (e.path.is_relative()) e.path = base / e.path;
    if (cols.size() == 4 && !detail::trim(cols[3]).empty()) {
      for (auto part : detail::split_char(detail::trim(cols[3]), ',')) {
        DescriptorCode code;
        if (!detail::parse_int(detail::trim(part), code.value) || code.value == 0) {
          throw ParseError(fmt::format("{}:{}: bad descriptor code '{}'", manifest.string(),
                                       line_no, part));
        }
        e.descriptors.insert(code);
      }
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::vector<ManifestEntry> &entries,
                    const std::filesystem::path &manifest) {
  auto out = detail::open_output(manifest);
  const auto base = manifest.parent_path();
  for (const auto &e : entries) {
    auto path = e.path;
    if (!base.empty() && path.is_absolute() == base.is_absolute()) {
      path = path.lexically_relative(base);
    }
    out << e.id << '\t' << e.lang << '\t' << path.generic_string() << '\t';
    bool first = true;
    for (auto code : e.descriptors) {
      if (!first) out << ',';
      out << code.value;
      first = false;
    }
    out << '\n';
  }
  detail::finish_output(out, manifest);
}

std::vector<RawDocument> load_documents(const std::filesystem::path &manifest) {
  std::vector<RawDocument> docs;
  for (auto &e : read_manifest(manifest)) {
    RawDocument d;
    d.id = std::move(e.id);
    d.lang = std::move(e.lang);
    d.text = detail::read_file(e.path);
    if (!e.descriptors.empty()) d.manual_descriptors = std::move(e.descriptors);
    docs.push_back(std::move(d));
  }
  return docs;
}

void ParallelCorpus::validate() const {
  std::unordered_set<std::string> pair_ids;
  std::unordered_set<std::string> doc_ids;
  for (const auto &p : pairs) {
    if (!pair_ids.insert(p.pair_id).second) {
      throw ValidationError(fmt::format("duplicate pair id '{}'", p.pair_id));
    }
    for (const auto *d : {&p.src, &p.tgt}) {
      if (d->id.empty()) throw ValidationError(fmt::format("pair '{}' has an empty id", p.pair_id));
      if (!doc_ids.insert(d->id).second) {
        throw ValidationError(fmt::format("duplicate document id '{}'", d->id));
      }
    }
    if (p.src.lang != src_lang || p.tgt.lang != tgt_lang) {
      throw ValidationError(fmt::format("pair '{}' is {}->{}, corpus is {}->{}", p.pair_id,
                                        p.src.lang, p.tgt.lang, src_lang, tgt_lang));
    }
  }
}

void save_parallel_corpus(const ParallelCorpus &corpus, const std::filesystem::path &dir,
                          const std::string &name) {
  corpus.validate();
  const auto docs_dir = dir / "docs";
  std::filesystem::create_directories(docs_dir);
  std::vector<ManifestEntry> entries;
  const auto pairs_path = dir / (name + ".pairs.tsv");
  auto pairs_out = detail::open_output(pairs_path);
  for (const auto &p : corpus.pairs) {
    for (const auto *d : {&p.src, &p.tgt}) {
      const auto path = docs_dir / (d->id + ".txt");
      auto out = detail::open_output(path);
      out << d->text;
      detail::finish_output(out, path);
      entries.push_back({d->id, d->lang, path, d->manual_descriptors.value_or(
                                                   std::set<DescriptorCode>{})});
    }
    pairs_out << p.pair_id << '\t' << p.src.id << '\t' << p.tgt.id << '\n';
  }
  detail::finish_output(pairs_out, pairs_path);
  write_manifest(entries, dir / (name + ".tsv"));
}

ParallelCorpus load_parallel_corpus(const std::filesystem::path &dir, const std::string &name) {
  std::map<std::string, RawDocument> by_id;
  for (auto &d : load_documents(dir / (name + ".tsv"))) {
    auto id = d.id;
    by_id.emplace(std::move(id), std::move(d));
  }
  const auto pairs_path = dir / (name + ".pairs.tsv");
  auto in = detail::open_input(pairs_path);
  ParallelCorpus corpus;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (detail::trim(raw).empty()) continue;
    const auto cols = detail::split_char(detail::trim(raw), '\t');
    if (cols.size() != 3) {
      throw ParseError(fmt::format("{}:{}: expected 'pair_id<TAB>src_id<TAB>tgt_id'",
                                   pairs_path.string(), line_no));
    }
    auto take = [&](std::string_view id) {
      auto it = by_id.find(std::string(id));
      if (it == by_id.end()) {
        throw ValidationError(fmt::format("{}:{}: document '{}' not in manifest",
                                          pairs_path.string(), line_no, id));
      }
      return it->second;
    };
    DocumentPair p{std::string(cols[0]), take(cols[1]), take(cols[2])};
    if (corpus.pairs.empty()) {
      corpus.src_lang = p.src.lang;
      corpus.tgt_lang = p.tgt.lang;
    }
    corpus.pairs.push_back(std::move(p));
  }
  corpus.validate();
  return corpus;
}

}  // namespace xlingua
