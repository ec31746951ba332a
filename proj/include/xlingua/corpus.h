#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "xlingua/text_normalize.h"
#include "xlingua/thesaurus.h"

namespace xlingua {

// One line of a corpus manifest:
//   id<TAB>lang<TAB>path<TAB>codes (comma separated, may be empty)
// Relative paths resolve against the manifest's directory.
struct ManifestEntry {
  std::string id;
  std::string lang;
  std::filesystem::path path;
  std::set<DescriptorCode> descriptors;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path &manifest);
void write_manifest(const std::vector<ManifestEntry> &entries,
                    const std::filesystem::path &manifest);

// Reads every document listed in the manifest. Entries with an empty code
// column get no manual descriptors.
std::vector<RawDocument> load_documents(const std::filesystem::path &manifest);

struct DocumentPair {
  std::string pair_id;
  RawDocument src;
  RawDocument tgt;
};

struct ParallelCorpus {
  std::string src_lang;
  std::string tgt_lang;
  std::vector<DocumentPair> pairs;

  // Throws ValidationError for duplicate pair/document ids or a document in
  // the wrong language.
  void validate() const;
};

// Writes <dir>/<name>.tsv (manifest), <dir>/<name>.pairs.tsv
// (pair_id<TAB>src_id<TAB>tgt_id) and one text file per document under
// <dir>/docs/.
void save_parallel_corpus(const ParallelCorpus &corpus, const std::filesystem::path &dir,
                          const std::string &name);
ParallelCorpus load_parallel_corpus(const std::filesystem::path &dir, const std::string &name);

}  // namespace xlingua
