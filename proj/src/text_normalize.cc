#include "xlingua/text_normalize.h"

#include <algorithm>

#include <fmt/format.h>

#include "io_util.h"
#include "utf8.h"
#include "xlingua/error.h"

namespace xlingua {

namespace {

using detail::decode_utf8;
using detail::encode_utf8;
using detail::kInvalidCodePoint;

// Letters and digits for tokenization purposes. Outside ASCII this is an
// approximation: everything from Latin-1 letters upward counts as a word
// character except the general punctuation / symbol blocks.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  if (cp == kInvalidCodePoint) return false;
  if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  return true;
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148 && (cp % 2 == 1)) return cp + 1;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

std::string join(const std::vector<std::string> &parts, std::size_t begin, std::size_t end,
                 char sep) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace

std::uint64_t utf8_length(std::string_view text) {
  std::uint64_t n = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    decode_utf8(text, i);
    ++n;
  }
  return n;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = decode_utf8(text, i);
    if (is_word_char(cp)) {
      encode_utf8(to_lower(cp), current);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

LanguageResources LanguageResources::create(std::string lang, std::set<std::string> stopwords,
                                            std::map<std::string, std::string> lexicon,
                                            std::vector<std::vector<std::string>> compounds) {
  if (lang.empty()) throw ValidationError("language resources need a language code");
  for (const auto &sw : stopwords) {
    auto it = lexicon.find(sw);
    if (it != lexicon.end() && it->second != sw) {
      throw ValidationError(fmt::format(
          "[{}] stopword '{}' is not a lemma (lexicon maps it to '{}')", lang, sw, it->second));
    }
  }

  LanguageResources res;
  for (const auto &c : compounds) {
    if (c.size() < 2) {
      throw ValidationError(fmt::format("[{}] compound '{}' has fewer than two lemmas", lang,
                                        join(c, 0, c.size(), ' ')));
    }
    const bool all_stop = std::all_of(c.begin(), c.end(),
                                      [&](const std::string &l) { return stopwords.count(l); });
    if (all_stop) {
      throw ValidationError(fmt::format("[{}] compound '{}' consists of stopwords only", lang,
                                        join(c, 0, c.size(), ' ')));
    }
    res.compound_index_.insert(join(c, 0, c.size(), ' '));
    res.max_compound_len_ = std::max(res.max_compound_len_, c.size());
  }
  res.lang_ = std::move(lang);
  res.stopword_index_.insert(stopwords.begin(), stopwords.end());
  res.lexicon_index_.insert(lexicon.begin(), lexicon.end());
  res.stopwords_ = std::move(stopwords);
  res.lexicon_ = std::move(lexicon);
  res.compounds_ = std::move(compounds);
  return res;
}

bool LanguageResources::is_stopword(std::string_view lemma) const {
  return stopword_index_.count(std::string(lemma)) != 0;
}

std::string LanguageResources::lemmatize(std::string_view surface) const {
  auto it = lexicon_index_.find(std::string(surface));
  return it == lexicon_index_.end() ? std::string(surface) : it->second;
}

std::vector<std::string> LanguageResources::join_compounds(
    const std::vector<std::string> &lemmas) const {
  if (max_compound_len_ < 2) return lemmas;
  std::vector<std::string> out;
  out.reserve(lemmas.size());
  std::size_t i = 0;
  while (i < lemmas.size()) {
    std::size_t matched = 0;
    const std::size_t longest = std::min(max_compound_len_, lemmas.size() - i);
    for (std::size_t len = longest; len >= 2; --len) {
      if (compound_index_.count(join(lemmas, i, i + len, ' '))) {
        matched = len;
        break;
      }
    }
    if (matched) {
      out.push_back(join(lemmas, i, i + matched, '_'));
      i += matched;
    } else {
      out.push_back(lemmas[i]);
      ++i;
    }
  }
  return out;
}

NormalizedDocument normalize(const RawDocument &doc, const LanguageResources &res) {
  if (doc.lang != res.lang()) {
    throw InvalidArgument(fmt::format("document '{}' is '{}' but resources are '{}'", doc.id,
                                      doc.lang, res.lang()));
  }
  NormalizedDocument out;
  out.id = doc.id;
  out.lang = doc.lang;
  out.char_length = utf8_length(doc.text);
  if (doc.manual_descriptors) out.manual_descriptors = *doc.manual_descriptors;

  auto tokens = tokenize(doc.text);
  out.token_count = tokens.size();
  for (auto &t : tokens) t = res.lemmatize(t);
  for (auto &lemma : res.join_compounds(tokens)) {
    if (res.is_stopword(lemma)) continue;
    ++out.lemma_freq[lemma];
  }
  return out;
}

LanguageResources load_resources(const std::filesystem::path &dir, const std::string &lang) {
  const auto base = dir / lang;
  if (!std::filesystem::is_directory(base)) {
    throw IoError(fmt::format("resource directory '{}' not found", base.string()));
  }
  std::set<std::string> stopwords;
  std::map<std::string, std::string> lexicon;
  std::vector<std::vector<std::string>> compounds;

  auto for_each_line = [](const std::filesystem::path &path, auto &&fn) {
    if (!std::filesystem::exists(path)) return;
    auto in = detail::open_input(path);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      const auto line = detail::trim(raw);
      if (line.empty() || line.front() == '#') continue;
      fn(line, line_no, path);
    }
  };

  for_each_line(base / "stopwords.txt", [&](std::string_view line, std::size_t, const auto &) {
    stopwords.emplace(line);
  });
  for_each_line(base / "lexicon.tsv",
                [&](std::string_view line, std::size_t line_no, const auto &path) {
                  const auto cols = detail::split_char(line, '\t');
                  if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
                    throw ParseError(fmt::format("{}:{}: expected 'surface<TAB>lemma'",
                                                 path.string(), line_no));
                  }
                  lexicon[std::string(cols[0])] = std::string(cols[1]);
                });
  for_each_line(base / "compounds.txt", [&](std::string_view line, std::size_t, const auto &) {
    std::vector<std::string> seq;
    for (auto part : detail::split_ws(line)) seq.emplace_back(part);
    compounds.push_back(std::move(seq));
  });
  return LanguageResources::create(lang, std::move(stopwords), std::move(lexicon),
                                   std::move(compounds));
}

void save_resources(const LanguageResources &res, const std::filesystem::path &dir) {
  const auto base = dir / res.lang();
  std::filesystem::create_directories(base);
  {
    const auto path = base / "stopwords.txt";
    auto out = detail::open_output(path);
    for (const auto &sw : res.stopwords()) out << sw << '\n';
    detail::finish_output(out, path);
  }
  {
    const auto path = base / "lexicon.tsv";
    auto out = detail::open_output(path);
    for (const auto &[surface, lemma] : res.lexicon()) out << surface << '\t' << lemma << '\n';
    detail::finish_output(out, path);
  }
  {
    const auto path = base / "compounds.txt";
    auto out = detail::open_output(path);
    for (const auto &c : res.compounds()) out << join(c, 0, c.size(), ' ') << '\n';
    detail::finish_output(out, path);
  }
}

}  // namespace xlingua
