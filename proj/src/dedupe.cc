#include <algorithm>

#include <fmt/format.h>

#include "utf8.h"
#include "xlingua/error.h"
#include "xlingua/similarity.h"

namespace xlingua {

std::vector<std::string> char_shingles(std::string_view text, std::size_t n) {
  if (n == 0) throw InvalidArgument("shingle size must be positive");
  // Byte offsets of every code point, plus the end.
  std::vector<std::size_t> offsets;
  std::size_t i = 0;
  while (i < text.size()) {
    offsets.push_back(i);
    detail::decode_utf8(text, i);
  }
  offsets.push_back(text.size());
  const std::size_t count = offsets.size() - 1;

  std::vector<std::string> shingles;
  if (count == 0) return shingles;
  if (count < n) {
    shingles.emplace_back(text);
    return shingles;
  }
  shingles.reserve(count - n + 1);
  for (std::size_t k = 0; k + n <= count; ++k) {
    shingles.emplace_back(text.substr(offsets[k], offsets[k + n] - offsets[k]));
  }
  std::sort(shingles.begin(), shingles.end());
  shingles.erase(std::unique(shingles.begin(), shingles.end()), shingles.end());
  return shingles;
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x < *y) {
      ++x;
    } else if (*y < *x) {
      ++y;
    } else {
      ++common;
      ++x;
      ++y;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

DedupeResult dedupe(std::span<const RawDocument> docs, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("dedupe threshold must lie in [0, 1]");
  }
  for (const auto &d : docs) {
    if (d.lang != docs.front().lang) {
      throw InvalidArgument(fmt::format("dedupe input mixes languages '{}' and '{}'",
                                        docs.front().lang, d.lang));
    }
  }

  std::vector<const RawDocument *> order;
  order.reserve(docs.size());
  for (const auto &d : docs) order.push_back(&d);
  std::stable_sort(order.begin(), order.end(),
                   [](const RawDocument *a, const RawDocument *b) { return a->id < b->id; });

  DedupeResult result;
  std::vector<std::vector<std::string>> kept_shingles;
  for (const auto *doc : order) {
    auto shingles = char_shingles(doc->text);
    std::optional<DuplicatePair> dup;
    for (std::size_t k = 0; k < result.kept.size(); ++k) {
      const double j = jaccard(kept_shingles[k], shingles);
      if (j >= threshold) {
        dup = DuplicatePair{result.kept[k].id, doc->id, j};
        break;
      }
    }
    if (dup) {
      result.removed.push_back(std::move(*dup));
    } else {
      result.kept.push_back(*doc);
      kept_shingles.push_back(std::move(shingles));
    }
  }
  return result;
}

}  // namespace xlingua
