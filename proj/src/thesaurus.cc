#include "xlingua/thesaurus.h"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "io_util.h"
#include "xlingua/error.h"

namespace xlingua {

std::string to_string(DescriptorCode code) { return std::to_string(code.value); }

namespace {

void check_relation_targets(const std::map<DescriptorCode, Descriptor> &all,
                            const Descriptor &d, const std::set<DescriptorCode> &targets,
                            std::string_view kind) {
  for (auto target : targets) {
    if (target == d.code) {
      throw ValidationError(
          fmt::format("descriptor {} lists itself as {}", d.code.value, kind));
    }
    if (all.count(target) == 0) {
      throw ValidationError(fmt::format("descriptor {} has dangling {} {}->{}",
                                        d.code.value, kind, d.code.value,
                                        target.value));
    }
  }
}

}  // namespace

Thesaurus Thesaurus::build(std::vector<std::string> languages,
                           std::vector<Descriptor> descriptors) {
  if (languages.empty()) throw ValidationError("thesaurus declares no languages");
  {
    std::unordered_set<std::string> seen;
    for (const auto &lang : languages) {
      if (lang.empty()) throw ValidationError("empty language code");
      if (!seen.insert(lang).second) {
        throw ValidationError(fmt::format("language '{}' declared twice", lang));
      }
    }
  }

  Thesaurus t;
  t.languages_ = std::move(languages);
  for (auto &d : descriptors) {
    if (d.code.value == 0) throw ValidationError("descriptor code 0 is not positive");
    const auto code = d.code;
    if (!t.descriptors_.emplace(code, std::move(d)).second) {
      throw ValidationError(fmt::format("duplicate descriptor code {}", code.value));
    }
  }

  for (const auto &[code, d] : t.descriptors_) {
    for (const auto &lang : t.languages_) {
      auto it = d.labels.find(lang);
      if (it == d.labels.end() || it->second.empty()) {
        throw ValidationError(
            fmt::format("descriptor {} has no label for language '{}'", code.value, lang));
      }
    }
    for (const auto &[lang, label] : d.labels) {
      if (!t.has_language(lang)) {
        throw ValidationError(fmt::format(
            "descriptor {} has a label for unconfigured language '{}'", code.value, lang));
      }
    }
    check_relation_targets(t.descriptors_, d, d.broader, "BT");
    check_relation_targets(t.descriptors_, d, d.narrower, "NT");
    check_relation_targets(t.descriptors_, d, d.related, "RT");
  }

  // Symmetry checks run after every target is known to resolve.
  for (const auto &[code, d] : t.descriptors_) {
    for (auto b : d.broader) {
      if (t.descriptors_.at(b).narrower.count(code) == 0) {
        throw ValidationError(fmt::format(
            "descriptor {} has BT {} but {} lacks NT {}", code.value, b.value, b.value,
            code.value));
      }
    }
    for (auto n : d.narrower) {
      if (t.descriptors_.at(n).broader.count(code) == 0) {
        throw ValidationError(fmt::format(
            "descriptor {} has NT {} but {} lacks BT {}", code.value, n.value, n.value,
            code.value));
      }
    }
    for (auto r : d.related) {
      if (t.descriptors_.at(r).related.count(code) == 0) {
        throw ValidationError(fmt::format(
            "descriptor {} has RT {} but {} lacks RT {}", code.value, r.value, r.value,
            code.value));
      }
    }
  }
  return t;
}

bool Thesaurus::has_language(std::string_view lang) const {
  return std::find(languages_.begin(), languages_.end(), lang) != languages_.end();
}

const Descriptor &Thesaurus::at(DescriptorCode code) const {
  auto it = descriptors_.find(code);
  if (it == descriptors_.end()) {
    throw InvalidArgument(fmt::format("unknown descriptor code {}", code.value));
  }
  return it->second;
}

const std::string &Thesaurus::label_of(DescriptorCode code, std::string_view lang) const {
  const auto &d = at(code);
  if (!has_language(lang)) {
    throw InvalidArgument(fmt::format("unknown language '{}'", lang));
  }
  return d.labels.at(std::string(lang));
}

Thesaurus parse_thesaurus(std::istream &in, const std::string &source) {
  std::optional<std::vector<std::string>> languages;
  std::vector<Descriptor> descriptors;
  bool in_record = false;

  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](std::string_view what) -> ParseError {
    return ParseError(fmt::format("{}:{}: {}", source, line_no, what));
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) {
      in_record = false;
      continue;
    }
    if (line.front() == '#') continue;

    const auto fields = detail::split_ws(line);
    const auto tag = fields.front();

    if (tag == "LANGS") {
      if (languages) throw fail("duplicate LANGS header");
      if (!descriptors.empty()) throw fail("LANGS must precede descriptor records");
      if (fields.size() < 2) throw fail("LANGS needs at least one language");
      languages.emplace();
      for (std::size_t i = 1; i < fields.size(); ++i) languages->emplace_back(fields[i]);
      continue;
    }
    if (!languages) throw fail("missing LANGS header");

    if (tag == "D") {
      if (fields.size() != 4) throw fail("expected 'D <code> <field_id> <microthesaurus_id>'");
      Descriptor d;
      if (!detail::parse_int(fields[1], d.code.value) || d.code.value == 0) {
        throw fail(fmt::format("bad descriptor code '{}'", fields[1]));
      }
      if (!detail::parse_int(fields[2], d.field_id)) {
        throw fail(fmt::format("bad field id '{}'", fields[2]));
      }
      if (!detail::parse_int(fields[3], d.microthesaurus_id)) {
        throw fail(fmt::format("bad microthesaurus id '{}'", fields[3]));
      }
      descriptors.push_back(std::move(d));
      in_record = true;
      continue;
    }

    if (!in_record) throw fail(fmt::format("'{}' line outside a descriptor record", tag));
    auto &current = descriptors.back();

    if (tag == "L") {
      if (fields.size() < 3) throw fail("expected 'L <lang> <label>'");
      // The label is everything after the language token, inner spacing kept.
      const auto lang_end =
          static_cast<std::size_t>(fields[1].data() - line.data()) + fields[1].size();
      const auto label = detail::trim(line.substr(lang_end));
      if (!current.labels.emplace(std::string(fields[1]), std::string(label)).second) {
        throw ValidationError(fmt::format("descriptor {} has two labels for '{}'",
                                          current.code.value, fields[1]));
      }
    } else if (tag == "BT" || tag == "NT" || tag == "RT") {
      DescriptorCode target;
      if (fields.size() != 2 || !detail::parse_int(fields[1], target.value)) {
        throw fail(fmt::format("expected '{} <code>'", tag));
      }
      auto &set = tag == "BT" ? current.broader
                  : tag == "NT" ? current.narrower
                                : current.related;
      set.insert(target);
    } else {
      throw fail(fmt::format("unknown record tag '{}'", tag));
    }
  }
  if (in.bad()) throw IoError(fmt::format("read failed for '{}'", source));
  if (!languages) throw ParseError(fmt::format("{}: missing LANGS header", source));
  return Thesaurus::build(std::move(*languages), std::move(descriptors));
}

Thesaurus load_thesaurus(const std::filesystem::path &path) {
  auto in = detail::open_input(path);
  return parse_thesaurus(in, path.string());
}

void write_thesaurus(const Thesaurus &thesaurus, std::ostream &out) {
  out << "LANGS";
  for (const auto &lang : thesaurus.languages()) out << ' ' << lang;
  out << '\n';
  for (const auto &[code, d] : thesaurus.descriptors()) {
    out << '\n'
        << fmt::format("D {} {} {}\n", code.value, d.field_id, d.microthesaurus_id);
    for (const auto &lang : thesaurus.languages()) {
      out << "L " << lang << ' ' << d.labels.at(lang) << '\n';
    }
    for (auto b : d.broader) out << "BT " << b.value << '\n';
    for (auto n : d.narrower) out << "NT " << n.value << '\n';
    for (auto r : d.related) out << "RT " << r.value << '\n';
  }
}

void save_thesaurus(const Thesaurus &thesaurus, const std::filesystem::path &path) {
  auto out = detail::open_output(path);
  write_thesaurus(thesaurus, out);
  detail::finish_output(out, path);
}

}  // namespace xlingua
