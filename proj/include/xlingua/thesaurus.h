#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace xlingua {

// Language-independent identifier of a thesaurus descriptor. Always positive
// for descriptors that come out of a validated Thesaurus.
struct DescriptorCode {
  std::uint32_t value = 0;

  auto operator<=>(const DescriptorCode &) const = default;
};

struct Descriptor {
  DescriptorCode code;
  int field_id = 0;
  int microthesaurus_id = 0;
  std::map<std::string, std::string> labels;  // language -> label
  std::set<DescriptorCode> broader;
  std::set<DescriptorCode> narrower;
  std::set<DescriptorCode> related;
};

// Multilingual controlled vocabulary. Immutable once built; construction
// validates every structural invariant and throws ValidationError naming the
// offending code.
//
// The BT/NT/RT relations are kept for completeness. Nothing in the
// similarity pipeline consults them.
class Thesaurus {
 public:
  Thesaurus() = default;

  static Thesaurus build(std::vector<std::string> languages,
                         std::vector<Descriptor> descriptors);

  const std::vector<std::string> &languages() const { return languages_; }
  const std::map<DescriptorCode, Descriptor> &descriptors() const {
    return descriptors_;
  }
  std::size_t size() const { return descriptors_.size(); }

  bool has_language(std::string_view lang) const;
  bool contains(DescriptorCode code) const {
    return descriptors_.count(code) != 0;
  }

  // Throws InvalidArgument for an unknown code.
  const Descriptor &at(DescriptorCode code) const;

  // Throws InvalidArgument for an unknown code or unconfigured language.
  const std::string &label_of(DescriptorCode code, std::string_view lang) const;

 private:
  std::vector<std::string> languages_;
  std::map<DescriptorCode, Descriptor> descriptors_;
};

// Line-oriented text format:
//
//   LANGS en es
//   D <code> <field_id> <microthesaurus_id>
//   L <lang> <label...>
//   BT|NT|RT <code>
//
// Records are separated by blank lines, lines starting with '#' are comments.
Thesaurus parse_thesaurus(std::istream &in, const std::string &source = "<stream>");
Thesaurus load_thesaurus(const std::filesystem::path &path);

void write_thesaurus(const Thesaurus &thesaurus, std::ostream &out);
void save_thesaurus(const Thesaurus &thesaurus, const std::filesystem::path &path);

std::string to_string(DescriptorCode code);

}  // namespace xlingua

template <>
struct std::hash<xlingua::DescriptorCode> {
  std::size_t operator()(xlingua::DescriptorCode code) const noexcept {
    return std::hash<std::uint32_t>{}(code.value);
  }
};
