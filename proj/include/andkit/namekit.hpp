#pragma once

// Name handling: n-gram normalization, character 2-gram profiles and the
// Dice coefficient, accent folding, a rule-based name parser and last-name
// variation measures.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "andkit/error.hpp"
#include "andkit/name_tables_data.hpp"
#include "andkit/util.hpp"

namespace andkit {

// ---------------------------------------------------------------------------
// Code point classification

/// Simple case mapping for Latin, Greek and Cyrillic letters.
inline char32_t to_lower_cp(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x137) return (c % 2 == 0) ? c + 1 : c;
  if (c >= 0x139 && c <= 0x148) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return (c % 2 == 0) ? c + 1 : c;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

inline bool is_letter_cp(char32_t c) {
  if (c < 0x80) return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
  if (c < 0xC0) return false;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c >= 0x2B0 && c <= 0x36F) return false;  // modifier letters, combining marks
  if (c >= 0x2000 && c <= 0x2BFF) return false;  // punctuation and symbols
  if (c >= 0x3000 && c <= 0x303F) return false;
  if (c >= 0xFE30 && c <= 0xFE4F) return false;
  if (c >= 0xFF00 && c <= 0xFF20) return false;
  if (c >= 0xFF3B && c <= 0xFF40) return false;
  if (c >= 0xFF5B && c <= 0xFF65) return false;
  if (c == 0xFFFD || c == 0xFEFF) return false;
  return true;
}

inline std::string unicode_lower(std::string_view s) {
  auto cps = utf8_decode(s);
  for (auto& c : cps) c = to_lower_cp(c);
  return utf8_encode(cps);
}

// ---------------------------------------------------------------------------
// Tables

/// Particle, suffix and transliteration tables. The defaults are compiled in;
/// any of them can be replaced from a data file.
struct NameTables {
  std::set<std::string> particles;
  std::set<std::string> suffixes;
  std::map<char32_t, std::u32string> fold;

  static NameTables builtin();
};

namespace detail {

inline std::vector<std::string> table_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_view(line).empty() || trim_view(line).front() == '#') continue;
    out.push_back(line);
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline std::set<std::string> parse_word_list(std::string_view text) {
  std::set<std::string> out;
  for (const auto& line : detail::table_lines(text)) {
    out.insert(ascii_lower(trim_view(line)));
  }
  return out;
}

/// Parses "letter<TAB>replacement" lines. Replacements may not contain
/// mapped letters, which keeps folding idempotent.
inline std::map<char32_t, std::u32string> parse_fold_table(std::string_view text) {
  std::map<char32_t, std::u32string> out;
  for (const auto& line : detail::table_lines(text)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCategory::config, "bad transliteration line: " + line);
    }
    const auto from = utf8_decode(line.substr(0, tab));
    const auto to = utf8_decode(trim_view(line.substr(tab + 1)));
    if (from.size() != 1) {
      throw Error(ErrorCategory::config,
                  "transliteration key must be one letter: " + line);
    }
    out[from[0]] = to;
  }
  for (const auto& [k, v] : out) {
    for (char32_t c : v) {
      if (out.count(c)) {
        throw Error(ErrorCategory::config,
                    "transliteration output contains a mapped letter");
      }
    }
  }
  return out;
}

inline NameTables NameTables::builtin() {
  NameTables t;
  t.particles = parse_word_list(builtin::kParticles);
  t.suffixes = parse_word_list(builtin::kSuffixes);
  t.fold = parse_fold_table(builtin::kTransliterationTable);
  return t;
}

inline const NameTables& default_name_tables() {
  static const NameTables tables = NameTables::builtin();
  return tables;
}

/// Builtin tables with any non-empty path replacing the matching table.
inline NameTables load_name_tables(const std::string& transliteration_path,
                                   const std::string& particles_path,
                                   const std::string& suffixes_path) {
  NameTables t = NameTables::builtin();
  if (!transliteration_path.empty()) {
    t.fold = parse_fold_table(detail::read_text_file(transliteration_path));
  }
  if (!particles_path.empty()) {
    t.particles = parse_word_list(detail::read_text_file(particles_path));
  }
  if (!suffixes_path.empty()) {
    t.suffixes = parse_word_list(detail::read_text_file(suffixes_path));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Normalization and transliteration

struct NormalizedName {
  std::string text;    // lowercase letters only, UTF-8
  std::string source;  // raw input
};

/// Lowercases and drops every non-letter (spaces, periods, hyphens, digits).
/// Accented letters are kept.
inline NormalizedName normalize_for_ngrams(std::string_view raw) {
  std::u32string out;
  for (char32_t c : utf8_decode(raw)) {
    if (is_letter_cp(c)) out.push_back(to_lower_cp(c));
  }
  return {utf8_encode(out), std::string(raw)};
}

/// Folds accented Latin letters to their base letters ("á" -> "a").
/// Unmapped characters pass through.
inline std::string transliterate(std::string_view raw,
                                 const NameTables& tables = default_name_tables()) {
  std::u32string out;
  for (char32_t c : utf8_decode(raw)) {
    auto it = tables.fold.find(c);
    if (it == tables.fold.end()) {
      out.push_back(c);
    } else {
      out += it->second;
    }
  }
  return utf8_encode(out);
}

// ---------------------------------------------------------------------------
// Character 2-grams

/// Multiset of character bigrams, stored sorted by packed code point pair.
struct BigramProfile {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> grams;
  std::size_t size = 0;

  static std::uint64_t key(char32_t a, char32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  std::uint32_t count(char32_t a, char32_t b) const {
    const auto k = key(a, b);
    auto it = std::lower_bound(
        grams.begin(), grams.end(), k,
        [](const auto& g, std::uint64_t v) { return g.first < v; });
    return (it != grams.end() && it->first == k) ? it->second : 0;
  }

  std::size_t distinct() const { return grams.size(); }
};

inline BigramProfile bigrams_of(std::u32string_view text) {
  BigramProfile p;
  if (text.size() < 2) return p;
  std::vector<std::uint64_t> keys;
  keys.reserve(text.size() - 1);
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    keys.push_back(BigramProfile::key(text[i], text[i + 1]));
  }
  std::sort(keys.begin(), keys.end());
  for (auto k : keys) {
    if (!p.grams.empty() && p.grams.back().first == k) {
      ++p.grams.back().second;
    } else {
      p.grams.emplace_back(k, 1);
    }
  }
  p.size = keys.size();
  return p;
}

inline BigramProfile bigrams(const NormalizedName& name) {
  return bigrams_of(utf8_decode(name.text));
}

/// Multiset intersection size.
inline std::size_t bigram_overlap(const BigramProfile& a, const BigramProfile& b) {
  std::size_t n = 0;
  auto i = a.grams.begin();
  auto j = b.grams.begin();
  while (i != a.grams.end() && j != b.grams.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      n += std::min(i->second, j->second);
      ++i;
      ++j;
    }
  }
  return n;
}

/// 2 * |A ∩ B| / (|A| + |B|) over bigram multisets; 0 when both are empty.
inline double dice_similarity(const BigramProfile& a, const BigramProfile& b) {
  const std::size_t total = a.size + b.size;
  if (total == 0) return 0.0;
  return 2.0 * static_cast<double>(bigram_overlap(a, b)) /
         static_cast<double>(total);
}

inline double dice_similarity(std::string_view a, std::string_view b) {
  return dice_similarity(bigrams(normalize_for_ngrams(a)),
                         bigrams(normalize_for_ngrams(b)));
}

/// Set Jaccard over distinct bigrams. Two names too short to have bigrams
/// score 1 when their normalized texts are equal and non-empty.
inline double bigram_jaccard(const BigramProfile& a, const BigramProfile& b) {
  std::size_t inter = 0;
  auto i = a.grams.begin();
  auto j = b.grams.begin();
  while (i != a.grams.end() && j != b.grams.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.distinct() + b.distinct() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// ---------------------------------------------------------------------------
// Name parsing

struct ParsedName {
  std::string given;
  std::vector<std::string> particles;
  std::string family;  // includes particles, e.g. "van Beethoven"
  std::string suffix;  // lowercase, without periods

  bool operator==(const ParsedName&) const = default;
};

namespace detail {

inline std::string strip_periods_lower(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c != '.' && c != ',') out.push_back(c);
  }
  return unicode_lower(out);
}

inline std::string join(const std::vector<std::string>& tokens,
                        std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace detail

/// Rule-based split of a full name. Trailing generational suffixes are
/// stripped, the last remaining token is the family name and any particles
/// directly before it are absorbed into the family name. "Family, Given"
/// input is recognised by its comma.
inline ParsedName parse_name(std::string_view full,
                             const NameTables& tables = default_name_tables()) {
  const auto text = trim_view(full);
  if (text.empty()) {
    throw Error(ErrorCategory::invalid_argument, "parse_name: empty name");
  }

  ParsedName out;
  std::vector<std::string> tokens;

  const auto comma = text.find(',');
  if (comma != std::string_view::npos) {
    const auto head = trim_view(text.substr(0, comma));
    const auto tail = trim_view(text.substr(comma + 1));
    const auto tail_tokens = split_whitespace(tail);
    bool tail_is_suffix = !tail_tokens.empty();
    for (const auto& t : tail_tokens) {
      tail_is_suffix &= tables.suffixes.count(detail::strip_periods_lower(t)) > 0;
    }
    if (!head.empty() && !tail.empty() && !tail_is_suffix) {
      // "Family, Given [Suffix]"
      auto given = tail_tokens;
      while (given.size() > 1 &&
             tables.suffixes.count(detail::strip_periods_lower(given.back()))) {
        if (out.suffix.empty()) out.suffix = detail::strip_periods_lower(given.back());
        given.pop_back();
      }
      out.given = detail::join(given, 0, given.size());
      out.family = std::string(head);
      for (const auto& t : split_whitespace(head)) {
        if (tables.particles.count(unicode_lower(t))) {
          out.particles.push_back(t);
        } else {
          break;
        }
      }
      return out;
    }
    tokens = split_whitespace(head);
    for (const auto& t : tail_tokens) tokens.push_back(t);
  } else {
    tokens = split_whitespace(text);
  }

  while (tokens.size() > 1 &&
         tables.suffixes.count(detail::strip_periods_lower(tokens.back()))) {
    out.suffix = detail::strip_periods_lower(tokens.back());
    tokens.pop_back();
  }

  std::size_t family_begin = tokens.size() - 1;
  while (family_begin > 0 &&
         tables.particles.count(unicode_lower(tokens[family_begin - 1]))) {
    --family_begin;
  }
  for (std::size_t i = family_begin; i + 1 < tokens.size(); ++i) {
    out.particles.push_back(tokens[i]);
  }
  out.family = detail::join(tokens, family_begin, tokens.size());
  out.given = detail::join(tokens, 0, family_begin);
  return out;
}

// ---------------------------------------------------------------------------
// Last-name variation

enum class VariationMeasure { endwith, parser };

inline const char* measure_name(VariationMeasure m) {
  return m == VariationMeasure::endwith ? "endwith" : "parser";
}

struct VariationVerdict {
  VariationMeasure measure = VariationMeasure::endwith;
  bool char_sensitive = true;
  bool is_variant = false;
};

/// Compares a byline name against the registry family name.
///   endwith: variant unless the name ends with the family name.
///   parser:  variant unless the parsed family name equals it.
/// Comparison is on lowercased text; with char_sensitive == false both sides
/// are transliterated first.
inline VariationVerdict is_variant(std::string_view fn,
                                   std::string_view official_family,
                                   VariationMeasure measure, bool char_sensitive,
                                   const NameTables& tables = default_name_tables()) {
  if (trim_view(fn).empty() || trim_view(official_family).empty()) {
    throw Error(ErrorCategory::invalid_argument, "is_variant: empty name");
  }
  auto prep = [&](std::string_view s) {
    std::string t = unicode_lower(trim_view(s));
    return char_sensitive ? t : transliterate(t, tables);
  };
  const std::string family = prep(official_family);
  bool match = false;
  if (measure == VariationMeasure::endwith) {
    const std::string name = prep(fn);
    match = name.size() >= family.size() &&
            name.compare(name.size() - family.size(), family.size(), family) == 0;
  } else {
    match = prep(parse_name(fn, tables).family) == family;
  }
  return {measure, char_sensitive, !match};
}

/// Fraction of verdicts that are variants. Requires at least one verdict.
inline double variation_degree(std::span<const VariationVerdict> verdicts) {
  if (verdicts.empty()) {
    throw Error(ErrorCategory::invalid_argument, "variation_degree: no verdicts");
  }
  std::size_t v = 0;
  for (const auto& x : verdicts) v += x.is_variant ? 1 : 0;
  return static_cast<double>(v) / static_cast<double>(verdicts.size());
}

}  // namespace andkit
