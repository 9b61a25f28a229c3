#pragma once

// Distribution reports used to compare a built dataset with a reference
// corpus facet by facet, and block-structure profiles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "andkit/builder.hpp"
#include "andkit/error.hpp"
#include "andkit/namekit.hpp"
#include "andkit/types.hpp"

namespace andkit {

struct DistributionBin {
  std::string key;
  std::size_t count = 0;
  double proportion = 0;
};

struct DistributionReport {
  std::string facet;
  std::vector<DistributionBin> bins;  // ordered
  std::size_t total = 0;

  std::optional<double> proportion(const std::string& key) const {
    for (const auto& b : bins) {
      if (b.key == key) return b.proportion;
    }
    return std::nullopt;
  }
};

namespace detail {

/// Numeric keys sort numerically; anything else sorts after them by text.
struct KeyOrder {
  static std::optional<long long> number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    long long v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') break;
      v = v * 10 + (s[i] - '0');
    }
    // Leading integer of keys like "4-7" or "11+" orders buckets too.
    if (i == ((s[0] == '-') ? 1u : 0u)) return std::nullopt;
    return s[0] == '-' ? -v : v;
  }
  bool operator()(const std::string& a, const std::string& b) const {
    const auto na = number(a);
    const auto nb = number(b);
    if (na && nb) return *na != *nb ? *na < *nb : a < b;
    if (na != nb) return na.has_value();
    return a < b;
  }
};

inline DistributionReport make_report(std::string facet,
                                      const std::map<std::string, std::size_t, KeyOrder>& counts) {
  DistributionReport r;
  r.facet = std::move(facet);
  for (const auto& [k, n] : counts) r.total += n;
  for (const auto& [k, n] : counts) {
    if (n == 0) continue;
    r.bins.push_back({k, n, static_cast<double>(n) / static_cast<double>(r.total)});
  }
  return r;
}

}  // namespace detail

using CountMap = std::map<std::string, std::size_t, detail::KeyOrder>;

/// Publications per year; absent years go to "unknown".
inline DistributionReport year_distribution(const std::vector<CitationPtr>& citations) {
  CountMap counts;
  for (const auto& c : citations) {
    ++counts[c->year ? std::to_string(*c->year) : std::string("unknown")];
  }
  return detail::make_report("year", counts);
}

/// Author positions; positions above `cap` share the bin "<cap+1>+".
inline DistributionReport position_distribution(const std::vector<int>& positions,
                                                int cap = 10) {
  CountMap counts;
  for (int p : positions) {
    ++counts[p > cap ? std::to_string(cap + 1) + "+" : std::to_string(p)];
  }
  return detail::make_report("author_position", counts);
}

enum class PopularityKey { LN, LNFI };

/// Last name, or last name + "_" + first initial, lowercased.
inline std::string popularity_key(const std::string& name, PopularityKey key,
                                  const NameTables& tables = default_name_tables()) {
  const auto parsed = parse_name(name, tables);
  std::string k = unicode_lower(parsed.family);
  if (key == PopularityKey::LNFI) {
    const auto given = utf8_decode(parsed.given);
    k += "_";
    for (char32_t c : given) {
      if (is_letter_cp(c)) {
        utf8_append(k, to_lower_cp(c));
        break;
      }
    }
  }
  return k;
}

/// Log2 bucket label for a frequency: 1, 2-3, 4-7, 8-15, ...
inline std::string frequency_bucket(std::size_t f) {
  if (f <= 1) return "1";
  std::size_t lo = 1;
  while (lo * 2 <= f) lo *= 2;
  return std::to_string(lo) + "-" + std::to_string(lo * 2 - 1);
}

/// Popularity of a name = number of name instances sharing its key. The
/// report gives the share of distinct names in each log2 frequency bucket.
inline DistributionReport name_popularity(const std::vector<std::string>& names,
                                          PopularityKey key,
                                          const NameTables& tables = default_name_tables()) {
  std::map<std::string, std::size_t> freq;
  for (const auto& n : names) {
    if (trim_view(n).empty()) continue;
    ++freq[popularity_key(n, key, tables)];
  }
  CountMap counts;
  for (const auto& [k, f] : freq) ++counts[frequency_bucket(f)];
  return detail::make_report(key == PopularityKey::LN ? "name_popularity_LN"
                                                      : "name_popularity_LNFI",
                             counts);
}

/// Normalized-key -> category table (gender, ethnicity, domain, ...).
struct LookupTable {
  std::string facet;
  std::map<std::string, std::string> entries;

  static std::string normalize_key(std::string_view raw) {
    return normalize_for_ngrams(raw).text;
  }

  void add(std::string_view key, std::string category) {
    auto k = normalize_key(key);
    if (!entries.emplace(std::move(k), std::move(category)).second) {
      throw Error(ErrorCategory::format, "duplicate lookup key: " + std::string(key));
    }
  }

  /// "key<TAB>category" lines.
  static LookupTable load(const std::string& path, std::string facet) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
    LookupTable t;
    t.facet = std::move(facet);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim_view(line).empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw Error(ErrorCategory::format, path + ": expected key<TAB>category");
      }
      t.add(line.substr(0, tab), trim(line.substr(tab + 1)));
    }
    return t;
  }
};

/// Category share over the given lookup keys; unmatched keys go to "unknown".
inline DistributionReport lookup_distribution(const std::vector<std::string>& keys,
                                              const LookupTable& table) {
  CountMap counts;
  for (const auto& k : keys) {
    auto it = table.entries.find(LookupTable::normalize_key(k));
    ++counts[it == table.entries.end() ? std::string("unknown") : it->second];
  }
  return detail::make_report(table.facet.empty() ? "lookup" : table.facet, counts);
}

enum class LookupField { full_name, given_name, family_name, venue };

inline LookupField parse_lookup_field(const std::string& s) {
  if (s == "full") return LookupField::full_name;
  if (s == "given") return LookupField::given_name;
  if (s == "family") return LookupField::family_name;
  if (s == "venue") return LookupField::venue;
  throw Error(ErrorCategory::config, "unknown lookup field: " + s);
}

/// Lookup keys for claims: the byline name (or part of it) or the venue.
inline std::vector<std::string> lookup_keys(const std::vector<const LinkedClaim*>& claims,
                                            LookupField field,
                                            const NameTables& tables = default_name_tables()) {
  std::vector<std::string> keys;
  for (const auto* c : claims) {
    switch (field) {
      case LookupField::full_name: keys.push_back(c->slot().name); break;
      case LookupField::given_name: keys.push_back(parse_name(c->slot().name, tables).given); break;
      case LookupField::family_name: keys.push_back(parse_name(c->slot().name, tables).family); break;
      case LookupField::venue: keys.push_back(c->citation->venue); break;
    }
  }
  return keys;
}

// ---------------------------------------------------------------------------
// Variation

struct VariationSummary {
  VariationMeasure measure = VariationMeasure::endwith;
  double csvd = 0;
  double civd = 0;
  std::size_t total = 0;
};

/// Registry family name of a claim: the parsed family name of its CFN.
inline std::string official_family(const LinkedClaim& c,
                                   const NameTables& tables = default_name_tables()) {
  return parse_name(c.cfn, tables).family;
}

/// CSVD and CIVD of the byline names against the registry family names, for
/// each measure. Requires at least one claim.
inline std::vector<VariationSummary> variation_report(
    const std::vector<const LinkedClaim*>& claims,
    const NameTables& tables = default_name_tables()) {
  std::vector<VariationSummary> out;
  for (auto m : {VariationMeasure::endwith, VariationMeasure::parser}) {
    std::vector<VariationVerdict> cs, ci;
    for (const auto* c : claims) {
      const auto family = official_family(*c, tables);
      cs.push_back(is_variant(c->slot().name, family, m, true, tables));
      ci.push_back(is_variant(c->slot().name, family, m, false, tables));
    }
    out.push_back({m, variation_degree(cs), variation_degree(ci), claims.size()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block profiles

struct BlockProfile {
  DistributionReport block_size;
  DistributionReport variants_by_block_size;
  DistributionReport authors_per_block;
};

/// Citations per block, where the last-name variants fall by block size
/// (character-insensitive endwith measure), and authors per block.
inline BlockProfile block_profile(const BlockDataset& ds,
                                  const NameTables& tables = default_name_tables()) {
  CountMap sizes, variants, authors;
  for (const auto& b : ds.blocks) {
    const auto size_key = std::to_string(b.citation_count());
    ++sizes[size_key];
    ++authors[std::to_string(b.groups.size())];
    const auto family = parse_name(b.cfn_key, tables).family;
    for (const auto* c : b.claims()) {
      if (is_variant(c->slot().name, family, VariationMeasure::endwith, false, tables)
              .is_variant) {
        ++variants[size_key];
      }
    }
  }
  return {detail::make_report("block_size", sizes),
          detail::make_report("variants_by_block_size", variants),
          detail::make_report("authors_per_block", authors)};
}

// ---------------------------------------------------------------------------
// Comparison and output

struct ReportGap {
  std::string key;
  double a = 0;
  double b = 0;
  double gap = 0;
};

struct ReportComparison {
  std::string facet;
  std::vector<ReportGap> gaps;
  double max_gap = 0;
};

/// Per-key absolute proportion differences over the union of keys.
inline ReportComparison compare_reports(const DistributionReport& a,
                                        const DistributionReport& b) {
  std::map<std::string, std::pair<double, double>, detail::KeyOrder> merged;
  for (const auto& bin : a.bins) merged[bin.key].first = bin.proportion;
  for (const auto& bin : b.bins) merged[bin.key].second = bin.proportion;
  ReportComparison c;
  c.facet = a.facet;
  for (const auto& [k, v] : merged) {
    const double g = std::abs(v.first - v.second);
    c.gaps.push_back({k, v.first, v.second, g});
    c.max_gap = std::max(c.max_gap, g);
  }
  return c;
}

/// Plot-ready "facet<TAB>key<TAB>proportion" lines (after a header row).
inline void write_report(const std::vector<DistributionReport>& reports,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
  out << "facet\tkey\tproportion\tcount\n";
  for (const auto& r : reports) {
    for (const auto& b : r.bins) {
      out << r.facet << '\t' << b.key << '\t' << nlohmann::json(b.proportion).dump()
          << '\t' << b.count << '\n';
    }
  }
}

inline void write_comparison(const std::vector<ReportComparison>& comps,
                             const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
  out << "facet\tkey\tdataset\treference\tgap\n";
  for (const auto& c : comps) {
    for (const auto& g : c.gaps) {
      out << c.facet << '\t' << g.key << '\t' << nlohmann::json(g.a).dump() << '\t'
          << nlohmann::json(g.b).dump() << '\t' << nlohmann::json(g.gap).dump() << '\n';
    }
    out << c.facet << "\t*max*\t\t\t" << nlohmann::json(c.max_gap).dump() << '\n';
  }
}

inline void write_variation(const std::vector<VariationSummary>& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
  out << "measure\tcsvd\tcivd\ttotal\n";
  for (const auto& s : v) {
    out << measure_name(s.measure) << '\t' << nlohmann::json(s.csvd).dump() << '\t'
        << nlohmann::json(s.civd).dump() << '\t' << s.total << '\n';
  }
}

// ---------------------------------------------------------------------------
// Facet inputs for datasets and corpora

/// Filter hook applied to claims before profiling (e.g. pruning citations
/// that are over-represented on a facet). Null keeps everything.
using ClaimFilter = std::function<bool(const LinkedClaim&)>;

inline std::vector<const LinkedClaim*> dataset_claims(const BlockDataset& ds,
                                                      const ClaimFilter& keep = {}) {
  std::vector<const LinkedClaim*> out;
  for (const auto& b : ds.blocks) {
    for (const auto* c : b.claims()) {
      if (!keep || keep(*c)) out.push_back(c);
    }
  }
  return out;
}

/// Distinct citations of the claims, ordered by DOI.
inline std::vector<CitationPtr> unique_citations(const std::vector<const LinkedClaim*>& claims) {
  std::map<std::string, CitationPtr> by_doi;
  for (const auto* c : claims) by_doi.emplace(c->doi, c->citation);
  std::vector<CitationPtr> out;
  for (auto& [k, v] : by_doi) out.push_back(v);
  return out;
}

/// Name instances and positions of a dataset: the claimed byline slots.
inline std::vector<std::string> claim_names(const std::vector<const LinkedClaim*>& claims) {
  std::vector<std::string> out;
  for (const auto* c : claims) out.push_back(c->slot().name);
  return out;
}

inline std::vector<int> claim_positions(const std::vector<const LinkedClaim*>& claims) {
  std::vector<int> out;
  for (const auto* c : claims) out.push_back(c->position);
  return out;
}

/// Name instances and positions of a reference corpus: every byline slot
/// counts.
inline std::vector<std::string> corpus_names(const std::vector<CitationPtr>& citations) {
  std::vector<std::string> out;
  for (const auto& c : citations) {
    for (const auto& a : c->authors) out.push_back(a.name);
  }
  return out;
}

inline std::vector<int> corpus_positions(const std::vector<CitationPtr>& citations) {
  std::vector<int> out;
  for (const auto& c : citations) {
    for (std::size_t i = 0; i < c->authors.size(); ++i) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

}  // namespace andkit
