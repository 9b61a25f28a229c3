#pragma once

// Block dataset construction (CFN block -> per-author citation groups),
// single-author block trimming, within-block pair sampling and aligned
// train/validation/test splits, plus the line-delimited file formats.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "andkit/error.hpp"
#include "andkit/ingest.hpp"
#include "andkit/types.hpp"
#include "andkit/util.hpp"

namespace andkit {

inline constexpr int kFormatVersion = 1;

struct CitationGroup {
  std::string author_id;
  std::vector<LinkedClaim> items;  // sorted by doi, unique doi
};

struct Block {
  std::string cfn_key;  // trimmed CFN, case preserved
  std::vector<CitationGroup> groups;  // sorted by author_id

  std::size_t citation_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.items.size();
    return n;
  }

  /// Claims in canonical order: groups by author_id, items by doi.
  std::vector<const LinkedClaim*> claims() const {
    std::vector<const LinkedClaim*> out;
    for (const auto& g : groups) {
      for (const auto& c : g.items) out.push_back(&c);
    }
    return out;
  }
};

using Provenance = std::map<std::string, std::string>;

struct BlockDataset {
  std::vector<Block> blocks;  // sorted by cfn_key
  Provenance provenance;

  std::size_t citation_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.citation_count();
    return n;
  }
  std::size_t group_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.groups.size();
    return n;
  }
};

/// Groups positioned claims by author id into citation groups and groups by
/// exact (trimmed) CFN into blocks. Output order does not depend on input
/// order. Duplicate (author, doi) claims collapse to the first seen after
/// canonical ordering.
inline BlockDataset build_block_dataset(std::vector<LinkedClaim> claims) {
  std::sort(claims.begin(), claims.end(),
            [](const LinkedClaim& a, const LinkedClaim& b) {
              const auto ka = trim_view(a.cfn);
              const auto kb = trim_view(b.cfn);
              if (ka != kb) return ka < kb;
              if (a.author_id != b.author_id) return a.author_id < b.author_id;
              if (a.doi != b.doi) return a.doi < b.doi;
              return a.position < b.position;
            });
  BlockDataset ds;
  for (auto& c : claims) {
    if (c.position < 1) {
      throw Error(ErrorCategory::invalid_argument,
                  "build_block_dataset: claim without position");
    }
    const auto key = trim_view(c.cfn);
    if (ds.blocks.empty() || ds.blocks.back().cfn_key != key) {
      ds.blocks.push_back(Block{std::string(key), {}});
    }
    auto& groups = ds.blocks.back().groups;
    if (groups.empty() || groups.back().author_id != c.author_id) {
      groups.push_back(CitationGroup{c.author_id, {}});
    }
    auto& items = groups.back().items;
    if (!items.empty() && items.back().doi == c.doi) continue;
    items.push_back(std::move(c));
  }
  return ds;
}

/// Keeps the blocks with at least two citation groups (two real authors).
inline BlockDataset trim_single_author_blocks(const BlockDataset& ds) {
  BlockDataset out;
  out.provenance = ds.provenance;
  for (const auto& b : ds.blocks) {
    if (b.groups.size() >= 2) out.blocks.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pairwise sampling

struct PairwiseInstance {
  const LinkedClaim* left = nullptr;
  const LinkedClaim* right = nullptr;
  bool label = false;  // same author
  std::string cfn_key;
};

namespace detail {

/// Lexicographic unranking of pair index r over {(i, j) : i < j < n}.
inline std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t r,
                                                       std::size_t n) {
  auto offset = [n](std::uint64_t i) { return i * (2 * n - i - 1) / 2; };
  // Largest row i in [0, n - 2] whose first pair index is <= r.
  std::uint64_t lo = 0;
  std::uint64_t hi = n - 2;
  while (lo < hi) {
    const std::uint64_t mid = (lo + hi + 1) / 2;
    if (offset(mid) <= r) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  const std::uint64_t j = lo + 1 + (r - offset(lo));
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(j)};
}

/// k distinct values from [0, m), sorted (Floyd's algorithm).
inline std::vector<std::uint64_t> sample_distinct(std::uint64_t m,
                                                  std::uint64_t k, Rng& rng) {
  std::set<std::uint64_t> chosen;
  for (std::uint64_t j = m - k; j < m; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  return {chosen.begin(), chosen.end()};
}

}  // namespace detail

/// Samples unordered citation pairs uniformly without replacement inside each
/// block, at most `pairs_per_block_cap` per block (cap <= 0 keeps all pairs).
/// Each block draws from its own stream seeded by (seed, cfn_key), so the
/// result does not depend on block processing order.
inline std::vector<PairwiseInstance> sample_pairwise(const BlockDataset& ds,
                                                     int pairs_per_block_cap,
                                                     std::uint64_t seed) {
  std::vector<PairwiseInstance> out;
  for (const auto& block : ds.blocks) {
    const auto claims = block.claims();
    const std::uint64_t n = claims.size();
    if (n < 2) continue;
    const std::uint64_t m = n * (n - 1) / 2;
    const std::uint64_t k =
        pairs_per_block_cap <= 0
            ? m
            : std::min<std::uint64_t>(m, static_cast<std::uint64_t>(pairs_per_block_cap));
    std::vector<std::uint64_t> picks;
    if (k == m) {
      picks.resize(m);
      for (std::uint64_t r = 0; r < m; ++r) picks[r] = r;
    } else {
      Rng rng(derive_seed(seed, block.cfn_key));
      picks = detail::sample_distinct(m, k, rng);
    }
    for (auto r : picks) {
      const auto [i, j] = detail::unrank_pair(r, n);
      const auto* a = claims[i];
      const auto* b = claims[j];
      out.push_back(
          PairwiseInstance{a, b, a->author_id == b->author_id, block.cfn_key});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splits

enum class Fold { train = 0, validation = 1, test = 2 };

inline const char* fold_name(Fold f) {
  switch (f) {
    case Fold::train: return "train";
    case Fold::validation: return "validation";
    case Fold::test: return "test";
  }
  return "?";
}

inline Fold parse_fold(const std::string& s) {
  if (s == "train") return Fold::train;
  if (s == "validation") return Fold::validation;
  if (s == "test") return Fold::test;
  throw Error(ErrorCategory::format, "unknown fold: " + s);
}

struct SplitAssignment {
  std::map<std::string, Fold> folds;  // by cfn_key
  std::array<int, 3> ratios{50, 25, 25};
  std::uint64_t seed = 0;

  Fold fold_of(const std::string& cfn_key) const {
    auto it = folds.find(cfn_key);
    if (it == folds.end()) {
      throw Error(ErrorCategory::invalid_argument, "no fold for block " + cfn_key);
    }
    return it->second;
  }

  std::array<std::size_t, 3> counts() const {
    std::array<std::size_t, 3> c{};
    for (const auto& [k, f] : folds) ++c[static_cast<int>(f)];
    return c;
  }
};

/// Assigns each block (by cfn_key) to a fold. Keys are shuffled with `seed`
/// and cut in the given proportions of the block count; pairwise instances
/// follow the fold of their block, so both datasets stay aligned.
inline SplitAssignment split(const BlockDataset& ds, std::array<int, 3> ratios,
                             std::uint64_t seed) {
  if (ratios[0] < 0 || ratios[1] < 0 || ratios[2] < 0 ||
      ratios[0] + ratios[1] + ratios[2] != 100) {
    throw Error(ErrorCategory::invalid_argument, "split ratios must sum to 100");
  }
  std::vector<std::string> keys;
  keys.reserve(ds.blocks.size());
  for (const auto& b : ds.blocks) keys.push_back(b.cfn_key);
  std::sort(keys.begin(), keys.end());
  Rng rng(seed);
  rng.shuffle(keys);

  const std::uint64_t n = keys.size();
  auto cut = [n](int pct) { return (n * pct * 2 + 100) / 200; };
  const std::uint64_t n_train = cut(ratios[0]);
  const std::uint64_t n_train_val = cut(ratios[0] + ratios[1]);

  SplitAssignment s;
  s.ratios = ratios;
  s.seed = seed;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Fold f = i < n_train ? Fold::train
                   : i < n_train_val ? Fold::validation
                                     : Fold::test;
    s.folds.emplace(keys[i], f);
  }
  return s;
}

/// Blocks of `ds` assigned to `fold`.
inline BlockDataset select_fold(const BlockDataset& ds, const SplitAssignment& s,
                                Fold fold) {
  BlockDataset out;
  out.provenance = ds.provenance;
  for (const auto& b : ds.blocks) {
    auto it = s.folds.find(b.cfn_key);
    if (it != s.folds.end() && it->second == fold) out.blocks.push_back(b);
  }
  return out;
}

inline std::vector<PairwiseInstance> select_fold(
    const std::vector<PairwiseInstance>& pairs, const SplitAssignment& s,
    Fold fold) {
  std::vector<PairwiseInstance> out;
  for (const auto& p : pairs) {
    auto it = s.folds.find(p.cfn_key);
    if (it != s.folds.end() && it->second == fold) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

namespace detail {

inline nlohmann::ordered_json header(const char* format, const Provenance& prov) {
  nlohmann::ordered_json h;
  h["format"] = format;
  h["version"] = kFormatVersion;
  auto& p = h["provenance"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : prov) p[k] = v;
  return h;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
  return in;
}

inline nlohmann::json parse_line(const std::string& line, const std::string& path,
                                 std::size_t lineno) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCategory::format,
                path + ":" + std::to_string(lineno) + ": malformed line");
  }
  return j;
}

inline Provenance read_header(const nlohmann::json& j, const char* format,
                              const std::string& path) {
  if (!j.is_object() || j.value("format", "") != format) {
    throw Error(ErrorCategory::format, path + ": not a " + format + " file");
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw Error(ErrorCategory::format, path + ": unsupported version");
  }
  Provenance p;
  if (auto it = j.find("provenance"); it != j.end()) {
    for (auto& [k, v] : it->items()) p[k] = v.get<std::string>();
  }
  return p;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const LinkedClaim& c) {
  nlohmann::ordered_json j;
  j["doi"] = c.doi;
  j["author_id"] = c.author_id;
  j["cfn"] = c.cfn;
  j["position"] = c.position;
  j["citation"] = to_json(*c.citation);
  return j;
}

/// Decodes a claim; citations are shared through `citations` by DOI.
inline LinkedClaim claim_from_json(
    const nlohmann::json& j, std::unordered_map<std::string, CitationPtr>& citations) {
  LinkedClaim c;
  try {
    c.doi = j.at("doi").get<std::string>();
    c.author_id = j.at("author_id").get<std::string>();
    c.cfn = j.at("cfn").get<std::string>();
    c.position = j.at("position").get<int>();
    const auto& cj = j.at("citation");
    auto it = citations.find(c.doi);
    if (it == citations.end()) {
      auto rec = parse_citation_line(cj.dump());
      it = citations
               .emplace(c.doi, std::make_shared<const CitationRecord>(std::move(rec)))
               .first;
    }
    c.citation = it->second;
  } catch (const detail::LineFailure& f) {
    throw Error(ErrorCategory::format, "bad embedded citation: " + f.message);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::format, std::string("bad claim: ") + e.what());
  }
  if (c.position < 1 || c.position > static_cast<int>(c.citation->authors.size())) {
    throw Error(ErrorCategory::format, "claim position out of range");
  }
  return c;
}

inline void write_claims(const std::vector<LinkedClaim>& claims,
                         const std::string& path, const Provenance& prov = {}) {
  auto out = detail::open_out(path);
  out << detail::header("andkit-claims", prov).dump() << '\n';
  for (const auto& c : claims) out << to_json(c).dump() << '\n';
  if (!out) throw Error(ErrorCategory::io, "write failed: " + path);
}

inline std::vector<LinkedClaim> read_claims(const std::string& path,
                                            Provenance* prov = nullptr) {
  auto in = detail::open_in(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<LinkedClaim> out;
  std::unordered_map<std::string, CitationPtr> citations;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_view(line).empty()) continue;
    auto j = detail::parse_line(line, path, lineno);
    if (lineno == 1) {
      auto p = detail::read_header(j, "andkit-claims", path);
      if (prov) *prov = p;
      continue;
    }
    out.push_back(claim_from_json(j, citations));
  }
  if (lineno == 0) throw Error(ErrorCategory::format, path + ": empty file");
  return out;
}

inline void write_dataset(const BlockDataset& ds, const std::string& path) {
  auto out = detail::open_out(path);
  out << detail::header("andkit-blocks", ds.provenance).dump() << '\n';
  for (const auto& b : ds.blocks) {
    nlohmann::ordered_json j;
    j["cfn"] = b.cfn_key;
    auto& groups = j["groups"] = nlohmann::ordered_json::array();
    for (const auto& g : b.groups) {
      nlohmann::ordered_json gj;
      gj["author_id"] = g.author_id;
      auto& items = gj["claims"] = nlohmann::ordered_json::array();
      for (const auto& c : g.items) items.push_back(to_json(c));
      groups.push_back(std::move(gj));
    }
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCategory::io, "write failed: " + path);
}

inline BlockDataset read_dataset(const std::string& path) {
  auto in = detail::open_in(path);
  BlockDataset ds;
  std::unordered_map<std::string, CitationPtr> citations;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_view(line).empty()) continue;
    auto j = detail::parse_line(line, path, lineno);
    if (lineno == 1) {
      ds.provenance = detail::read_header(j, "andkit-blocks", path);
      continue;
    }
    try {
      Block b;
      b.cfn_key = j.at("cfn").get<std::string>();
      for (const auto& gj : j.at("groups")) {
        CitationGroup g;
        g.author_id = gj.at("author_id").get<std::string>();
        for (const auto& cj : gj.at("claims")) {
          g.items.push_back(claim_from_json(cj, citations));
        }
        b.groups.push_back(std::move(g));
      }
      ds.blocks.push_back(std::move(b));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCategory::format,
                  path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (lineno == 0) throw Error(ErrorCategory::format, path + ": empty file");
  return ds;
}

/// Resolves (cfn_key, author_id, paper_id) to a claim inside a dataset.
class ClaimLookup {
 public:
  explicit ClaimLookup(const BlockDataset& ds) {
    for (const auto& b : ds.blocks) {
      for (const auto& g : b.groups) {
        for (const auto& c : g.items) {
          index_.emplace(key(b.cfn_key, g.author_id, c.citation->paper_id), &c);
        }
      }
    }
  }

  const LinkedClaim* find(const std::string& cfn, const std::string& author_id,
                          const std::string& paper_id) const {
    auto it = index_.find(key(cfn, author_id, paper_id));
    return it == index_.end() ? nullptr : it->second;
  }

 private:
  static std::string key(const std::string& cfn, const std::string& author,
                         const std::string& paper) {
    std::string k = cfn;
    k.push_back('\x1f');
    k += author;
    k.push_back('\x1f');
    k += paper;
    return k;
  }
  std::unordered_map<std::string, const LinkedClaim*> index_;
};

inline void write_pairwise(const std::vector<PairwiseInstance>& pairs,
                           const std::string& path, const Provenance& prov = {}) {
  auto out = detail::open_out(path);
  out << detail::header("andkit-pairwise", prov).dump() << '\n';
  for (const auto& p : pairs) {
    nlohmann::ordered_json j;
    j["cfn"] = p.cfn_key;
    j["left_paper_id"] = p.left->citation->paper_id;
    j["right_paper_id"] = p.right->citation->paper_id;
    j["label"] = p.label ? 1 : 0;
    j["left_author_id"] = p.left->author_id;
    j["right_author_id"] = p.right->author_id;
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCategory::io, "write failed: " + path);
}

/// Reads a pairwise file against the block dataset it was sampled from.
/// Labels are taken from the file as written.
inline std::vector<PairwiseInstance> read_pairwise(const std::string& path,
                                                   const ClaimLookup& lookup,
                                                   Provenance* prov = nullptr) {
  auto in = detail::open_in(path);
  std::vector<PairwiseInstance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_view(line).empty()) continue;
    auto j = detail::parse_line(line, path, lineno);
    if (lineno == 1) {
      auto p = detail::read_header(j, "andkit-pairwise", path);
      if (prov) *prov = p;
      continue;
    }
    try {
      PairwiseInstance p;
      p.cfn_key = j.at("cfn").get<std::string>();
      p.left = lookup.find(p.cfn_key, j.at("left_author_id").get<std::string>(),
                           j.at("left_paper_id").get<std::string>());
      p.right = lookup.find(p.cfn_key, j.at("right_author_id").get<std::string>(),
                            j.at("right_paper_id").get<std::string>());
      p.label = j.at("label").get<int>() != 0;
      if (!p.left || !p.right) {
        throw Error(ErrorCategory::format, path + ":" + std::to_string(lineno) +
                                               ": pair not found in block dataset");
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCategory::format,
                  path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (lineno == 0) throw Error(ErrorCategory::format, path + ": empty file");
  return out;
}

inline void write_split(const SplitAssignment& s, const std::string& path) {
  auto out = detail::open_out(path);
  Provenance prov{{"ratios", std::to_string(s.ratios[0]) + ":" +
                                 std::to_string(s.ratios[1]) + ":" +
                                 std::to_string(s.ratios[2])},
                  {"seed", std::to_string(s.seed)}};
  out << detail::header("andkit-split", prov).dump() << '\n';
  for (const auto& [key, fold] : s.folds) {
    nlohmann::ordered_json j;
    j["cfn"] = key;
    j["fold"] = fold_name(fold);
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCategory::io, "write failed: " + path);
}

inline SplitAssignment read_split(const std::string& path) {
  auto in = detail::open_in(path);
  SplitAssignment s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_view(line).empty()) continue;
    auto j = detail::parse_line(line, path, lineno);
    if (lineno == 1) {
      auto prov = detail::read_header(j, "andkit-split", path);
      if (prov.count("seed")) s.seed = std::stoull(prov["seed"]);
      if (prov.count("ratios")) {
        int a = 0, b = 0, c = 0;
        if (std::sscanf(prov["ratios"].c_str(), "%d:%d:%d", &a, &b, &c) == 3) {
          s.ratios = {a, b, c};
        }
      }
      continue;
    }
    try {
      s.folds[j.at("cfn").get<std::string>()] =
          parse_fold(j.at("fold").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCategory::format,
                  path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (lineno == 0) throw Error(ErrorCategory::format, path + ": empty file");
  return s;
}

}  // namespace andkit
