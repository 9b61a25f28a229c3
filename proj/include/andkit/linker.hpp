#pragma once

// DOI join between registry claims and the citation corpus, and location of
// the claimed author inside each citation's byline.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "andkit/ingest.hpp"
#include "andkit/namekit.hpp"
#include "andkit/types.hpp"
#include "andkit/util.hpp"

namespace andkit {

/// Read-only DOI -> citation lookup.
class CitationIndex {
 public:
  CitationIndex() = default;

  /// Adds a citation; returns false if the DOI is already present.
  bool add(CitationRecord record) {
    auto ptr = std::make_shared<const CitationRecord>(std::move(record));
    const bool inserted = by_doi_.emplace(ptr->doi, ptr).second;
    if (inserted) order_.push_back(std::move(ptr));
    return inserted;
  }

  CitationPtr find(const std::string& doi) const {
    auto it = by_doi_.find(doi);
    return it == by_doi_.end() ? nullptr : it->second;
  }

  std::size_t size() const { return order_.size(); }
  const std::vector<CitationPtr>& citations() const { return order_; }

  static CitationIndex load(const std::string& path,
                            IngestReport* report = nullptr) {
    CitationIndex index;
    auto reader = read_citation_corpus(path);
    reader.for_each([&](CitationRecord r) { index.add(std::move(r)); });
    if (report) *report = reader.report();
    return index;
  }

 private:
  std::unordered_map<std::string, CitationPtr> by_doi_;
  std::vector<CitationPtr> order_;
};

struct PositionPolicy {
  double margin = 0.2;             // required lead over the runner-up
  double single_author_floor = 0.5;  // minimum score for one-author bylines
};

struct LinkReport {
  std::size_t claims_total = 0;  // (author, claimed DOI) pairs seen
  std::size_t resolved = 0;
  std::size_t unresolved = 0;
  std::size_t positioned = 0;
  std::size_t rejected = 0;
  std::size_t rejected_single_author = 0;
  PositionPolicy policy;
};

inline nlohmann::ordered_json to_json(const LinkReport& r) {
  nlohmann::ordered_json j;
  j["claims_total"] = r.claims_total;
  j["resolved"] = r.resolved;
  j["unresolved"] = r.unresolved;
  j["positioned"] = r.positioned;
  j["rejected"] = r.rejected;
  j["rejected_single_author"] = r.rejected_single_author;
  j["position_margin"] = r.policy.margin;
  j["single_author_floor"] = r.policy.single_author_floor;
  return j;
}

/// Dice score of the CFN against every byline name, in byline order.
inline std::vector<double> position_scores(std::string_view cfn,
                                           std::span<const std::string> names) {
  const auto target = bigrams(normalize_for_ngrams(cfn));
  std::vector<double> scores;
  scores.reserve(names.size());
  for (const auto& n : names) {
    scores.push_back(dice_similarity(target, bigrams(normalize_for_ngrams(n))));
  }
  return scores;
}

/// 1-based position of `cfn` in the byline, or 0 if it cannot be told apart.
///
/// Positions are ranked by Dice score (stable, so earlier authors win ties).
/// The best position is accepted only if it leads the runner-up by more than
/// `policy.margin`. A one-author byline has no runner-up and is accepted
/// when its score reaches `policy.single_author_floor`.
inline int identify_author_position(std::string_view cfn,
                                    std::span<const std::string> author_names,
                                    const PositionPolicy& policy = {}) {
  if (author_names.empty()) return 0;
  const auto scores = position_scores(cfn, author_names);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  const double best = scores[order[0]];
  if (best <= 0.0) return 0;
  if (order.size() == 1) {
    return best >= policy.single_author_floor ? 1 : 0;
  }
  const double second = scores[order[1]];
  if (best - second > policy.margin) return static_cast<int>(order[0]) + 1;
  return 0;
}

inline int identify_author_position(std::string_view cfn,
                                    const CitationRecord& citation,
                                    const PositionPolicy& policy = {}) {
  std::vector<std::string> names;
  names.reserve(citation.authors.size());
  for (const auto& a : citation.authors) names.push_back(a.name);
  return identify_author_position(cfn, names, policy);
}

inline void sort_claims(std::vector<LinkedClaim>& claims) {
  std::sort(claims.begin(), claims.end(),
            [](const LinkedClaim& a, const LinkedClaim& b) {
              if (a.author_id != b.author_id) return a.author_id < b.author_id;
              return a.doi < b.doi;
            });
}

/// One claim per (author, claimed DOI) that resolves in the corpus. Output is
/// sorted by (author_id, doi); positions are left at 0.
inline std::vector<LinkedClaim> link_by_doi(std::span<const AuthorRecord> registry,
                                            const CitationIndex& corpus,
                                            LinkReport* report = nullptr) {
  std::vector<LinkedClaim> out;
  std::size_t total = 0;
  std::size_t unresolved = 0;
  for (const auto& author : registry) {
    for (const auto& doi : author.claimed_dois) {
      ++total;
      if (auto c = corpus.find(doi)) {
        out.push_back(LinkedClaim{doi, author.author_id, author.cfn, c, 0});
      } else {
        ++unresolved;
      }
    }
  }
  sort_claims(out);
  if (report) {
    report->claims_total += total;
    report->resolved += out.size();
    report->unresolved += unresolved;
  }
  return out;
}

/// DOI join followed by position identification. Claims whose position
/// cannot be identified are dropped and counted as rejected.
inline std::vector<LinkedClaim> link_and_position(
    std::span<const AuthorRecord> registry, const CitationIndex& corpus,
    const PositionPolicy& policy = {}, unsigned threads = 1,
    LinkReport* report = nullptr) {
  LinkReport local;
  local.policy = policy;
  auto claims = link_by_doi(registry, corpus, &local);
  parallel_for(claims.size(), threads, [&](std::size_t i) {
    claims[i].position =
        identify_author_position(claims[i].cfn, *claims[i].citation, policy);
  });
  std::vector<LinkedClaim> kept;
  kept.reserve(claims.size());
  for (auto& c : claims) {
    if (c.position > 0) {
      kept.push_back(std::move(c));
    } else {
      ++local.rejected;
      if (c.citation->authors.size() == 1) ++local.rejected_single_author;
    }
  }
  local.positioned = kept.size();
  if (report) *report = local;
  return kept;
}

}  // namespace andkit
