#pragma once

// Pairwise classification scores, B-cubed clustering scores and the audit of
// an external author-id assignment against the gold partition.

#include <cstddef>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "andkit/builder.hpp"
#include "andkit/error.hpp"

namespace andkit {

struct ClassificationScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double macro_f1 = 0;
  double negative_f1 = 0;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline double harmonic_mean(double p, double r) {
  return (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
}

/// P, R and F1 of the positive class; Macro-F1 averages the F1 of the
/// positive and negative classes. Undefined ratios are 0.
inline ClassificationScore classification_metrics(const std::vector<bool>& labels,
                                                  const std::vector<bool>& predictions) {
  if (labels.size() != predictions.size() || labels.empty()) {
    throw Error(ErrorCategory::invalid_argument,
                "classification_metrics: need equal non-empty inputs");
  }
  ClassificationScore s;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      predictions[i] ? ++s.tp : ++s.fn;
    } else {
      predictions[i] ? ++s.fp : ++s.tn;
    }
  }
  auto ratio = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  s.precision = ratio(s.tp, s.tp + s.fp);
  s.recall = ratio(s.tp, s.tp + s.fn);
  s.f1 = harmonic_mean(s.precision, s.recall);
  const double neg_p = ratio(s.tn, s.tn + s.fn);
  const double neg_r = ratio(s.tn, s.tn + s.fp);
  s.negative_f1 = harmonic_mean(neg_p, neg_r);
  s.macro_f1 = (s.f1 + s.negative_f1) / 2;
  return s;
}

struct BCubedScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

enum class BCubedAveraging { pooled, per_block };

/// Accumulates B-cubed sums block by block.
///
/// For element e with predicted cluster C(e) and gold cluster L(e):
///   precision(e) = |C(e) ∩ L(e)| / |C(e)|,  recall(e) = |C(e) ∩ L(e)| / |L(e)|.
/// Pooled averaging weights every element equally across blocks; per-block
/// averaging first averages inside each block and then across blocks.
class BCubedAccumulator {
 public:
  template <class PredLabel, class GoldLabel>
  void add_block(const std::vector<PredLabel>& predicted,
                 const std::vector<GoldLabel>& gold) {
    if (predicted.size() != gold.size()) {
      throw Error(ErrorCategory::invalid_argument, "bcubed: size mismatch");
    }
    if (predicted.empty()) return;
    std::map<PredLabel, std::size_t> pred_size;
    std::map<GoldLabel, std::size_t> gold_size;
    std::map<std::pair<PredLabel, GoldLabel>, std::size_t> joint;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      ++pred_size[predicted[i]];
      ++gold_size[gold[i]];
      ++joint[{predicted[i], gold[i]}];
    }
    // Every element of a (C, L) cell has the same precision and recall, so
    // the per-element sums collapse to n_CL^2 / |C| and n_CL^2 / |L|.
    long double p = 0, r = 0;
    for (const auto& [cell, n] : joint) {
      const long double nn = static_cast<long double>(n) * n;
      p += nn / pred_size[cell.first];
      r += nn / gold_size[cell.second];
    }
    const long double size = predicted.size();
    precision_sum_ += p;
    recall_sum_ += r;
    elements_ += predicted.size();
    block_precision_sum_ += p / size;
    block_recall_sum_ += r / size;
    ++blocks_;
  }

  // Sums are kept in extended precision and rounded once at the end, so
  // small inputs come out correctly rounded.
  BCubedScore score(BCubedAveraging averaging = BCubedAveraging::pooled) const {
    long double p = 0, r = 0;
    if (averaging == BCubedAveraging::pooled) {
      if (elements_ == 0) return {};
      p = precision_sum_ / elements_;
      r = recall_sum_ / elements_;
    } else {
      if (blocks_ == 0) return {};
      p = block_precision_sum_ / blocks_;
      r = block_recall_sum_ / blocks_;
    }
    const long double f = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0L;
    return {static_cast<double>(p), static_cast<double>(r), static_cast<double>(f)};
  }

  std::size_t elements() const { return elements_; }
  std::size_t blocks() const { return blocks_; }

 private:
  long double precision_sum_ = 0;
  long double recall_sum_ = 0;
  long double block_precision_sum_ = 0;
  long double block_recall_sum_ = 0;
  std::size_t elements_ = 0;
  std::size_t blocks_ = 0;
};

/// B-cubed of one partition against another over the same elements.
template <class PredLabel, class GoldLabel>
BCubedScore bcubed(const std::vector<PredLabel>& predicted,
                   const std::vector<GoldLabel>& gold) {
  BCubedAccumulator acc;
  acc.add_block(predicted, gold);
  return acc.score();
}

// ---------------------------------------------------------------------------
// External id audit

/// External author id per claim, keyed by (author_id, doi).
using ExternalIds = std::map<std::pair<std::string, std::string>, std::string>;

struct AuditResult {
  BCubedScore b3;
  ClassificationScore pairwise;
  std::size_t claims = 0;
  std::size_t missing_ids = 0;  // claims given their own singleton id
  std::size_t pairs = 0;
};

/// Scores an external author-id assignment. Over each block the external ids
/// act as the predicted clustering (gold = registry author id); over the
/// pairwise instances, equal external ids predict "same author".
inline AuditResult audit_id_system(const BlockDataset& ds, const ExternalIds& external,
                                   const std::vector<PairwiseInstance>& pairs,
                                   BCubedAveraging averaging = BCubedAveraging::pooled) {
  AuditResult out;
  auto id_of = [&](const LinkedClaim& c, bool count_missing) {
    auto it = external.find({c.author_id, c.doi});
    if (it != external.end()) return "x:" + it->second;
    if (count_missing) ++out.missing_ids;
    return "missing:" + c.author_id + "\x1f" + c.doi;
  };
  BCubedAccumulator acc;
  for (const auto& b : ds.blocks) {
    std::vector<std::string> pred, gold;
    for (const auto* c : b.claims()) {
      pred.push_back(id_of(*c, true));
      gold.push_back(c->author_id);
    }
    out.claims += pred.size();
    acc.add_block(pred, gold);
  }
  out.b3 = acc.score(averaging);
  if (!pairs.empty()) {
    std::vector<bool> labels, preds;
    for (const auto& p : pairs) {
      labels.push_back(p.label);
      preds.push_back(id_of(*p.left, false) == id_of(*p.right, false));
    }
    out.pairwise = classification_metrics(labels, preds);
    out.pairs = pairs.size();
  }
  return out;
}

/// "author_id<TAB>doi<TAB>external_id" lines; a header line is optional.
inline ExternalIds read_external_ids(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
  ExternalIds ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("author_id\t", 0) == 0) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) {
      throw Error(ErrorCategory::format,
                  path + ":" + std::to_string(lineno) + ": expected 3 tab-separated fields");
    }
    ids[{line.substr(0, t1), normalize_doi(line.substr(t1 + 1, t2 - t1 - 1))}] =
        line.substr(t2 + 1);
  }
  return ids;
}

inline void write_external_ids(const ExternalIds& ids, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
  out << "author_id\tdoi\texternal_id\n";
  for (const auto& [key, id] : ids) out << key.first << '\t' << key.second << '\t' << id << '\n';
}

inline nlohmann::ordered_json to_json(const ClassificationScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall},  {"f1", s.f1},
          {"macro_f1", s.macro_f1},   {"tp", s.tp},          {"fp", s.fp},
          {"tn", s.tn},               {"fn", s.fn}};
}

inline nlohmann::ordered_json to_json(const BCubedScore& s) {
  return {{"b3_precision", s.precision}, {"b3_recall", s.recall}, {"b3_f1", s.f1}};
}

}  // namespace andkit
