#pragma once

// Pair features for same-author classification and a random forest
// classifier with Gini importance.
//
// Feature row layout (content columns only when a content measure is used):
//   name_sim, year_gap, venue_sim, affil_sim, [content_sim],
//   year_missing, venue_missing, affil_missing, [content_missing]

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "andkit/builder.hpp"
#include "andkit/error.hpp"
#include "andkit/namekit.hpp"
#include "andkit/types.hpp"
#include "andkit/util.hpp"

namespace andkit {

// ---------------------------------------------------------------------------
// Text measures

/// Lowercase words split on anything that is not an ASCII letter or digit.
/// Non-ASCII bytes are kept as word characters.
inline std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    const bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
                      (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (word) {
      cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : ch);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

struct JaccardResult {
  double value = 0;
  bool undefined = false;  // both sides had no words
};

inline JaccardResult word_jaccard(std::string_view a, std::string_view b) {
  const auto ta = tokenize_words(a);
  const auto tb = tokenize_words(b);
  const std::set<std::string> sa(ta.begin(), ta.end());
  const std::set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return {0.0, true};
  std::size_t inter = 0;
  for (const auto& w : sa) inter += sb.count(w);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return {static_cast<double>(inter) / static_cast<double>(uni), false};
}

/// Absolute year difference, or nullopt if either year is absent.
inline std::optional<int> year_gap(std::optional<int> y1, std::optional<int> y2) {
  if (!y1 || !y2) return std::nullopt;
  return std::abs(*y1 - *y2);
}

/// Set Jaccard over character 2-grams of the normalized names.
inline double name_similarity(std::string_view n1, std::string_view n2) {
  const auto a = normalize_for_ngrams(n1);
  const auto b = normalize_for_ngrams(n2);
  const auto pa = bigrams(a);
  const auto pb = bigrams(b);
  if (pa.size == 0 && pb.size == 0) {
    return (!a.text.empty() && a.text == b.text) ? 1.0 : 0.0;
  }
  return bigram_jaccard(pa, pb);
}

/// Document frequencies fitted on training content. Weights use the smoothed
/// idf ln((1 + N) / (1 + df)) + 1; terms unseen at fit time are ignored.
class TfidfIndex {
 public:
  void fit(const std::vector<std::string>& documents) {
    df_.clear();
    n_docs_ = documents.size();
    for (const auto& d : documents) {
      const auto toks = tokenize_words(d);
      const std::set<std::string> uniq(toks.begin(), toks.end());
      for (const auto& t : uniq) ++df_[t];
    }
  }

  double idf(const std::string& term) const {
    auto it = df_.find(term);
    if (it == df_.end()) return 0.0;
    return std::log((1.0 + static_cast<double>(n_docs_)) /
                    (1.0 + static_cast<double>(it->second))) +
           1.0;
  }

  std::map<std::string, double> vectorize(std::string_view doc) const {
    std::map<std::string, double> v;
    for (const auto& t : tokenize_words(doc)) {
      if (df_.count(t)) v[t] += 1.0;
    }
    for (auto& [t, w] : v) w *= idf(t);
    return v;
  }

  /// Cosine of the tf-idf vectors; 0 if either vector is zero.
  double similarity(std::string_view a, std::string_view b) const {
    const auto va = vectorize(a);
    const auto vb = vectorize(b);
    double dot = 0, na = 0, nb = 0;
    for (const auto& [t, w] : va) {
      na += w * w;
      auto it = vb.find(t);
      if (it != vb.end()) dot += w * it->second;
    }
    for (const auto& [t, w] : vb) nb += w * w;
    if (na == 0 || nb == 0) return 0.0;
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
  }

  std::size_t document_count() const { return n_docs_; }
  std::size_t vocabulary_size() const { return df_.size(); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["documents"] = n_docs_;
    auto& df = j["df"] = nlohmann::ordered_json::object();
    for (const auto& [t, n] : df_) df[t] = n;
    return j;
  }

  static TfidfIndex from_json(const nlohmann::json& j) {
    TfidfIndex idx;
    idx.n_docs_ = j.at("documents").get<std::size_t>();
    for (auto& [t, n] : j.at("df").items()) idx.df_[t] = n.get<std::size_t>();
    return idx;
  }

 private:
  std::map<std::string, std::size_t> df_;
  std::size_t n_docs_ = 0;
};

inline TfidfIndex fit_tfidf(const std::vector<std::string>& train_contents) {
  TfidfIndex idx;
  idx.fit(train_contents);
  return idx;
}

inline double content_tfidf_sim(const TfidfIndex& index, std::string_view a,
                                std::string_view b) {
  return index.similarity(a, b);
}

/// Title and abstract joined by a space.
inline std::string citation_content(const CitationRecord& c) {
  if (c.abstract.empty()) return c.title;
  return c.title + " " + c.abstract;
}

// ---------------------------------------------------------------------------
// Feature extraction

enum class ContentKind { none, jaccard, tfidf, plugin };

inline const char* content_kind_name(ContentKind k) {
  switch (k) {
    case ContentKind::none: return "none";
    case ContentKind::jaccard: return "jaccard";
    case ContentKind::tfidf: return "tfidf";
    case ContentKind::plugin: return "plugin";
  }
  return "?";
}

inline ContentKind parse_content_kind(const std::string& s) {
  if (s == "none") return ContentKind::none;
  if (s == "jaccard") return ContentKind::jaccard;
  if (s == "tfidf") return ContentKind::tfidf;
  if (s == "plugin") return ContentKind::plugin;
  throw Error(ErrorCategory::config, "unknown content measure: " + s);
}

/// Externally computed content similarities keyed by an unordered
/// (paper_id, paper_id) pair. File: "left_paper_id<TAB>right_paper_id<TAB>score".
class PluginScores {
 public:
  void set(const std::string& a, const std::string& b, double score) {
    scores_[key(a, b)] = score;
  }

  std::optional<double> find(const std::string& a, const std::string& b) const {
    auto it = scores_.find(key(a, b));
    if (it == scores_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return scores_.size(); }

  static PluginScores load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
    PluginScores out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim_view(line).empty() || line[0] == '#') continue;
      std::istringstream ss(line);
      std::string a, b, s;
      if (!std::getline(ss, a, '\t') || !std::getline(ss, b, '\t') ||
          !std::getline(ss, s)) {
        throw Error(ErrorCategory::format,
                    path + ":" + std::to_string(lineno) + ": expected 3 columns");
      }
      double v = 0;
      try {
        v = std::stod(s);
      } catch (const std::exception&) {
        throw Error(ErrorCategory::format,
                    path + ":" + std::to_string(lineno) + ": bad score");
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCategory::format,
                    path + ":" + std::to_string(lineno) + ": score outside [0,1]");
      }
      out.set(trim(a), trim(b), v);
    }
    return out;
  }

 private:
  static std::pair<std::string, std::string> key(const std::string& a,
                                                 const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::map<std::pair<std::string, std::string>, double> scores_;
};

struct FeatureVector {
  double name_sim = 0;
  double year_gap = 0;
  double venue_sim = 0;
  double affil_sim = 0;
  double content_sim = 0;
  bool year_missing = false;
  bool venue_missing = false;
  bool affil_missing = false;
  bool content_missing = false;
  ContentKind content_kind = ContentKind::none;

  std::vector<double> row() const {
    const bool cf = content_kind != ContentKind::none;
    std::vector<double> r{name_sim, year_gap, venue_sim, affil_sim};
    if (cf) r.push_back(content_sim);
    r.push_back(year_missing ? 1.0 : 0.0);
    r.push_back(venue_missing ? 1.0 : 0.0);
    r.push_back(affil_missing ? 1.0 : 0.0);
    if (cf) r.push_back(content_missing ? 1.0 : 0.0);
    return r;
  }

  bool operator==(const FeatureVector&) const = default;
};

inline std::vector<std::string> feature_names(ContentKind kind) {
  const bool cf = kind != ContentKind::none;
  std::vector<std::string> n{"name_sim", "year_gap", "venue_sim", "affil_sim"};
  if (cf) n.push_back(std::string("content_sim_") + content_kind_name(kind));
  n.insert(n.end(), {"year_missing", "venue_missing", "affil_missing"});
  if (cf) n.push_back("content_missing");
  return n;
}

/// Builds FeatureVectors for claim pairs. Missing metadata yields similarity
/// 0 plus a mask bit; a missing year gap is imputed with `year_impute`.
struct FeatureExtractor {
  ContentKind kind = ContentKind::none;
  double year_impute = 0;
  const TfidfIndex* tfidf = nullptr;
  const PluginScores* plugin = nullptr;

  FeatureVector extract(const LinkedClaim& a, const LinkedClaim& b) const {
    const auto& ca = *a.citation;
    const auto& cb = *b.citation;
    FeatureVector f;
    f.content_kind = kind;
    f.name_sim = name_similarity(a.slot().name, b.slot().name);

    if (auto gap = year_gap(ca.year, cb.year)) {
      f.year_gap = *gap;
    } else {
      f.year_gap = year_impute;
      f.year_missing = true;
    }

    auto text_sim = [](const std::string& x, const std::string& y, double& value,
                       bool& missing) {
      if (tokenize_words(x).empty() || tokenize_words(y).empty()) {
        value = 0;
        missing = true;
      } else {
        value = word_jaccard(x, y).value;
      }
    };
    text_sim(ca.venue, cb.venue, f.venue_sim, f.venue_missing);
    text_sim(a.slot().affiliation, b.slot().affiliation, f.affil_sim,
             f.affil_missing);

    switch (kind) {
      case ContentKind::none:
        break;
      case ContentKind::jaccard:
        text_sim(citation_content(ca), citation_content(cb), f.content_sim,
                 f.content_missing);
        break;
      case ContentKind::tfidf: {
        if (!tfidf) throw Error(ErrorCategory::invalid_argument, "tfidf index not set");
        const auto xa = citation_content(ca);
        const auto xb = citation_content(cb);
        if (tokenize_words(xa).empty() || tokenize_words(xb).empty()) {
          f.content_missing = true;
        } else {
          f.content_sim = tfidf->similarity(xa, xb);
        }
        break;
      }
      case ContentKind::plugin: {
        if (!plugin) throw Error(ErrorCategory::invalid_argument, "plugin scores not set");
        if (auto s = plugin->find(ca.paper_id, cb.paper_id)) {
          f.content_sim = *s;
        } else {
          f.content_missing = true;
        }
        break;
      }
    }
    return f;
  }

  FeatureVector extract(const PairwiseInstance& p) const {
    return extract(*p.left, *p.right);
  }
};

/// Median of the observed year gaps over the pairs (0 if none observed).
inline double median_year_gap(const std::vector<PairwiseInstance>& pairs) {
  std::vector<int> gaps;
  for (const auto& p : pairs) {
    if (auto g = year_gap(p.left->citation->year, p.right->citation->year)) {
      gaps.push_back(*g);
    }
  }
  if (gaps.empty()) return 0.0;
  std::sort(gaps.begin(), gaps.end());
  const std::size_t m = gaps.size() / 2;
  if (gaps.size() % 2 == 1) return gaps[m];
  return (gaps[m - 1] + gaps[m]) / 2.0;
}

/// Tab-separated feature matrix with a header row and a trailing label column.
inline void write_feature_matrix(const std::string& path,
                                 const std::vector<std::string>& names,
                                 const std::vector<std::vector<double>>& rows,
                                 const std::vector<bool>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
  for (const auto& n : names) out << n << '\t';
  out << "label\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double v : rows[i]) out << nlohmann::json(v).dump() << '\t';
    out << (labels[i] ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Random forest

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0;  // x[feature] <= threshold goes left
  int left = -1;
  int right = -1;
  double value = 0;  // fraction of positive training samples
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  std::vector<double> importance;  // normalized Gini decrease per feature
  bool has_split = false;

  double predict(const std::vector<double>& x) const {
    int i = 0;
    while (nodes[i].feature >= 0) {
      i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    }
    return nodes[i].value;
  }
};

struct ForestOptions {
  int n_trees = 100;
  int min_samples_split = 2;
  int max_features = 0;  // 0 -> ceil(sqrt(d))
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::vector<std::string> feature_names;
  std::uint64_t seed = 0;
  int min_samples_split = 2;
  int max_features = 0;
  std::string warning;

  std::size_t n_features() const { return feature_names.size(); }
};

namespace detail {

inline double gini(double pos, double n) {
  if (n <= 0) return 0;
  const double p = pos / n;
  return 2 * p * (1 - p);
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0;
  double decrease = -1;
};

/// Best threshold on one feature for the node's samples, or decrease < 0 if
/// the feature is constant there.
inline SplitChoice best_split_on(const std::vector<std::vector<double>>& X,
                                 const std::vector<bool>& y,
                                 const std::vector<std::size_t>& samples, int f,
                                 double parent_gini,
                                 std::vector<std::pair<double, bool>>& scratch) {
  scratch.clear();
  double total_pos = 0;
  for (auto s : samples) {
    scratch.emplace_back(X[s][f], y[s]);
    total_pos += y[s] ? 1 : 0;
  }
  std::sort(scratch.begin(), scratch.end());
  const double n = static_cast<double>(scratch.size());
  SplitChoice best;
  double left_pos = 0;
  for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
    left_pos += scratch[i].second ? 1 : 0;
    if (scratch[i].first == scratch[i + 1].first) continue;
    const double nl = static_cast<double>(i + 1);
    const double nr = n - nl;
    const double child =
        (nl * gini(left_pos, nl) + nr * gini(total_pos - left_pos, nr)) / n;
    const double dec = parent_gini - child;
    if (dec > best.decrease) {
      best.feature = f;
      best.decrease = dec;
      double thr = scratch[i].first + (scratch[i + 1].first - scratch[i].first) / 2;
      if (!(thr < scratch[i + 1].first)) thr = scratch[i].first;
      best.threshold = thr;
    }
  }
  return best;
}

inline DecisionTree grow_tree(const std::vector<std::vector<double>>& X,
                              const std::vector<bool>& y, const ForestOptions& opt,
                              int mtry, std::uint64_t tree_seed) {
  Rng rng(tree_seed);
  const std::size_t n = X.size();
  const int d = static_cast<int>(X[0].size());
  std::vector<std::size_t> boot(n);
  for (auto& b : boot) b = rng.below(n);

  DecisionTree tree;
  tree.importance.assign(d, 0.0);
  std::vector<std::pair<double, bool>> scratch;
  std::vector<int> features(d);

  struct Pending {
    int node;
    std::vector<std::size_t> samples;
  };
  std::vector<Pending> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, std::move(boot)});
  const double root_n = static_cast<double>(n);

  while (!stack.empty()) {
    Pending cur = std::move(stack.back());
    stack.pop_back();
    double pos = 0;
    for (auto s : cur.samples) pos += y[s] ? 1 : 0;
    const double cnt = static_cast<double>(cur.samples.size());
    tree.nodes[cur.node].value = pos / cnt;
    const double g = gini(pos, cnt);
    if (g == 0.0 || static_cast<int>(cur.samples.size()) < opt.min_samples_split) {
      continue;
    }

    std::iota(features.begin(), features.end(), 0);
    rng.shuffle(features);
    SplitChoice best;
    // Draw mtry candidates; keep drawing only if none of them can split.
    for (int k = 0; k < d; ++k) {
      if (k >= mtry && best.feature >= 0) break;
      auto c = best_split_on(X, y, cur.samples, features[k], g, scratch);
      if (c.feature >= 0 && c.decrease > best.decrease) best = c;
    }
    if (best.feature < 0) continue;

    std::vector<std::size_t> left, right;
    for (auto s : cur.samples) {
      (X[s][best.feature] <= best.threshold ? left : right).push_back(s);
    }
    tree.importance[best.feature] += cnt / root_n * best.decrease;
    tree.has_split = true;

    const int li = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const int ri = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    auto& node = tree.nodes[cur.node];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = li;
    node.right = ri;
    stack.push_back({ri, std::move(right)});
    stack.push_back({li, std::move(left)});
  }

  const double total = std::accumulate(tree.importance.begin(), tree.importance.end(), 0.0);
  if (total > 0) {
    for (auto& v : tree.importance) v /= total;
  } else {
    std::fill(tree.importance.begin(), tree.importance.end(), 0.0);
  }
  return tree;
}

}  // namespace detail

/// Bagged CART forest: bootstrap sample per tree, ceil(sqrt(d)) candidate
/// features per node, Gini impurity, grown until pure or below
/// min_samples_split. Tree t draws from a stream derived from (seed, t), so
/// the model does not depend on the thread count.
inline ForestModel train_forest(const std::vector<std::vector<double>>& X,
                                const std::vector<bool>& y, const ForestOptions& opt,
                                std::vector<std::string> names = {}) {
  if (X.empty() || X.size() != y.size()) {
    throw Error(ErrorCategory::invalid_argument, "train_forest: need |X| = |y| >= 1");
  }
  const std::size_t d = X[0].size();
  for (const auto& row : X) {
    if (row.size() != d) {
      throw Error(ErrorCategory::invalid_argument, "train_forest: ragged X");
    }
  }
  if (opt.n_trees < 1) {
    throw Error(ErrorCategory::invalid_argument, "train_forest: n_trees < 1");
  }
  if (names.empty()) {
    for (std::size_t i = 0; i < d; ++i) names.push_back("f" + std::to_string(i));
  }
  if (names.size() != d) {
    throw Error(ErrorCategory::invalid_argument, "train_forest: feature name count");
  }

  ForestModel model;
  model.feature_names = std::move(names);
  model.seed = opt.seed;
  model.min_samples_split = opt.min_samples_split;
  const int mtry = opt.max_features > 0
                       ? std::min<int>(opt.max_features, static_cast<int>(d))
                       : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
  model.max_features = mtry;

  const bool any_pos = std::find(y.begin(), y.end(), true) != y.end();
  const bool any_neg = std::find(y.begin(), y.end(), false) != y.end();
  if (!(any_pos && any_neg)) {
    model.warning = "single-class training labels; model is constant";
  }

  model.trees.resize(opt.n_trees);
  parallel_for(model.trees.size(), opt.threads, [&](std::size_t t) {
    model.trees[t] = detail::grow_tree(X, y, opt, mtry, derive_seed(opt.seed, t));
  });
  return model;
}

/// Mean of the per-tree leaf probabilities.
inline double predict_proba(const ForestModel& model, const std::vector<double>& x) {
  if (x.size() != model.n_features()) {
    throw Error(ErrorCategory::invalid_argument, "predict_proba: feature count");
  }
  double s = 0;
  for (const auto& t : model.trees) s += t.predict(x);
  return s / static_cast<double>(model.trees.size());
}

struct FeatureImportance {
  std::string name;
  double mean = 0;
  double stddev = 0;
};

/// Per-feature mean and standard deviation of the normalized Gini importance
/// over the trees that made at least one split. With no such tree every
/// feature reports 0.
inline std::vector<FeatureImportance> feature_importance(const ForestModel& model) {
  const std::size_t d = model.n_features();
  std::vector<FeatureImportance> out(d);
  std::size_t used = 0;
  std::vector<double> sum(d, 0), sq(d, 0);
  for (const auto& t : model.trees) {
    if (!t.has_split) continue;
    ++used;
    for (std::size_t f = 0; f < d; ++f) {
      sum[f] += t.importance[f];
      sq[f] += t.importance[f] * t.importance[f];
    }
  }
  for (std::size_t f = 0; f < d; ++f) {
    out[f].name = model.feature_names[f];
    if (used == 0) continue;
    const double m = sum[f] / static_cast<double>(used);
    out[f].mean = m;
    out[f].stddev = std::sqrt(std::max(0.0, sq[f] / static_cast<double>(used) - m * m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model bundle: forest + the feature settings it was trained with.

inline constexpr const char* kModelFormat = "andkit-forest";

struct PairModel {
  ForestModel forest;
  ContentKind content_kind = ContentKind::none;
  double year_impute = 0;
  TfidfIndex tfidf;

  FeatureExtractor extractor(const PluginScores* plugin = nullptr) const {
    FeatureExtractor fx;
    fx.kind = content_kind;
    fx.year_impute = year_impute;
    fx.tfidf = &tfidf;
    fx.plugin = plugin;
    return fx;
  }
};

inline void save_model(const PairModel& m, const std::string& path) {
  nlohmann::ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kFormatVersion;
  j["content_kind"] = content_kind_name(m.content_kind);
  j["year_impute"] = m.year_impute;
  j["seed"] = std::to_string(m.forest.seed);
  j["min_samples_split"] = m.forest.min_samples_split;
  j["max_features"] = m.forest.max_features;
  j["warning"] = m.forest.warning;
  j["feature_names"] = m.forest.feature_names;
  if (m.content_kind == ContentKind::tfidf) j["tfidf"] = m.tfidf.to_json();
  auto& trees = j["trees"] = nlohmann::ordered_json::array();
  for (const auto& t : m.forest.trees) {
    nlohmann::ordered_json tj;
    auto& nodes = tj["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : t.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    }
    tj["importance"] = t.importance;
    tj["has_split"] = t.has_split;
    trees.push_back(std::move(tj));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
  out << j.dump() << '\n';
}

inline PairModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::io, "cannot open " + path);
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || j.value("format", "") != kModelFormat) {
    throw Error(ErrorCategory::format, path + ": not a model file");
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw Error(ErrorCategory::format, path + ": unsupported model version");
  }
  PairModel m;
  try {
    m.content_kind = parse_content_kind(j.at("content_kind").get<std::string>());
    m.year_impute = j.at("year_impute").get<double>();
    m.forest.seed = std::stoull(j.at("seed").get<std::string>());
    m.forest.min_samples_split = j.at("min_samples_split").get<int>();
    m.forest.max_features = j.at("max_features").get<int>();
    m.forest.warning = j.at("warning").get<std::string>();
    m.forest.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (m.content_kind == ContentKind::tfidf) m.tfidf = TfidfIndex::from_json(j.at("tfidf"));
    const int d = static_cast<int>(m.forest.feature_names.size());
    for (const auto& tj : j.at("trees")) {
      DecisionTree t;
      for (const auto& nj : tj.at("nodes")) {
        TreeNode n{nj.at(0).get<int>(), nj.at(1).get<double>(), nj.at(2).get<int>(),
                   nj.at(3).get<int>(), nj.at(4).get<double>()};
        t.nodes.push_back(n);
      }
      t.importance = tj.at("importance").get<std::vector<double>>();
      t.has_split = tj.at("has_split").get<bool>();
      const int count = static_cast<int>(t.nodes.size());
      for (const auto& n : t.nodes) {
        if (n.feature >= d ||
            (n.feature >= 0 && (n.left <= 0 || n.right <= 0 || n.left >= count ||
                                n.right >= count))) {
          throw Error(ErrorCategory::format, path + ": corrupt tree");
        }
      }
      if (t.nodes.empty()) throw Error(ErrorCategory::format, path + ": empty tree");
      m.forest.trees.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::format, path + ": " + e.what());
  }
  if (m.forest.trees.empty()) throw Error(ErrorCategory::format, path + ": no trees");
  return m;
}

/// Trains a pair model on labelled instances. TF-IDF statistics come from the
/// contents of the training citations only.
inline PairModel train_pair_model(const std::vector<PairwiseInstance>& train,
                                  ContentKind kind, const ForestOptions& opt,
                                  const PluginScores* plugin = nullptr) {
  PairModel m;
  m.content_kind = kind;
  m.year_impute = median_year_gap(train);
  if (kind == ContentKind::tfidf) {
    std::map<std::string, std::string> contents;  // by doi, deduplicated
    for (const auto& p : train) {
      contents.emplace(p.left->doi, citation_content(*p.left->citation));
      contents.emplace(p.right->doi, citation_content(*p.right->citation));
    }
    std::vector<std::string> docs;
    for (auto& [k, v] : contents) docs.push_back(std::move(v));
    m.tfidf = fit_tfidf(docs);
  }
  const auto fx = m.extractor(plugin);
  std::vector<std::vector<double>> X(train.size());
  std::vector<bool> y(train.size());
  parallel_for(train.size(), opt.threads,
               [&](std::size_t i) { X[i] = fx.extract(train[i]).row(); });
  for (std::size_t i = 0; i < train.size(); ++i) y[i] = train[i].label;
  m.forest = train_forest(X, y, opt, feature_names(kind));
  return m;
}

}  // namespace andkit
