#pragma once

// Hierarchical agglomerative clustering of a block's citations over
// model-derived distances, and the grid search for the distance threshold.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "andkit/builder.hpp"
#include "andkit/disambig.hpp"
#include "andkit/error.hpp"
#include "andkit/metrics.hpp"
#include "andkit/util.hpp"

namespace andkit {

/// Symmetric distances with a zero diagonal, row-major n x n.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n = 0) : n_(n), d_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    d_[i * n_ + j] = v;
    d_[j * n_ + i] = v;
  }

  bool valid() const {
    for (std::size_t i = 0; i < n_; ++i) {
      if ((*this)(i, i) != 0.0) return false;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double v = (*this)(i, j);
        if (v != (*this)(j, i) || !(v >= 0.0 && v <= 1.0)) return false;
      }
    }
    return true;
  }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

/// The block's claims in clustering order: sorted by (paper_id, author_id) so
/// results do not depend on how the block was stored.
inline std::vector<const LinkedClaim*> clustering_order(const Block& block) {
  auto claims = block.claims();
  std::sort(claims.begin(), claims.end(), [](const LinkedClaim* a, const LinkedClaim* b) {
    if (a->citation->paper_id != b->citation->paper_id) {
      return a->citation->paper_id < b->citation->paper_id;
    }
    return a->author_id < b->author_id;
  });
  return claims;
}

/// distance(i, j) = 1 - P(same author) for the claims in clustering order.
inline DistanceMatrix block_distances(const std::vector<const LinkedClaim*>& claims,
                                      const PairModel& model,
                                      const PluginScores* plugin = nullptr) {
  const auto fx = model.extractor(plugin);
  DistanceMatrix m(claims.size());
  for (std::size_t i = 0; i < claims.size(); ++i) {
    for (std::size_t j = i + 1; j < claims.size(); ++j) {
      const double p = predict_proba(model.forest, fx.extract(*claims[i], *claims[j]).row());
      m.set(i, j, std::clamp(1.0 - p, 0.0, 1.0));
    }
  }
  return m;
}

inline DistanceMatrix block_distances(const Block& block, const PairModel& model,
                                      const PluginScores* plugin = nullptr) {
  return block_distances(clustering_order(block), model, plugin);
}

enum class Linkage { average, single, complete };

inline Linkage parse_linkage(const std::string& s) {
  if (s == "average") return Linkage::average;
  if (s == "single") return Linkage::single;
  if (s == "complete") return Linkage::complete;
  throw Error(ErrorCategory::config, "unknown linkage: " + s);
}

inline const char* linkage_name(Linkage l) {
  switch (l) {
    case Linkage::average: return "average";
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
  }
  return "?";
}

/// Full merge sequence. Merge k joins the clusters represented by
/// `merges[k].a < merges[k].b` at linkage distance `merges[k].height`.
struct Dendrogram {
  struct Merge {
    std::size_t a;
    std::size_t b;
    double height;
  };
  std::size_t n = 0;
  std::vector<Merge> merges;
};

/// Agglomerates until one cluster is left. At every step the pair of clusters
/// with the smallest linkage distance merges; ties go to the smallest (i, j)
/// pair of cluster representatives (the lowest element index in a cluster).
/// Cluster distances follow the Lance-Williams update for the chosen linkage.
inline Dendrogram build_dendrogram(const DistanceMatrix& m,
                                   Linkage linkage = Linkage::average) {
  const std::size_t n = m.size();
  Dendrogram dg;
  dg.n = n;
  if (n < 2) return dg;
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = m(i, j);
  }
  std::vector<std::size_t> size(n, 1);
  std::vector<bool> active(n, true);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (d[i * n + j] < best) {
          best = d[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    dg.merges.push_back({bi, bj, best});
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      const double dik = d[k * n + bi];
      const double djk = d[k * n + bj];
      double v = 0;
      switch (linkage) {
        case Linkage::average:
          v = (static_cast<double>(size[bi]) * dik + static_cast<double>(size[bj]) * djk) /
              static_cast<double>(size[bi] + size[bj]);
          break;
        case Linkage::single:
          v = std::min(dik, djk);
          break;
        case Linkage::complete:
          v = std::max(dik, djk);
          break;
      }
      d[k * n + bi] = v;
      d[bi * n + k] = v;
    }
    size[bi] += size[bj];
    active[bj] = false;
  }
  return dg;
}

/// Cluster id per element after applying merges while their height is
/// <= threshold. Ids are numbered by first occurrence in element order.
inline std::vector<int> cut_dendrogram(const Dendrogram& dg, double threshold) {
  std::vector<std::size_t> parent(dg.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& mg : dg.merges) {
    if (mg.height > threshold) break;
    parent[find(mg.b)] = find(mg.a);
  }
  std::vector<int> ids(dg.n, -1);
  std::vector<int> root_id(dg.n, -1);
  int next = 0;
  for (std::size_t i = 0; i < dg.n; ++i) {
    const auto r = find(i);
    if (root_id[r] < 0) root_id[r] = next++;
    ids[i] = root_id[r];
  }
  return ids;
}

/// Merges clusters while the smallest linkage distance is <= threshold.
inline std::vector<int> hac(const DistanceMatrix& m, double threshold,
                            Linkage linkage = Linkage::average) {
  return cut_dendrogram(build_dendrogram(m, linkage), threshold);
}

// ---------------------------------------------------------------------------
// Threshold tuning

struct TuneOptions {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.05;
  Linkage linkage = Linkage::average;
  BCubedAveraging averaging = BCubedAveraging::pooled;
  unsigned threads = 1;
};

struct TunePoint {
  double threshold = 0;
  BCubedScore score;
};

struct TuneResult {
  double best_threshold = 0;
  BCubedScore best;
  std::vector<TunePoint> grid;
};

/// Grid points lo, lo + step, ..., hi (both ends included).
inline std::vector<double> threshold_grid(double lo, double hi, double step) {
  if (!(step > 0) || hi < lo) {
    throw Error(ErrorCategory::invalid_argument, "bad threshold grid");
  }
  std::vector<double> g;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) {
    g.push_back(std::min(hi, lo + static_cast<double>(k) * step));
  }
  if (hi - g.back() > 1e-12) g.push_back(hi);
  // Round to 12 decimals so 0.15000000000000002 prints and compares as 0.15.
  for (auto& t : g) t = std::round(t * 1e12) / 1e12;
  return g;
}

/// Dendrogram of one block together with its gold labels.
struct PreparedBlock {
  Dendrogram dendrogram;
  std::vector<std::string> gold;  // author ids in clustering order
};

inline std::vector<PreparedBlock> prepare_blocks(const BlockDataset& ds,
                                                 const PairModel& model, Linkage linkage,
                                                 unsigned threads,
                                                 const PluginScores* plugin = nullptr) {
  std::vector<PreparedBlock> out(ds.blocks.size());
  parallel_for(ds.blocks.size(), threads, [&](std::size_t b) {
    const auto claims = clustering_order(ds.blocks[b]);
    out[b].dendrogram = build_dendrogram(block_distances(claims, model, plugin), linkage);
    for (const auto* c : claims) out[b].gold.push_back(c->author_id);
  });
  return out;
}

/// B-cubed over all blocks at each grid threshold; returns the threshold
/// with the highest B3-F1, ties going to the smaller threshold.
inline TuneResult tune_threshold(const std::vector<PreparedBlock>& blocks,
                                 const TuneOptions& opt) {
  if (blocks.empty()) {
    throw Error(ErrorCategory::invalid_argument, "tune_threshold: no blocks");
  }
  TuneResult r;
  for (double t : threshold_grid(opt.lo, opt.hi, opt.step)) {
    BCubedAccumulator acc;
    for (const auto& b : blocks) acc.add_block(cut_dendrogram(b.dendrogram, t), b.gold);
    r.grid.push_back({t, acc.score(opt.averaging)});
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.grid.size(); ++i) {
    if (r.grid[i].score.f1 > r.grid[best].score.f1) best = i;
  }
  r.best_threshold = r.grid[best].threshold;
  r.best = r.grid[best].score;
  return r;
}

inline TuneResult tune_threshold(const BlockDataset& validation, const PairModel& model,
                                 const TuneOptions& opt = {},
                                 const PluginScores* plugin = nullptr) {
  return tune_threshold(prepare_blocks(validation, model, opt.linkage, opt.threads, plugin),
                        opt);
}

// ---------------------------------------------------------------------------
// Assignments

struct ClusterAssignment {
  std::string cfn_key;
  std::vector<const LinkedClaim*> claims;  // clustering order
  std::vector<int> cluster;                // parallel to claims
};

inline std::vector<ClusterAssignment> cluster_blocks(const BlockDataset& ds,
                                                     const PairModel& model,
                                                     double threshold, Linkage linkage,
                                                     unsigned threads = 1,
                                                     const PluginScores* plugin = nullptr) {
  std::vector<ClusterAssignment> out(ds.blocks.size());
  parallel_for(ds.blocks.size(), threads, [&](std::size_t b) {
    auto& a = out[b];
    a.cfn_key = ds.blocks[b].cfn_key;
    a.claims = clustering_order(ds.blocks[b]);
    a.cluster = hac(block_distances(a.claims, model, plugin), threshold, linkage);
  });
  return out;
}

inline BCubedScore score_assignments(const std::vector<ClusterAssignment>& assignments,
                                     BCubedAveraging averaging = BCubedAveraging::pooled) {
  BCubedAccumulator acc;
  for (const auto& a : assignments) {
    std::vector<std::string> gold;
    for (const auto* c : a.claims) gold.push_back(c->author_id);
    acc.add_block(a.cluster, gold);
  }
  return acc.score(averaging);
}

/// "cfn_key<TAB>paper_id<TAB>author_id<TAB>cluster_id" lines.
inline void write_assignments(const std::vector<ClusterAssignment>& assignments,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::io, "cannot write " + path);
  out << "cfn_key\tpaper_id\tauthor_id\tcluster_id\n";
  for (const auto& a : assignments) {
    for (std::size_t i = 0; i < a.claims.size(); ++i) {
      out << a.cfn_key << '\t' << a.claims[i]->citation->paper_id << '\t'
          << a.claims[i]->author_id << '\t' << a.cluster[i] << '\n';
    }
  }
}

}  // namespace andkit
