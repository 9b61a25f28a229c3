#include <gtest/gtest.h>

#include <functional>
#include <numeric>

#include "andkit/metrics.hpp"
#include "andkit/util.hpp"
#include "test_util.hpp"

using namespace andkit;

namespace {

std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, 0);
  std::function<void(int, int)> rec = [&](int i, int top) {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (int v = 0; v <= top + 1; ++v) {
      a[i] = v;
      rec(i + 1, std::max(top, v));
    }
  };
  rec(1, 0);
  return out;
}

// True when every cluster of `fine` lies inside one cluster of `coarse`.
bool refines(const std::vector<int>& fine, const std::vector<int>& coarse) {
  for (std::size_t i = 0; i < fine.size(); ++i) {
    for (std::size_t j = 0; j < fine.size(); ++j) {
      if (fine[i] == fine[j] && coarse[i] != coarse[j]) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Metrics, BellNumbers) {
  const std::vector<std::size_t> bell{1, 2, 5, 15, 52, 203};
  for (int n = 1; n <= 6; ++n) EXPECT_EQ(partitions(n).size(), bell[n - 1]);
}

TEST(Metrics, HandValues) {
  const auto b3 = bcubed(std::vector<int>{7, 7, 7, 7}, std::vector<int>{1, 1, 2, 2});
  EXPECT_EQ(b3.precision, 0.5);
  EXPECT_EQ(b3.recall, 1.0);
  EXPECT_EQ(b3.f1, 2.0 / 3.0);
  const auto c = classification_metrics({true, true, true, false}, {true, true, true, true});
  EXPECT_NEAR(c.macro_f1, 0.428571, 1e-6);
  EXPECT_EQ(c.tp, 3u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.negative_f1, 0.0);
}

TEST(Metrics, ClassificationFollowsDefinitions) {
  Rng rng(4);
  for (int round = 0; round < 500; ++round) {
    const auto n = 1 + rng.below(30);
    std::vector<bool> y, p;
    for (std::uint64_t i = 0; i < n; ++i) {
      y.push_back(rng.chance(0.6));
      p.push_back(rng.chance(0.5));
    }
    const auto s = classification_metrics(y, p);
    EXPECT_EQ(s.tp + s.fp + s.tn + s.fn, n);
    for (double v : {s.precision, s.recall, s.f1, s.macro_f1, s.negative_f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_DOUBLE_EQ(s.f1, harmonic_mean(s.precision, s.recall));
    EXPECT_DOUBLE_EQ(s.macro_f1, (s.f1 + s.negative_f1) / 2);
  }
  EXPECT_EQ(harmonic_mean(0, 0), 0.0);
  EXPECT_THROW(classification_metrics({}, {}), Error);
  EXPECT_THROW(classification_metrics({true}, {true, false}), Error);
}

TEST(Metrics, BCubedProperties) {
  for (int n = 1; n <= 5; ++n) {
    const auto parts = partitions(n);
    for (const auto& a : parts) {
      const auto self = bcubed(a, a);
      EXPECT_EQ(self.precision, 1.0);
      EXPECT_EQ(self.recall, 1.0);
      EXPECT_EQ(self.f1, 1.0);
      for (const auto& g : parts) {
        const auto s = bcubed(a, g);
        EXPECT_GE(s.precision, 0.0);
        EXPECT_LE(s.precision, 1.0);
        EXPECT_GE(s.recall, 0.0);
        EXPECT_LE(s.recall, 1.0);
        // Relabeling either side changes nothing.
        std::vector<int> relabeled;
        for (int x : a) relabeled.push_back(100 - 3 * x);
        std::vector<std::string> gold_names;
        for (int x : g) gold_names.push_back("g" + std::to_string(x));
        const auto r = bcubed(relabeled, gold_names);
        EXPECT_EQ(r.precision, s.precision);
        EXPECT_EQ(r.recall, s.recall);
        EXPECT_EQ(r.f1, s.f1);
      }
    }
  }
}

TEST(Metrics, RefiningRaisesPrecisionCoarseningRaisesRecall) {
  for (int n = 1; n <= 6; ++n) {
    const auto parts = partitions(n);
    for (const auto& gold : parts) {
      for (const auto& fine : parts) {
        for (const auto& coarse : parts) {
          if (!refines(fine, coarse)) continue;
          const auto f = bcubed(fine, gold);
          const auto c = bcubed(coarse, gold);
          EXPECT_GE(f.precision, c.precision);
          EXPECT_LE(f.recall, c.recall);
        }
      }
    }
  }
}

TEST(Metrics, PooledAndPerBlockAveraging) {
  BCubedAccumulator acc;
  acc.add_block(std::vector<int>{0, 0}, std::vector<int>{0, 1});        // P 0.5, R 1
  acc.add_block(std::vector<int>{0, 1, 2, 3}, std::vector<int>{0, 0, 0, 0});  // P 1, R 0.25
  const auto pooled = acc.score(BCubedAveraging::pooled);
  EXPECT_DOUBLE_EQ(pooled.precision, (1.0 + 4.0) / 6);
  EXPECT_DOUBLE_EQ(pooled.recall, (2.0 + 1.0) / 6);
  const auto per_block = acc.score(BCubedAveraging::per_block);
  EXPECT_DOUBLE_EQ(per_block.precision, 0.75);
  EXPECT_DOUBLE_EQ(per_block.recall, 0.625);
  EXPECT_DOUBLE_EQ(per_block.f1, harmonic_mean(0.75, 0.625));
  EXPECT_EQ(BCubedAccumulator{}.score().f1, 0.0);
  EXPECT_THROW(acc.add_block(std::vector<int>{0}, std::vector<int>{}), Error);
}

TEST(Metrics, ExternalIdsFileRoundTrip) {
  andkit::testing::TempDir dir("metrics-ids");
  ExternalIds ids{{{"a1", "10.1/x"}, "e1"}, {{"a2", "10.1/y"}, "e2"}};
  write_external_ids(ids, dir.file("ids.tsv"));
  EXPECT_EQ(read_external_ids(dir.file("ids.tsv")), ids);
  andkit::testing::write_file(dir.file("raw.tsv"), "a1\t 10.1/X \te1\n");
  EXPECT_EQ(read_external_ids(dir.file("raw.tsv")).at({"a1", "10.1/x"}), "e1");
}
