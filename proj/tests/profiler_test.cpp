#include <gtest/gtest.h>

#include <numeric>

#include "andkit/linker.hpp"
#include "andkit/profiler.hpp"
#include "andkit/synth.hpp"
#include "test_util.hpp"

using namespace andkit;
using andkit::testing::citation;
using andkit::testing::claim;

namespace {

double proportion_sum(const DistributionReport& r) {
  double s = 0;
  for (const auto& b : r.bins) s += b.proportion;
  return s;
}

BlockDataset synth_dataset(std::uint64_t seed) {
  SynthOptions opt;
  opt.seed = seed;
  opt.authors = 2000;
  opt.citations = 10000;
  const auto sc = synthesize_corpus(opt);
  CitationIndex idx;
  for (const auto& c : sc.corpus) idx.add(c);
  return build_block_dataset(link_and_position(sc.registry, idx));
}

}  // namespace

TEST(Profiler, YearDistributionMatchesReferenceCount) {
  std::vector<CitationPtr> cs;
  const std::vector<std::optional<int>> years{2015, 2015, 2016, std::nullopt, 2020, 2015};
  for (std::size_t i = 0; i < years.size(); ++i) {
    cs.push_back(citation(std::to_string(i), {"A"}, "", "", years[i]));
  }
  const auto r = year_distribution(cs);
  EXPECT_EQ(r.total, 6u);
  EXPECT_DOUBLE_EQ(*r.proportion("2015"), 0.5);
  EXPECT_DOUBLE_EQ(*r.proportion("2016"), 1.0 / 6);
  EXPECT_DOUBLE_EQ(*r.proportion("unknown"), 1.0 / 6);
  EXPECT_FALSE(r.proportion("1999").has_value());
  EXPECT_EQ(r.bins.front().key, "2015");

  const auto single = year_distribution({citation("x", {"A"}, "", "", 2015)});
  ASSERT_EQ(single.bins.size(), 1u);
  EXPECT_EQ(single.bins[0].proportion, 1.0);
  EXPECT_TRUE(year_distribution({}).bins.empty());
}

TEST(Profiler, PositionBinsCapAtConfiguredValue) {
  const auto r = position_distribution({1, 1, 2, 3, 11, 12, 40}, 10);
  EXPECT_DOUBLE_EQ(*r.proportion("1"), 2.0 / 7);
  EXPECT_DOUBLE_EQ(*r.proportion("11+"), 3.0 / 7);
  EXPECT_EQ(r.bins.back().key, "11+");
  const auto ones = position_distribution({1, 1, 1});
  ASSERT_EQ(ones.bins.size(), 1u);
  EXPECT_EQ(ones.bins[0].proportion, 1.0);
}

TEST(Profiler, NamePopularityBuckets) {
  const auto distinct = name_popularity({"Ana Lopes", "Bo Li", "Cy Wu"}, PopularityKey::LN);
  ASSERT_EQ(distinct.bins.size(), 1u);
  EXPECT_EQ(distinct.bins[0].key, "1");
  std::vector<std::string> names(5, "Ana Lopes");
  names.push_back("Bo Li");
  const auto r = name_popularity(names, PopularityKey::LN);
  EXPECT_DOUBLE_EQ(*r.proportion("4-7"), 0.5);
  EXPECT_DOUBLE_EQ(*r.proportion("1"), 0.5);
  EXPECT_EQ(popularity_key("Ana Lopes", PopularityKey::LNFI), "lopes_a");
  EXPECT_EQ(popularity_key("Ludwig van Beethoven", PopularityKey::LN), "van beethoven");
  EXPECT_EQ(frequency_bucket(1), "1");
  EXPECT_EQ(frequency_bucket(3), "2-3");
  EXPECT_EQ(frequency_bucket(8), "8-15");
}

TEST(Profiler, LookupDistribution) {
  LookupTable t;
  t.facet = "gender";
  t.add("Ana", "female");
  t.add("Bo", "male");
  t.add("Cy", "male");
  const auto r = lookup_distribution({"ana", "BO", "Cy", "Dee"}, t);
  EXPECT_DOUBLE_EQ(*r.proportion("female"), 0.25);
  EXPECT_DOUBLE_EQ(*r.proportion("male"), 0.5);
  EXPECT_DOUBLE_EQ(*r.proportion("unknown"), 0.25);
  LookupTable empty;
  const auto u = lookup_distribution({"ana", "bo"}, empty);
  ASSERT_EQ(u.bins.size(), 1u);
  EXPECT_EQ(u.bins[0].key, "unknown");
  EXPECT_THROW(t.add("ANA", "x"), Error);
}

TEST(Profiler, BlockProfileOfTwoGroups) {
  const auto ds = build_block_dataset(
      {claim("a", "A B", citation("1", {"A B"})), claim("b", "A B", citation("2", {"A B"}))});
  const auto bp = block_profile(ds);
  EXPECT_EQ(*bp.block_size.proportion("2"), 1.0);
  EXPECT_EQ(*bp.authors_per_block.proportion("2"), 1.0);
}

TEST(Profiler, SyntheticSingleAuthorShareNearTarget) {
  const auto bp = block_profile(synth_dataset(1));
  EXPECT_NEAR(*bp.authors_per_block.proportion("1"), 0.945, 0.02);
}

TEST(Profiler, ReportsSumToOneAndIgnoreInputOrder) {
  const auto ds = synth_dataset(2);
  auto claims = dataset_claims(ds);
  auto reports = [&](const std::vector<const LinkedClaim*>& cs) {
    return std::vector<DistributionReport>{
        year_distribution(unique_citations(cs)), position_distribution(claim_positions(cs)),
        name_popularity(claim_names(cs), PopularityKey::LN),
        name_popularity(claim_names(cs), PopularityKey::LNFI)};
  };
  const auto a = reports(claims);
  Rng rng(4);
  rng.shuffle(claims);
  const auto b = reports(claims);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(proportion_sum(a[i]), 1.0, 1e-9) << a[i].facet;
    ASSERT_EQ(a[i].bins.size(), b[i].bins.size());
    for (std::size_t k = 0; k < a[i].bins.size(); ++k) {
      EXPECT_EQ(a[i].bins[k].key, b[i].bins[k].key);
      EXPECT_EQ(a[i].bins[k].count, b[i].bins[k].count);
    }
    const auto self = compare_reports(a[i], a[i]);
    EXPECT_EQ(self.max_gap, 0.0);
    for (const auto& g : self.gaps) EXPECT_EQ(g.gap, 0.0);
  }
}

TEST(Profiler, ComparisonGaps) {
  const auto a = position_distribution({1, 1, 2, 2});
  const auto b = position_distribution({1, 3, 3, 3});
  const auto c = compare_reports(a, b);
  EXPECT_DOUBLE_EQ(c.max_gap, 0.75);
  ASSERT_EQ(c.gaps.size(), 3u);
}

TEST(Profiler, VariationReportBothMeasures) {
  std::vector<LinkedClaim> cs{claim("a", "José García", citation("1", {"Jose Garcia"})),
                              claim("b", "Ana Lopes", citation("2", {"A. Lopes"})),
                              claim("c", "Ana Lopes", citation("3", {"Lopes Ana"})),
                              claim("d", "Ludwig van Beethoven", citation("4", {"L. van Beethoven"}))};
  std::vector<const LinkedClaim*> ptrs;
  for (const auto& c : cs) ptrs.push_back(&c);
  const auto v = variation_report(ptrs);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].measure, VariationMeasure::endwith);
  EXPECT_DOUBLE_EQ(v[0].csvd, 0.5);
  EXPECT_DOUBLE_EQ(v[0].civd, 0.25);
  for (const auto& s : v) EXPECT_LE(s.civd, s.csvd);
}
