#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "andkit/disambig.hpp"
#include "andkit/linker.hpp"
#include "andkit/synth.hpp"
#include "test_util.hpp"

using namespace andkit;
using andkit::testing::citation;
using andkit::testing::claim;
using andkit::testing::TempDir;

namespace {

std::vector<PairwiseInstance> synth_pairs(const BlockDataset& ds) {
  return sample_pairwise(ds, 10, 1);
}

BlockDataset synth_dataset(std::uint64_t seed) {
  SynthOptions opt;
  opt.seed = seed;
  opt.authors = 500;
  opt.citations = 2500;
  opt.single_author_block_share = 0.7;
  const auto sc = synthesize_corpus(opt);
  CitationIndex idx;
  for (const auto& c : sc.corpus) idx.add(c);
  return build_block_dataset(link_and_position(sc.registry, idx));
}

double accuracy(const ForestModel& m, const std::vector<std::vector<double>>& X,
                const std::vector<bool>& y) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < X.size(); ++i) ok += (predict_proba(m, X[i]) >= 0.5) == y[i];
  return static_cast<double>(ok) / X.size();
}

}  // namespace

TEST(Disambig, WordJaccardExamples) {
  EXPECT_EQ(word_jaccard("deep learning", "deep learning").value, 1.0);
  EXPECT_EQ(word_jaccard("a b", "c d").value, 0.0);
  EXPECT_EQ(word_jaccard("a b c", "b c d").value, 0.5);
  EXPECT_EQ(word_jaccard("Deep, LEARNING!", "deep learning").value, 1.0);
  EXPECT_TRUE(word_jaccard("", "...").undefined);
}

TEST(Disambig, YearGapExamples) {
  EXPECT_EQ(year_gap(2015, 2010), 5);
  EXPECT_EQ(year_gap(2010, 2010), 0);
  EXPECT_FALSE(year_gap(2010, std::nullopt).has_value());
}

TEST(Disambig, NameSimilarityIsSetJaccardOfBigrams) {
  EXPECT_EQ(name_similarity("John Smith", "john smith"), 1.0);
  EXPECT_EQ(name_similarity("ab", "cd"), 0.0);
  // johnsmith: jo oh hn ns sm mi it th; johnsmyth: jo oh hn ns sm my yt th
  std::set<std::string> a{"jo", "oh", "hn", "ns", "sm", "mi", "it", "th"};
  std::set<std::string> b{"jo", "oh", "hn", "ns", "sm", "my", "yt", "th"};
  std::size_t inter = 0;
  for (const auto& g : a) inter += b.count(g);
  const double want = static_cast<double>(inter) / (a.size() + b.size() - inter);
  EXPECT_DOUBLE_EQ(name_similarity("johnsmith", "johnsmyth"), want);
  EXPECT_DOUBLE_EQ(want, 6.0 / 10.0);
}

TEST(Disambig, TfidfMatchesHandComputation) {
  TfidfIndex idx = fit_tfidf({"a b", "a c", "a b c"});
  const double ia = std::log(4.0 / 4.0) + 1;
  const double ib = std::log(4.0 / 3.0) + 1;
  EXPECT_DOUBLE_EQ(idx.idf("a"), ia);
  EXPECT_DOUBLE_EQ(idx.idf("b"), ib);
  EXPECT_EQ(idx.idf("zzz"), 0.0);
  // cos((ia, ib, 0), (ia, 0, ib))
  EXPECT_NEAR(idx.similarity("a b", "a c"), ia * ia / (ia * ia + ib * ib), 1e-12);
  // tf counts: "b b" -> (0, 2 ib, 0)
  EXPECT_NEAR(idx.similarity("a b", "b b"), ib * 2 * ib / (std::sqrt(ia * ia + ib * ib) * 2 * ib),
              1e-12);
  EXPECT_DOUBLE_EQ(idx.similarity("a b c", "a b c"), 1.0);
  EXPECT_EQ(idx.similarity("b", "c"), 0.0);
  EXPECT_EQ(idx.similarity("unseen words", "a"), 0.0);
}

TEST(Disambig, IdenticalCitationsGiveMaximalFeatures) {
  const auto c = citation("1", {"Ana Lopes"}, "graph neural networks", "Venue X", 2015, "Lab Y");
  const auto a = claim("a", "Ana Lopes", c);
  TfidfIndex idx = fit_tfidf({"graph neural networks", "other words"});
  FeatureExtractor fx;
  fx.kind = ContentKind::tfidf;
  fx.tfidf = &idx;
  const auto f = fx.extract(a, a);
  EXPECT_EQ(f.row(), (std::vector<double>{1, 0, 1, 1, 1, 0, 0, 0, 0}));
  EXPECT_EQ(feature_names(ContentKind::tfidf).size(), f.row().size());
  EXPECT_EQ(feature_names(ContentKind::none).size(), 7u);
}

TEST(Disambig, MissingMetadataUsesZeroAndMask) {
  const auto x = citation("1", {"Ana Lopes"}, "", "", std::nullopt, "");
  const auto y = citation("2", {"Ana Lopes"}, "words", "Venue", 2010, "Lab");
  FeatureExtractor fx;
  fx.kind = ContentKind::jaccard;
  fx.year_impute = 3.5;
  const auto f = fx.extract(claim("a", "Ana Lopes", x), claim("a", "Ana Lopes", y));
  EXPECT_EQ(f.year_gap, 3.5);
  EXPECT_TRUE(f.year_missing);
  EXPECT_EQ(f.venue_sim, 0.0);
  EXPECT_TRUE(f.venue_missing);
  EXPECT_TRUE(f.affil_missing);
  EXPECT_TRUE(f.content_missing);
}

TEST(Disambig, FeaturesAreSymmetric) {
  const auto ds = synth_dataset(2);
  const auto pairs = synth_pairs(ds);
  const auto model_tfidf = train_pair_model(pairs, ContentKind::tfidf, {10, 2, 0, 1, 1});
  for (auto kind : {ContentKind::none, ContentKind::jaccard, ContentKind::tfidf}) {
    FeatureExtractor fx = model_tfidf.extractor();
    fx.kind = kind;
    for (const auto& p : pairs) EXPECT_EQ(fx.extract(*p.left, *p.right), fx.extract(*p.right, *p.left));
  }
}

TEST(Disambig, ForestFitsSeparableData) {
  std::vector<std::vector<double>> X;
  std::vector<bool> y;
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.uniform();
    X.push_back({v, rng.uniform()});
    y.push_back(v > 0.5);
  }
  ForestOptions opt;
  opt.seed = 3;
  const auto m = train_forest(X, y, opt);
  EXPECT_EQ(accuracy(m, X, y), 1.0);
  EXPECT_EQ(m.trees.size(), 100u);
}

TEST(Disambig, SingleClassGivesConstantModel) {
  std::vector<std::vector<double>> X{{0.1}, {0.5}, {0.9}};
  const auto m = train_forest(X, {true, true, true}, {});
  EXPECT_FALSE(m.warning.empty());
  for (double v : {0.0, 0.3, 1.0}) EXPECT_EQ(predict_proba(m, {v}), 1.0);
  for (const auto& f : feature_importance(m)) EXPECT_EQ(f.mean, 0.0);
}

TEST(Disambig, ForestLearnsXor) {
  Rng rng(7);
  auto make = [&](int n, std::vector<std::vector<double>>& X, std::vector<bool>& y) {
    for (int i = 0; i < n; ++i) {
      const double a = rng.uniform(), b = rng.uniform();
      X.push_back({a, b});
      y.push_back((a > 0.5) != (b > 0.5));
    }
  };
  std::vector<std::vector<double>> X, Xt;
  std::vector<bool> y, yt;
  make(400, X, y);
  make(400, Xt, yt);
  ForestOptions opt;
  opt.seed = 11;
  EXPECT_GE(accuracy(train_forest(X, y, opt), Xt, yt), 0.95);
}

TEST(Disambig, ImportanceRanksInformativeFeatures) {
  Rng rng(5);
  std::vector<std::vector<double>> X;
  std::vector<bool> y;
  for (int i = 0; i < 500; ++i) {
    std::vector<double> row{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
    y.push_back(row[3] > 0.4);
    X.push_back(row);
  }
  ForestOptions opt;
  opt.seed = 2;
  const auto imp = feature_importance(train_forest(X, y, opt));
  double sum = 0;
  for (const auto& f : imp) sum += f.mean;
  EXPECT_NEAR(sum, 1.0, 1e-9);
  for (int f = 0; f < 3; ++f) EXPECT_LT(imp[f].mean, imp[3].mean);
}

TEST(Disambig, ForestIsDeterministicAcrossThreads) {
  Rng rng(3);
  std::vector<std::vector<double>> X;
  std::vector<bool> y;
  for (int i = 0; i < 300; ++i) {
    X.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
    y.push_back(X.back()[0] + X.back()[1] > 1.0);
  }
  ForestOptions a;
  a.seed = 4;
  ForestOptions b = a;
  b.threads = 4;
  const auto ma = train_forest(X, y, a);
  const auto mb = train_forest(X, y, b);
  for (const auto& x : X) {
    const double p = predict_proba(ma, x);
    EXPECT_EQ(p, predict_proba(mb, x));
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(Disambig, ModelFileRoundTrip) {
  TempDir dir("disambig-model");
  const auto ds = synth_dataset(3);
  const auto pairs = synth_pairs(ds);
  ForestOptions opt;
  opt.n_trees = 20;
  opt.seed = 9;
  const auto m = train_pair_model(pairs, ContentKind::tfidf, opt);
  save_model(m, dir.file("model.json"));
  const auto back = load_model(dir.file("model.json"));
  const auto fa = m.extractor();
  const auto fb = back.extractor();
  for (const auto& p : pairs) {
    EXPECT_EQ(predict_proba(m.forest, fa.extract(p).row()),
              predict_proba(back.forest, fb.extract(p).row()));
  }
  save_model(back, dir.file("again.json"));
  EXPECT_EQ(andkit::testing::read_file(dir.file("model.json")),
            andkit::testing::read_file(dir.file("again.json")));
  andkit::testing::write_file(dir.file("bad.json"), R"({"format":"andkit-forest","version":99})");
  EXPECT_THROW(load_model(dir.file("bad.json")), Error);
}

TEST(Disambig, TfidfIsFittedOnTrainingContentOnly) {
  const auto a = citation("1", {"Ana Lopes"}, "alpha beta");
  const auto b = citation("2", {"Ana Lopes"}, "alpha gamma");
  const auto ca = claim("x", "Ana Lopes", a);
  const auto cb = claim("y", "Ana Lopes", b);
  std::vector<PairwiseInstance> train{{&ca, &cb, false, "Ana Lopes"}, {&ca, &ca, true, "Ana Lopes"}};
  const auto m = train_pair_model(train, ContentKind::tfidf, {5, 2, 0, 1, 1});
  EXPECT_EQ(m.tfidf.document_count(), 2u);
  EXPECT_EQ(m.tfidf.vocabulary_size(), 3u);
  EXPECT_EQ(m.tfidf.idf("unseen"), 0.0);
}

TEST(Disambig, PluginScoresAreUnorderedAndValidated) {
  TempDir dir("disambig-plugin");
  andkit::testing::write_file(dir.file("s.tsv"), "# left\tright\tscore\np1\tp2\t0.75\n");
  const auto s = PluginScores::load(dir.file("s.tsv"));
  EXPECT_EQ(s.find("p2", "p1"), 0.75);
  EXPECT_FALSE(s.find("p1", "p3").has_value());
  andkit::testing::write_file(dir.file("bad.tsv"), "p1\tp2\t1.5\n");
  EXPECT_THROW(PluginScores::load(dir.file("bad.tsv")), Error);
}
