#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "andkit/linker.hpp"
#include "andkit/synth.hpp"

using namespace andkit;

namespace {

CitationRecord paper(const std::string& doi, std::vector<std::string> names) {
  CitationRecord c;
  c.doi = doi;
  c.paper_id = doi;
  for (auto& n : names) c.authors.push_back({std::move(n), ""});
  return c;
}

}  // namespace

TEST(Linker, PositionExamples) {
  EXPECT_EQ(identify_author_position("Florina Carmen Ciornei",
                                     std::vector<std::string>{"M.C. Ciornei", "F.C. Ciornei"}),
            0);
  EXPECT_EQ(identify_author_position("John Smith",
                                     std::vector<std::string>{"John Smith", "Alice Brown"}),
            1);
  EXPECT_EQ(identify_author_position("Fan Wang", std::vector<std::string>{"Wang Fan"}), 1);
  EXPECT_EQ(identify_author_position("Fan Wang", std::vector<std::string>{"Q. Li"}), 0);
  EXPECT_EQ(identify_author_position("Fan Wang", std::vector<std::string>{}), 0);
  EXPECT_EQ(identify_author_position("Fan Wang", std::vector<std::string>{"..", "--"}), 0);
}

TEST(Linker, SingleAuthorFloorIsConfigurable) {
  const std::vector<std::string> one{"F. Wang"};
  const double s = position_scores("Fan Wang", one)[0];
  EXPECT_EQ(identify_author_position("Fan Wang", one, {0.2, s}), 1);
  EXPECT_EQ(identify_author_position("Fan Wang", one, {0.2, s + 1e-9}), 0);
}

TEST(Linker, AcceptedPositionLeadsEveryOtherByMoreThanMargin) {
  const auto cases = synthesize_position_cases(600, 77);
  for (const auto& c : cases) {
    const int p = identify_author_position(c.cfn, c.names);
    if (p <= 0 || c.names.size() < 2) continue;
    const auto s = position_scores(c.cfn, c.names);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (static_cast<int>(i) + 1 != p) EXPECT_GT(s[p - 1] - s[i], 0.2);
    }
  }
}

TEST(Linker, PermutationConsistent) {
  const auto cases = synthesize_position_cases(400, 5);
  Rng rng(1);
  for (const auto& c : cases) {
    const int p = identify_author_position(c.cfn, c.names);
    std::vector<std::size_t> perm(c.names.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    std::vector<std::string> shuffled;
    for (auto i : perm) shuffled.push_back(c.names[i]);
    const int q = identify_author_position(c.cfn, shuffled);
    if (p == 0) {
      EXPECT_EQ(q, 0);
    } else {
      ASSERT_GT(q, 0);
      EXPECT_EQ(perm[q - 1] + 1, static_cast<std::size_t>(p));
    }
  }
}

TEST(Linker, AppendingClearlyWrongNameKeepsAnswer) {
  const auto cases = synthesize_position_cases(400, 9);
  for (const auto& c : cases) {
    if (c.names.size() < 2) continue;
    const int p = identify_author_position(c.cfn, c.names);
    auto s = position_scores(c.cfn, c.names);
    std::sort(s.rbegin(), s.rend());
    auto extended = c.names;
    extended.push_back("Qxz Vwy");
    if (position_scores(c.cfn, std::vector<std::string>{"Qxz Vwy"})[0] <= s[1]) {
      EXPECT_EQ(identify_author_position(c.cfn, extended), p);
    }
  }
}

TEST(Linker, DoiJoinCountsUnresolved) {
  CitationIndex idx;
  EXPECT_TRUE(idx.add(paper("10.1/d1", {"Ana Lopes", "Bo Li"})));
  EXPECT_FALSE(idx.add(paper("10.1/d1", {"X"})));
  std::vector<AuthorRecord> reg{{"a1", "Ana Lopes", {"10.1/d1", "10.1/d2"}},
                                {"a2", "Bo Li", {"10.1/d1"}}};
  LinkReport r;
  const auto claims = link_by_doi(reg, idx, &r);
  ASSERT_EQ(claims.size(), 2u);
  EXPECT_EQ(r.unresolved, 1u);
  EXPECT_EQ(r.resolved, 2u);
  EXPECT_EQ(claims[0].doi, "10.1/d1");
  EXPECT_EQ(claims[1].author_id, "a2");
  EXPECT_TRUE(link_by_doi(std::vector<AuthorRecord>{}, idx).empty());

  const auto positioned = link_and_position(reg, idx, {}, 1, &r);
  ASSERT_EQ(positioned.size(), 2u);
  EXPECT_EQ(positioned[0].position, 1);
  EXPECT_EQ(positioned[1].position, 2);
  EXPECT_EQ(r.positioned, 2u);
}

TEST(Linker, ThreadCountDoesNotChangeClaims) {
  SynthOptions opt;
  opt.authors = 300;
  opt.citations = 1500;
  const auto sc = synthesize_corpus(opt);
  CitationIndex idx;
  for (const auto& c : sc.corpus) idx.add(c);
  LinkReport r1, r4;
  const auto a = link_and_position(sc.registry, idx, {}, 1, &r1);
  const auto b = link_and_position(sc.registry, idx, {}, 4, &r4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(same_claim(a[i], b[i]));
  EXPECT_EQ(r1.rejected, r4.rejected);
  for (const auto& c : a) {
    EXPECT_GE(c.position, 1);
    EXPECT_LE(c.position, static_cast<int>(c.citation->authors.size()));
  }
}
