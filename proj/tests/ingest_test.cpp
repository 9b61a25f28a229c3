#include <gtest/gtest.h>

#include <sys/resource.h>

#include "andkit/ingest.hpp"
#include "andkit/util.hpp"
#include "test_util.hpp"

using namespace andkit;
using andkit::testing::TempDir;
using andkit::testing::write_file;

namespace {

CitationRecord random_citation(Rng& rng, int i) {
  CitationRecord c;
  c.doi = "10.9/" + std::to_string(i);
  c.paper_id = std::to_string(1000 + i);
  c.title = rng.chance(0.5) ? "Title \"quoted\" " + std::to_string(i) : "";
  c.abstract = rng.chance(0.5) ? "Ab\tstract\nwith ünïcode" : "";
  c.venue = rng.chance(0.8) ? "Venue " + std::to_string(rng.below(5)) : "";
  if (rng.chance(0.7)) c.year = 1990 + static_cast<int>(rng.below(30));
  const auto n = 1 + rng.below(5);
  for (std::uint64_t k = 0; k < n; ++k) {
    c.authors.push_back({"Name " + std::to_string(k), rng.chance(0.5) ? "Lab" : ""});
  }
  return c;
}

// Counts duplicate keys the slow way: every earlier accepted key.
std::size_t reference_duplicates(const std::vector<std::string>& keys) {
  std::size_t dup = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (keys[j] == keys[i]) {
        ++dup;
        break;
      }
    }
  }
  return dup;
}

}  // namespace

TEST(Ingest, CorpusRoundTripIsIdentity) {
  TempDir dir("ingest-rt");
  Rng rng(42);
  std::vector<CitationRecord> records;
  {
    std::ofstream out(dir.file("corpus.jsonl"));
    for (int i = 0; i < 300; ++i) {
      records.push_back(random_citation(rng, i));
      write_line(out, records.back());
    }
  }
  std::vector<CitationRecord> back;
  read_citation_corpus(dir.file("corpus.jsonl")).for_each([&](CitationRecord r) {
    back.push_back(std::move(r));
  });
  EXPECT_EQ(back, records);

  std::ofstream again(dir.file("again.jsonl"));
  for (const auto& r : back) write_line(again, r);
  again.close();
  EXPECT_EQ(andkit::testing::read_file(dir.file("again.jsonl")),
            andkit::testing::read_file(dir.file("corpus.jsonl")));
}

TEST(Ingest, RegistryRoundTripAndNormalization) {
  TempDir dir("ingest-reg");
  write_file(dir.file("reg.jsonl"),
             R"({"author_id":" 0000-1 ","cfn":"Ana Lopes","dois":[" 10.1/AB ","10.1/ab","10.1/c"]})"
             "\n");
  const auto reg = load_author_registry(dir.file("reg.jsonl"));
  ASSERT_EQ(reg.size(), 1u);
  EXPECT_EQ(reg[0].author_id, "0000-1");
  EXPECT_EQ(reg[0].claimed_dois, (std::vector<std::string>{"10.1/ab", "10.1/c"}));

  std::ostringstream line;
  write_line(line, reg[0]);
  EXPECT_EQ(parse_author_line(line.str()), reg[0]);
}

TEST(Ingest, MalformedLinesAreCountedBySkipReason) {
  TempDir dir("ingest-bad");
  write_file(dir.file("corpus.jsonl"),
             "{not json\n"
             "\n"
             R"({"paper_id":"1","authors":[{"name":"A"}]})" "\n"
             R"({"doi":"10.1/x","paper_id":"1","authors":[]})" "\n"
             R"({"doi":"10.1/y","paper_id":"2","year":"1999","authors":[{"name":"A"}]})" "\n"
             R"({"doi":"10.1/z","paper_id":3,"year":null,"authors":[{"name":"A"}]})" "\n"
             R"({"doi":"10.1/Z","paper_id":"4","authors":[{"name":"B"}]})" "\n"
             R"([1,2,3])" "\n");
  auto reader = read_citation_corpus(dir.file("corpus.jsonl"));
  std::vector<CitationRecord> ok;
  reader.for_each([&](CitationRecord r) { ok.push_back(std::move(r)); });
  ASSERT_EQ(ok.size(), 1u);
  EXPECT_EQ(ok[0].paper_id, "3");
  EXPECT_FALSE(ok[0].year.has_value());
  const auto& c = reader.counters();
  EXPECT_EQ(c.lines, 8u);
  EXPECT_EQ(c.blank, 1u);
  EXPECT_EQ(c.errors[static_cast<int>(IngestError::malformed_json)], 2u);
  EXPECT_EQ(c.errors[static_cast<int>(IngestError::missing_field)], 1u);
  EXPECT_EQ(c.errors[static_cast<int>(IngestError::invalid_value)], 2u);
  EXPECT_EQ(c.errors[static_cast<int>(IngestError::duplicate_key)], 1u);
  EXPECT_EQ(reader.report().rejected, 6u);
}

TEST(Ingest, RegistryRejectsEmptyFields) {
  for (const char* bad : {R"({"author_id":"","cfn":"A B","dois":[]})",
                          R"({"author_id":"x","cfn":"  ","dois":[]})",
                          R"({"author_id":"x","cfn":"A B","dois":"10.1/a"})",
                          R"({"author_id":"x","cfn":"A B","dois":[""]})",
                          R"({"author_id":"x","cfn":"A B","dois":[7]})"}) {
    EXPECT_THROW(parse_author_line(bad), detail::LineFailure) << bad;
  }
}

TEST(Ingest, DuplicateIdsMatchReferenceCount) {
  TempDir dir("ingest-dup");
  Rng rng(9);
  std::vector<std::string> keys;
  std::ostringstream text;
  for (int i = 0; i < 400; ++i) {
    const auto id = "id" + std::to_string(rng.below(150));
    keys.push_back(id);
    text << R"({"author_id":")" << id << R"(","cfn":"A B","dois":[]})" << '\n';
  }
  write_file(dir.file("reg.jsonl"), text.str());
  auto reader = read_author_registry(dir.file("reg.jsonl"));
  std::set<std::string> seen;
  reader.for_each([&](AuthorRecord r) { EXPECT_TRUE(seen.insert(r.author_id).second); });
  EXPECT_EQ(reader.counters().errors[static_cast<int>(IngestError::duplicate_key)],
            reference_duplicates(keys));
  EXPECT_EQ(seen.size() + reference_duplicates(keys), keys.size());
}

TEST(Ingest, YieldedRecordsSatisfyInvariants) {
  TempDir dir("ingest-inv");
  Rng rng(3);
  {
    std::ofstream out(dir.file("corpus.jsonl"));
    for (int i = 0; i < 200; ++i) write_line(out, random_citation(rng, i % 150));
  }
  read_citation_corpus(dir.file("corpus.jsonl")).for_each([](const CitationRecord& r) {
    EXPECT_FALSE(r.doi.empty());
    EXPECT_EQ(r.doi, normalize_doi(r.doi));
    EXPECT_FALSE(r.authors.empty());
    for (const auto& a : r.authors) EXPECT_FALSE(trim_view(a.name).empty());
  });
}

TEST(Ingest, MissingFileIsAnIoError) {
  try {
    read_author_registry("/nonexistent/andkit/registry.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::io);
  }
}

// Reading holds one line at a time: peak RSS must not grow with file size.
TEST(Ingest, StreamingMemoryIsBounded) {
  TempDir dir("ingest-mem");
  const std::string path = dir.file("big.jsonl");
  {
    std::ofstream out(path);
    const std::string abstract(400, 'x');
    for (int i = 0; i < 150000; ++i) {
      out << R"({"doi":"10.5/)" << i << R"(","paper_id":")" << i << R"(","abstract":")"
          << abstract << R"(","authors":[{"name":"A B"}]})" << '\n';
    }
  }
  const auto file_mb = std::filesystem::file_size(path) / (1024.0 * 1024.0);
  ASSERT_GT(file_mb, 60.0);
  rusage before{};
  getrusage(RUSAGE_SELF, &before);
  std::size_t n = 0;
  read_citation_corpus(path).for_each([&](const CitationRecord&) { ++n; });
  rusage after{};
  getrusage(RUSAGE_SELF, &after);
  EXPECT_EQ(n, 150000u);
  const double grown_mb = (after.ru_maxrss - before.ru_maxrss) / 1024.0;
  // The duplicate-key set grows with the record count (~10 MB here), the
  // text itself must not.
  EXPECT_LT(grown_mb, file_mb / 3) << "peak RSS grew by " << grown_mb << " MB";
}
