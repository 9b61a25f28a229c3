#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "test_util.hpp"

using andkit::testing::TempDir;

namespace {

int run(const std::string& args, const std::string& log) {
  const std::string cmd = std::string("\"") + ANDKIT_CLI_PATH + "\" " + args + " > \"" + log + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, Version) {
  TempDir dir("cli-version");
  EXPECT_EQ(run("--version", dir.file("log")), 0);
  EXPECT_NE(andkit::testing::read_file(dir.file("log")).find("andkit"), std::string::npos);
}

TEST(Cli, ExitCodesByCategory) {
  TempDir dir("cli-codes");
  const auto log = dir.file("log");
  EXPECT_EQ(run("--set no_such_key=1 link", log), 2);
  EXPECT_EQ(run("--set position_margin=7 link", log), 2);
  EXPECT_EQ(run("--out " + dir.file("o") + " --set registry=" + dir.file("nope.jsonl") +
                    " corpus=" + dir.file("nope2.jsonl") + " link",
                log),
            3);
  andkit::testing::write_file(dir.file("bad.jsonl"), "not json\n");
  EXPECT_EQ(run("--out " + dir.file("o") + " train", log), 3);
  andkit::testing::write_file(dir.file("o/blocks.jsonl"), "{\"format\":\"something-else\"}\n");
  EXPECT_EQ(run("--out " + dir.file("o") + " trim", log), 4);
  EXPECT_NE(run("frobnicate", log), 0);
}

TEST(Cli, SynthThenRun) {
  TempDir dir("cli-run");
  const auto log = dir.file("log");
  ASSERT_EQ(run("--out " + dir.file("in") + " --seed 3 synth --authors 200 --citations 1000", log), 0);
  const auto in = dir.file("in");
  ASSERT_EQ(run("--out " + dir.file("out") + " --seed 3 --set n_trees=10 registry=" + in +
                    "/registry.jsonl corpus=" + in + "/corpus.jsonl external_ids=" + in +
                    "/external_ids.tsv run -q",
                log),
            0)
      << andkit::testing::read_file(log);
  for (const char* f : {"scorecard.tsv", "audit.tsv", "tune.json", "report"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.file("out") + "/" + f)) << f;
  }
}
