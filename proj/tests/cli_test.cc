#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "xlingua/corpus.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string &args) {
  const std::string cmd = std::string(XLINGUA_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::vector<std::string>> rows(const std::string &text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, '\t')) cols.push_back(col);
    out.push_back(cols);
  }
  return out;
}

class Cli : public testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "xlingua_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "spec.json")
        << R"({"n_descriptors": 6, "n_train_docs": 60, "n_test_pairs": 10,
               "vocab_size_per_lang": 300, "lemmas_per_descriptor": 16, "rng_seed": 5})";
    ASSERT_EQ(run("gen-corpus --spec " + p("spec.json") + " --out " + p("data")).code, 0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string p(const std::string &rel) { return (dir_ / rel).string(); }

  static fs::path dir_;
};

fs::path Cli::dir_;

}  // namespace

TEST_F(Cli, TrainAssignSimilar) {
  const std::string data = p("data");
  for (const std::string lang : {"en", "es"}) {
    ASSERT_EQ(run("train --corpus " + data + "/train.tsv --thesaurus " + data +
                  "/thesaurus.txt --resources " + data + "/resources --lang " + lang +
                  " --out " + p("profiles." + lang))
                  .code,
              0);
  }
  ASSERT_EQ(run("length-model --data " + data + " --out " + p("lengths.txt")).code, 0);

  const auto test_docs = xlingua::read_manifest(data + "/test.tsv");
  const auto &first_en = *std::find_if(test_docs.begin(), test_docs.end(),
                                       [](auto &e) { return e.lang == "en"; });
  auto a = run("assign --profiles " + p("profiles.en") + " --doc " + first_en.path.string() +
               " --resources " + data + "/resources --thesaurus " + data +
               "/thesaurus.txt --top 3 --id " + first_en.id);
  ASSERT_EQ(a.code, 0);
  const auto ar = rows(a.out);
  ASSERT_FALSE(ar.empty());
  ASSERT_LE(ar.size(), 3u);
  for (const auto &r : ar) {
    ASSERT_EQ(r.size(), 4u);
    EXPECT_EQ(r[0], first_en.id);
    EXPECT_EQ(r[2].size() - r[2].find('.'), 7u);  // six decimals
    EXPECT_FALSE(r[3].empty());
  }

  auto s = run("similar --profiles-src " + p("profiles.en") + " --profiles-tgt " +
               p("profiles.es") + " --candidates " + data + "/test.tsv --resources " + data +
               "/resources --length-model " + p("lengths.txt") + " --query " + first_en.id +
               " --top 5");
  ASSERT_EQ(s.code, 0);
  const auto sr = rows(s.out);
  ASSERT_EQ(sr.size(), 5u);
  for (std::size_t i = 0; i < sr.size(); ++i) {
    ASSERT_EQ(sr[i].size(), 7u);
    EXPECT_EQ(sr[i][0], first_en.id);
    EXPECT_EQ(sr[i][1], std::to_string(i + 1));
    EXPECT_LE(std::stod(sr[i][6]), std::stod(sr[i][4]) + 1e-6);
  }

  auto f = run("find-translations --profiles-src " + p("profiles.en") + " --profiles-tgt " +
               p("profiles.es") + " --candidates " + data + "/test.tsv --resources " + data +
               "/resources --length-model " + p("lengths.txt") + " --threshold 0.70");
  ASSERT_EQ(f.code, 0);
  for (const auto &r : rows(f.out)) {
    ASSERT_EQ(r.size(), 5u);
    EXPECT_GE(std::stod(r[4]), 0.70);
  }
}

TEST_F(Cli, DedupeAndEvaluate) {
  std::ofstream(p("a.txt")) << "Council regulation on the carriage of dangerous goods by road.";
  std::ofstream(p("b.txt")) << "Council regulation on the carriage of dangerous goods by road!";
  std::ofstream(p("c.txt")) << "Something else entirely about fishing quotas.";
  std::ofstream(p("docs.tsv")) << "a\ten\ta.txt\t\nb\ten\tb.txt\t\nc\ten\tc.txt\t\n";
  auto d = run("dedupe --docs " + p("docs.tsv") + " --threshold 0.9");
  ASSERT_EQ(d.code, 0);
  const auto dr = rows(d.out);
  ASSERT_EQ(dr.size(), 1u);
  EXPECT_EQ(dr[0][0], "a");
  EXPECT_EQ(dr[0][1], "b");

  auto e = run("evaluate --mode T1ES --data " + p("data") + " --out " + p("report.tsv") +
               " --sweep " + p("sweep.tsv"));
  ASSERT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("T1ES\tno_lf"), std::string::npos);
  EXPECT_NE(e.out.find("T1ES\tlf"), std::string::npos);
  EXPECT_TRUE(fs::exists(p("sweep.tsv")));
  auto again = run("evaluate --mode T1ES --data " + p("data") + " --out " + p("report2.tsv"));
  EXPECT_EQ(again.out, e.out);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("assign --profiles " + p("nowhere.txt") + " --doc " + p("nowhere.txt")).code, 2);
  EXPECT_EQ(run("evaluate --mode NOPE --data " + p("data") + " --out " + p("x.tsv")).code, 1);
  std::ofstream(p("a.txt")) << "some text";
  std::ofstream(p("docs.tsv")) << "a\ten\ta.txt\t\n";
  EXPECT_EQ(run("dedupe --docs " + p("docs.tsv") + " --threshold 2").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  std::ofstream(p("bad_thesaurus.txt")) << "LANGS en\nD 42 1 1\nL en x\nBT 99\n";
  std::ofstream(p("one.tsv")) << "a\ten\ta.txt\t42\n";
  EXPECT_EQ(run("train --corpus " + p("one.tsv") + " --thesaurus " + p("bad_thesaurus.txt") +
                " --out " + p("o.txt"))
                .code,
            1);
}
