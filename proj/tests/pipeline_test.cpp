#include <gtest/gtest.h>

#include <cstdlib>

#include "ary/pipeline.hpp"
#include "ary/synth.hpp"
#include "support.hpp"

using namespace ary;
using testing_support::read_file;
using testing_support::TempDir;

namespace {

PipelineConfig small_run(const TempDir& dir, const std::string& out) {
  PipelineConfig cfg;
  cfg.input = (dir / "synth/comments.txt").string();
  cfg.lexicon = dir / "synth/lexicon.tsv";
  cfg.reference = dir / "synth/reference.tsv";
  cfg.out_dir = dir / out;
  cfg.train.dim = 32;
  cfg.train.epochs = 10;
  cfg.train.seed = 5;
  cfg.algorithms = {Algorithm::skipgram, Algorithm::cbow};
  cfg.deterministic = true;
  return cfg;
}

}  // namespace

TEST(Pipeline, DeterministicRunsAreByteIdentical) {
  TempDir dir;
  SynthConfig sc;
  sc.canonicals = 12;
  sc.distractors = 12;
  sc.oov_entries = 3;
  write_synthetic(generate_synthetic(sc), dir / "synth");
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const auto m1 = run_pipeline(small_run(dir, "a"));
  const auto m2 = run_pipeline(small_run(dir, "b"));
  ::unsetenv("SOURCE_DATE_EPOCH");
  EXPECT_EQ(m1.dump(), m2.dump());
  EXPECT_EQ(m1["started_at"], "2023-11-14T22:13:20Z");
  for (const char* f : {"corpus.txt", "stats.tsv", "dict.tsv", "report.tsv", "manifest.json", "vectors/skipgram.txt",
                        "vectors/cbow.txt"})
    EXPECT_EQ(read_file(dir / "a" / f), read_file(dir / "b" / f)) << f;

  EXPECT_EQ(m1["models"].size(), 2u);
  EXPECT_EQ(m1["models"][0]["id"], "skipgram");
  EXPECT_EQ(m1["models"][0]["vectors_digest"], file_digest(dir / "a/vectors/skipgram.txt"));
  EXPECT_EQ(m1["builder"]["dictionary_digest"], file_digest(dir / "a/dict.tsv"));
  EXPECT_EQ(m1["builder"]["config"]["k"], 20);
  EXPECT_EQ(m1["builder"]["config"]["method"], "seqmatch_skeleton");
  EXPECT_EQ(m1["lexicon"]["entries"], 15);
  EXPECT_GT(m1["builder"]["pairs"].get<int>(), 0);
  EXPECT_GT(m1["evaluation"]["coverage"].get<double>(), 0.0);

  const auto dict = load_dictionary(dir / "a/dict.tsv");
  EXPECT_EQ(dict.size(), m1["builder"]["pairs"].get<std::size_t>());
  const auto report = read_file(dir / "a/report.tsv");
  EXPECT_NE(report.find("merged\t"), std::string::npos);
}

TEST(Pipeline, EmptyCorpusIsAnError) {
  TempDir dir;
  testing_support::write_file(dir / "c.txt", "ok\nسلام\n");
  testing_support::write_file(dir / "l.tsv", "salam\n");
  testing_support::write_file(dir / "r.tsv", "translit\tcanonical\n");
  PipelineConfig cfg;
  cfg.input = (dir / "c.txt").string();
  cfg.lexicon = dir / "l.tsv";
  cfg.reference = dir / "r.tsv";
  cfg.out_dir = dir / "out";
  EXPECT_THROW(run_pipeline(cfg), Error);
}

TEST(Pipeline, FileDigest) {
  TempDir dir;
  testing_support::write_file(dir / "x", "foobar");
  EXPECT_EQ(file_digest(dir / "x"), "85944171f73967e8");
  EXPECT_THROW(file_digest(dir / "missing"), Error);
}
