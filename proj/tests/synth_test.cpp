#include <gtest/gtest.h>

#include <set>

#include "ary/simscore.hpp"
#include "ary/synth.hpp"
#include "support.hpp"

using namespace ary;
using testing_support::read_file;
using testing_support::TempDir;

namespace {

const SynthCorpus& fixture() {
  static const SynthCorpus s = generate_synthetic(SynthConfig{});
  return s;
}

}  // namespace

TEST(Synth, ShapeMatchesConfig) {
  const auto& s = fixture();
  const SynthConfig cfg;
  EXPECT_EQ(s.canonicals.size(), cfg.canonicals);
  EXPECT_EQ(s.distractors.size(), cfg.distractors);
  EXPECT_EQ(s.lexicon.size(), cfg.canonicals + cfg.oov_entries);
  std::map<std::string, std::size_t> per_group;
  for (const auto& v : s.variants) ++per_group[v.canonical];
  EXPECT_EQ(per_group.size(), cfg.canonicals);
  for (const auto& [c, n] : per_group) {
    EXPECT_GE(n, cfg.min_variants) << c;
    EXPECT_LE(n, cfg.max_variants) << c;
  }
  EXPECT_EQ(s.reference.size(), s.variants.size());
}

TEST(Synth, PlantedScoresAndCountsAreExact) {
  const auto& s = fixture();
  CleanConfig cc;
  cc.threads = 1;
  const auto corpus = clean_corpus(s.comments, cc);
  std::set<std::string> phenomena;
  for (const auto& v : s.variants) {
    EXPECT_TRUE(s.lexicon.contains(v.canonical));
    EXPECT_FALSE(s.lexicon.contains(v.form)) << v.form;
    EXPECT_NE(v.form, v.canonical);
    EXPECT_TRUE(s.reference.contains(v.form, v.canonical));
    EXPECT_EQ(v.skeleton_score, score(v.form, v.canonical, ScoreKind::seqmatch_skeleton));
    EXPECT_EQ(v.skeleton_equal, skeletonize(v.form) == skeletonize(v.canonical) && !skeletonize(v.form).empty());
    EXPECT_EQ(v.count, corpus.count(v.form)) << v.form;
    phenomena.insert(v.phenomenon);
  }
  for (const char* p : {"vowel-change", "vowel-drop", "gemination", "degemination", "consonant-shift"})
    EXPECT_TRUE(phenomena.count(p)) << p;
}

TEST(Synth, DistractorsAreLexicallyDistant) {
  const auto& s = fixture();
  for (const auto& d : s.distractors) {
    for (const auto& c : s.canonicals) EXPECT_LT(score(d, c, ScoreKind::seqmatch_skeleton), 0.5) << d << " " << c;
    for (const auto& v : s.variants) EXPECT_LT(score(d, v.form, ScoreKind::seqmatch_skeleton), 0.5) << d << " " << v.form;
  }
}

TEST(Synth, EverySweepBandHasAFrequentVariant) {
  const auto& s = fixture();
  const SynthConfig cfg;
  for (std::size_t i = 0; i + 1 < cfg.sweep_bands.size(); ++i) {
    bool found = false;
    for (const auto& v : s.variants)
      if (v.count >= 2 && v.skeleton_score >= cfg.sweep_bands[i] && v.skeleton_score < cfg.sweep_bands[i + 1])
        found = true;
    EXPECT_TRUE(found) << cfg.sweep_bands[i];
  }
}

TEST(Synth, FramesAndNoise) {
  const auto& s = fixture();
  CleanConfig cc;
  cc.threads = 1;
  CleanStats st;
  const auto corpus = clean_corpus(s.comments, cc, &st);
  EXPECT_GT(st.non_latin, 0u);
  EXPECT_GT(st.duplicates, 0u);
  EXPECT_GT(st.too_short, 0u);
  for (const auto& c : s.canonicals) EXPECT_GE(corpus.count(c), 30u) << c;
  bool raw_digit = false;
  for (const auto& v : s.variants) raw_digit |= v.raw_form.has_value();
  EXPECT_TRUE(raw_digit);
}

TEST(Synth, DeterministicAndSeedSensitive) {
  SynthConfig cfg;
  cfg.canonicals = 10;
  cfg.distractors = 10;
  cfg.frames_per_group = 12;
  const auto a = generate_synthetic(cfg);
  const auto b = generate_synthetic(cfg);
  ASSERT_EQ(a.comments.size(), b.comments.size());
  for (std::size_t i = 0; i < a.comments.size(); ++i) EXPECT_EQ(a.comments[i].text, b.comments[i].text);
  cfg.seed = 2;
  const auto c = generate_synthetic(cfg);
  EXPECT_NE(a.canonicals, c.canonicals);
}

TEST(Synth, WritesFiles) {
  TempDir dir;
  SynthConfig cfg;
  cfg.canonicals = 8;
  cfg.distractors = 8;
  const auto s = generate_synthetic(cfg);
  write_synthetic(s, dir.path());
  for (const char* f : {"comments.txt", "lexicon.tsv", "reference.tsv", "variants.tsv"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  EXPECT_EQ(load_lexicon(dir / "lexicon.tsv"), s.lexicon);
  EXPECT_EQ(load_reference(dir / "reference.tsv"), s.reference);
  EXPECT_EQ(read_comments(dir / "comments.txt").size(), s.comments.size());
}

TEST(Synth, ConfigValidation) {
  SynthConfig cfg;
  cfg.min_variants = 9;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.canonicals = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}
