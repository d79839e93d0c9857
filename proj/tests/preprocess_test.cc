// Copyright 2026 The glflm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "glflm/preprocess.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "glflm/class_model.h"
#include "glflm/corpus.h"
#include "glflm/errors.h"
#include "glflm/morph_code.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace glflm {
namespace {

using testing_util::ReadFile;
using testing_util::TempDir;

AnnotatedToken Tok(const char* surface, const char* lemma, const char* code) {
  return {surface, lemma, ParseMorphCode(code)};
}

TEST(DeglutinizeTest, InstrumentalPossessive) {
  const PreprocessConfig config;
  EXPECT_EQ(DeglutinizeToken(Tok("jelmondatával", "jelmondat",
                                 "NOUN<POSS><CAS<INS>>"),
                             config),
            (std::vector<std::string>{"jelmondat", "<POSS>", "<CAS<INS>>"}));
}

TEST(DeglutinizeTest, PastPlural) {
  const PreprocessConfig config;
  EXPECT_EQ(DeglutinizeToken(Tok("akartak", "akar", "VERB<PAST><PLUR>"), config),
            (std::vector<std::string>{"akar", "<PAST>", "<PLUR>"}));
}

TEST(DeglutinizeTest, ZeroMorphemeEmitsNothing) {
  const PreprocessConfig config;
  EXPECT_EQ(DeglutinizeToken(Tok("ház", "ház", "NOUN"), config),
            (std::vector<std::string>{"ház"}));
}

TEST(DeglutinizeTest, LemmaIsFolded) {
  const PreprocessConfig config;
  EXPECT_EQ(DeglutinizeToken(Tok("Ők", "Ő", "NOUN<PLUR>"), config),
            (std::vector<std::string>{"ő", "<PLUR>"}));
}

TEST(DeglutinizeTest, DerivationalTags) {
  PreprocessConfig config;
  EXPECT_EQ(DeglutinizeToken(Tok("legnagyobb", "nagy",
                                 "ADJ<SUPERLAT><COMPAR>"),
                             config),
            (std::vector<std::string>{"nagy", "<SUPERLAT>", "<COMPAR>"}));
  EXPECT_EQ(DeglutinizeToken(Tok("lakás", "lakás", "NOUN<DERIV>"), config),
            (std::vector<std::string>{"lakás"}));
  config.included_derivational_tags.clear();
  EXPECT_EQ(DeglutinizeToken(Tok("nagyobb", "nagy", "ADJ<COMPAR>"), config),
            (std::vector<std::string>{"nagy"}));
}

TEST(DeglutinizeTest, FilterDropsTags) {
  PreprocessConfig config;
  config.zero_morpheme_filter = {"<CAS<NOM>>"};
  EXPECT_EQ(DeglutinizeToken(Tok("ház", "ház", "NOUN<CAS<NOM>>"), config),
            (std::vector<std::string>{"ház"}));
}

// Output tags are the parsed affixes, in order, minus filtered ones.
TEST(DeglutinizeTest, KeepsAffixOrder) {
  PreprocessConfig config;
  config.zero_morpheme_filter = {"<PAST>"};
  const AnnotatedToken token =
      Tok("x", "x", "VERB<PLUR><PAST><DEF><COND><PERS<1>>");
  const auto out = DeglutinizeToken(token, config);
  std::vector<std::string> expected;
  for (const auto& a : token.morph.affixes) {
    if (a != "<PAST>") expected.push_back(a);
  }
  EXPECT_EQ(std::vector<std::string>(out.begin() + 1, out.end()), expected);
}

TEST(PosStreamTest, Modes) {
  const PreprocessConfig config;
  const AnnotatedSentence s = {Tok("akartak", "akar", "VERB<PAST><PLUR>")};
  EXPECT_EQ(ToPosStream(s, TokenMode::kFullPos, config),
            (TokenSentence{"VERB<PAST><PLUR>"}));
  EXPECT_EQ(ToPosStream(s, TokenMode::kPosGlf, config),
            (TokenSentence{"VERB", "<PAST>", "<PLUR>"}));
  const AnnotatedSentence bare = {Tok("és", "és", "CONJ")};
  EXPECT_EQ(ToPosStream(bare, TokenMode::kFullPos, config),
            (TokenSentence{"CONJ"}));
  EXPECT_EQ(ToPosStream(bare, TokenMode::kPosGlf, config),
            (TokenSentence{"CONJ"}));
}

TEST(TokenStreamTest, GrowsTokenCount) {
  const PreprocessConfig config;
  const AnnotatedSentence s = {Tok("A", "a", "ART"),
                               Tok("házban", "ház", "NOUN<CAS<INE>>"),
                               Tok("akartak", "akar", "VERB<PAST><PLUR>")};
  EXPECT_EQ(ToTokenStream(s, TokenMode::kWord, config),
            (TokenSentence{"a", "házban", "akartak"}));
  const TokenSentence glf = ToTokenStream(s, TokenMode::kGlf, config);
  EXPECT_EQ(glf, (TokenSentence{"a", "ház", "<CAS<INE>>", "akar", "<PAST>",
                                "<PLUR>"}));
  EXPECT_GE(glf.size(), s.size());
}

TEST(DedupTest, RemovesLaterCopies) {
  double fraction = -1;
  const auto out =
      DedupSentences({{"a", "b"}, {"a", "b"}, {"a", "c"}}, &fraction);
  EXPECT_EQ(out, (std::vector<TokenSentence>{{"a", "b"}, {"a", "c"}}));
  EXPECT_DOUBLE_EQ(fraction, 1.0 / 3.0);
}

TEST(DedupTest, UniqueCorpusUnchanged) {
  const std::vector<TokenSentence> corpus = {{"a"}, {"b"}, {"a", "b"}};
  double fraction = -1;
  EXPECT_EQ(DedupSentences(corpus, &fraction), corpus);
  EXPECT_EQ(fraction, 0.0);
}

TEST(DedupTest, TokenBoundariesMatter) {
  const std::vector<TokenSentence> corpus = {{"ab", "c"}, {"a", "bc"}};
  EXPECT_EQ(DedupSentences(corpus).size(), 2u);
}

// 675 distinct sentences plus 325 repeats of earlier ones.
TEST(DedupTest, ExactDuplicateFraction) {
  std::vector<TokenSentence> corpus;
  for (int i = 0; i < 675; ++i) corpus.push_back({"s" + std::to_string(i)});
  for (int i = 0; i < 325; ++i) {
    corpus.insert(corpus.begin() + 2 * i + 1,
                  TokenSentence{"s" + std::to_string((i * 37) % 675)});
  }
  ASSERT_EQ(corpus.size(), 1000u);
  double fraction = 0;
  const auto out = DedupSentences(corpus, &fraction);
  EXPECT_EQ(out.size(), 675u);
  EXPECT_DOUBLE_EQ(fraction, 0.325);
}

TEST(ThresholdTest, ReplacesRareTokens) {
  const ThresholdResult r = ApplyThreshold({{"a", "a", "a", "b"}}, 2);
  EXPECT_EQ(r.corpus, (std::vector<TokenSentence>{{"a", "a", "a", "<unk>"}}));
  EXPECT_EQ(r.vocab.size(), 4u);
  EXPECT_TRUE(r.vocab.Find("a").has_value());
  EXPECT_FALSE(r.vocab.Find("b").has_value());
}

TEST(ThresholdTest, ZeroAndOneAreIdentity) {
  const std::vector<TokenSentence> corpus = {{"a", "b"}, {"c"}};
  EXPECT_EQ(ApplyThreshold(corpus, 0).corpus, corpus);
  EXPECT_EQ(ApplyThreshold(corpus, 1).corpus, corpus);
  EXPECT_EQ(ApplyThreshold(corpus, 1).vocab.size(), 6u);
}

// 20 types with counts 20, 10, 6, 5, 4, 3, 3, 2, 2, ... checked against a
// plain map count.
TEST(ThresholdTest, MatchesCountingOracle) {
  std::vector<TokenSentence> corpus;
  for (int type = 0; type < 20; ++type) {
    const int count = std::max(1, 20 / (type + 1));
    for (int i = 0; i < count; ++i) {
      if (corpus.empty() || corpus.back().size() == 7) corpus.emplace_back();
      corpus.back().push_back("w" + std::to_string(type));
    }
  }
  std::map<std::string, int> counts;
  for (const auto& s : corpus) {
    for (const auto& t : s) counts[t]++;
  }
  const ThresholdResult r = ApplyThreshold(corpus, 3);
  size_t survivors = 0;
  for (const auto& [token, count] : counts) {
    EXPECT_EQ(r.vocab.Find(token).has_value(), count >= 3) << token;
    survivors += count >= 3;
  }
  EXPECT_EQ(r.vocab.size(), survivors + 3);
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (size_t j = 0; j < corpus[i].size(); ++j) {
      EXPECT_EQ(r.corpus[i][j],
                counts[corpus[i][j]] >= 3 ? corpus[i][j] : "<unk>");
    }
  }
}

TEST(ShuffleTest, PermutationAndDeterminism) {
  std::vector<int> items(100);
  for (int i = 0; i < 100; ++i) items[i] = i;
  const auto a = ShuffleSentences(items, 7);
  const auto b = ShuffleSentences(items, 7);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, items);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, items);
}

TEST(ShuffleTest, GoldenPermutation) {
  std::istringstream golden(
      ReadFile(std::filesystem::path(GLFLM_TEST_DATA_DIR) /
               "shuffle_seed42.golden"));
  std::vector<std::string> expected;
  for (std::string t; golden >> t;) expected.push_back(t);
  const std::vector<std::string> items = {"a", "b", "c", "d", "e"};
  EXPECT_EQ(ShuffleSentences(items, 42), expected);
}

TEST(SplitTest, Sizes) {
  const std::array<double, 3> defaults = {0.9, 0.05, 0.05};
  SplitSizes s = ComputeSplitSizes(100, defaults);
  EXPECT_EQ(s.train, 90u);
  EXPECT_EQ(s.dev, 5u);
  EXPECT_EQ(s.test, 5u);
  s = ComputeSplitSizes(3, defaults);
  EXPECT_EQ(s.train, 3u);
  EXPECT_EQ(s.dev, 0u);
  EXPECT_EQ(s.test, 0u);
}

TEST(SplitTest, Partition) {
  std::vector<int> corpus(1000);
  for (int i = 0; i < 1000; ++i) corpus[i] = i;
  const auto split = SplitCorpus(corpus, {0.8, 0.15, 0.05});
  EXPECT_EQ(split.train.size(), 800u);
  EXPECT_EQ(split.dev.size(), 150u);
  EXPECT_EQ(split.test.size(), 50u);
  std::vector<int> joined = split.train;
  joined.insert(joined.end(), split.dev.begin(), split.dev.end());
  joined.insert(joined.end(), split.test.begin(), split.test.end());
  EXPECT_EQ(joined, corpus);
}

TEST(PreprocessConfigTest, Validate) {
  PreprocessConfig config;
  EXPECT_NO_THROW(config.Validate());
  config.split_ratios = {0.5, 0.5, 0.5};
  EXPECT_THROW(config.Validate(), InvalidConfig);
  config.split_ratios = {1.1, -0.05, -0.05};
  EXPECT_THROW(config.Validate(), InvalidConfig);
}

TEST(ClassObservationTest, GlfModes) {
  const PreprocessConfig config;
  const AnnotatedSentence s = {Tok("akartak", "akar", "VERB<PAST><PLUR>")};
  ClassObservations obs;
  AddClassObservations(s, TokenMode::kGlf, config, &obs);
  EXPECT_EQ(obs.MajorityClass("akar").value(), "VERB");
  EXPECT_EQ(obs.MajorityClass("<PAST>").value(), "<PAST>");
}

class PipelineTest : public ::testing::Test {
 protected:
  std::filesystem::path Fixture() const {
    return std::filesystem::path(GLFLM_TEST_DATA_DIR) / "mini.tsv";
  }
  PipelineStats Run(const std::filesystem::path& out, PipelineOptions options) {
    std::ifstream in(Fixture(), std::ios::binary);
    return RunPreprocessPipeline(in, options, out);
  }
};

TEST_F(PipelineTest, WritesAllOutputs) {
  TempDir dir("pipeline");
  PipelineOptions options;
  options.dedup = true;
  options.config.threshold = 2;
  options.config.shuffle_seed = 5;
  const PipelineStats stats = Run(dir.path(), options);
  EXPECT_EQ(stats.input_sentences, 12u);
  EXPECT_EQ(stats.kept_sentences, 11u);
  for (const char* name :
       {"train.txt", "dev.txt", "test.txt", "vocab.txt", "freq.surface.tsv",
        "freq.lemma.tsv", "classes.tsv", "preprocess.conf"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / name)) << name;
  }
  EXPECT_FALSE(std::filesystem::exists(dir.path() / ".spool.txt"));
  EXPECT_EQ(stats.split.train + stats.split.dev + stats.split.test, 11u);

  // Every output token is in the vocabulary.
  std::ifstream vocab_in(dir.path() / "vocab.txt");
  const Vocabulary vocab = Vocabulary::Read(vocab_in);
  size_t lines = 0;
  for (const char* name : {"train.txt", "dev.txt", "test.txt"}) {
    std::ifstream in(dir.path() / name);
    PlainCorpusReader reader(in);
    TokenSentence s;
    while (reader.Next(&s)) {
      ++lines;
      for (const auto& t : s) EXPECT_TRUE(vocab.Find(t).has_value()) << t;
    }
  }
  EXPECT_EQ(lines, 11u);
  EXPECT_NE(ReadFile(dir.path() / "preprocess.conf").find("threshold = 2"),
            std::string::npos);
}

TEST_F(PipelineTest, SameSeedSameBytes) {
  TempDir a("pipeline_a");
  TempDir b("pipeline_b");
  PipelineOptions options;
  options.config.threshold = 2;
  options.config.shuffle_seed = 99;
  options.config.split_ratios = {0.5, 0.25, 0.25};
  Run(a.path(), options);
  Run(b.path(), options);
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    const auto name = entry.path().filename();
    EXPECT_EQ(ReadFile(a.path() / name), ReadFile(b.path() / name)) << name;
  }
}

TEST_F(PipelineTest, ModesChangeTokens) {
  TempDir glf("pipeline_glf");
  TempDir pos("pipeline_pos");
  PipelineOptions options;
  options.config.threshold = 0;
  options.config.split_ratios = {1.0, 0.0, 0.0};
  Run(glf.path(), options);
  options.mode = TokenMode::kPosGlf;
  Run(pos.path(), options);
  const std::string glf_text = ReadFile(glf.path() / "train.txt");
  const std::string pos_text = ReadFile(pos.path() / "train.txt");
  EXPECT_NE(glf_text.find("jelmondat <POSS> <CAS<INS>>"), std::string::npos);
  EXPECT_NE(pos_text.find("NOUN <POSS> <CAS<INS>>"), std::string::npos);
}

}  // namespace
}  // namespace glflm
