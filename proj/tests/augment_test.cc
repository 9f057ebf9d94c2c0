//
// Copyright 2026 The nerstress Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "nerstress/augment.h"

#include <map>
#include <regex>

#include "gtest/gtest.h"
#include "nerstress/pos_lexicon.h"
#include "test_support.h"

namespace nerstress {
namespace {

using testing::Parse;

std::multiset<std::string> TypeMultiset(const Corpus& c) {
  std::multiset<std::string> out;
  for (const Sentence& s : c.sentences) {
    for (const EntitySpan& e : ExtractSpans(s)) out.insert(e.type);
  }
  return out;
}

char CaseClass(char c) {
  if (c >= 'a' && c <= 'z') return 'a';
  if (c >= 'A' && c <= 'Z') return 'A';
  return c;
}

TEST(AugmentMethodTest, Names) {
  for (AugmentMethod m : {AugmentMethod::kEntitySwitching, AugmentMethod::kRandomMasking,
                          AugmentMethod::kMixingUp}) {
    EXPECT_EQ(ParseAugmentMethod(AugmentMethodName(m)), m);
  }
  EXPECT_FALSE(ParseAugmentMethod("back_translation"));
}

TEST(EntitySwitchingTest, SingleEntityUnchanged) {
  const Corpus c = Parse("Paris B-GPE\nis O\n\nnice O\n");
  const auto result = EntitySwitching(c, 1);
  EXPECT_EQ(result.corpus, c);
  EXPECT_TRUE(result.edits.empty());
}

TEST(EntitySwitchingTest, TwoEntitiesSwap) {
  const Corpus c = Parse("# id = a\nI O\nlove O\nParis B-GPE\n\n# id = b\nRome B-GPE\nwaits O\n");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto result = EntitySwitching(c, seed);
    EXPECT_EQ(result.corpus.sentences[0].tokens[2].text, "Rome");
    EXPECT_EQ(result.corpus.sentences[1].tokens[0].text, "Paris");
    EXPECT_EQ(result.edits.size(), 2u);
  }
}

TEST(EntitySwitchingTest, RetagsDonorAndKeepsTypes) {
  const Corpus c = Parse(
      "# id = a\nAcme B-ORG\nfell O\n\n"
      "# id = b\nBank B-ORG\nof I-ORG\nItaly I-ORG\nrose O\n\n"
      "# id = c\nBank B-ORG\nof I-ORG\nItaly I-ORG\nrose O\n");
  const auto result = EntitySwitching(c, 3);
  EXPECT_EQ(result.corpus.sentences[0].Texts(),
            (std::vector<std::string>{"Bank", "of", "Italy", "fell"}));
  EXPECT_EQ(result.corpus.sentences[0].Tags(),
            (std::vector<std::string>{"B-ORG", "I-ORG", "I-ORG", "O"}));
  // Same-surface occurrences are not donors.
  EXPECT_EQ(result.corpus.sentences[1].tokens[0].text, "Acme");
  EXPECT_EQ(TypeMultiset(result.corpus), TypeMultiset(c));
}

TEST(EntitySwitchingTest, TypeMultisetOnRandomCorpora) {
  Rng rng(31);
  for (int round = 0; round < 200; ++round) {
    const Corpus c = testing::RandomCorpus(rng);
    const auto result = EntitySwitching(c, round);
    EXPECT_EQ(TypeMultiset(result.corpus), TypeMultiset(c));
    EXPECT_NO_THROW(ValidateCorpus(result.corpus));
  }
}

TEST(RandomMaskingTest, StopwordKept) {
  const Corpus c = Parse("Bank B-ORG\nof I-ORG\nItaly I-ORG\n");
  const auto result = RandomMasking(c, 5);
  EXPECT_EQ(result.corpus.sentences[0].tokens[1].text, "of");
  EXPECT_NE(result.corpus.sentences[0].tokens[0].text, "Bank");
}

TEST(RandomMaskingTest, CasePatternRegex) {
  const Corpus c = Parse("McDonald's B-ORG\n");
  const std::regex pattern("[A-Z][a-z][A-Z][a-z]{5}'[a-z]");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::string out = RandomMasking(c, seed).corpus.sentences[0].tokens[0].text;
    EXPECT_TRUE(std::regex_match(out, pattern)) << out;
  }
}

TEST(RandomMaskingTest, LengthCaseAndContextPreserved) {
  Rng rng(12);
  const StopwordSet stopwords;
  for (int round = 0; round < 200; ++round) {
    const Corpus c = testing::RandomCorpus(rng);
    const auto result = RandomMasking(c, round);
    ASSERT_EQ(result.corpus.size(), c.size());
    for (std::size_t s = 0; s < c.size(); ++s) {
      const auto& in = c.sentences[s].tokens;
      const auto& out = result.corpus.sentences[s].tokens;
      ASSERT_EQ(in.size(), out.size());
      for (std::size_t i = 0; i < in.size(); ++i) {
        EXPECT_EQ(out[i].tag, in[i].tag);
        ASSERT_EQ(out[i].text.size(), in[i].text.size());
        if (in[i].tag == "O" || stopwords.Contains(in[i].text)) {
          EXPECT_EQ(out[i].text, in[i].text);
          continue;
        }
        for (std::size_t k = 0; k < in[i].text.size(); ++k) {
          EXPECT_EQ(CaseClass(out[i].text[k]), CaseClass(in[i].text[k]));
        }
      }
    }
  }
}

TEST(RandomMaskingTest, CustomStopwordsAndNonAscii) {
  const Corpus c = Parse("Caf\xC3\xA9 B-ORG\nRio I-ORG\n");
  const auto result = RandomMasking(c, 2, StopwordSet({"rio"}));
  const std::string& first = result.corpus.sentences[0].tokens[0].text;
  EXPECT_EQ(first.substr(3), "\xC3\xA9");
  EXPECT_EQ(result.corpus.sentences[0].tokens[1].text, "Rio");
}

TEST(MixingUpTest, OneSentenceWithEntities) {
  const Corpus c = Parse("Paris B-GPE\nis O\n\nnothing O\nhere O\n");
  EXPECT_EQ(MixingUp(c, 1).corpus, c);
}

TEST(MixingUpTest, HandSplicedPair) {
  const Corpus c = Parse(
      "# id = t\nX O\nvisited O\nRome B-GPE\ntoday O\n\n"
      "# id = d\nY O\nleft O\nParis B-GPE\nquietly O\n");
  const auto result = MixingUp(c, 3);
  EXPECT_EQ(result.corpus.sentences[0].Texts(),
            (std::vector<std::string>{"X", "visited", "Rome", "quietly"}));
  EXPECT_EQ(result.corpus.sentences[0].Tags(),
            (std::vector<std::string>{"O", "O", "B-GPE", "O"}));
  EXPECT_EQ(result.corpus.sentences[1].Texts(),
            (std::vector<std::string>{"Y", "left", "Paris", "today"}));
}

TEST(MixingUpTest, PrefixAndSuffixProperties) {
  Rng rng(44);
  for (int round = 0; round < 200; ++round) {
    const Corpus c = testing::RandomCorpus(rng);
    const auto result = MixingUp(c, round);
    ASSERT_EQ(result.corpus.size(), c.size());
    EXPECT_NO_THROW(ValidateCorpus(result.corpus));
    std::map<std::string, const nlohmann::json*> by_id;
    for (const auto& edit : result.edits) by_id[edit.at("sentence_id")] = &edit;
    for (std::size_t s = 0; s < c.size(); ++s) {
      const Sentence& out = result.corpus.sentences[s];
      const auto found = by_id.find(c.sentences[s].id);
      if (found == by_id.end()) {
        EXPECT_EQ(out, c.sentences[s]);
        continue;
      }
      const auto& edit = *found->second;
      const std::size_t end = edit.at("entity_end");
      for (std::size_t i = 0; i < end; ++i) EXPECT_EQ(out.tokens[i], c.sentences[s].tokens[i]);
      const Sentence* donor = nullptr;
      for (const Sentence& d : c.sentences) {
        if (d.id == edit.at("donor_sentence_id")) donor = &d;
      }
      ASSERT_NE(donor, nullptr);
      const std::size_t donor_end = edit.at("donor_entity_end");
      ASSERT_EQ(out.size(), end + donor->size() - donor_end);
      for (std::size_t i = donor_end; i < donor->size(); ++i) {
        EXPECT_EQ(out.tokens[end + i - donor_end], donor->tokens[i]);
      }
    }
  }
}

TEST(AugmentTest, DeterministicInSeed) {
  const Corpus c = testing::LoadFixtureCorpus("toy/test.conll");
  for (AugmentMethod m : {AugmentMethod::kEntitySwitching, AugmentMethod::kRandomMasking,
                          AugmentMethod::kMixingUp}) {
    EXPECT_EQ(WriteConll(Augment(c, m, 8).corpus), WriteConll(Augment(c, m, 8).corpus));
  }
  EXPECT_NE(WriteConll(Augment(c, AugmentMethod::kRandomMasking, 8).corpus),
            WriteConll(Augment(c, AugmentMethod::kRandomMasking, 9).corpus));
}

}  // namespace
}  // namespace nerstress
