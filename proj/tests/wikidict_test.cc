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

#include "nerstress/wikidict.h"

#include <filesystem>
#include <map>
#include <stdexcept>

#include "gtest/gtest.h"
#include "nerstress/errors.h"
#include "test_support.h"

namespace nerstress {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::FixtureKbOptions;

std::vector<std::string> Qids(const std::vector<EntityRecord>& records) {
  std::vector<std::string> out;
  for (const auto& r : records) out.push_back(r.qid);
  return out;
}

NamePartsTable ToyNames() {
  return NamePartsTable::FromJson(json::parse(ReadFile(testing::FixturePath("toy/names.json"))));
}

CurationRules ToyRules() {
  return CurationRules::FromJson(json::parse(ReadFile(testing::FixturePath("toy/rules.json"))));
}

TEST(LinkEntityTest, FixtureExamples) {
  KbClient client(FixtureKbOptions());
  const auto beijing = LinkEntity(client, "Beijing");
  ASSERT_TRUE(beijing);
  EXPECT_EQ(beijing->qid, "Q956");
  // The first hit is skipped: neither its label nor alias equals "China".
  EXPECT_EQ(LinkEntity(client, "China")->qid, "Q148");
  EXPECT_EQ(LinkEntity(client, "ACME")->qid, "Q900001");
  EXPECT_FALSE(LinkEntity(client, "Lake Tahoe"));
  EXPECT_FALSE(LinkEntity(client, "Zorblax"));
  EXPECT_THROW(LinkEntity(client, ""), std::invalid_argument);
}

TEST(FineClassesTest, FixtureExamples) {
  KbClient client(FixtureKbOptions());
  const auto classes = FineClasses(client, "Q956", CurationRules{});
  ASSERT_FALSE(classes.empty());
  EXPECT_EQ(classes[0], (FineClass{"Q1549591", "big city"}));
  EXPECT_TRUE(FineClasses(client, "Q900099", CurationRules{}).empty());

  // Set difference against the unfiltered result.
  CurationRules rules;
  rules.deny_classes = {"Q3624078"};
  const auto all = FineClasses(client, "Q148", CurationRules{});
  const auto kept = FineClasses(client, "Q148", rules);
  std::vector<FineClass> expected;
  for (const auto& c : all) {
    if (!rules.deny_classes.count(c.qid)) expected.push_back(c);
  }
  EXPECT_EQ(kept, expected);
  EXPECT_EQ(all.size(), 2u);
  rules = CurationRules{};
  rules.allow_classes = {"Q3624078"};
  EXPECT_EQ(FineClasses(client, "Q148", rules),
            (std::vector<FineClass>{{"Q3624078", "sovereign state"}}));
}

TEST(ExpandClassTest, FixtureExamples) {
  KbClient client(FixtureKbOptions());
  const auto cities = ExpandClass(client, "Q1549591", 200);
  bool has_bari = false;
  for (const auto& r : cities) has_bari |= r.label == "Bari";
  EXPECT_TRUE(has_bari);
  EXPECT_THROW(ExpandClass(client, "Q1549591", 0), std::invalid_argument);
  // Five members Q900001, Q900004, Q900002, Q95, Q900003 in response order.
  EXPECT_EQ(Qids(ExpandClass(client, "Q4830453", 3)),
            (std::vector<std::string>{"Q95", "Q900001", "Q900002"}));
  EXPECT_EQ(ExpandClass(client, "Q4830453", 50).size(), 5u);
}

TEST(OodFilterTest, Examples) {
  EXPECT_EQ(OodFilter({"New York", "Bari"}, {"New", "York"}, std::nullopt),
            std::vector<std::string>{"Bari"});
  EXPECT_EQ(OodFilter({"New York", "Bari"}, {}, std::nullopt),
            (std::vector<std::string>{"New York", "Bari"}));
  EXPECT_EQ(OodFilter({"New Bari", "York"}, {"New", "York"}, std::nullopt),
            std::vector<std::string>{"New Bari"});
  const std::unordered_set<std::string> errors = {"Bari", "Lyon"};
  const auto kept = OodFilter({"New York", "Bari", "Milan", "Lyon"}, {"Bari"}, errors);
  for (const auto& s : kept) EXPECT_TRUE(errors.count(s)) << s;
  EXPECT_EQ(kept, (std::vector<std::string>{"Bari", "Lyon"}));
}

TEST(GeneratePersonNamesTest, SingleCombination) {
  NamePartsTable parts{{"Ada"}, {}, {"Lovelace"}};
  EXPECT_EQ(GeneratePersonNames(parts, 1, 5), std::vector<std::string>{"Ada Lovelace"});
  EXPECT_THROW(GeneratePersonNames(parts, 2, 5), ExhaustedError);
  EXPECT_THROW(GeneratePersonNames(NamePartsTable{{}, {}, {"X"}}, 1, 5),
               std::invalid_argument);
}

TEST(GeneratePersonNamesTest, DeterministicInSeed) {
  const auto parts = ToyNames();
  EXPECT_EQ(GeneratePersonNames(parts, 10, 3), GeneratePersonNames(parts, 10, 3));
  EXPECT_NE(GeneratePersonNames(parts, 10, 3), GeneratePersonNames(parts, 10, 4));
}

TEST(GeneratePersonNamesTest, ExhaustiveWithMiddlesForced) {
  NamePartsTable parts{{"A", "B", "C"}, {"M", "N"}, {"X", "Y", "Z"}};
  EXPECT_EQ(DistinctNameCount(parts, MiddleNames::kAlways), 18u);
  const auto names = GeneratePersonNames(parts, 18, 9, MiddleNames::kAlways);
  std::set<std::string> expected;
  for (const char* f : {"A", "B", "C"}) {
    for (const char* m : {"M", "N"}) {
      for (const char* l : {"X", "Y", "Z"}) {
        expected.insert(std::string(f) + " " + m + " " + l);
      }
    }
  }
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()), expected);
  EXPECT_EQ(names.size(), 18u);
}

TEST(GeneratePersonNamesTest, SparseDrawsAreDistinct) {
  NamePartsTable parts;
  for (int i = 0; i < 40; ++i) {
    parts.first.push_back("F" + std::to_string(i));
    parts.middle.push_back("M" + std::to_string(i));
    parts.last.push_back("L" + std::to_string(i));
  }
  for (MiddleNames mode : {MiddleNames::kCoinFlip, MiddleNames::kAlways, MiddleNames::kNever}) {
    const auto names = GeneratePersonNames(parts, 500, 1, mode);
    EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), 500u);
    for (const auto& n : names) {
      const std::size_t words = SplitWhitespace(n).size();
      if (mode == MiddleNames::kAlways) {
        EXPECT_EQ(words, 3u);
      } else if (mode == MiddleNames::kNever) {
        EXPECT_EQ(words, 2u);
      }
    }
  }
}

TEST(CurationRulesTest, JsonAndMatching) {
  const auto rules = CurationRules::FromJson(
      json{{"deny_entities", {"ACME corp"}}, {"per_class_limit", 3}});
  EXPECT_TRUE(rules.EntityDenied("Acme Corp"));
  EXPECT_FALSE(rules.EntityDenied("Acme"));
  EXPECT_TRUE(rules.ClassAllowed("Q1"));
  EXPECT_EQ(CurationRules::FromJson(rules.ToJson()).ToJson(), rules.ToJson());
  EXPECT_THROW(CurationRules::FromJson(json{{"per_class_limit", 0}}), ConfigError);
  EXPECT_THROW(CurationRules::FromJson(json::array()), ConfigError);
  EXPECT_THROW(CurationRules::FromJson(json{{"deny_classes", 5}}), ConfigError);
}

TEST(BuildDictionaryTest, EmptyCorpus) {
  KbClient client(FixtureKbOptions());
  DictionaryBuildReport report;
  const auto dict = BuildDictionary(Corpus{}, client, CurationRules{}, ToyNames(), {}, &report);
  EXPECT_TRUE(dict.types.empty());
  EXPECT_TRUE(dict.person_names.empty());
  EXPECT_TRUE(report.per_type.empty());
  EXPECT_TRUE(report.unlinked.empty());
}

// Two GPE entities share one class with six members: the two originals are
// excluded, leaving four candidates; one of them is covered by the training
// vocabulary.
TEST(BuildDictionaryTest, HandWalkedSharedClass) {
  const fs::path dir = fs::temp_directory_path() / ("nerstress_shared_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  KbClientOptions options;
  options.cache_dir = dir;
  options.offline = true;
  const json description = {
      {"search", {{"Alpha", {{{"id", "Q11"}, {"label", "Alpha"}}}},
                  {"Beta", {{{"id", "Q12"}, {"label", "Beta"}}}}}},
      {"instance_of", {{"Q11", {{{"qid", "Q100"}, {"label", "town"}}}},
                       {"Q12", {{{"qid", "Q100"}, {"label", "town"}}}}}},
      {"instances", {{"Q100", {{{"qid", "Q11"}, {"label", "Alpha"}},
                               {{"qid", "Q16"}, {"label", "Zeta"}},
                               {{"qid", "Q12"}, {"label", "Beta"}},
                               {{"qid", "Q13"}, {"label", "Gamma"}},
                               {{"qid", "Q14"}, {"label", "Delta"}},
                               {{"qid", "Q15"}, {"label", "Epsilon"}}}}}}};
  KbClient client(options);
  SeedKbCache(description, client);
  const Corpus corpus = testing::Parse("Alpha B-GPE\nand O\nBeta B-GPE\n");

  DictionaryBuildOptions build;
  DictionaryBuildReport report;
  auto dict = BuildDictionary(corpus, client, CurationRules{}, NamePartsTable{}, build, &report);
  ASSERT_EQ(dict.types.size(), 1u);
  ASSERT_EQ(dict.types.at("GPE").size(), 1u);
  EXPECT_EQ(dict.types.at("GPE").at("Q100").surfaces,
            (std::vector<std::string>{"Gamma", "Delta", "Epsilon", "Zeta"}));
  EXPECT_EQ(dict.links.at("GPE").at("Alpha"), std::vector<std::string>{"Q100"});
  EXPECT_EQ(report.per_type.at("GPE").classes, 1u);
  EXPECT_EQ(report.per_type.at("GPE").adversarial_entities, 4u);

  build.train_vocab = {"Delta"};
  dict = BuildDictionary(corpus, client, CurationRules{}, NamePartsTable{}, build);
  EXPECT_EQ(dict.types.at("GPE").at("Q100").surfaces,
            (std::vector<std::string>{"Gamma", "Epsilon", "Zeta"}));
  fs::remove_all(dir);
}

TEST(BuildDictionaryTest, ToyFixture) {
  KbClient client(FixtureKbOptions());
  const Corpus corpus = testing::LoadFixtureCorpus("toy/test.conll");
  DictionaryBuildOptions options;
  options.seed = 7;
  options.train_vocab = EntityWordSet(testing::LoadFixtureCorpus("toy/train.conll"));
  options.person_name_count = 10;
  DictionaryBuildReport report;
  const auto dict = BuildDictionary(corpus, client, ToyRules(), ToyNames(), options, &report);

  const auto& gpe = dict.types.at("GPE");
  EXPECT_EQ(gpe.at("Q1549591").label, "big city");
  EXPECT_EQ(gpe.at("Q1549591").surfaces,
            (std::vector<std::string>{"Lyon", "Milan", "Turin", "Bari", "Naples", "Porto"}));
  EXPECT_EQ(gpe.at("Q1637706").surfaces, (std::vector<std::string>{"Delhi", "Shanghai"}));
  EXPECT_EQ(gpe.at("Q6256").surfaces, (std::vector<std::string>{"Japan", "Italy", "France"}));
  EXPECT_FALSE(gpe.count("Q3624078"));
  EXPECT_EQ(dict.types.at("ORG").at("Q4830453").surfaces,
            (std::vector<std::string>{"Google", "Globex", "Initech", "Umbrella Corporation"}));
  EXPECT_EQ(dict.links.at("GPE").at("Beijing"),
            (std::vector<std::string>{"Q1549591", "Q1637706"}));
  EXPECT_EQ(dict.person_names.size(), 10u);
  for (const auto& name : dict.person_names) EXPECT_NE(name, "Ada Lovelace");

  // Every surviving surface has a word outside the training entity words.
  for (const auto& [type, classes] : dict.types) {
    for (const auto& [qid, entry] : classes) {
      for (const auto& surface : entry.surfaces) {
        bool novel = false;
        for (const auto& w : SplitWhitespace(surface)) novel |= !options.train_vocab.count(w);
        EXPECT_TRUE(novel) << surface;
      }
    }
  }
  ASSERT_EQ(report.unlinked.size(), 1u);
  EXPECT_EQ(report.unlinked[0], std::make_pair(std::string("LOC"), std::string("Lake Tahoe")));
  EXPECT_EQ(report.per_type.at("GPE").original_entities, 4u);
  EXPECT_EQ(report.per_type.at("GPE").classes, 3u);
  EXPECT_EQ(report.per_type.at("GPE").adversarial_entities, 11u);
  EXPECT_NE(report.ToText().find("N/A"), std::string::npos);
}

TEST(BuildDictionaryTest, IndependentOfWorkerCount) {
  const Corpus corpus = testing::LoadFixtureCorpus("toy/test.conll");
  DictionaryBuildOptions options;
  options.seed = 11;
  options.timestamp = "t";
  std::string first;
  for (int workers : {1, 8, 1, 3}) {
    KbClient client(FixtureKbOptions());
    options.workers = workers;
    const auto dump =
        BuildDictionary(corpus, client, ToyRules(), ToyNames(), options).ToJson().dump(2);
    if (first.empty()) first = dump;
    EXPECT_EQ(dump, first) << workers;
  }
}

TEST(BuildDictionaryTest, MissingFixtureFailsOffline) {
  KbClient client(FixtureKbOptions());
  EXPECT_THROW(BuildDictionary(testing::Parse("Atlantis B-GPE\n"), client, CurationRules{},
                               NamePartsTable{}, {}),
               FixtureMissing);
}

TEST(AdversarialDictionaryTest, JsonRoundTripAndValidation) {
  KbClient client(FixtureKbOptions());
  DictionaryBuildOptions options;
  options.person_name_count = 5;
  const auto dict = BuildDictionary(testing::LoadFixtureCorpus("toy/test.conll"), client,
                                    ToyRules(), ToyNames(), options);
  const auto back = AdversarialDictionary::FromJson(json::parse(dict.ToJson().dump()));
  EXPECT_EQ(back, dict);
  EXPECT_EQ(back.Candidates("PERSON", "person"), dict.person_names);
  EXPECT_TRUE(back.Candidates("GPE", "Q1").empty());

  json broken = dict.ToJson();
  broken["version"] = 99;
  EXPECT_THROW(AdversarialDictionary::FromJson(broken), InputError);
  broken = dict.ToJson();
  broken["types"]["GPE"]["Q6256"]["surfaces"].push_back("Japan");
  EXPECT_THROW(AdversarialDictionary::FromJson(broken).Validate(), InputError);
  broken = dict.ToJson();
  broken.erase("types");
  EXPECT_THROW(AdversarialDictionary::FromJson(broken), InputError);
}

}  // namespace
}  // namespace nerstress
