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

#ifndef NERSTRESS_WIKIDICT_H_
#define NERSTRESS_WIKIDICT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "nerstress/corpus.h"
#include "nerstress/kb_client.h"

namespace nerstress {

inline constexpr int kDictionaryVersion = 1;
inline constexpr std::string_view kPersonType = "PERSON";
// Class key recorded for person-name replacements.
inline constexpr std::string_view kPersonClass = "person";

struct CurationRules {
  std::set<std::string> allow_classes;  // empty: every class allowed
  std::set<std::string> deny_classes;
  std::set<std::string> deny_entities;  // surfaces, compared case-insensitively
  std::size_t per_class_limit = 200;

  bool ClassAllowed(const std::string& qid) const;
  bool EntityDenied(const std::string& surface) const;

  static CurationRules FromJson(const nlohmann::json& j);
  nlohmann::json ToJson() const;
};

struct NamePartsTable {
  std::vector<std::string> first;
  std::vector<std::string> middle;
  std::vector<std::string> last;

  static NamePartsTable FromJson(const nlohmann::json& j);
};

enum class MiddleNames { kCoinFlip, kAlways, kNever };

struct AdversarialDictionary {
  struct ClassEntry {
    std::string label;
    std::vector<std::string> surfaces;

    bool operator==(const ClassEntry&) const = default;
  };

  int version = kDictionaryVersion;
  // Provenance: source corpus, build timestamp, filter settings.
  nlohmann::json meta = nlohmann::json::object();
  // Entity type -> class QID -> replacements.
  std::map<std::string, std::map<std::string, ClassEntry>> types;
  std::vector<std::string> person_names;
  // Entity type -> original surface -> surviving class QIDs. Lets an attack
  // find the classes of a gold span without repeating the linking step.
  std::map<std::string, std::map<std::string, std::vector<std::string>>> links;

  // Candidate surfaces for one (type, class); empty when absent.
  const std::vector<std::string>& Candidates(const std::string& type,
                                             const std::string& class_qid) const;

  // Throws InputError when an invariant is broken.
  void Validate() const;

  nlohmann::json ToJson() const;
  static AdversarialDictionary FromJson(const nlohmann::json& j);

  bool operator==(const AdversarialDictionary&) const = default;
};

// Per-type counters reported after a build.
struct TypeBuildStats {
  std::size_t original_entities = 0;  // distinct gold surfaces
  std::size_t linked_entities = 0;
  std::size_t classes = 0;
  std::size_t adversarial_entities = 0;
};

struct DictionaryBuildReport {
  std::map<std::string, TypeBuildStats> per_type;
  // (type, surface) pairs that could not be linked, in corpus order.
  std::vector<std::pair<std::string, std::string>> unlinked;

  nlohmann::json ToJson() const;
  std::string ToText() const;
};

struct DictionaryBuildOptions {
  std::uint64_t seed = 0;
  // Entity words of the training split; empty disables the vocabulary test.
  std::set<std::string> train_vocab;
  // Surfaces the victim model mislabels; when set, replaces the vocabulary test.
  std::optional<std::unordered_set<std::string>> victim_errors;
  std::size_t person_name_count = 1000;
  MiddleNames middle_names = MiddleNames::kCoinFlip;
  int workers = 1;
  std::string source_name;
  std::string timestamp;
};

// Exact (case-insensitive) label/alias match among the search hits; the first
// matching hit wins. nullopt when nothing matches.
std::optional<EntityRecord> LinkEntity(KbClient& client,
                                       const std::string& surface);

// InstanceOf classes of `qid` that survive `rules`.
std::vector<FineClass> FineClasses(KbClient& client, const std::string& qid,
                                   const CurationRules& rules);

// Up to `limit` members of the class, lowest QIDs first.
std::vector<EntityRecord> ExpandClass(KbClient& client,
                                      const std::string& class_qid,
                                      std::size_t limit);

// With `victim_errors`, keeps candidates in that set. Otherwise keeps
// candidates with at least one whitespace token absent from `train_vocab`.
// Input order is preserved.
std::vector<std::string> OodFilter(
    const std::vector<std::string>& candidates,
    const std::set<std::string>& train_vocab,
    const std::optional<std::unordered_set<std::string>>& victim_errors);

// `n` distinct "First [Middle] Last" names, deterministic in `seed`.
// Throws ExhaustedError when fewer than `n` distinct names exist.
std::vector<std::string> GeneratePersonNames(const NamePartsTable& parts,
                                             std::size_t n, std::uint64_t seed,
                                             MiddleNames middle = MiddleNames::kCoinFlip);

// Number of distinct names GeneratePersonNames can produce.
std::size_t DistinctNameCount(const NamePartsTable& parts, MiddleNames middle);

// link -> classify -> expand -> filter for every non-PERSON gold entity;
// PERSON is served by generated names. Entities are resolved in parallel and
// merged in corpus order.
AdversarialDictionary BuildDictionary(const Corpus& corpus, KbClient& client,
                                      const CurationRules& rules,
                                      const NamePartsTable& names,
                                      const DictionaryBuildOptions& options,
                                      DictionaryBuildReport* report = nullptr);

}  // namespace nerstress

#endif  // NERSTRESS_WIKIDICT_H_
