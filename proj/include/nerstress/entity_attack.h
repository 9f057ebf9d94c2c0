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

#ifndef NERSTRESS_ENTITY_ATTACK_H_
#define NERSTRESS_ENTITY_ATTACK_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "nerstress/corpus.h"
#include "nerstress/wikidict.h"

namespace nerstress {

struct EntityAttackConfig {
  double coverage = 1.0;
  std::uint64_t seed = 0;
  bool forbid_identity = true;
  int workers = 1;
};

enum class AttackStatus {
  kReplaced,
  kNoCandidate,  // linked, but no usable replacement
  kUnlinked,     // no class for this span; never eligible
  kNotSelected,  // eligible, left out by the coverage draw
};

std::string_view AttackStatusName(AttackStatus status);

struct AttackRecord {
  std::string sentence_id;
  EntitySpan original;
  std::string replacement;
  std::string class_qid;  // kPersonClass for person names
  AttackStatus status = AttackStatus::kUnlinked;

  nlohmann::json ToJson() const;
  static AttackRecord FromJson(const nlohmann::json& j);
};

// Identifies a gold span in a corpus.
struct SpanKey {
  std::string sentence_id;
  std::size_t start = 0;
  std::size_t end = 0;

  auto operator<=>(const SpanKey&) const = default;
};

// Gold span -> candidate class keys.
using LinkMap = std::map<SpanKey, std::vector<std::string>>;

// Looks every gold span up in the dictionary's link table. PERSON spans map to
// kPersonClass whenever the dictionary has names.
LinkMap LinkMapFromDictionary(const Corpus& corpus,
                              const AdversarialDictionary& dict);

// round(coverage * n) distinct indices of [0, n), uniformly drawn, ascending.
std::vector<std::size_t> SelectAttackSet(std::size_t n, double coverage,
                                         std::uint64_t seed);

struct EntityAttackResult {
  Corpus corpus;
  std::vector<AttackRecord> records;  // one per gold span, corpus order
};

// Replaces selected gold entities with same-class dictionary entries. Spans
// without classes are never eligible and do not count toward coverage.
EntityAttackResult AttackEntities(const Corpus& corpus,
                                  const AdversarialDictionary& dict,
                                  const LinkMap& links,
                                  const EntityAttackConfig& config);

struct AttackStats {
  std::size_t entities = 0;
  std::size_t replaced = 0;
  std::size_t no_candidate = 0;
  std::size_t unlinked = 0;
  std::size_t not_selected = 0;
  std::size_t sentences = 0;
  std::size_t sentences_attacked = 0;

  double attacked_entity_pct() const;
  double attacked_sentence_pct() const;
  nlohmann::json ToJson() const;
};

AttackStats ComputeAttackStats(const std::vector<AttackRecord>& records,
                               const Corpus& corpus);

}  // namespace nerstress

#endif  // NERSTRESS_ENTITY_ATTACK_H_
