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

#ifndef NERSTRESS_CONTEXT_ATTACK_H_
#define NERSTRESS_CONTEXT_ATTACK_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "nerstress/corpus.h"
#include "nerstress/mlm_provider.h"
#include "nerstress/pos_lexicon.h"

namespace nerstress {

enum class PosSource { kInputColumn, kBuiltinLexicon };

inline constexpr std::size_t kMaxMasks = 3;

struct ContextAttackConfig {
  // 0-indexed half-open window of provider ranks, [rank_lo, rank_hi).
  std::size_t rank_lo = 100;
  std::size_t rank_hi = 200;
  std::size_t variants = 8;
  std::uint64_t seed = 0;
  PosSource pos_source = PosSource::kBuiltinLexicon;
  int workers = 1;

  void Validate() const;  // throws ConfigError
};

struct MaskPlan {
  std::string sentence_id;
  std::size_t variant = 0;
  std::vector<std::size_t> positions;  // strictly increasing, 1..3 entries

  bool operator==(const MaskPlan&) const = default;
};

// Positions tagged NOUN/VERB/ADJ/ADV that lie outside every gold span.
// Throws ConfigError for kInputColumn when the sentence has no POS column.
std::vector<std::size_t> SelectTargetTokens(const Sentence& sentence,
                                            PosSource source,
                                            const LexiconTagger& tagger);

// Up to `k` distinct plans over `targets`. Each plan draws its mask count
// uniformly from {1,2,3} (capped by the target count) and its positions
// without replacement. When fewer than `k` distinct plans exist, all of them
// are returned in canonical order. Empty when `targets` is empty.
std::vector<MaskPlan> MakeMaskPlans(const Sentence& sentence,
                                    const std::vector<std::size_t>& targets,
                                    std::size_t k, std::uint64_t seed);

struct Replacement {
  std::size_t position = 0;
  std::string original;
  std::string replacement;
  std::size_t rank = 0;   // index in the provider response
  bool fallback = false;  // taken from below the window

  bool operator==(const Replacement&) const = default;
  nlohmann::json ToJson() const;
};

struct DecodedVariant {
  Sentence sentence;
  std::vector<Replacement> replacements;
  // Positions left unchanged because no candidate survived filtering.
  std::vector<std::size_t> unfilled;
};

// Whether a provider token may replace `original`: not the same word
// (case-insensitive), not pure punctuation, not a sub-word fragment.
bool UsableFill(const std::string& candidate, const std::string& original);

// Fills the plan's positions left to right. Each request carries the earlier
// fills. The pick is uniform over usable candidates ranked in the window;
// with none, the usable candidate ranked closest below the window is taken.
DecodedVariant DecodeVariant(const Sentence& sentence, const MaskPlan& plan,
                             MlmProvider& provider,
                             const ContextAttackConfig& config);

// Ranks attacked variants; lower keys are more adversarial.
class VictimScorer {
 public:
  virtual ~VictimScorer() = default;
  virtual double Score(const Sentence& variant) const = 0;
  virtual std::string name() const = 0;
};

// Reference-model predictions looked up by SentenceDigest. The key is that
// model's span F1 on the variant against its gold spans. Variants missing
// from the table score 1 (no observed drop).
class PredictionLookupScorer : public VictimScorer {
 public:
  explicit PredictionLookupScorer(
      std::map<std::string, std::vector<EntitySpan>> predictions_by_digest);

  double Score(const Sentence& variant) const override;
  std::string name() const override { return "prediction_lookup"; }

 private:
  std::map<std::string, std::vector<EntitySpan>> predictions_;
};

// Stand-in when no reference model is available: the fraction of context
// tokens (outside gold spans) that occur in the training split, compared
// case-insensitively. 0 when the sentence has no context tokens.
class UnigramOverlapScorer : public VictimScorer {
 public:
  explicit UnigramOverlapScorer(const Corpus& train);
  explicit UnigramOverlapScorer(std::unordered_set<std::string> vocabulary);

  double Score(const Sentence& variant) const override;
  std::string name() const override { return "unigram_overlap"; }

 private:
  std::unordered_set<std::string> vocabulary_;
};

// Index of the variant with the smallest key; ties go to the
// lexicographically smallest SerializeSentence.
std::size_t SelectAdversarialVariant(const std::vector<Sentence>& variants,
                                     const VictimScorer& scorer);

enum class ContextStatus { kAttacked, kUnchanged, kNoTargets, kProviderError };

std::string_view ContextStatusName(ContextStatus status);

struct ContextLogEntry {
  std::string sentence_id;
  ContextStatus status = ContextStatus::kUnchanged;
  std::size_t plans = 0;
  std::size_t chosen_variant = 0;
  double score = 0.0;
  std::vector<Replacement> replacements;
  std::size_t fallbacks = 0;
  std::string error;

  nlohmann::json ToJson() const;
};

struct ContextAttackResult {
  Corpus corpus;
  std::vector<ContextLogEntry> log;  // corpus order
  std::size_t provider_errors = 0;

  std::size_t sentences_attacked() const;
  std::size_t words_replaced() const;
};

// Per sentence: plans -> decoded variants -> selected variant. Sentences are
// independent and seeded from (seed, sentence id); a ProviderError leaves
// that sentence unchanged and is counted.
ContextAttackResult AttackContext(const Corpus& corpus, MlmProvider& provider,
                                  const VictimScorer& scorer,
                                  const ContextAttackConfig& config);

}  // namespace nerstress

#endif  // NERSTRESS_CONTEXT_ATTACK_H_
