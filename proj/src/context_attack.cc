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

#include "nerstress/context_attack.h"

#include <algorithm>
#include <set>

#include "nerstress/errors.h"
#include "nerstress/random.h"
#include "nerstress/text_util.h"

namespace nerstress {

using nlohmann::json;

void ContextAttackConfig::Validate() const {
  if (rank_lo >= rank_hi) {
    throw ConfigError("rank window must satisfy lo < hi, got [" +
                      std::to_string(rank_lo) + ", " + std::to_string(rank_hi) + ")");
  }
  if (variants == 0) throw ConfigError("variants per sentence must be >= 1");
}

std::vector<std::size_t> SelectTargetTokens(const Sentence& sentence,
                                            PosSource source,
                                            const LexiconTagger& tagger) {
  if (source == PosSource::kInputColumn && !sentence.has_pos()) {
    throw ConfigError("POS source is the input column but sentence '" +
                      sentence.id + "' has none");
  }
  std::vector<bool> in_entity(sentence.size(), false);
  for (const EntitySpan& span : ExtractSpans(sentence)) {
    for (std::size_t i = span.start; i < span.end; ++i) in_entity[i] = true;
  }
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (in_entity[i]) continue;
    const Pos pos = source == PosSource::kInputColumn
                        ? *sentence.tokens[i].pos
                        : tagger.Tag(sentence.tokens[i].text);
    if (pos != Pos::kOther) targets.push_back(i);
  }
  return targets;
}

namespace {

std::size_t Choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All subsets of size 1..3 in (size, lexicographic) order.
std::vector<std::vector<std::size_t>> AllPlans(const std::vector<std::size_t>& targets) {
  std::vector<std::vector<std::size_t>> plans;
  const std::size_t t = targets.size();
  for (std::size_t i = 0; i < t; ++i) plans.push_back({targets[i]});
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = i + 1; j < t; ++j) plans.push_back({targets[i], targets[j]});
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = i + 1; j < t; ++j)
      for (std::size_t l = j + 1; l < t; ++l)
        plans.push_back({targets[i], targets[j], targets[l]});
  return plans;
}

}  // namespace

std::vector<MaskPlan> MakeMaskPlans(const Sentence& sentence,
                                    const std::vector<std::size_t>& input_targets,
                                    std::size_t k, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("MakeMaskPlans: k must be >= 1");
  std::vector<std::size_t> targets = input_targets;
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  std::vector<MaskPlan> plans;
  if (targets.empty()) return plans;

  const std::size_t t = targets.size();
  std::size_t distinct = 0;
  for (std::size_t c = 1; c <= std::min(kMaxMasks, t); ++c) distinct += Choose(t, c);

  if (distinct <= k) {
    for (auto& positions : AllPlans(targets)) {
      plans.push_back({sentence.id, plans.size(), std::move(positions)});
    }
    return plans;
  }

  Rng rng(DeriveSeed(seed, {"mask-plans", sentence.id}));
  std::set<std::vector<std::size_t>> seen;
  const std::size_t max_draws = 1000 * k;
  for (std::size_t draw = 0; plans.size() < k && draw < max_draws; ++draw) {
    const std::size_t count = std::min(1 + rng.UniformIndex(kMaxMasks), t);
    std::vector<std::size_t> positions;
    for (std::size_t idx : rng.SampleIndices(t, count)) positions.push_back(targets[idx]);
    if (!seen.insert(positions).second) continue;
    plans.push_back({sentence.id, plans.size(), std::move(positions)});
  }
  return plans;
}

json Replacement::ToJson() const {
  return {{"position", position},
          {"original", original},
          {"replacement", replacement},
          {"rank", rank},
          {"fallback", fallback}};
}

bool UsableFill(const std::string& candidate, const std::string& original) {
  if (candidate.empty() || candidate == kMaskToken) return false;
  if (HasWhitespace(candidate)) return false;
  if (EqualsIgnoreCase(candidate, original)) return false;
  if (IsPunctuation(candidate)) return false;
  return StartsWordCharacter(candidate);
}

DecodedVariant DecodeVariant(const Sentence& sentence, const MaskPlan& plan,
                             MlmProvider& provider,
                             const ContextAttackConfig& config) {
  DecodedVariant result;
  result.sentence = sentence;
  std::vector<std::string> working = sentence.Texts();
  Rng rng(DeriveSeed(config.seed, {"decode", sentence.id,
                                   std::to_string(plan.variant)}));
  std::vector<std::size_t> positions = plan.positions;
  std::sort(positions.begin(), positions.end());
  for (std::size_t pos : positions) {
    if (pos >= working.size()) throw std::out_of_range("mask position out of range");
    const std::string original = sentence.tokens[pos].text;
    std::vector<std::string> request = working;
    request[pos] = std::string(kMaskToken);
    const std::vector<MlmCandidate> ranked =
        provider.Fill(request, pos, config.rank_hi);

    std::vector<std::size_t> window;
    const std::size_t hi = std::min(config.rank_hi, ranked.size());
    for (std::size_t r = config.rank_lo; r < hi; ++r) {
      if (UsableFill(ranked[r].token, original)) window.push_back(r);
    }
    std::optional<std::size_t> rank;
    bool fallback = false;
    if (!window.empty()) {
      rank = window[rng.UniformIndex(window.size())];
    } else {
      for (std::size_t r = std::min(config.rank_lo, ranked.size()); r-- > 0;) {
        if (UsableFill(ranked[r].token, original)) {
          rank = r;
          fallback = true;
          break;
        }
      }
    }
    if (!rank) {
      result.unfilled.push_back(pos);
      continue;
    }
    working[pos] = ranked[*rank].token;
    result.sentence.tokens[pos].text = ranked[*rank].token;
    result.replacements.push_back({pos, original, ranked[*rank].token, *rank, fallback});
  }
  return result;
}

namespace {

double SentenceF1(const std::vector<EntitySpan>& gold,
                  const std::vector<EntitySpan>& pred) {
  if (gold.empty() && pred.empty()) return 1.0;
  std::set<std::tuple<std::size_t, std::size_t, std::string>> gold_set;
  for (const auto& s : gold) gold_set.emplace(s.start, s.end, s.type);
  std::size_t matched = 0;
  for (const auto& s : pred) matched += gold_set.count({s.start, s.end, s.type});
  if (matched == 0) return 0.0;
  const double p = static_cast<double>(matched) / static_cast<double>(pred.size());
  const double r = static_cast<double>(matched) / static_cast<double>(gold.size());
  return 2 * p * r / (p + r);
}

}  // namespace

PredictionLookupScorer::PredictionLookupScorer(
    std::map<std::string, std::vector<EntitySpan>> predictions_by_digest)
    : predictions_(std::move(predictions_by_digest)) {}

double PredictionLookupScorer::Score(const Sentence& variant) const {
  auto it = predictions_.find(SentenceDigest(variant));
  if (it == predictions_.end()) return 1.0;
  return SentenceF1(ExtractSpans(variant), it->second);
}

UnigramOverlapScorer::UnigramOverlapScorer(const Corpus& train) {
  for (const Sentence& s : train.sentences) {
    for (const Token& t : s.tokens) vocabulary_.insert(AsciiLower(t.text));
  }
}

UnigramOverlapScorer::UnigramOverlapScorer(std::unordered_set<std::string> vocabulary) {
  for (const std::string& w : vocabulary) vocabulary_.insert(AsciiLower(w));
}

double UnigramOverlapScorer::Score(const Sentence& variant) const {
  std::vector<bool> in_entity(variant.size(), false);
  for (const EntitySpan& span : ExtractSpans(variant)) {
    for (std::size_t i = span.start; i < span.end; ++i) in_entity[i] = true;
  }
  std::size_t context = 0, seen = 0;
  for (std::size_t i = 0; i < variant.size(); ++i) {
    if (in_entity[i]) continue;
    ++context;
    if (vocabulary_.count(AsciiLower(variant.tokens[i].text))) ++seen;
  }
  return context == 0 ? 0.0
                      : static_cast<double>(seen) / static_cast<double>(context);
}

std::size_t SelectAdversarialVariant(const std::vector<Sentence>& variants,
                                     const VictimScorer& scorer) {
  if (variants.empty()) throw std::invalid_argument("no variants to select from");
  std::size_t best = 0;
  double best_key = scorer.Score(variants[0]);
  std::string best_text = SerializeSentence(variants[0]);
  for (std::size_t i = 1; i < variants.size(); ++i) {
    const double key = scorer.Score(variants[i]);
    if (key > best_key) continue;
    std::string text = SerializeSentence(variants[i]);
    if (key < best_key || text < best_text) {
      best = i;
      best_key = key;
      best_text = std::move(text);
    }
  }
  return best;
}

std::string_view ContextStatusName(ContextStatus status) {
  switch (status) {
    case ContextStatus::kAttacked:
      return "attacked";
    case ContextStatus::kUnchanged:
      return "unchanged";
    case ContextStatus::kNoTargets:
      return "no_targets";
    case ContextStatus::kProviderError:
      return "provider_error";
  }
  return "unchanged";
}

json ContextLogEntry::ToJson() const {
  json reps = json::array();
  for (const Replacement& r : replacements) reps.push_back(r.ToJson());
  json j = {{"sentence_id", sentence_id},
            {"status", ContextStatusName(status)},
            {"plans", plans},
            {"chosen_variant", chosen_variant},
            {"score", score},
            {"replacements", reps},
            {"fallbacks", fallbacks}};
  if (!error.empty()) j["error"] = error;
  return j;
}

std::size_t ContextAttackResult::sentences_attacked() const {
  return static_cast<std::size_t>(
      std::count_if(log.begin(), log.end(), [](const ContextLogEntry& e) {
        return e.status == ContextStatus::kAttacked;
      }));
}

std::size_t ContextAttackResult::words_replaced() const {
  std::size_t n = 0;
  for (const auto& e : log) n += e.replacements.size();
  return n;
}

ContextAttackResult AttackContext(const Corpus& corpus, MlmProvider& provider,
                                  const VictimScorer& scorer,
                                  const ContextAttackConfig& config) {
  config.Validate();
  const LexiconTagger tagger;
  ContextAttackResult result;
  result.corpus.split_name = corpus.split_name;
  result.corpus.sentences.resize(corpus.size());
  result.log.resize(corpus.size());

  ParallelFor(corpus.size(), config.workers, [&](std::size_t s) {
    const Sentence& sentence = corpus.sentences[s];
    ContextLogEntry& entry = result.log[s];
    entry.sentence_id = sentence.id;
    result.corpus.sentences[s] = sentence;

    const auto targets = SelectTargetTokens(sentence, config.pos_source, tagger);
    const auto plans = MakeMaskPlans(sentence, targets, config.variants, config.seed);
    entry.plans = plans.size();
    if (plans.empty()) {
      entry.status = ContextStatus::kNoTargets;
      return;
    }
    std::vector<DecodedVariant> decoded;
    try {
      for (const MaskPlan& plan : plans) {
        decoded.push_back(DecodeVariant(sentence, plan, provider, config));
      }
    } catch (const ProviderError& e) {
      entry.status = ContextStatus::kProviderError;
      entry.error = e.what();
      return;
    }
    std::vector<Sentence> variants;
    variants.reserve(decoded.size());
    for (const auto& d : decoded) variants.push_back(d.sentence);
    const std::size_t chosen = SelectAdversarialVariant(variants, scorer);
    entry.chosen_variant = chosen;
    entry.score = scorer.Score(variants[chosen]);
    entry.replacements = decoded[chosen].replacements;
    entry.fallbacks = static_cast<std::size_t>(std::count_if(
        entry.replacements.begin(), entry.replacements.end(),
        [](const Replacement& r) { return r.fallback; }));
    entry.status = entry.replacements.empty() ? ContextStatus::kUnchanged
                                              : ContextStatus::kAttacked;
    result.corpus.sentences[s] = std::move(decoded[chosen].sentence);
  });

  for (const auto& e : result.log) {
    if (e.status == ContextStatus::kProviderError) ++result.provider_errors;
  }
  return result;
}

}  // namespace nerstress
