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

#include "nerstress/entity_attack.h"

#include <cmath>
#include <set>
#include <stdexcept>

#include "nerstress/errors.h"
#include "nerstress/random.h"
#include "nerstress/text_util.h"

namespace nerstress {

using nlohmann::json;

std::string_view AttackStatusName(AttackStatus status) {
  switch (status) {
    case AttackStatus::kReplaced:
      return "replaced";
    case AttackStatus::kNoCandidate:
      return "no_candidate";
    case AttackStatus::kUnlinked:
      return "unlinked";
    case AttackStatus::kNotSelected:
      return "not_selected";
  }
  return "unlinked";
}

json AttackRecord::ToJson() const {
  return {{"sentence_id", sentence_id},
          {"start", original.start},
          {"end", original.end},
          {"type", original.type},
          {"surface", original.surface},
          {"replacement", replacement},
          {"class", class_qid},
          {"status", AttackStatusName(status)}};
}

AttackRecord AttackRecord::FromJson(const json& j) {
  AttackRecord r;
  r.sentence_id = j.at("sentence_id").get<std::string>();
  r.original.start = j.at("start").get<std::size_t>();
  r.original.end = j.at("end").get<std::size_t>();
  r.original.type = j.at("type").get<std::string>();
  r.original.surface = j.at("surface").get<std::string>();
  r.replacement = j.value("replacement", "");
  r.class_qid = j.value("class", "");
  const std::string status = j.at("status").get<std::string>();
  for (AttackStatus s : {AttackStatus::kReplaced, AttackStatus::kNoCandidate,
                         AttackStatus::kUnlinked, AttackStatus::kNotSelected}) {
    if (status == AttackStatusName(s)) {
      r.status = s;
      return r;
    }
  }
  throw InputError("unknown attack status '" + status + "'");
}

LinkMap LinkMapFromDictionary(const Corpus& corpus,
                              const AdversarialDictionary& dict) {
  LinkMap links;
  for (const Sentence& sentence : corpus.sentences) {
    for (const EntitySpan& span : ExtractSpans(sentence)) {
      SpanKey key{sentence.id, span.start, span.end};
      if (span.type == kPersonType) {
        if (!dict.person_names.empty()) {
          links[key] = {std::string(kPersonClass)};
        }
        continue;
      }
      auto t = dict.links.find(span.type);
      if (t == dict.links.end()) continue;
      auto s = t->second.find(span.surface);
      if (s == t->second.end() || s->second.empty()) continue;
      links[key] = s->second;
    }
  }
  return links;
}

std::vector<std::size_t> SelectAttackSet(std::size_t n, double coverage,
                                         std::uint64_t seed) {
  if (!(coverage >= 0.0 && coverage <= 1.0)) {
    throw std::invalid_argument("coverage must lie in [0, 1]");
  }
  const auto k = static_cast<std::size_t>(std::llround(coverage * static_cast<double>(n)));
  Rng rng(DeriveSeed(seed, {"entity-attack-select"}));
  return rng.SampleIndices(n, std::min(k, n));
}

namespace {

struct SpanChoice {
  std::string replacement;
  std::string class_qid;
};

// Uniform over classes that still have a usable surface, then uniform over
// those surfaces.
std::optional<SpanChoice> ChooseReplacement(
    const EntitySpan& span, const std::vector<std::string>& classes,
    const AdversarialDictionary& dict, bool forbid_identity, Rng& rng) {
  std::vector<std::pair<const std::string*, std::vector<const std::string*>>> usable;
  for (const std::string& cls : classes) {
    std::vector<const std::string*> surfaces;
    for (const std::string& s : dict.Candidates(span.type, cls)) {
      if (forbid_identity && EqualsIgnoreCase(s, span.surface)) continue;
      if (SplitWhitespace(s).empty()) continue;
      surfaces.push_back(&s);
    }
    if (!surfaces.empty()) usable.emplace_back(&cls, std::move(surfaces));
  }
  if (usable.empty()) return std::nullopt;
  const auto& [cls, surfaces] = usable[rng.UniformIndex(usable.size())];
  return SpanChoice{*surfaces[rng.UniformIndex(surfaces.size())], *cls};
}

}  // namespace

EntityAttackResult AttackEntities(const Corpus& corpus,
                                  const AdversarialDictionary& dict,
                                  const LinkMap& links,
                                  const EntityAttackConfig& config) {
  if (!(config.coverage >= 0.0 && config.coverage <= 1.0)) {
    throw std::invalid_argument("coverage must lie in [0, 1]");
  }

  // Eligible spans in corpus order.
  std::vector<std::vector<EntitySpan>> spans(corpus.size());
  std::vector<std::pair<std::size_t, std::size_t>> eligible;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    spans[s] = ExtractSpans(corpus.sentences[s]);
    for (std::size_t k = 0; k < spans[s].size(); ++k) {
      const EntitySpan& span = spans[s][k];
      if (links.count({corpus.sentences[s].id, span.start, span.end})) {
        eligible.emplace_back(s, k);
      }
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> selected;
  for (std::size_t i :
       SelectAttackSet(eligible.size(), config.coverage, config.seed)) {
    selected.insert(eligible[i]);
  }

  EntityAttackResult result;
  result.corpus.split_name = corpus.split_name;
  result.corpus.sentences.resize(corpus.size());
  std::vector<std::vector<AttackRecord>> records(corpus.size());

  ParallelFor(corpus.size(), config.workers, [&](std::size_t s) {
    const Sentence& in = corpus.sentences[s];
    Sentence out;
    out.id = in.id;
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < spans[s].size(); ++k) {
      const EntitySpan& span = spans[s][k];
      AttackRecord record;
      record.sentence_id = in.id;
      record.original = span;
      auto link = links.find({in.id, span.start, span.end});
      std::optional<SpanChoice> choice;
      if (link == links.end()) {
        record.status = AttackStatus::kUnlinked;
      } else if (!selected.count({s, k})) {
        record.status = AttackStatus::kNotSelected;
      } else {
        Rng rng(DeriveSeed(config.seed, {"entity-attack", in.id,
                                         std::to_string(span.start)}));
        choice = ChooseReplacement(span, link->second, dict,
                                   config.forbid_identity, rng);
        record.status = choice ? AttackStatus::kReplaced : AttackStatus::kNoCandidate;
      }

      for (; cursor < span.start; ++cursor) out.tokens.push_back(in.tokens[cursor]);
      if (choice) {
        record.replacement = choice->replacement;
        record.class_qid = choice->class_qid;
        const auto words = SplitWhitespace(choice->replacement);
        for (std::size_t w = 0; w < words.size(); ++w) {
          Token token;
          token.text = words[w];
          if (in.has_pos()) token.pos = Pos::kNoun;
          token.tag = (w == 0 ? "B-" : "I-") + span.type;
          out.tokens.push_back(std::move(token));
        }
      } else {
        for (std::size_t i = span.start; i < span.end; ++i) {
          out.tokens.push_back(in.tokens[i]);
        }
      }
      cursor = span.end;
      records[s].push_back(std::move(record));
    }
    for (; cursor < in.size(); ++cursor) out.tokens.push_back(in.tokens[cursor]);
    result.corpus.sentences[s] = std::move(out);
  });

  for (auto& per_sentence : records) {
    for (auto& r : per_sentence) result.records.push_back(std::move(r));
  }
  return result;
}

double AttackStats::attacked_entity_pct() const {
  return entities == 0 ? 0.0 : 100.0 * static_cast<double>(replaced) /
                                   static_cast<double>(entities);
}

double AttackStats::attacked_sentence_pct() const {
  return sentences == 0 ? 0.0 : 100.0 * static_cast<double>(sentences_attacked) /
                                    static_cast<double>(sentences);
}

json AttackStats::ToJson() const {
  return {{"entities", entities},
          {"replaced", replaced},
          {"no_candidate", no_candidate},
          {"unlinked", unlinked},
          {"not_selected", not_selected},
          {"sentences", sentences},
          {"sentences_attacked", sentences_attacked},
          {"attacked_entity_pct", attacked_entity_pct()},
          {"attacked_sentence_pct", attacked_sentence_pct()}};
}

AttackStats ComputeAttackStats(const std::vector<AttackRecord>& records,
                               const Corpus& corpus) {
  AttackStats stats;
  stats.sentences = corpus.size();
  std::set<std::string> attacked;
  for (const AttackRecord& r : records) {
    ++stats.entities;
    switch (r.status) {
      case AttackStatus::kReplaced:
        ++stats.replaced;
        attacked.insert(r.sentence_id);
        break;
      case AttackStatus::kNoCandidate:
        ++stats.no_candidate;
        break;
      case AttackStatus::kUnlinked:
        ++stats.unlinked;
        break;
      case AttackStatus::kNotSelected:
        ++stats.not_selected;
        break;
    }
  }
  for (const Sentence& s : corpus.sentences) {
    if (attacked.count(s.id)) ++stats.sentences_attacked;
  }
  return stats;
}

}  // namespace nerstress
