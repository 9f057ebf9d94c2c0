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

#include "nerstress/errors.h"
#include "nerstress/text_util.h"

namespace nerstress {

using nlohmann::json;

std::string_view AugmentMethodName(AugmentMethod method) {
  switch (method) {
    case AugmentMethod::kEntitySwitching:
      return "entity_switching";
    case AugmentMethod::kRandomMasking:
      return "random_masking";
    case AugmentMethod::kMixingUp:
      return "mixing_up";
  }
  return "entity_switching";
}

std::optional<AugmentMethod> ParseAugmentMethod(std::string_view name) {
  for (AugmentMethod m : {AugmentMethod::kEntitySwitching,
                          AugmentMethod::kRandomMasking, AugmentMethod::kMixingUp}) {
    if (name == AugmentMethodName(m)) return m;
  }
  return std::nullopt;
}

namespace {

struct EntityRef {
  std::size_t sentence;
  EntitySpan span;
};

// type -> every entity occurrence, corpus order.
std::map<std::string, std::vector<EntityRef>> IndexByType(
    const Corpus& corpus, const std::vector<std::vector<EntitySpan>>& spans) {
  std::map<std::string, std::vector<EntityRef>> index;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    for (const EntitySpan& span : spans[s]) index[span.type].push_back({s, span});
  }
  return index;
}

std::vector<std::vector<EntitySpan>> AllSpans(const Corpus& corpus) {
  std::vector<std::vector<EntitySpan>> spans;
  spans.reserve(corpus.size());
  for (const Sentence& s : corpus.sentences) spans.push_back(ExtractSpans(s));
  return spans;
}

}  // namespace

AugmentResult EntitySwitching(const Corpus& corpus, std::uint64_t seed) {
  const auto spans = AllSpans(corpus);
  const auto index = IndexByType(corpus, spans);
  AugmentResult result;
  result.corpus.split_name = corpus.split_name;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const Sentence& in = corpus.sentences[s];
    Sentence out;
    out.id = in.id;
    std::size_t cursor = 0;
    for (const EntitySpan& span : spans[s]) {
      std::vector<const EntityRef*> donors;
      for (const EntityRef& ref : index.at(span.type)) {
        if (ref.sentence != s && ref.span.surface != span.surface) donors.push_back(&ref);
      }
      for (; cursor < span.start; ++cursor) out.tokens.push_back(in.tokens[cursor]);
      cursor = span.end;
      if (donors.empty()) {
        for (std::size_t i = span.start; i < span.end; ++i) out.tokens.push_back(in.tokens[i]);
        continue;
      }
      Rng rng(DeriveSeed(seed, {"entity-switching", in.id, std::to_string(span.start)}));
      const EntityRef& donor = *donors[rng.UniformIndex(donors.size())];
      const Sentence& source = corpus.sentences[donor.sentence];
      for (std::size_t i = donor.span.start; i < donor.span.end; ++i) {
        Token token = source.tokens[i];
        token.tag = (i == donor.span.start ? "B-" : "I-") + span.type;
        out.tokens.push_back(std::move(token));
      }
      result.edits.push_back({{"method", "entity_switching"},
                              {"sentence_id", in.id},
                              {"start", span.start},
                              {"end", span.end},
                              {"type", span.type},
                              {"original", span.surface},
                              {"replacement", donor.span.surface},
                              {"donor_sentence_id", source.id}});
    }
    for (; cursor < in.size(); ++cursor) out.tokens.push_back(in.tokens[cursor]);
    result.corpus.sentences.push_back(std::move(out));
  }
  return result;
}

std::string MaskLetters(std::string_view token, Rng& rng) {
  std::string out(token);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') {
      c = static_cast<char>('a' + rng.UniformIndex(26));
    } else if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>('A' + rng.UniformIndex(26));
    }
  }
  return out;
}

AugmentResult RandomMasking(const Corpus& corpus, std::uint64_t seed,
                            const StopwordSet& stopwords) {
  AugmentResult result;
  result.corpus = corpus;
  for (Sentence& sentence : result.corpus.sentences) {
    Rng rng(DeriveSeed(seed, {"random-masking", sentence.id}));
    for (const EntitySpan& span : ExtractSpans(sentence)) {
      std::vector<std::string> masked;
      for (std::size_t i = span.start; i < span.end; ++i) {
        Token& token = sentence.tokens[i];
        if (!stopwords.Contains(token.text)) token.text = MaskLetters(token.text, rng);
        masked.push_back(token.text);
      }
      result.edits.push_back({{"method", "random_masking"},
                              {"sentence_id", sentence.id},
                              {"start", span.start},
                              {"end", span.end},
                              {"type", span.type},
                              {"original", span.surface},
                              {"replacement", Join(masked, " ")}});
    }
  }
  return result;
}

AugmentResult MixingUp(const Corpus& corpus, std::uint64_t seed) {
  const auto spans = AllSpans(corpus);
  const auto index = IndexByType(corpus, spans);
  AugmentResult result;
  result.corpus.split_name = corpus.split_name;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const Sentence& target = corpus.sentences[s];
    if (spans[s].empty()) {
      result.corpus.sentences.push_back(target);
      continue;
    }
    Rng rng(DeriveSeed(seed, {"mixing-up", target.id}));
    const EntitySpan& chosen = spans[s][rng.UniformIndex(spans[s].size())];
    std::vector<const EntityRef*> donors;
    for (const EntityRef& ref : index.at(chosen.type)) {
      if (ref.sentence != s) donors.push_back(&ref);
    }
    if (donors.empty()) {
      result.corpus.sentences.push_back(target);
      continue;
    }
    const EntityRef& donor = *donors[rng.UniformIndex(donors.size())];
    const Sentence& source = corpus.sentences[donor.sentence];
    Sentence out;
    out.id = target.id;
    out.tokens.assign(target.tokens.begin(),
                      target.tokens.begin() + static_cast<std::ptrdiff_t>(chosen.end));
    out.tokens.insert(out.tokens.end(),
                      source.tokens.begin() + static_cast<std::ptrdiff_t>(donor.span.end),
                      source.tokens.end());
    // Spans are maximal, so the donor suffix opens with O or B-.
    result.edits.push_back({{"method", "mixing_up"},
                            {"sentence_id", target.id},
                            {"entity_start", chosen.start},
                            {"entity_end", chosen.end},
                            {"type", chosen.type},
                            {"donor_sentence_id", source.id},
                            {"donor_entity_end", donor.span.end},
                            {"length", out.size()}});
    result.corpus.sentences.push_back(std::move(out));
  }
  return result;
}

AugmentResult Augment(const Corpus& corpus, AugmentMethod method,
                      std::uint64_t seed, const StopwordSet& stopwords) {
  switch (method) {
    case AugmentMethod::kEntitySwitching:
      return EntitySwitching(corpus, seed);
    case AugmentMethod::kRandomMasking:
      return RandomMasking(corpus, seed, stopwords);
    case AugmentMethod::kMixingUp:
      return MixingUp(corpus, seed);
  }
  throw InputError("unknown augmentation method");
}

}  // namespace nerstress
