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

#ifndef NERSTRESS_AUGMENT_H_
#define NERSTRESS_AUGMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nerstress/corpus.h"
#include "nerstress/pos_lexicon.h"
#include "nerstress/random.h"

namespace nerstress {

enum class AugmentMethod { kEntitySwitching, kRandomMasking, kMixingUp };

std::string_view AugmentMethodName(AugmentMethod method);
// nullopt for unknown names.
std::optional<AugmentMethod> ParseAugmentMethod(std::string_view name);

struct AugmentResult {
  Corpus corpus;
  // One JSON object per edit, for the line-delimited manifest.
  std::vector<nlohmann::json> edits;
};

// Replaces every entity that has a same-type donor with a different surface
// in another sentence; the donor occurrence is drawn uniformly.
AugmentResult EntitySwitching(const Corpus& corpus, std::uint64_t seed);

// Replaces each letter of every non-stopword entity token with a random
// letter of the same case. Everything else is kept byte for byte.
AugmentResult RandomMasking(const Corpus& corpus, std::uint64_t seed,
                            const StopwordSet& stopwords = StopwordSet());

// For each sentence with entities: picks one entity, picks a same-type
// entity in another sentence, and joins the target up to and including its
// entity with the donor after its entity. Sentences without a donor pass
// through.
AugmentResult MixingUp(const Corpus& corpus, std::uint64_t seed);

AugmentResult Augment(const Corpus& corpus, AugmentMethod method,
                      std::uint64_t seed,
                      const StopwordSet& stopwords = StopwordSet());

// Applies random masking to one token.
std::string MaskLetters(std::string_view token, Rng& rng);

}  // namespace nerstress

#endif  // NERSTRESS_AUGMENT_H_
