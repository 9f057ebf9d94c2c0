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

#ifndef NERSTRESS_POS_LEXICON_H_
#define NERSTRESS_POS_LEXICON_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nerstress/corpus.h"

namespace nerstress {

// English function words (stopwords_v1), lowercase.
class StopwordSet {
 public:
  // The built-in list.
  StopwordSet();
  explicit StopwordSet(const std::vector<std::string>& words);

  bool Contains(std::string_view word) const;  // case-insensitive
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

// Approximate tagger: function words and punctuation/numbers are OTHER, words
// in the shipped lexicon get their listed class, anything else is NOUN.
class LexiconTagger {
 public:
  LexiconTagger();

  Pos Tag(std::string_view word) const;
  std::vector<Pos> Tag(const Sentence& sentence) const;

 private:
  StopwordSet stopwords_;
  std::unordered_map<std::string, Pos> lexicon_;
};

}  // namespace nerstress

#endif  // NERSTRESS_POS_LEXICON_H_
