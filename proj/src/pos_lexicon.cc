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

#include "nerstress/pos_lexicon.h"

#include <algorithm>
#include <cctype>

#include "nerstress/resources.h"
#include "nerstress/text_util.h"

namespace nerstress {

StopwordSet::StopwordSet()
    : StopwordSet(ParseWordList(resources::k_stopwords_v1_txt)) {}

StopwordSet::StopwordSet(const std::vector<std::string>& words) {
  for (const std::string& w : words) words_.insert(AsciiLower(w));
}

bool StopwordSet::Contains(std::string_view word) const {
  return words_.count(AsciiLower(word)) > 0;
}

LexiconTagger::LexiconTagger() {
  for (std::string_view line : SplitLines(resources::k_pos_lexicon_v1_tsv)) {
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = SplitWhitespace(line);
    if (fields.size() != 2) continue;
    lexicon_[AsciiLower(fields[0])] = CoarsePos(fields[1]);
  }
}

Pos LexiconTagger::Tag(std::string_view word) const {
  if (stopwords_.Contains(word)) return Pos::kOther;
  const bool has_alpha = std::any_of(word.begin(), word.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalpha(u);
  });
  if (!has_alpha) return Pos::kOther;
  auto it = lexicon_.find(AsciiLower(word));
  return it == lexicon_.end() ? Pos::kNoun : it->second;
}

std::vector<Pos> LexiconTagger::Tag(const Sentence& sentence) const {
  std::vector<Pos> tags;
  tags.reserve(sentence.size());
  for (const Token& t : sentence.tokens) tags.push_back(Tag(t.text));
  return tags;
}

}  // namespace nerstress
