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

#ifndef NERSTRESS_CORPUS_H_
#define NERSTRESS_CORPUS_H_

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace nerstress {

// Coarse part of speech. Only the first four are attack targets.
enum class Pos { kNoun, kVerb, kAdj, kAdv, kOther };

std::string_view PosName(Pos pos);

// Maps coarse names, Penn Treebank and Universal Dependencies tags onto Pos.
// Unrecognized tags map to kOther.
Pos CoarsePos(std::string_view tag);

struct Token {
  std::string text;
  std::optional<Pos> pos;
  std::string tag;  // "O", "B-<TYPE>" or "I-<TYPE>"

  bool operator==(const Token&) const = default;
};

// Half-open token range [start, end) of one entity.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;
  std::string surface;

  std::size_t length() const { return end - start; }
  bool operator==(const EntitySpan&) const = default;
  auto operator<=>(const EntitySpan&) const = default;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  std::vector<std::string> Texts() const;
  std::vector<std::string> Tags() const;
  bool has_pos() const { return !tokens.empty() && tokens.front().pos.has_value(); }

  bool operator==(const Sentence&) const = default;
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::string split_name;

  std::size_t size() const { return sentences.size(); }
  bool operator==(const Corpus&) const = default;
};

enum class ParseMode { kStrict, kLenient };

// ---- BIO tag algebra ------------------------------------------------------

// True for "O", "B-X" and "I-X" with a non-empty, whitespace-free X.
bool IsBioLabel(std::string_view tag);

// Index of the first tag that breaks the BIO grammar, if any. An I-X is legal
// only directly after B-X or I-X.
std::optional<std::size_t> FirstBioViolation(const std::vector<std::string>& tags);

inline bool IsValidBio(const std::vector<std::string>& tags) {
  return !FirstBioViolation(tags).has_value();
}

// Maximal spans sorted by start.
std::vector<EntitySpan> ExtractSpans(const Sentence& sentence);

// Inverse of ExtractSpans on tag sequences.
std::vector<std::string> TagsFromSpans(const std::vector<EntitySpan>& spans,
                                       std::size_t length);

// Checks every Sentence/Token invariant; throws TagError or InputError.
void ValidateSentence(const Sentence& sentence);
void ValidateCorpus(const Corpus& corpus);

// Default identifier assigned to the sentence at `index` when the file does
// not name it.
std::string DefaultSentenceId(std::size_t index);

// ---- Column format --------------------------------------------------------
//
// One token per line, blank line between sentences. Column 1 is the token,
// the last column the BIO tag; with three or more columns, column 2 is the
// POS. Columns are tab-separated if any line of the file contains a tab,
// otherwise split on runs of spaces. A line "# id = <id>" directly before a
// sentence names it; "-DOCSTART-" lines are skipped.

Corpus ParseConll(std::string_view text, ParseMode mode,
                  std::string split_name = "");
Corpus ReadConllFile(const std::string& path, ParseMode mode);

// Serializes with single spaces and LF endings. Ids are written only when they
// differ from DefaultSentenceId.
std::string WriteConll(const Corpus& corpus);

// One sentence in column format with its id line; the canonical byte form used
// for tie-breaking.
std::string SerializeSentence(const Sentence& sentence);

// Hex SHA-256 of the space-joined token texts. Keys prediction-lookup tables.
std::string SentenceDigest(const Sentence& sentence);

// ---- Entity vocabulary ----------------------------------------------------

struct EntityWordOptions {
  bool case_sensitive = true;
  bool include_punctuation = true;
};

// Entity type -> unique words occurring inside spans of that type.
std::map<std::string, std::set<std::string>> EntityWords(
    const Corpus& corpus, const EntityWordOptions& options = {});

// Union over all types.
std::set<std::string> EntityWordSet(const Corpus& corpus,
                                    const EntityWordOptions& options = {});

struct VocabCount {
  std::size_t unique_words = 0;
  std::size_t seen_words = 0;
  double seen_ratio = 0.0;  // 0 when unique_words == 0

  bool operator==(const VocabCount&) const = default;
};

struct EntityVocabStats {
  // Per type, eval words of type T counted as seen when they occur among the
  // training words of type T.
  std::map<std::string, VocabCount> per_type;
  // All types pooled.
  VocabCount overall;
};

EntityVocabStats ComputeEntityVocabStats(const Corpus& train,
                                         const Corpus& eval,
                                         const EntityWordOptions& options = {});

}  // namespace nerstress

#endif  // NERSTRESS_CORPUS_H_
