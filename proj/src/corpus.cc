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

#include "nerstress/corpus.h"

#include <unordered_set>

#include "nerstress/errors.h"
#include "nerstress/random.h"
#include "nerstress/text_util.h"

namespace nerstress {

std::string_view PosName(Pos pos) {
  switch (pos) {
    case Pos::kNoun:
      return "NOUN";
    case Pos::kVerb:
      return "VERB";
    case Pos::kAdj:
      return "ADJ";
    case Pos::kAdv:
      return "ADV";
    case Pos::kOther:
      return "OTHER";
  }
  return "OTHER";
}

Pos CoarsePos(std::string_view tag) {
  static const std::map<std::string_view, Pos> kTable = {
      {"NOUN", Pos::kNoun}, {"PROPN", Pos::kNoun}, {"NN", Pos::kNoun},
      {"NNS", Pos::kNoun},  {"NNP", Pos::kNoun},   {"NNPS", Pos::kNoun},
      {"VERB", Pos::kVerb}, {"VB", Pos::kVerb},    {"VBD", Pos::kVerb},
      {"VBG", Pos::kVerb},  {"VBN", Pos::kVerb},   {"VBP", Pos::kVerb},
      {"VBZ", Pos::kVerb},  {"ADJ", Pos::kAdj},    {"JJ", Pos::kAdj},
      {"JJR", Pos::kAdj},   {"JJS", Pos::kAdj},    {"ADV", Pos::kAdv},
      {"RB", Pos::kAdv},    {"RBR", Pos::kAdv},    {"RBS", Pos::kAdv},
  };
  auto it = kTable.find(tag);
  return it == kTable.end() ? Pos::kOther : it->second;
}

std::vector<std::string> Sentence::Texts() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

std::vector<std::string> Sentence::Tags() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.tag);
  return out;
}

bool IsBioLabel(std::string_view tag) {
  if (tag == "O") return true;
  if (tag.size() < 3 || tag[1] != '-') return false;
  if (tag[0] != 'B' && tag[0] != 'I') return false;
  return !HasWhitespace(tag);
}

namespace {

// Whether `tag` (an I- label) may follow `prev`.
bool ContinuesSpan(std::string_view prev, std::string_view tag) {
  return prev.size() >= 2 && prev[1] == '-' && prev.substr(2) == tag.substr(2);
}

}  // namespace

std::optional<std::size_t> FirstBioViolation(
    const std::vector<std::string>& tags) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (!IsBioLabel(tag)) return i;
    if (tag[0] == 'I' && (i == 0 || !ContinuesSpan(tags[i - 1], tag))) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<EntitySpan> ExtractSpans(const Sentence& sentence) {
  std::vector<EntitySpan> spans;
  const auto& tokens = sentence.tokens;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::string& tag = tokens[i].tag;
    if (tag == "O") {
      ++i;
      continue;
    }
    EntitySpan span;
    span.start = i;
    span.type = tag.substr(2);
    span.surface = tokens[i].text;
    ++i;
    while (i < tokens.size() && tokens[i].tag.size() > 2 &&
           tokens[i].tag[0] == 'I' &&
           std::string_view(tokens[i].tag).substr(2) == span.type) {
      span.surface += ' ';
      span.surface += tokens[i].text;
      ++i;
    }
    span.end = i;
    spans.push_back(std::move(span));
  }
  return spans;
}

std::vector<std::string> TagsFromSpans(const std::vector<EntitySpan>& spans,
                                       std::size_t length) {
  std::vector<std::string> tags(length, "O");
  for (const EntitySpan& span : spans) {
    for (std::size_t i = span.start; i < span.end && i < length; ++i) {
      tags[i] = (i == span.start ? "B-" : "I-") + span.type;
    }
  }
  return tags;
}

void ValidateSentence(const Sentence& sentence) {
  if (sentence.tokens.empty()) {
    throw InputError("sentence '" + sentence.id + "' is empty");
  }
  const bool with_pos = sentence.tokens.front().pos.has_value();
  for (const Token& token : sentence.tokens) {
    if (token.text.empty() || HasWhitespace(token.text)) {
      throw InputError("sentence '" + sentence.id +
                       "': token text empty or contains whitespace");
    }
    if (token.pos.has_value() != with_pos) {
      throw InputError("sentence '" + sentence.id +
                       "': POS present on some tokens only");
    }
  }
  if (auto bad = FirstBioViolation(sentence.Tags())) {
    throw TagError(0, "sentence '" + sentence.id + "': invalid tag '" +
                          sentence.tokens[*bad].tag + "' at token " +
                          std::to_string(*bad));
  }
}

void ValidateCorpus(const Corpus& corpus) {
  std::unordered_set<std::string> ids;
  std::optional<bool> with_pos;
  for (const Sentence& sentence : corpus.sentences) {
    ValidateSentence(sentence);
    if (!ids.insert(sentence.id).second) {
      throw InputError("duplicate sentence id '" + sentence.id + "'");
    }
    if (with_pos && *with_pos != sentence.has_pos()) {
      throw InputError("POS column present in some sentences only");
    }
    with_pos = sentence.has_pos();
  }
}

std::string DefaultSentenceId(std::size_t index) {
  return "s" + std::to_string(index);
}

namespace {

constexpr std::string_view kIdPrefix = "# id = ";

class ConllReader {
 public:
  ConllReader(std::string_view text, ParseMode mode)
      : lines_(SplitLines(text)), mode_(mode) {
    for (std::string_view line : lines_) {
      if (line.find('\t') != std::string_view::npos) {
        tab_separated_ = true;
        break;
      }
    }
  }

  Corpus Read(std::string split_name) {
    corpus_.split_name = std::move(split_name);
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      ReadLine(lines_[i], i + 1);
    }
    FinishSentence(lines_.size());
    if (pending_id_) {
      throw ParseError(pending_id_line_, "sentence id without tokens");
    }
    return std::move(corpus_);
  }

 private:
  void ReadLine(std::string_view line, std::size_t lineno) {
    if (Trim(line).empty()) {
      FinishSentence(lineno);
      return;
    }
    if (current_.tokens.empty() && line.starts_with(kIdPrefix)) {
      if (pending_id_) throw ParseError(lineno, "two id lines in a row");
      std::string id(Trim(line.substr(kIdPrefix.size())));
      if (id.empty()) throw ParseError(lineno, "empty sentence id");
      pending_id_ = std::move(id);
      pending_id_line_ = lineno;
      return;
    }
    std::vector<std::string> fields = Fields(line, lineno);
    if (fields.front() == "-DOCSTART-") {
      FinishSentence(lineno);
      return;
    }
    if (columns_ == 0) {
      if (fields.size() < 2) {
        throw ParseError(lineno, "expected at least a token and a tag column");
      }
      columns_ = fields.size();
    } else if (fields.size() != columns_) {
      throw ParseError(lineno, "expected " + std::to_string(columns_) +
                                   " columns, found " +
                                   std::to_string(fields.size()));
    }
    Token token;
    token.text = fields.front();
    if (columns_ >= 3) token.pos = CoarsePos(fields[1]);
    token.tag = fields.back();
    if (!IsBioLabel(token.tag)) {
      throw TagError(lineno, "invalid BIO label '" + token.tag + "'");
    }
    if (token.tag[0] == 'I') {
      const bool continues = !current_.tokens.empty() &&
                             ContinuesSpan(current_.tokens.back().tag, token.tag);
      if (!continues) {
        if (mode_ == ParseMode::kStrict) {
          throw TagError(lineno, "'" + token.tag + "' does not continue a span");
        }
        token.tag[0] = 'B';
      }
    }
    if (current_.tokens.empty()) current_line_ = lineno;
    current_.tokens.push_back(std::move(token));
  }

  std::vector<std::string> Fields(std::string_view line, std::size_t lineno) {
    std::vector<std::string> fields;
    if (tab_separated_) {
      std::size_t start = 0;
      for (;;) {
        std::size_t tab = line.find('\t', start);
        std::string_view field = Trim(line.substr(
            start, tab == std::string_view::npos ? std::string_view::npos
                                                 : tab - start));
        if (field.empty() || HasWhitespace(field)) {
          throw ParseError(lineno, "empty field or whitespace inside a field");
        }
        fields.emplace_back(field);
        if (tab == std::string_view::npos) break;
        start = tab + 1;
      }
    } else {
      fields = SplitWhitespace(line);
    }
    return fields;
  }

  void FinishSentence(std::size_t lineno) {
    if (current_.tokens.empty()) return;
    if (pending_id_) {
      current_.id = std::move(*pending_id_);
      pending_id_.reset();
    } else {
      current_.id = DefaultSentenceId(corpus_.sentences.size());
    }
    if (!ids_.insert(current_.id).second) {
      throw ParseError(current_line_, "duplicate sentence id '" + current_.id + "'");
    }
    (void)lineno;
    corpus_.sentences.push_back(std::move(current_));
    current_ = Sentence{};
  }

  std::vector<std::string_view> lines_;
  ParseMode mode_;
  bool tab_separated_ = false;
  std::size_t columns_ = 0;
  Corpus corpus_;
  Sentence current_;
  std::size_t current_line_ = 0;
  std::optional<std::string> pending_id_;
  std::size_t pending_id_line_ = 0;
  std::unordered_set<std::string> ids_;
};

void AppendSentence(const Sentence& sentence, bool with_id, std::string& out) {
  if (with_id) {
    out += kIdPrefix;
    out += sentence.id;
    out += '\n';
  }
  for (const Token& token : sentence.tokens) {
    out += token.text;
    out += ' ';
    if (token.pos) {
      out += PosName(*token.pos);
      out += ' ';
    }
    out += token.tag;
    out += '\n';
  }
}

}  // namespace

Corpus ParseConll(std::string_view text, ParseMode mode,
                  std::string split_name) {
  return ConllReader(text, mode).Read(std::move(split_name));
}

Corpus ReadConllFile(const std::string& path, ParseMode mode) {
  return ParseConll(ReadFile(path), mode, path);
}

std::string WriteConll(const Corpus& corpus) {
  std::string out;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const Sentence& sentence = corpus.sentences[i];
    if (i > 0) out += '\n';
    AppendSentence(sentence, sentence.id != DefaultSentenceId(i), out);
  }
  return out;
}

std::string SerializeSentence(const Sentence& sentence) {
  std::string out;
  AppendSentence(sentence, true, out);
  return out;
}

std::string SentenceDigest(const Sentence& sentence) {
  return Sha256Hex(Join(sentence.Texts(), " "));
}

namespace {

std::string NormalizeWord(const std::string& word,
                          const EntityWordOptions& options) {
  return options.case_sensitive ? word : AsciiLower(word);
}

VocabCount CountSeen(const std::set<std::string>& eval_words,
                     const std::set<std::string>& train_words) {
  VocabCount count;
  count.unique_words = eval_words.size();
  for (const std::string& w : eval_words) {
    if (train_words.count(w)) ++count.seen_words;
  }
  count.seen_ratio = count.unique_words == 0
                         ? 0.0
                         : static_cast<double>(count.seen_words) /
                               static_cast<double>(count.unique_words);
  return count;
}

}  // namespace

std::map<std::string, std::set<std::string>> EntityWords(
    const Corpus& corpus, const EntityWordOptions& options) {
  std::map<std::string, std::set<std::string>> words;
  for (const Sentence& sentence : corpus.sentences) {
    for (const EntitySpan& span : ExtractSpans(sentence)) {
      auto& bucket = words[span.type];
      for (std::size_t i = span.start; i < span.end; ++i) {
        const std::string& text = sentence.tokens[i].text;
        if (!options.include_punctuation && IsPunctuation(text)) continue;
        bucket.insert(NormalizeWord(text, options));
      }
    }
  }
  return words;
}

std::set<std::string> EntityWordSet(const Corpus& corpus,
                                    const EntityWordOptions& options) {
  std::set<std::string> all;
  for (auto& [type, words] : EntityWords(corpus, options)) {
    all.insert(words.begin(), words.end());
  }
  return all;
}

EntityVocabStats ComputeEntityVocabStats(const Corpus& train,
                                         const Corpus& eval,
                                         const EntityWordOptions& options) {
  const auto train_words = EntityWords(train, options);
  const auto eval_words = EntityWords(eval, options);
  EntityVocabStats stats;
  static const std::set<std::string> kEmpty;
  std::set<std::string> eval_all, train_all;
  for (const auto& [type, words] : eval_words) {
    auto it = train_words.find(type);
    stats.per_type[type] =
        CountSeen(words, it == train_words.end() ? kEmpty : it->second);
    eval_all.insert(words.begin(), words.end());
  }
  for (const auto& [type, words] : train_words) {
    train_all.insert(words.begin(), words.end());
  }
  stats.overall = CountSeen(eval_all, train_all);
  return stats;
}

}  // namespace nerstress
