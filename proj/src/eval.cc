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

#include "nerstress/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nerstress/errors.h"
#include "nerstress/text_util.h"

namespace nerstress {

using nlohmann::json;

namespace {

std::map<std::string, const Sentence*> IndexById(const Corpus& corpus) {
  std::map<std::string, const Sentence*> index;
  for (const Sentence& s : corpus.sentences) index[s.id] = &s;
  return index;
}

std::string Surface(const Sentence& sentence, std::size_t start, std::size_t end) {
  std::string out;
  for (std::size_t i = start; i < end; ++i) {
    if (i > start) out += ' ';
    out += sentence.tokens[i].text;
  }
  return out;
}

std::string Pct(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
  return buf;
}

}  // namespace

// ---- Prediction files -------------------------------------------------------

PredictionSet ReadPredictionsConll(std::string_view text, const Corpus& gold) {
  const Corpus pred = ParseConll(text, ParseMode::kLenient);
  if (pred.size() != gold.size()) {
    throw InputError("prediction file has " + std::to_string(pred.size()) +
                     " sentences, gold has " + std::to_string(gold.size()));
  }
  PredictionSet out;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const Sentence& p = pred.sentences[i];
    const Sentence& g = gold.sentences[i];
    if (p.id != DefaultSentenceId(i) && p.id != g.id) {
      throw InputError("prediction sentence " + std::to_string(i) + " has id '" +
                       p.id + "', gold has '" + g.id + "'");
    }
    if (p.size() != g.size()) {
      throw InputError("sentence '" + g.id + "': " + std::to_string(p.size()) +
                       " predicted tokens vs " + std::to_string(g.size()) + " gold");
    }
    out.spans[g.id] = ExtractSpans(p);
  }
  return out;
}

PredictionSet ReadPredictionsJsonl(std::string_view text, const Corpus& gold) {
  const auto index = IndexById(gold);
  PredictionSet out;
  std::size_t lineno = 0;
  for (std::string_view line : SplitLines(text)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string id = j.at("sentence_id").get<std::string>();
      auto& spans = out.spans[id];
      if (!spans.empty()) throw InputError("duplicate sentence_id '" + id + "'");
      auto sentence = index.find(id);
      for (const json& s : j.at("spans")) {
        EntitySpan span;
        span.start = s.at("start").get<std::size_t>();
        span.end = s.at("end").get<std::size_t>();
        span.type = s.at("type").get<std::string>();
        if (sentence != index.end() && span.start < span.end &&
            span.end <= sentence->second->size()) {
          span.surface = Surface(*sentence->second, span.start, span.end);
        }
        spans.push_back(std::move(span));
      }
      std::sort(spans.begin(), spans.end());
    } catch (const json::exception& e) {
      throw ParseError(lineno, std::string("bad prediction record: ") + e.what());
    }
  }
  return out;
}

PredictionSet ReadPredictions(std::string_view text, const Corpus& gold) {
  const std::string_view trimmed = Trim(text);
  if (!trimmed.empty() && trimmed.front() == '{') {
    return ReadPredictionsJsonl(text, gold);
  }
  return ReadPredictionsConll(text, gold);
}

std::string WritePredictionsJsonl(const PredictionSet& predictions) {
  std::string out;
  for (const auto& [id, spans] : predictions.spans) {
    json list = json::array();
    for (const EntitySpan& s : spans) {
      list.push_back({{"start", s.start}, {"end", s.end}, {"type", s.type}});
    }
    out += json({{"sentence_id", id}, {"spans", list}}).dump();
    out += '\n';
  }
  return out;
}

void ValidatePredictions(const PredictionSet& predictions, const Corpus& gold) {
  const auto index = IndexById(gold);
  for (const auto& [id, spans] : predictions.spans) {
    auto it = index.find(id);
    if (it == index.end()) throw InputError("unknown sentence_id '" + id + "'");
    std::size_t last_end = 0;
    for (const EntitySpan& s : spans) {
      if (s.start >= s.end || s.end > it->second->size()) {
        throw InputError("sentence '" + id + "': span out of bounds");
      }
      if (s.start < last_end) {
        throw InputError("sentence '" + id + "': overlapping predicted spans");
      }
      last_end = s.end;
    }
  }
}

// ---- Span P/R/F1 ---------------------------------------------------------------

double F1FromPr(double precision, double recall) {
  const double sum = precision + recall;
  return sum <= 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

PrfScores PrfScores::FromCounts(std::size_t matched, std::size_t predicted,
                                std::size_t gold) {
  PrfScores s;
  s.matched = matched;
  s.predicted = predicted;
  s.gold = gold;
  s.precision = predicted == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(predicted);
  s.recall = gold == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(gold);
  s.f1 = F1FromPr(s.precision, s.recall);
  return s;
}

EvalReport SpanPrf(const Corpus& gold, const PredictionSet& predictions) {
  const auto index = IndexById(gold);
  for (const auto& [id, spans] : predictions.spans) {
    if (!index.count(id)) throw InputError("unknown sentence_id '" + id + "'");
  }
  struct Counts {
    std::size_t matched = 0, predicted = 0, gold = 0;
  };
  std::map<std::string, Counts> per_type;
  Counts total;
  for (const Sentence& sentence : gold.sentences) {
    const auto gold_spans = ExtractSpans(sentence);
    std::set<std::tuple<std::size_t, std::size_t, std::string>> gold_set;
    for (const EntitySpan& s : gold_spans) {
      gold_set.emplace(s.start, s.end, s.type);
      ++per_type[s.type].gold;
      ++total.gold;
    }
    auto it = predictions.spans.find(sentence.id);
    if (it == predictions.spans.end()) continue;
    for (const EntitySpan& s : it->second) {
      ++per_type[s.type].predicted;
      ++total.predicted;
      if (gold_set.count({s.start, s.end, s.type})) {
        ++per_type[s.type].matched;
        ++total.matched;
      }
    }
  }
  EvalReport report;
  report.micro = PrfScores::FromCounts(total.matched, total.predicted, total.gold);
  for (const auto& [type, c] : per_type) {
    report.per_type[type] = PrfScores::FromCounts(c.matched, c.predicted, c.gold);
  }
  return report;
}

namespace {

json PrfJson(const PrfScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
          {"gold", s.gold},           {"predicted", s.predicted},
          {"matched", s.matched}};
}

}  // namespace

json EvalReport::ToJson() const {
  json types = json::object();
  for (const auto& [type, s] : per_type) types[type] = PrfJson(s);
  return {{"micro", PrfJson(micro)}, {"per_type", types}};
}

std::string EvalReport::ToText() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %9s %9s %9s %8s %8s\n", "type",
                "P(%)", "R(%)", "F1(%)", "gold", "pred");
  out << line;
  auto row = [&](const std::string& name, const PrfScores& s) {
    std::snprintf(line, sizeof(line), "%-14s %9.2f %9.2f %9.2f %8zu %8zu\n",
                  name.c_str(), 100 * s.precision, 100 * s.recall, 100 * s.f1,
                  s.gold, s.predicted);
    out << line;
  };
  for (const auto& [type, s] : per_type) row(type, s);
  row("micro", micro);
  return out.str();
}

std::optional<double> RelativeDrop(double base, double attacked) {
  if (!(base > 0.0)) return std::nullopt;
  return (base - attacked) / base;
}

std::string FormatRelativeDrop(double base, double attacked) {
  const auto drop = RelativeDrop(base, attacked);
  if (!drop) return "n/a";
  return std::to_string(std::llround(100.0 * *drop)) + "%";
}

// ---- Pairing and error buckets ---------------------------------------------------

std::size_t OverlapLength(const EntitySpan& a, const EntitySpan& b) {
  const std::size_t lo = std::max(a.start, b.start);
  const std::size_t hi = std::min(a.end, b.end);
  return hi > lo ? hi - lo : 0;
}

std::size_t TokenDifference(const EntitySpan& a, const EntitySpan& b) {
  return a.length() + b.length() - 2 * OverlapLength(a, b);
}

std::optional<std::size_t> PairOverlap(const EntitySpan& gold,
                                       const std::vector<EntitySpan>& predictions,
                                       const std::vector<bool>* taken) {
  std::optional<std::size_t> best;
  std::size_t best_overlap = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (taken && (*taken)[i]) continue;
    const std::size_t overlap = OverlapLength(gold, predictions[i]);
    if (overlap == 0) continue;
    if (!best || overlap > best_overlap ||
        (overlap == best_overlap && predictions[i].start < predictions[*best].start)) {
      best = i;
      best_overlap = overlap;
    }
  }
  return best;
}

std::vector<PairedEntity> PairEntities(const Corpus& gold,
                                       const PredictionSet& predictions) {
  const auto index = IndexById(gold);
  for (const auto& [id, spans] : predictions.spans) {
    if (!index.count(id)) throw InputError("unknown sentence_id '" + id + "'");
  }
  static const std::vector<EntitySpan> kNone;
  std::vector<PairedEntity> pairs;
  for (const Sentence& sentence : gold.sentences) {
    auto it = predictions.spans.find(sentence.id);
    const auto& preds = it == predictions.spans.end() ? kNone : it->second;
    std::vector<bool> taken(preds.size(), false);
    for (const EntitySpan& g : ExtractSpans(sentence)) {
      PairedEntity pair{sentence.id, g, std::nullopt, 0};
      if (auto match = PairOverlap(g, preds, &taken)) {
        taken[*match] = true;
        pair.prediction = preds[*match];
        pair.d = TokenDifference(g, preds[*match]);
      }
      pairs.push_back(std::move(pair));
    }
  }
  return pairs;
}

double ErrorBreakdown::correct_type(std::size_t bucket) const {
  return total == 0 ? 0.0 : static_cast<double>(correct_type_counts.at(bucket)) / static_cast<double>(total);
}

double ErrorBreakdown::wrong_type(std::size_t bucket) const {
  return total == 0 ? 0.0 : static_cast<double>(wrong_type_counts.at(bucket)) / static_cast<double>(total);
}

double ErrorBreakdown::no_prediction() const {
  return total == 0 ? 0.0 : static_cast<double>(no_prediction_count) / static_cast<double>(total);
}

double ErrorBreakdown::FractionSum() const {
  double sum = no_prediction();
  for (std::size_t b = 0; b < kDistanceBuckets; ++b) sum += correct_type(b) + wrong_type(b);
  return sum;
}

json ErrorBreakdown::ToJson() const {
  const char* names[kDistanceBuckets] = {"d=0", "d=1", "d=2", "d>=3"};
  json correct = json::object(), wrong = json::object();
  for (std::size_t b = 0; b < kDistanceBuckets; ++b) {
    correct[names[b]] = correct_type(b);
    wrong[names[b]] = wrong_type(b);
  }
  return {{"total", total},
          {"correct_type", correct},
          {"wrong_type", wrong},
          {"no_prediction", no_prediction()}};
}

std::string ErrorBreakdown::ToText() const {
  std::ostringstream out;
  const char* names[kDistanceBuckets] = {"d=0 (SameSpan)", "d=1", "d=2", "d>=3"};
  out << "bucket               CorrectType(%)  WrongType(%)\n";
  char line[160];
  for (std::size_t b = 0; b < kDistanceBuckets; ++b) {
    std::snprintf(line, sizeof(line), "%-20s %14s %13s\n", names[b],
                  Pct(correct_type(b)).c_str(), Pct(wrong_type(b)).c_str());
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-20s %14s\n", "No Prediction",
                Pct(no_prediction()).c_str());
  out << line;
  return out.str();
}

ErrorBreakdown ComputeErrorBreakdown(const Corpus& gold,
                                     const PredictionSet& predictions) {
  ErrorBreakdown eb;
  for (const PairedEntity& p : PairEntities(gold, predictions)) {
    ++eb.total;
    if (!p.prediction) {
      ++eb.no_prediction_count;
      continue;
    }
    const std::size_t bucket = std::min(p.d, kDistanceBuckets - 1);
    if (p.prediction->type == p.gold.type) {
      ++eb.correct_type_counts[bucket];
    } else {
      ++eb.wrong_type_counts[bucket];
    }
  }
  return eb;
}

// ---- Confusion matrices --------------------------------------------------------

long long ConfusionMatrix::RowSum(std::size_t row) const {
  long long sum = 0;
  for (long long v : counts.at(row)) sum += v;
  return sum;
}

long long ConfusionMatrix::At(const std::string& gold, const std::string& pred) const {
  auto find = [&](const std::string& label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw InputError("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels.begin());
  };
  return counts[find(gold)][find(pred)];
}

json ConfusionMatrix::ToJson() const {
  return {{"labels", labels}, {"rows", "gold"}, {"counts", counts}};
}

std::string ConfusionMatrix::ToText() const {
  std::size_t width = 6;
  for (const auto& l : labels) width = std::max(width, l.size() + 1);
  for (const auto& row : counts)
    for (long long v : row) width = std::max(width, std::to_string(v).size() + 1);
  std::ostringstream out;
  auto cell = [&](const std::string& s) {
    out << std::string(width - std::min(width, s.size()), ' ') << s;
  };
  cell("gold\\pred");
  for (const auto& l : labels) cell(l);
  out << '\n';
  for (std::size_t r = 0; r < labels.size(); ++r) {
    cell(labels[r]);
    for (long long v : counts[r]) cell(std::to_string(v));
    out << '\n';
  }
  return out.str();
}

std::vector<std::string> EntityTypes(const Corpus& gold,
                                     const PredictionSet& predictions) {
  std::set<std::string> types;
  for (const Sentence& s : gold.sentences)
    for (const EntitySpan& span : ExtractSpans(s)) types.insert(span.type);
  for (const auto& [id, spans] : predictions.spans)
    for (const EntitySpan& span : spans) types.insert(span.type);
  return {types.begin(), types.end()};
}

ConfusionMatrix Confusion(const Corpus& gold, const PredictionSet& predictions,
                          const std::vector<std::string>& types) {
  ConfusionMatrix cm;
  cm.labels = types.empty() ? EntityTypes(gold, predictions) : types;
  cm.labels.emplace_back(kNoneLabel);
  const std::size_t n = cm.labels.size();
  cm.counts.assign(n, std::vector<long long>(n, 0));
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < n; ++i) column[cm.labels[i]] = i;
  auto index_of = [&](const std::string& type) {
    auto it = column.find(type);
    if (it == column.end()) throw InputError("type '" + type + "' not in label set");
    return it->second;
  };
  const std::size_t none = n - 1;

  std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> paired;
  for (const PairedEntity& p : PairEntities(gold, predictions)) {
    const std::size_t row = index_of(p.gold.type);
    if (p.prediction) {
      ++cm.counts[row][index_of(p.prediction->type)];
      paired[p.sentence_id].insert({p.prediction->start, p.prediction->end});
    } else {
      ++cm.counts[row][none];
    }
  }
  for (const auto& [id, spans] : predictions.spans) {
    const auto& used = paired[id];
    for (const EntitySpan& s : spans) {
      if (!used.count({s.start, s.end})) ++cm.counts[none][index_of(s.type)];
    }
  }
  return cm;
}

ConfusionMatrix ConfusionDifference(const ConfusionMatrix& attacked,
                                    const ConfusionMatrix& original) {
  if (attacked.labels != original.labels) {
    throw InputError("confusion matrices have different label sets");
  }
  ConfusionMatrix diff = attacked;
  for (std::size_t r = 0; r < diff.counts.size(); ++r) {
    for (std::size_t c = 0; c < diff.counts[r].size(); ++c) {
      diff.counts[r][c] -= original.counts[r][c];
    }
  }
  return diff;
}

std::set<ErrorKey> ErrorSet(const Corpus& gold, const PredictionSet& predictions) {
  std::set<ErrorKey> errors;
  for (const PairedEntity& p : PairEntities(gold, predictions)) {
    const bool exact = p.prediction && p.prediction->type == p.gold.type && p.d == 0;
    if (!exact) errors.emplace(p.sentence_id, p.gold.start, p.gold.end, p.gold.type);
  }
  return errors;
}

// ---- Attack curve ----------------------------------------------------------------

std::vector<CurvePoint> AttackCurve(
    const std::vector<std::pair<double, Corpus>>& gold,
    const std::vector<std::pair<double, PredictionSet>>& predictions) {
  std::vector<std::size_t> gold_order(gold.size()), pred_order(predictions.size());
  for (std::size_t i = 0; i < gold.size(); ++i) gold_order[i] = i;
  for (std::size_t i = 0; i < predictions.size(); ++i) pred_order[i] = i;
  std::sort(gold_order.begin(), gold_order.end(),
            [&](auto a, auto b) { return gold[a].first < gold[b].first; });
  std::sort(pred_order.begin(), pred_order.end(),
            [&](auto a, auto b) { return predictions[a].first < predictions[b].first; });
  if (gold.size() != predictions.size()) {
    throw InputError("coverage grids differ in size");
  }
  std::vector<CurvePoint> curve;
  for (std::size_t i = 0; i < gold_order.size(); ++i) {
    const auto& [coverage, corpus] = gold[gold_order[i]];
    const auto& [pred_coverage, preds] = predictions[pred_order[i]];
    if (std::fabs(coverage - pred_coverage) > 1e-9) {
      throw InputError("coverage grids differ at point " + std::to_string(i));
    }
    if (i > 0 && std::fabs(coverage - curve.back().coverage) <= 1e-9) {
      throw InputError("duplicate coverage level");
    }
    curve.push_back({coverage, SpanPrf(corpus, preds).micro.f1});
  }
  return curve;
}

std::string CurveCsv(const std::vector<CurvePoint>& curve) {
  std::string out = "coverage,f1\n";
  char line[64];
  for (const CurvePoint& p : curve) {
    std::snprintf(line, sizeof(line), "%.4f,%.6f\n", p.coverage, p.f1);
    out += line;
  }
  return out;
}

}  // namespace nerstress
