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

#ifndef NERSTRESS_EVAL_H_
#define NERSTRESS_EVAL_H_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"
#include "nerstress/corpus.h"

namespace nerstress {

// Predicted spans per sentence id.
struct PredictionSet {
  std::map<std::string, std::vector<EntitySpan>> spans;
};

// Column file with predicted tags in the last column. Sentences must line up
// with `gold` (same order, ids and token counts). Parsed leniently.
PredictionSet ReadPredictionsConll(std::string_view text, const Corpus& gold);

// Line-delimited JSON: {"sentence_id", "spans": [{"start","end","type"}]}.
// Surfaces are filled from `gold` when the sentence is known.
PredictionSet ReadPredictionsJsonl(std::string_view text, const Corpus& gold);

// Picks the format from content: a first non-blank character '{' means JSONL.
PredictionSet ReadPredictions(std::string_view text, const Corpus& gold);

std::string WritePredictionsJsonl(const PredictionSet& predictions);

// Checks in-bounds, non-overlapping spans against `gold`; throws InputError.
void ValidatePredictions(const PredictionSet& predictions, const Corpus& gold);

struct PrfScores {
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t matched = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PrfScores FromCounts(std::size_t matched, std::size_t predicted,
                              std::size_t gold);
};

// F1 = 2PR/(P+R), 0 when P+R == 0.
double F1FromPr(double precision, double recall);

struct EvalReport {
  PrfScores micro;
  std::map<std::string, PrfScores> per_type;  // union of gold and predicted types

  nlohmann::json ToJson() const;
  std::string ToText() const;
};

// Exact-match span scoring. Throws InputError for prediction ids absent from
// gold.
EvalReport SpanPrf(const Corpus& gold, const PredictionSet& predictions);

// (base - attacked) / base, nullopt when base <= 0.
std::optional<double> RelativeDrop(double base, double attacked);
// Relative drop as a rounded whole percentage, "n/a" when undefined.
std::string FormatRelativeDrop(double base, double attacked);

std::size_t OverlapLength(const EntitySpan& a, const EntitySpan& b);

// Size of the symmetric difference of the two token-index sets.
std::size_t TokenDifference(const EntitySpan& a, const EntitySpan& b);

// Index of the prediction overlapping `gold` most; ties go to the smaller
// start. Predictions flagged in `taken` are skipped. nullopt without overlap.
std::optional<std::size_t> PairOverlap(const EntitySpan& gold,
                                       const std::vector<EntitySpan>& predictions,
                                       const std::vector<bool>* taken = nullptr);

struct PairedEntity {
  std::string sentence_id;
  EntitySpan gold;
  std::optional<EntitySpan> prediction;
  std::size_t d = 0;  // meaningful only with a prediction
};

// Greedy pairing in gold order; a paired prediction is not reused.
std::vector<PairedEntity> PairEntities(const Corpus& gold,
                                       const PredictionSet& predictions);

// Buckets d = 0, 1, 2, >=3.
inline constexpr std::size_t kDistanceBuckets = 4;

struct ErrorBreakdown {
  std::size_t total = 0;
  std::array<std::size_t, kDistanceBuckets> correct_type_counts{};
  std::array<std::size_t, kDistanceBuckets> wrong_type_counts{};
  std::size_t no_prediction_count = 0;

  double correct_type(std::size_t bucket) const;
  double wrong_type(std::size_t bucket) const;
  double no_prediction() const;
  // Sum of all nine fractions: 1 for any non-empty gold set.
  double FractionSum() const;

  nlohmann::json ToJson() const;
  std::string ToText() const;
};

ErrorBreakdown ComputeErrorBreakdown(const Corpus& gold,
                                     const PredictionSet& predictions);

inline constexpr std::string_view kNoneLabel = "None";

// Rows are gold labels, columns predicted labels; both end with "None".
// Each gold entity lands once in its row (column: paired prediction's type or
// None); unpaired predictions land in the None row.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<long long>> counts;

  long long RowSum(std::size_t row) const;
  long long At(const std::string& gold, const std::string& pred) const;
  nlohmann::json ToJson() const;
  std::string ToText() const;
};

// Sorted union of gold and predicted types.
std::vector<std::string> EntityTypes(const Corpus& gold,
                                     const PredictionSet& predictions);

// `types` fixes the label set; empty means EntityTypes(gold, predictions).
ConfusionMatrix Confusion(const Corpus& gold, const PredictionSet& predictions,
                          const std::vector<std::string>& types = {});

// attacked - original, element-wise. Throws InputError on label mismatch.
ConfusionMatrix ConfusionDifference(const ConfusionMatrix& attacked,
                                    const ConfusionMatrix& original);

// A gold entity whose pairing is not an exact same-type match.
using ErrorKey = std::tuple<std::string, std::size_t, std::size_t, std::string>;

std::set<ErrorKey> ErrorSet(const Corpus& gold, const PredictionSet& predictions);

// |A & B| / |A | B|, 1 when both are empty.
template <typename T>
double Jaccard(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const T& x : a) common += b.count(x);
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

inline double ErrorSetJaccard(const std::set<ErrorKey>& a,
                              const std::set<ErrorKey>& b) {
  return Jaccard(a, b);
}

struct CurvePoint {
  double coverage = 0.0;
  double f1 = 0.0;
};

// One (gold, predictions) pair per coverage level. Throws InputError when the
// two grids differ.
std::vector<CurvePoint> AttackCurve(
    const std::vector<std::pair<double, Corpus>>& gold,
    const std::vector<std::pair<double, PredictionSet>>& predictions);

std::string CurveCsv(const std::vector<CurvePoint>& curve);

}  // namespace nerstress

#endif  // NERSTRESS_EVAL_H_
