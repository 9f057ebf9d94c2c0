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

#include "commands.h"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nerstress/augment.h"
#include "nerstress/context_attack.h"
#include "nerstress/corpus.h"
#include "nerstress/entity_attack.h"
#include "nerstress/errors.h"
#include "nerstress/eval.h"
#include "nerstress/kb_client.h"
#include "nerstress/manifest.h"
#include "nerstress/mlm_provider.h"
#include "nerstress/pos_lexicon.h"
#include "nerstress/text_util.h"
#include "nerstress/wikidict.h"

namespace nerstress::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kKbEndpointEnv = "NERSTRESS_KB_ENDPOINT";
constexpr const char* kMlmUrlEnv = "NERSTRESS_MLM_URL";
constexpr const char* kBuiltinStub = "builtin";

// Thrown for semantic usage errors found after parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  bool offline = false;
  std::string stub_provider;
  int workers = 1;
  bool strict = false;
};

struct BuildDictOptions {
  std::string corpus;
  std::string train;
  std::string rules;
  std::string names;
  std::string victim_errors;
  std::string kb_cache = ".nerstress-kb-cache";
  std::string output;
  std::string report;
  std::string log_dir;
  std::size_t person_names = 1000;
  std::string middle_names = "coin";
  std::string timestamp;
};

struct AttackOptions {
  std::string mode = "full";
  std::string input = "-";
  std::string output = "-";
  std::string log_dir;
  std::string dict;
  double coverage = 1.0;
  bool allow_identity = false;
  std::size_t rank_lo = 100;
  std::size_t rank_hi = 200;
  std::size_t variants = 8;
  std::string provider_url;
  std::string predictions;
  std::string train;
  std::string pos_source = "lexicon";
};

struct AugmentOptions {
  std::string method;
  std::string input = "-";
  std::string output = "-";
  std::string log_dir;
  std::string stopwords;
};

struct EvaluateOptions {
  std::string gold;
  std::string pred;
  std::string gold2;
  std::string pred2;
  std::string report;
  std::string format = "text";
  std::vector<std::string> curve;
  std::string curve_csv;
};

struct StatsOptions {
  std::string train;
  std::string eval;
  std::string records;
  std::string json_out;
  bool case_insensitive = false;
  bool exclude_punctuation = false;
};

// ---- I/O helpers -------------------------------------------------------------

std::string ReadInput(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  if (!fs::is_regular_file(path)) throw InputError("no such file: " + path);
  return ReadFile(path);
}

Corpus LoadCorpus(const std::string& path, std::istream& in, bool strict) {
  Corpus corpus = ParseConll(ReadInput(path, in),
                             strict ? ParseMode::kStrict : ParseMode::kLenient,
                             path);
  ValidateCorpus(corpus);
  return corpus;
}

json LoadJson(const std::string& path) {
  if (!fs::is_regular_file(path)) throw InputError("no such file: " + path);
  try {
    return json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void WriteOutput(const std::string& path, const std::string& content,
                 std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
    return;
  }
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  WriteFile(path, content);
}

std::string ResolveLogDir(const std::string& log_dir, const std::string& output) {
  std::string dir = log_dir;
  if (dir.empty()) {
    dir = output == "-" ? "." : fs::path(output).parent_path().string();
    if (dir.empty()) dir = ".";
  }
  fs::create_directories(dir);
  return dir;
}

std::string JoinPath(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string Jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const json& row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::uint64_t ResolveSeed(GlobalOptions& global) {
  if (!global.seed) {
    std::random_device device;
    global.seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  }
  return *global.seed;
}

std::string DefaultTimestamp() {
  std::time_t t;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---- Resolved config rendering -------------------------------------------------
//
// Written as a CLI11 config file (TOML subset) so a run can be repeated with
// --config.

class ConfigWriter {
 public:
  void Section(const std::string& name) { text_ += "\n[" + name + "]\n"; section_ = name; }

  void Str(const std::string& key, const std::string& value) {
    if (value.empty()) return;
    std::string quoted = "\"";
    for (char c : value) {
      if (c == '"' || c == '\\') quoted += '\\';
      quoted += c;
    }
    quoted += '"';
    text_ += key + " = " + quoted + "\n";
    Put(key, value);
  }
  template <typename T>
  void Num(const std::string& key, T value) {
    std::ostringstream s;
    s.precision(17);
    s << value;
    text_ += key + " = " + s.str() + "\n";
    Put(key, value);
  }
  void Bool(const std::string& key, bool value) {
    text_ += key + " = " + (value ? "true" : "false") + "\n";
    Put(key, value);
  }
  void StrList(const std::string& key, const std::vector<std::string>& values) {
    if (values.empty()) return;
    std::string line = key + " = [";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line += ", ";
      line += "\"" + values[i] + "\"";
    }
    text_ += line + "]\n";
    Put(key, values);
  }

  const std::string& text() const { return text_; }
  const json& resolved() const { return json_; }

 private:
  template <typename T>
  void Put(const std::string& key, const T& value) {
    if (section_.empty()) {
      json_[key] = value;
    } else {
      json_[section_][key] = value;
    }
  }

  std::string text_;
  std::string section_;
  json json_ = json::object();
};

void WriteGlobals(ConfigWriter& w, const GlobalOptions& g) {
  if (g.seed) w.Num("seed", *g.seed);
  w.Bool("offline", g.offline);
  w.Str("stub-provider", g.stub_provider);
  w.Num("workers", g.workers);
  w.Bool("strict", g.strict);
}

void FinishRun(Manifest& manifest, const ConfigWriter& config,
               const std::string& log_dir) {
  manifest.config = config.resolved();
  manifest.config_file = config.text();
  const std::string config_path = JoinPath(log_dir, "config.toml");
  WriteFile(config_path, config.text());
  manifest.outputs["config"] = config_path;
  manifest.Write(JoinPath(log_dir, "manifest.json"));
}

// ---- build-dict ------------------------------------------------------------------

int CmdBuildDict(GlobalOptions& g, const BuildDictOptions& o, std::istream& in,
                 std::ostream& out, std::ostream& err) {
  const Corpus corpus = LoadCorpus(o.corpus, in, g.strict);

  KbClientOptions kb;
  if (const char* endpoint = std::getenv(kKbEndpointEnv)) kb.SetEndpointBase(endpoint);
  kb.cache_dir = o.kb_cache;
  kb.offline = g.offline;
  KbClient client(kb);

  CurationRules rules;
  if (!o.rules.empty()) rules = CurationRules::FromJson(LoadJson(o.rules));
  NamePartsTable names;
  if (!o.names.empty()) names = NamePartsTable::FromJson(LoadJson(o.names));

  DictionaryBuildOptions options;
  options.seed = ResolveSeed(g);
  options.workers = g.workers;
  options.person_name_count = o.person_names;
  options.source_name = o.corpus;
  options.timestamp = o.timestamp.empty() ? DefaultTimestamp() : o.timestamp;
  if (o.middle_names == "always") {
    options.middle_names = MiddleNames::kAlways;
  } else if (o.middle_names == "never") {
    options.middle_names = MiddleNames::kNever;
  } else if (o.middle_names != "coin") {
    throw UsageError("--middle-names must be coin, always or never");
  }
  if (!o.train.empty()) options.train_vocab = EntityWordSet(LoadCorpus(o.train, in, g.strict));
  if (!o.victim_errors.empty()) {
    const auto list = ParseWordList(ReadInput(o.victim_errors, in));
    options.victim_errors.emplace(list.begin(), list.end());
  }

  DictionaryBuildReport report;
  const AdversarialDictionary dict =
      BuildDictionary(corpus, client, rules, names, options, &report);
  WriteOutput(o.output, dict.ToJson().dump(2) + "\n", out);
  if (!o.report.empty()) WriteOutput(o.report, report.ToJson().dump(2) + "\n", out);
  (o.output == "-" ? err : out) << report.ToText();

  const std::string log_dir = ResolveLogDir(o.log_dir, o.output);
  ConfigWriter config;
  WriteGlobals(config, g);
  config.Section("build-dict");
  config.Str("corpus", o.corpus);
  config.Str("train", o.train);
  config.Str("rules", o.rules);
  config.Str("names", o.names);
  config.Str("victim-errors", o.victim_errors);
  config.Str("kb-cache", o.kb_cache);
  config.Str("output", o.output);
  config.Str("report", o.report);
  config.Num("person-names", o.person_names);
  config.Str("middle-names", o.middle_names);
  config.Str("timestamp", options.timestamp);
  Manifest manifest;
  manifest.subcommand = "build-dict";
  manifest.seeds = {{"seed", options.seed}};
  manifest.inputs = {{"corpus", o.corpus}};
  if (!o.train.empty()) manifest.inputs["train"] = o.train;
  if (!o.rules.empty()) manifest.inputs["rules"] = o.rules;
  if (!o.names.empty()) manifest.inputs["names"] = o.names;
  manifest.outputs = {{"dictionary", o.output}};
  if (!o.report.empty()) manifest.outputs["report"] = o.report;
  FinishRun(manifest, config, log_dir);
  return kExitOk;
}

// ---- attack ------------------------------------------------------------------------

std::unique_ptr<MlmProvider> MakeProvider(const GlobalOptions& g,
                                          const AttackOptions& o,
                                          std::ostream& err) {
  if (!g.stub_provider.empty()) {
    if (g.stub_provider == kBuiltinStub) return std::make_unique<StubMlmProvider>();
    if (!fs::is_regular_file(g.stub_provider)) {
      throw InputError("no such stub table: " + g.stub_provider);
    }
    return std::make_unique<StubMlmProvider>(ParseWordList(ReadFile(g.stub_provider)));
  }
  std::string url = o.provider_url;
  if (url.empty()) {
    const char* env = std::getenv(kMlmUrlEnv);
    url = env ? env : "http://127.0.0.1:8000";
  }
  auto provider = std::make_unique<HttpMlmProvider>(url);
  const json health = provider->Health();
  err << "fill-mask provider at " << url << ": " << health.dump() << "\n";
  return provider;
}

int CmdAttack(GlobalOptions& g, const AttackOptions& o, std::istream& in,
              std::ostream& out, std::ostream& err) {
  if (o.mode != "entity" && o.mode != "context" && o.mode != "full") {
    throw UsageError("--mode must be entity, context or full");
  }
  const bool do_entity = o.mode != "context";
  const bool do_context = o.mode != "entity";
  if (do_entity && o.dict.empty()) throw UsageError("--dict is required for mode " + o.mode);
  PosSource pos_source;
  if (o.pos_source == "lexicon") {
    pos_source = PosSource::kBuiltinLexicon;
  } else if (o.pos_source == "input") {
    pos_source = PosSource::kInputColumn;
  } else {
    throw UsageError("--pos-source must be lexicon or input");
  }

  const std::uint64_t seed = ResolveSeed(g);
  Corpus corpus = LoadCorpus(o.input, in, g.strict);
  const std::string log_dir = ResolveLogDir(o.log_dir, o.output);
  Manifest manifest;
  manifest.subcommand = "attack";
  manifest.inputs = {{"corpus", o.input}};
  json seeds = {{"seed", seed}};

  if (do_entity) {
    const AdversarialDictionary dict = AdversarialDictionary::FromJson(LoadJson(o.dict));
    EntityAttackConfig config;
    config.coverage = o.coverage;
    config.seed = seed;
    config.forbid_identity = !o.allow_identity;
    config.workers = g.workers;
    if (!(o.coverage >= 0.0 && o.coverage <= 1.0)) {
      throw UsageError("--coverage must lie in [0, 1]");
    }
    EntityAttackResult result =
        AttackEntities(corpus, dict, LinkMapFromDictionary(corpus, dict), config);
    std::vector<json> rows;
    for (const AttackRecord& r : result.records) rows.push_back(r.ToJson());
    const std::string log_path = JoinPath(log_dir, "entity_attack_log.jsonl");
    WriteFile(log_path, Jsonl(rows));
    const AttackStats stats = ComputeAttackStats(result.records, result.corpus);
    err << "entity attack: " << stats.replaced << "/" << stats.entities
        << " entities replaced, " << stats.sentences_attacked << "/"
        << stats.sentences << " sentences\n";
    manifest.inputs["dictionary"] = o.dict;
    manifest.outputs["entity_log"] = log_path;
    corpus = std::move(result.corpus);
  }

  if (do_context) {
    auto provider = MakeProvider(g, o, err);
    std::unique_ptr<VictimScorer> scorer;
    if (!o.predictions.empty()) {
      PredictionSet table = ReadPredictionsJsonl(ReadInput(o.predictions, in), Corpus{});
      scorer = std::make_unique<PredictionLookupScorer>(std::move(table.spans));
      manifest.inputs["predictions"] = o.predictions;
    } else if (!o.train.empty()) {
      scorer = std::make_unique<UnigramOverlapScorer>(LoadCorpus(o.train, in, g.strict));
      manifest.inputs["train"] = o.train;
    } else {
      scorer = std::make_unique<UnigramOverlapScorer>(std::unordered_set<std::string>{});
    }
    ContextAttackConfig config;
    config.rank_lo = o.rank_lo;
    config.rank_hi = o.rank_hi;
    config.variants = o.variants;
    config.seed = seed;
    config.pos_source = pos_source;
    config.workers = g.workers;
    ContextAttackResult result = AttackContext(corpus, *provider, *scorer, config);
    std::vector<json> rows;
    std::size_t fallbacks = 0;
    for (const ContextLogEntry& e : result.log) {
      rows.push_back(e.ToJson());
      fallbacks += e.fallbacks;
    }
    const std::string log_path = JoinPath(log_dir, "context_attack_log.jsonl");
    WriteFile(log_path, Jsonl(rows));
    err << "context attack (" << scorer->name() << "): "
        << result.sentences_attacked() << "/" << result.corpus.size()
        << " sentences, " << result.words_replaced() << " words, "
        << fallbacks << " fallbacks, " << result.provider_errors
        << " provider errors\n";
    manifest.outputs["context_log"] = log_path;
    corpus = std::move(result.corpus);
  }

  WriteOutput(o.output, WriteConll(corpus), out);
  manifest.outputs["corpus"] = o.output;
  manifest.seeds = seeds;

  ConfigWriter config;
  WriteGlobals(config, g);
  config.Section("attack");
  config.Str("mode", o.mode);
  config.Str("input", o.input);
  config.Str("output", o.output);
  config.Str("dict", o.dict);
  config.Num("coverage", o.coverage);
  config.Bool("allow-identity", o.allow_identity);
  config.Num("rank-lo", o.rank_lo);
  config.Num("rank-hi", o.rank_hi);
  config.Num("variants", o.variants);
  config.Str("provider-url", o.provider_url);
  config.Str("predictions", o.predictions);
  config.Str("train", o.train);
  config.Str("pos-source", o.pos_source);
  FinishRun(manifest, config, log_dir);
  return kExitOk;
}

// ---- augment -----------------------------------------------------------------------

int CmdAugment(GlobalOptions& g, const AugmentOptions& o, std::istream& in,
               std::ostream& out, std::ostream& err) {
  const auto method = ParseAugmentMethod(o.method);
  if (!method) {
    throw UsageError("unknown method '" + o.method +
                     "' (entity_switching, random_masking, mixing_up)");
  }
  const std::uint64_t seed = ResolveSeed(g);
  const Corpus corpus = LoadCorpus(o.input, in, g.strict);
  const StopwordSet stopwords =
      o.stopwords.empty() ? StopwordSet()
                          : StopwordSet(ParseWordList(ReadInput(o.stopwords, in)));
  const AugmentResult result = Augment(corpus, *method, seed, stopwords);
  WriteOutput(o.output, WriteConll(result.corpus), out);

  const std::string log_dir = ResolveLogDir(o.log_dir, o.output);
  const std::string edits_path = JoinPath(log_dir, "augment_edits.jsonl");
  WriteFile(edits_path, Jsonl(result.edits));
  err << AugmentMethodName(*method) << ": " << result.edits.size() << " edits\n";

  ConfigWriter config;
  WriteGlobals(config, g);
  config.Section("augment");
  config.Str("method", o.method);
  config.Str("input", o.input);
  config.Str("output", o.output);
  config.Str("stopwords", o.stopwords);
  Manifest manifest;
  manifest.subcommand = "augment";
  manifest.seeds = {{"seed", seed}};
  manifest.inputs = {{"corpus", o.input}};
  manifest.outputs = {{"corpus", o.output}, {"edits", edits_path}};
  FinishRun(manifest, config, log_dir);
  return kExitOk;
}

// ---- evaluate ----------------------------------------------------------------------

struct RunAnalysis {
  EvalReport prf;
  ErrorBreakdown errors;
  std::set<ErrorKey> error_set;
};

RunAnalysis Analyze(const Corpus& gold, const PredictionSet& pred) {
  ValidatePredictions(pred, gold);
  return {SpanPrf(gold, pred), ComputeErrorBreakdown(gold, pred), ErrorSet(gold, pred)};
}

std::vector<std::string> UnionTypes(std::vector<std::string> a,
                                    const std::vector<std::string>& b) {
  std::set<std::string> all(a.begin(), a.end());
  all.insert(b.begin(), b.end());
  return {all.begin(), all.end()};
}

int CmdEvaluate(GlobalOptions& g, const EvaluateOptions& o, std::istream& in,
                std::ostream& out, std::ostream& /*err*/) {
  if (o.format != "text" && o.format != "json") {
    throw UsageError("--format must be text or json");
  }
  if (o.gold2.empty() != o.pred2.empty()) {
    throw UsageError("--gold2 and --pred2 must be given together");
  }
  const Corpus gold = LoadCorpus(o.gold, in, g.strict);
  const PredictionSet pred = ReadPredictions(ReadInput(o.pred, in), gold);
  const RunAnalysis run = Analyze(gold, pred);

  json report = {{"run", {{"gold", o.gold}, {"pred", o.pred},
                          {"scores", run.prf.ToJson()},
                          {"errors", run.errors.ToJson()}}}};
  std::ostringstream text;
  text << "== " << o.pred << " vs " << o.gold << "\n" << run.prf.ToText() << "\n"
       << run.errors.ToText() << "\n";

  std::optional<Corpus> gold2;
  std::optional<PredictionSet> pred2;
  if (!o.gold2.empty()) {
    gold2 = LoadCorpus(o.gold2, in, g.strict);
    pred2 = ReadPredictions(ReadInput(o.pred2, in), *gold2);
    const RunAnalysis run2 = Analyze(*gold2, *pred2);
    const auto types = UnionTypes(EntityTypes(gold, pred), EntityTypes(*gold2, *pred2));
    const ConfusionMatrix cm1 = Confusion(gold, pred, types);
    const ConfusionMatrix cm2 = Confusion(*gold2, *pred2, types);
    const ConfusionMatrix diff = ConfusionDifference(cm2, cm1);
    const double jaccard = ErrorSetJaccard(run.error_set, run2.error_set);
    const auto drop = RelativeDrop(run.prf.micro.f1, run2.prf.micro.f1);

    report["run"]["confusion"] = cm1.ToJson();
    report["run2"] = {{"gold", o.gold2}, {"pred", o.pred2},
                      {"scores", run2.prf.ToJson()},
                      {"errors", run2.errors.ToJson()},
                      {"confusion", cm2.ToJson()}};
    report["relative_f1_drop"] = drop ? json(*drop) : json(nullptr);
    report["confusion_difference"] = diff.ToJson();
    report["error_set_jaccard"] = jaccard;

    text << "confusion (run 1)\n" << cm1.ToText() << "\n"
         << "== " << o.pred2 << " vs " << o.gold2 << "\n" << run2.prf.ToText()
         << "\n" << run2.errors.ToText() << "\n"
         << "confusion (run 2)\n" << cm2.ToText() << "\n"
         << "relative F1 drop: "
         << FormatRelativeDrop(run.prf.micro.f1, run2.prf.micro.f1) << "\n"
         << "confusion difference (run 2 - run 1)\n" << diff.ToText() << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "error-set Jaccard: %.4f\n", jaccard);
    text << buf;
  } else {
    const ConfusionMatrix cm = Confusion(gold, pred);
    report["run"]["confusion"] = cm.ToJson();
    text << "confusion\n" << cm.ToText();
  }

  if (!o.curve.empty()) {
    std::vector<std::pair<double, Corpus>> golds;
    std::vector<std::pair<double, PredictionSet>> preds;
    for (const std::string& point : o.curve) {
      const auto first = point.find(':');
      const auto second = point.find(':', first == std::string::npos ? first : first + 1);
      if (first == std::string::npos || second == std::string::npos) {
        throw UsageError("--curve expects COVERAGE:GOLD:PRED, got '" + point + "'");
      }
      double coverage;
      try {
        coverage = std::stod(point.substr(0, first));
      } catch (const std::exception&) {
        throw UsageError("bad coverage in --curve '" + point + "'");
      }
      Corpus c = LoadCorpus(point.substr(first + 1, second - first - 1), in, g.strict);
      PredictionSet p = ReadPredictions(ReadInput(point.substr(second + 1), in), c);
      preds.emplace_back(coverage, std::move(p));
      golds.emplace_back(coverage, std::move(c));
    }
    const auto curve = AttackCurve(golds, preds);
    json series = json::array();
    for (const CurvePoint& p : curve) series.push_back({{"coverage", p.coverage}, {"f1", p.f1}});
    report["curve"] = series;
    text << "\nattack curve\n" << CurveCsv(curve);
    if (!o.curve_csv.empty()) WriteOutput(o.curve_csv, CurveCsv(curve), out);
  }

  if (!o.report.empty()) WriteOutput(o.report, report.dump(2) + "\n", out);
  if (o.format == "json") {
    out << report.dump(2) << "\n";
  } else {
    out << text.str();
  }
  return kExitOk;
}

// ---- stats ---------------------------------------------------------------------------

json VocabJson(const VocabCount& c) {
  return {{"unique_words", c.unique_words},
          {"seen_words", c.seen_words},
          {"seen_ratio", c.seen_ratio}};
}

int CmdStats(GlobalOptions& g, const StatsOptions& o, std::istream& in,
             std::ostream& out, std::ostream& /*err*/) {
  const Corpus train = LoadCorpus(o.train, in, g.strict);
  const Corpus eval = LoadCorpus(o.eval, in, g.strict);
  EntityWordOptions words;
  words.case_sensitive = !o.case_insensitive;
  words.include_punctuation = !o.exclude_punctuation;
  const EntityVocabStats stats = ComputeEntityVocabStats(train, eval, words);

  json report = json::object();
  json per_type = json::object();
  for (const auto& [type, c] : stats.per_type) per_type[type] = VocabJson(c);
  report["entity_vocab"] = {{"per_type", per_type}, {"overall", VocabJson(stats.overall)}};

  std::ostringstream text;
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %12s %8s %9s\n", "type", "#ent_words",
                "seen", "seen(%)");
  text << line;
  auto row = [&](const std::string& name, const VocabCount& c) {
    std::snprintf(line, sizeof(line), "%-14s %12zu %8zu %9.2f\n", name.c_str(),
                  c.unique_words, c.seen_words, 100.0 * c.seen_ratio);
    text << line;
  };
  for (const auto& [type, c] : stats.per_type) row(type, c);
  row("Total", stats.overall);

  if (!o.records.empty()) {
    std::vector<AttackRecord> records;
    std::size_t lineno = 0;
    const std::string raw = ReadInput(o.records, in);
    for (std::string_view l : SplitLines(raw)) {
      ++lineno;
      if (Trim(l).empty()) continue;
      try {
        records.push_back(AttackRecord::FromJson(json::parse(l)));
      } catch (const json::exception& e) {
        throw ParseError(lineno, std::string("bad attack record: ") + e.what());
      }
    }
    const AttackStats attack = ComputeAttackStats(records, eval);
    report["attack"] = attack.ToJson();
    std::snprintf(line, sizeof(line),
                  "\n# Entities %zu\n# Attacked Entities %zu\n%% Attacked Entities %.2f\n"
                  "%% Attacked Sentences %.2f\n",
                  attack.entities, attack.replaced, attack.attacked_entity_pct(),
                  attack.attacked_sentence_pct());
    text << line;
  }
  if (!o.json_out.empty()) WriteOutput(o.json_out, report.dump(2) + "\n", out);
  out << text.str();
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial NER corpus toolkit: dictionary building, entity and "
               "context attacks, augmentation, and robustness evaluation.",
               "nerstress"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a config file (TOML)");

  GlobalOptions g;
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Random seed (generated and recorded when absent)");
  app.add_flag("--offline", g.offline, "Serve knowledge-base lookups from the cache only");
  app.add_option("--stub-provider", g.stub_provider,
                 "Use the in-process stub fill-mask provider with this token table ('builtin' for the shipped one)");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1, 256));
  app.add_flag("--strict", g.strict, "Reject orphan I- tags instead of repairing them");

  BuildDictOptions bd;
  auto* build = app.add_subcommand("build-dict", "Build an adversarial entity dictionary");
  build->fallthrough();
  build->add_option("--corpus", bd.corpus, "Corpus whose entities seed the dictionary")->required();
  build->add_option("--train", bd.train, "Training split for the out-of-distribution filter");
  build->add_option("--rules", bd.rules, "Curation rules JSON");
  build->add_option("--names", bd.names, "Person-name parts JSON {first, middle, last}");
  build->add_option("--victim-errors", bd.victim_errors, "Surfaces the victim mislabels, one per line");
  build->add_option("--kb-cache", bd.kb_cache, "Knowledge-base response cache directory");
  build->add_option("--output", bd.output, "Dictionary JSON path")->required();
  build->add_option("--report", bd.report, "Build statistics JSON path");
  build->add_option("--log-dir", bd.log_dir, "Directory for the manifest");
  build->add_option("--person-names", bd.person_names, "Number of generated person names");
  build->add_option("--middle-names", bd.middle_names, "coin, always or never");
  build->add_option("--timestamp", bd.timestamp, "Build timestamp recorded in the dictionary");

  AttackOptions at;
  auto* attack = app.add_subcommand("attack", "Generate adversarial variants of a corpus");
  attack->fallthrough();
  attack->add_option("--mode", at.mode, "entity, context or full (entity then context)");
  attack->add_option("--input", at.input, "Input corpus ('-' for stdin)");
  attack->add_option("--output", at.output, "Output corpus ('-' for stdout)");
  attack->add_option("--log-dir", at.log_dir, "Directory for logs and the manifest");
  attack->add_option("--dict", at.dict, "Adversarial dictionary JSON");
  attack->add_option("--coverage", at.coverage, "Fraction of eligible entities to replace");
  attack->add_flag("--allow-identity", at.allow_identity, "Allow a replacement equal to the original");
  attack->add_option("--rank-lo", at.rank_lo, "First provider rank of the sampling window (0-indexed)");
  attack->add_option("--rank-hi", at.rank_hi, "End of the sampling window (exclusive)");
  attack->add_option("--variants", at.variants, "Masked variants per sentence");
  attack->add_option("--provider-url", at.provider_url, "Fill-mask service base URL");
  attack->add_option("--predictions", at.predictions, "Reference-model predictions keyed by sentence digest (JSONL)");
  attack->add_option("--train", at.train, "Training split for the unigram-overlap scorer");
  attack->add_option("--pos-source", at.pos_source, "lexicon or input");

  AugmentOptions ag;
  auto* augment = app.add_subcommand("augment", "Augment training data");
  augment->fallthrough();
  augment->add_option("--method", ag.method, "entity_switching, random_masking or mixing_up")->required();
  augment->add_option("--input", ag.input, "Input corpus ('-' for stdin)");
  augment->add_option("--output", ag.output, "Output corpus ('-' for stdout)");
  augment->add_option("--log-dir", ag.log_dir, "Directory for the edit log and manifest");
  augment->add_option("--stopwords", ag.stopwords, "Stopword list overriding the built-in one");

  EvaluateOptions ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions and analyze errors");
  evaluate->fallthrough();
  evaluate->add_option("--gold", ev.gold, "Gold corpus")->required();
  evaluate->add_option("--pred", ev.pred, "Predictions (column file or JSONL)")->required();
  evaluate->add_option("--gold2", ev.gold2, "Second gold corpus (e.g. attacked)");
  evaluate->add_option("--pred2", ev.pred2, "Predictions on the second gold corpus");
  evaluate->add_option("--report", ev.report, "JSON report path");
  evaluate->add_option("--format", ev.format, "Standard output format: text or json");
  evaluate->add_option("--curve", ev.curve, "COVERAGE:GOLD:PRED attack-curve point (repeatable)");
  evaluate->add_option("--curve-csv", ev.curve_csv, "Attack-curve CSV path");

  StatsOptions st;
  auto* stats = app.add_subcommand("stats", "Entity-vocabulary and attack statistics");
  stats->fallthrough();
  stats->add_option("--train", st.train, "Training corpus")->required();
  stats->add_option("--eval", st.eval, "Evaluation corpus")->required();
  stats->add_option("--records", st.records, "Entity attack log (JSONL)");
  stats->add_option("--json", st.json_out, "JSON report path");
  stats->add_flag("--case-insensitive", st.case_insensitive, "Fold ASCII case when comparing entity words");
  stats->add_flag("--exclude-punctuation", st.exclude_punctuation, "Skip punctuation tokens inside entities");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed_value;

  try {
    if (*build) return CmdBuildDict(g, bd, in, out, err);
    if (*attack) return CmdAttack(g, at, in, out, err);
    if (*augment) return CmdAugment(g, ag, in, out, err);
    if (*evaluate) return CmdEvaluate(g, ev, in, out, err);
    if (*stats) return CmdStats(g, st, in, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const KbError& e) {
    err << "knowledge-base error: " << e.what() << "\n";
    return kExitExternal;
  } catch (const FixtureMissing& e) {
    err << "missing fixture: " << e.what() << "\n";
    return kExitExternal;
  } catch (const ProviderError& e) {
    err << "fill-mask provider error: " << e.what() << "\n";
    return kExitExternal;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const TagError& e) {
    err << "tag error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace nerstress::cli
