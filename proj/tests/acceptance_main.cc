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

// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "commands.h"
#include "nerstress/augment.h"
#include "nerstress/context_attack.h"
#include "nerstress/entity_attack.h"
#include "nerstress/eval.h"
#include "nerstress/mlm_provider.h"
#include "nerstress/pos_lexicon.h"
#include "nerstress/wikidict.h"
#include "test_support.h"

namespace nerstress {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Thrown by Require; its message becomes the FAIL detail.
struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure(what);
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

const std::vector<std::string> kTypes = {"GPE", "LOC", "ORG", "PERSON"};

std::multiset<std::string> TypeMultiset(const Corpus& c) {
  std::multiset<std::string> out;
  for (const Sentence& s : c.sentences) {
    for (const EntitySpan& e : ExtractSpans(s)) out.insert(e.type);
  }
  return out;
}

// Independent BIO check: every I-X continues a B-X or I-X.
std::size_t BioViolations(const Corpus& c) {
  std::size_t bad = 0;
  for (const Sentence& s : c.sentences) {
    std::string prev = "O";
    for (const Token& t : s.tokens) {
      if (t.tag != "O" && t.tag.rfind("B-", 0) != 0 && t.tag.rfind("I-", 0) != 0) ++bad;
      if (t.tag.rfind("I-", 0) == 0 && (prev == "O" || prev.substr(2) != t.tag.substr(2))) ++bad;
      prev = t.tag;
    }
  }
  return bad;
}

char CaseClass(char c) {
  if (c >= 'a' && c <= 'z') return 'a';
  if (c >= 'A' && c <= 'Z') return 'A';
  return c;
}

// ---- criteria ----------------------------------------------------------------

std::string MetricOracle() {
  const auto start = Clock::now();
  Rng rng(20260101);
  for (int round = 0; round < 300; ++round) {
    const Corpus gold = testing::RandomCorpus(rng);
    const PredictionSet pred = testing::PerturbPredictions(gold, rng, kTypes);
    const EvalReport report = SpanPrf(gold, pred);
    const auto oracle = testing::OraclePrf(gold, pred);
    Require(report.micro.matched == oracle.matched && report.micro.predicted == oracle.predicted &&
                report.micro.gold == oracle.gold,
            "micro counts differ at case " + std::to_string(round));
    for (const auto& [type, s] : report.per_type) {
      const auto per = testing::OraclePrf(gold, pred, type);
      Require(s.matched == per.matched && s.predicted == per.predicted && s.gold == per.gold,
              type + " counts differ at case " + std::to_string(round));
    }
  }
  const double elapsed = Seconds(start);
  Require(elapsed < 10.0, "took " + std::to_string(elapsed) + " s");
  char detail[64];
  std::snprintf(detail, sizeof(detail), "300 cases, %.2f s", elapsed);
  return detail;
}

std::string FormulaChecks() {
  const double f1 = 100.0 * F1FromPr(0.929, 0.918);
  const std::string drop1 = FormatRelativeDrop(92.4, 58.5);
  const std::string drop2 = FormatRelativeDrop(84.6, 32.4);
  // Largest F1 reachable from inputs that round to the printed P and R.
  const double f1_max = 100.0 * F1FromPr(0.9295, 0.9185);
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "F1(92.9, 91.8) = %.3f (want 92.4 +/- 0.05, unrounded inputs reach at most %.3f); "
                "drops %s, %s",
                f1, f1_max, drop1.c_str(), drop2.c_str());
  Require(drop1 == "37%" && drop2 == "62%", detail);
  Require(std::fabs(f1 - 92.4) <= 0.05, detail);
  return detail;
}

AdversarialDictionary DictionaryFor(const Corpus& corpus) {
  AdversarialDictionary dict;
  for (const std::string& type : kTypes) {
    if (type == kPersonType) continue;
    dict.types[type]["Q1"] = {"any", {"Bari", "New York", "Lake Tahoe", "Bank of Italy"}};
  }
  dict.person_names = {"Ada Lovelace", "Grace Maria Hopper", "Turing"};
  for (const Sentence& s : corpus.sentences) {
    for (const EntitySpan& e : ExtractSpans(s)) {
      if (e.type != kPersonType) dict.links[e.type][e.surface] = {"Q1"};
    }
  }
  return dict;
}

std::string BioSafety() {
  Rng rng(1000);
  StubMlmProvider stub;
  const UnigramOverlapScorer scorer(std::unordered_set<std::string>{"the", "city"});
  std::size_t violations = 0;
  std::size_t type_changes = 0;
  std::size_t splice_errors = 0;
  for (int round = 0; round < 1000; ++round) {
    const Corpus c = testing::RandomCorpus(rng);
    const auto dict = DictionaryFor(c);
    EntityAttackConfig ec;
    ec.seed = static_cast<std::uint64_t>(round);
    const Corpus entity = AttackEntities(c, dict, LinkMapFromDictionary(c, dict), ec).corpus;
    ContextAttackConfig cc;
    cc.seed = static_cast<std::uint64_t>(round);
    const Corpus context = AttackContext(c, stub, scorer, cc).corpus;
    const Corpus switched = EntitySwitching(c, round).corpus;
    const Corpus masked = RandomMasking(c, round).corpus;
    const auto mixed = MixingUp(c, round);
    for (const Corpus* out : {&entity, &context, &switched, &masked, &mixed.corpus}) {
      violations += BioViolations(*out);
    }
    for (const Corpus* out : {&entity, &context, &switched, &masked}) {
      type_changes += TypeMultiset(*out) != TypeMultiset(c);
    }
    std::map<std::string, const nlohmann::json*> edits;
    for (const auto& e : mixed.edits) edits[e.at("sentence_id")] = &e;
    std::map<std::string, const Sentence*> by_id;
    for (const Sentence& s : c.sentences) by_id[s.id] = &s;
    for (std::size_t s = 0; s < c.size(); ++s) {
      const auto it = edits.find(c.sentences[s].id);
      std::vector<std::string> expected = c.sentences[s].Tags();
      if (it != edits.end()) {
        const std::size_t end = it->second->at("entity_end");
        const Sentence& donor = *by_id.at(it->second->at("donor_sentence_id"));
        const std::size_t donor_end = it->second->at("donor_entity_end");
        expected.resize(end);
        const auto tags = donor.Tags();
        expected.insert(expected.end(), tags.begin() + static_cast<std::ptrdiff_t>(donor_end),
                        tags.end());
      }
      splice_errors += mixed.corpus.sentences[s].Tags() != expected;
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "1000 corpora: %zu BIO violations, %zu type-multiset changes, %zu splice errors",
                violations, type_changes, splice_errors);
  Require(violations == 0 && type_changes == 0 && splice_errors == 0, detail);
  return detail;
}

struct Invocation {
  int code;
  std::string err;
};

Invocation RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "nerstress");
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::Run(args, in, out, err);
  return {code, err.str()};
}

// All artifacts of one pipeline run, keyed by name.
std::map<std::string, std::string> PipelineRun(const fs::path& dir, int workers) {
  fs::create_directories(dir);
  const std::string w = std::to_string(workers);
  const std::string test = testing::FixturePath("toy/test.conll");
  const auto p = [&](const std::string& n) { return (dir / n).string(); };
  auto run = [&](std::vector<std::string> args) {
    const Invocation r = RunCli(std::move(args));
    Require(r.code == 0, "command failed: " + r.err);
  };
  run({"--seed", "7", "--offline", "--workers", w, "build-dict", "--corpus", test, "--train",
       testing::FixturePath("toy/train.conll"), "--names", testing::FixturePath("toy/names.json"),
       "--rules", testing::FixturePath("toy/rules.json"), "--kb-cache",
       testing::FixturePath("kb_cache"), "--timestamp", "2026-01-01T00:00:00Z", "--output",
       p("dict.json"), "--report", p("dict_report.json"), "--log-dir", p("logs_dict")});
  run({"--seed", "7", "--workers", w, "--stub-provider", "builtin", "attack", "--mode", "full",
       "--dict", p("dict.json"), "--input", test, "--output", p("full.conll"), "--log-dir",
       p("logs_attack")});
  for (const std::string method : {"entity_switching", "random_masking", "mixing_up"}) {
    run({"--seed", "7", "--workers", w, "augment", "--method", method, "--input", test,
         "--output", p(method + ".conll"), "--log-dir", p("logs_" + method)});
  }
  run({"evaluate", "--gold", test, "--pred", test, "--gold2", p("full.conll"), "--pred2",
       p("full.conll"), "--format", "json", "--report", p("report.json")});
  // Input paths differ between run directories; everything else must not.
  nlohmann::json report = nlohmann::json::parse(Slurp(p("report.json")));
  for (const char* run : {"run", "run2"}) {
    report[run].erase("gold");
    report[run].erase("pred");
  }
  return {{"dictionary", Slurp(p("dict.json"))},
          {"dict_report", Slurp(p("dict_report.json"))},
          {"eval_report", report.dump()},
          {"attacked", Slurp(p("full.conll"))},
          {"entity_log", Slurp(p("logs_attack/entity_attack_log.jsonl"))},
          {"context_log", Slurp(p("logs_attack/context_attack_log.jsonl"))},
          {"entity_switching", Slurp(p("entity_switching.conll"))},
          {"random_masking", Slurp(p("random_masking.conll"))},
          {"mixing_up", Slurp(p("mixing_up.conll"))}};
}

std::string Determinism(const fs::path& work) {
  const auto a = PipelineRun(work / "det_a", 1);
  const auto b = PipelineRun(work / "det_b", 1);
  const auto c = PipelineRun(work / "det_c", 8);
  for (const auto& [name, content] : a) {
    Require(!content.empty(), name + " is empty");
    Require(content == b.at(name), name + " differs between two runs");
    Require(content == c.at(name), name + " differs between 1 and 8 workers");
  }
  // Library level, on a larger random corpus.
  Rng rng(99);
  testing::RandomCorpusOptions options;
  options.min_sentences = options.max_sentences = 200;
  const Corpus big = testing::RandomCorpus(rng, options);
  const auto dict = DictionaryFor(big);
  const auto links = LinkMapFromDictionary(big, dict);
  StubMlmProvider stub;
  const UnigramOverlapScorer scorer(std::unordered_set<std::string>{"the"});
  std::string first;
  for (int workers : {1, 8, 1}) {
    EntityAttackConfig ec;
    ec.seed = 3;
    ec.workers = workers;
    ContextAttackConfig cc;
    cc.seed = 3;
    cc.workers = workers;
    const std::string out = WriteConll(AttackEntities(big, dict, links, ec).corpus) +
                            WriteConll(AttackContext(big, stub, scorer, cc).corpus);
    if (first.empty()) first = out;
    Require(out == first, "library attack output depends on workers");
  }
  return std::to_string(a.size()) + " artifacts identical across runs and workers 1/8";
}

std::string CoverageLaw() {
  AdversarialDictionary dict;
  dict.types["GPE"]["Q1"] = {"a", {"Bari", "Lyon", "Porto"}};
  dict.links["GPE"]["Beijing"] = {"Q1"};
  std::string detail;
  for (std::size_t n : {37u, 50u, 123u}) {
    Corpus c;
    for (std::size_t i = 0; i < n; ++i) {
      c.sentences.push_back(testing::MakeSentence("e" + std::to_string(i), "In/O Beijing/B-GPE now/O"));
    }
    const auto links = LinkMapFromDictionary(c, dict);
    for (double p : {0.2, 0.4, 0.6, 0.8, 1.0}) {
      EntityAttackConfig config;
      config.coverage = p;
      config.seed = n;
      std::size_t replaced = 0;
      for (const auto& r : AttackEntities(c, dict, links, config).records) {
        replaced += r.status == AttackStatus::kReplaced;
      }
      const auto want = static_cast<std::size_t>(std::llround(p * static_cast<double>(n)));
      Require(replaced == want, "n=" + std::to_string(n) + " p=" + std::to_string(p) + ": " +
                                    std::to_string(replaced) + " != " + std::to_string(want));
    }
  }
  return "n in {37, 50, 123} x p in {0.2..1.0}";
}

// Ranks 100..199 are punctuation, so every fill must fall back.
class PunctuationWindowProvider : public MlmProvider {
 public:
  std::vector<MlmCandidate> Fill(const std::vector<std::string>&, std::size_t,
                                 std::size_t top_k) override {
    std::vector<MlmCandidate> out;
    for (std::size_t i = 0; i < top_k; ++i) {
      out.push_back({i >= 100 ? "," : "w" + std::to_string(i), 1.0 / static_cast<double>(i + 1)});
    }
    return out;
  }
};

std::string RankWindowLaw() {
  const Corpus toy = testing::LoadFixtureCorpus("toy/test.conll");
  Rng rng(5);
  testing::RandomCorpusOptions options;
  options.min_sentences = options.max_sentences = 60;
  const Corpus random = testing::RandomCorpus(rng, options);
  const UnigramOverlapScorer scorer(std::unordered_set<std::string>{"the"});
  ContextAttackConfig config;
  config.seed = 17;
  std::size_t checked = 0;
  for (const Corpus* corpus : {&toy, &random}) {
    StubMlmProvider stub;
    const auto result = AttackContext(*corpus, stub, scorer, config);
    for (const auto& entry : result.log) {
      for (const Replacement& r : entry.replacements) {
        if (r.fallback) continue;
        Require(r.rank >= 100 && r.rank < 200, "rank " + std::to_string(r.rank) + " outside window");
        ++checked;
      }
    }
  }
  Require(checked > 0, "no replacements made");

  // Fallbacks are logged.
  PunctuationWindowProvider punct;
  const auto fallback = AttackContext(toy, punct, scorer, config);
  std::size_t logged = 0;
  for (const auto& entry : fallback.log) {
    std::size_t flagged = 0;
    for (const Replacement& r : entry.replacements) {
      Require(r.fallback && r.rank == 99, "expected a rank-99 fallback");
      ++flagged;
    }
    Require(entry.fallbacks == flagged, "fallback count mismatch in " + entry.sentence_id);
    logged += entry.fallbacks;
  }
  Require(logged > 0, "no fallback events logged");

  // Left-to-right conditioning from the recorded requests.
  const LexiconTagger tagger;
  std::size_t plans_checked = 0;
  for (const Sentence& s : random.sentences) {
    const auto targets = SelectTargetTokens(s, PosSource::kBuiltinLexicon, tagger);
    for (const MaskPlan& plan : MakeMaskPlans(s, targets, 8, 4)) {
      StubMlmProvider stub;
      stub.set_recording(true);
      const auto decoded = DecodeVariant(s, plan, stub, config);
      const auto calls = stub.calls();
      Require(calls.size() == plan.positions.size(), "one request per masked position");
      std::map<std::size_t, std::string> filled;
      for (const Replacement& r : decoded.replacements) filled[r.position] = r.replacement;
      for (std::size_t k = 0; k < calls.size(); ++k) {
        Require(calls[k].mask_index == plan.positions[k], "requests not left to right");
        for (std::size_t i = 0; i < s.size(); ++i) {
          const std::string& got = calls[k].tokens[i];
          if (i == calls[k].mask_index) {
            Require(got == kMaskToken, "mask missing");
          } else if (i < calls[k].mask_index && filled.count(i)) {
            Require(got == filled[i], "earlier fill not visible to a later request");
          } else {
            Require(got == s.tokens[i].text, "context token altered before its turn");
          }
        }
      }
      ++plans_checked;
    }
  }
  return std::to_string(checked) + " windowed replacements, " + std::to_string(logged) +
         " fallbacks logged, " + std::to_string(plans_checked) + " plans conditioned left to right";
}

std::string RandomMaskingContract() {
  Rng rng(10000);
  testing::RandomCorpusOptions options;
  options.min_sentences = options.max_sentences = 1500;
  Corpus c;
  std::size_t tokens = 0;
  while (tokens < 10000) {
    const Corpus part = testing::RandomCorpus(rng, options);
    for (const Sentence& s : part.sentences) {
      Sentence copy = s;
      copy.id = "m" + std::to_string(c.size());
      tokens += copy.size();
      c.sentences.push_back(std::move(copy));
    }
  }
  const StopwordSet stopwords;
  const Corpus out = RandomMasking(c, 42).corpus;
  std::size_t violations = 0;
  std::size_t entity_tokens = 0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    const auto& in = c.sentences[s].tokens;
    const auto& got = out.sentences[s].tokens;
    if (in.size() != got.size()) {
      ++violations;
      continue;
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
      violations += got[i].tag != in[i].tag;
      if (in[i].tag == "O" || stopwords.Contains(in[i].text)) {
        violations += got[i].text != in[i].text;
        continue;
      }
      ++entity_tokens;
      if (got[i].text.size() != in[i].text.size()) {
        ++violations;
        continue;
      }
      for (std::size_t k = 0; k < in[i].text.size(); ++k) {
        violations += CaseClass(got[i].text[k]) != CaseClass(in[i].text[k]);
      }
    }
  }
  const std::string detail = std::to_string(tokens) + " tokens (" + std::to_string(entity_tokens) +
                             " masked), " + std::to_string(violations) + " violations";
  Require(violations == 0, detail);
  return detail;
}

std::string ErrorAnalysis() {
  Rng rng(6);
  for (int round = 0; round < 300; ++round) {
    const Corpus gold = testing::RandomCorpus(rng);
    const PredictionSet a = testing::PerturbPredictions(gold, rng, kTypes);
    const PredictionSet b = testing::PerturbPredictions(gold, rng, kTypes);
    const ErrorBreakdown breakdown = ComputeErrorBreakdown(gold, a);
    if (breakdown.total > 0) {
      Require(std::fabs(breakdown.FractionSum() - 1.0) <= 1e-9, "fractions do not sum to 1");
    }
    const ConfusionMatrix ma = Confusion(gold, a, kTypes);
    const ConfusionMatrix mb = Confusion(gold, b, kTypes);
    std::map<std::string, long long> support;
    for (const Sentence& s : gold.sentences) {
      for (const auto& [x, y, type] : testing::ScanSpans(s.Tags())) ++support[type];
    }
    const ConfusionMatrix diff = ConfusionDifference(mb, ma);
    for (std::size_t r = 0; r + 1 < ma.labels.size(); ++r) {
      Require(ma.RowSum(r) == support[ma.labels[r]], "row sum differs from support");
      Require(diff.RowSum(r) == 0, "difference row does not cancel");
    }
  }
  const auto span = [](std::size_t a, std::size_t b) { return EntitySpan{a, b, "GPE", ""}; };
  Require(TokenDifference(span(2, 5), span(2, 5)) == 0, "d=0 case");
  Require(TokenDifference(span(2, 5), span(3, 5)) == 1, "d=1 case");
  Require(TokenDifference(span(2, 5), span(3, 4)) == 2, "d=2 case");
  Require(TokenDifference(span(2, 5), span(0, 3)) == 4, "d>=3 case");
  Require(TokenDifference(span(0, 1), span(4, 6)) == 3, "d=3 case");
  const std::set<std::string> x = {"x", "y", "z"};
  Require(Jaccard(x, x) == 1.0, "Jaccard identical");
  Require(Jaccard(x, std::set<std::string>{"p"}) == 0.0, "Jaccard disjoint");
  Require(Jaccard(x, std::set<std::string>{"z", "w"}) == 0.25, "Jaccard 1/4");
  return "300 random pairs plus hand cases";
}

std::string DictionaryPipeline() {
  KbClient client(testing::FixtureKbOptions());
  const auto beijing = LinkEntity(client, "Beijing");
  Require(beijing && beijing->qid == "Q956", "Beijing does not link to Q956");
  const auto classes = FineClasses(client, "Q956", CurationRules{});
  Require(std::any_of(classes.begin(), classes.end(),
                      [](const FineClass& c) { return c.qid == "Q1549591"; }),
          "Q956 is not an instance of Q1549591");
  const auto members = ExpandClass(client, "Q1549591", 200);
  Require(std::any_of(members.begin(), members.end(),
                      [](const EntityRecord& r) { return r.label == "Bari"; }),
          "Bari missing from the expanded class");

  const Corpus test = testing::LoadFixtureCorpus("toy/test.conll");
  const Corpus train = testing::LoadFixtureCorpus("toy/train.conll");
  DictionaryBuildOptions options;
  options.seed = 7;
  options.train_vocab = EntityWordSet(train);
  const auto names = NamePartsTable::FromJson(
      nlohmann::json::parse(Slurp(testing::FixturePath("toy/names.json"))));
  const auto dict = BuildDictionary(test, client, CurationRules{}, names, options);
  const auto& bari = dict.Candidates("GPE", "Q1549591");
  Require(std::find(bari.begin(), bari.end(), "Bari") != bari.end(), "Bari not in dictionary");
  std::size_t candidates = 0;
  for (const auto& [type, by_class] : dict.types) {
    for (const auto& [qid, entry] : by_class) {
      for (const std::string& surface : entry.surfaces) {
        const auto words = SplitWhitespace(surface);
        Require(!std::all_of(words.begin(), words.end(),
                             [&](const std::string& w) { return options.train_vocab.count(w); }),
                surface + " is fully covered by the training vocabulary");
        ++candidates;
      }
    }
  }
  // Paris and New York are cities in the training split: both must be gone.
  Require(std::find(bari.begin(), bari.end(), "Paris") == bari.end() &&
              std::find(bari.begin(), bari.end(), "New York") == bari.end(),
          "in-vocabulary city survived");
  return "Beijing -> Q956 -> Q1549591 -> Bari; " + std::to_string(candidates) +
         " candidates, none in-vocabulary";
}

std::string GoldenEndToEnd(const fs::path& work, Clock::time_point suite_start) {
  const fs::path dir = work / "golden";
  fs::create_directories(dir);
  const std::string test = testing::FixturePath("toy/test.conll");
  const auto p = [&](const std::string& n) { return (dir / n).string(); };
  Invocation r = RunCli({"--seed", "7", "--offline", "build-dict", "--corpus", test, "--train",
                         testing::FixturePath("toy/train.conll"), "--names",
                         testing::FixturePath("toy/names.json"), "--kb-cache",
                         testing::FixturePath("kb_cache"), "--timestamp", "2026-01-01T00:00:00Z",
                         "--output", p("dict.json")});
  Require(r.code == 0, "build-dict failed: " + r.err);
  r = RunCli({"--seed", "7", "--stub-provider", "builtin", "attack", "--mode", "full", "--dict",
              p("dict.json"), "--input", test, "--output", p("full.conll")});
  Require(r.code == 0, "attack failed: " + r.err);
  const std::string golden = Slurp(testing::DataPath("golden/attack_full.conll"));
  Require(!golden.empty(), "golden file missing");
  Require(Slurp(p("full.conll")) == golden, "full attack differs from golden output");
  const double elapsed = Seconds(suite_start);
  Require(elapsed < 120.0, "acceptance run took " + std::to_string(elapsed) + " s");
  char detail[96];
  std::snprintf(detail, sizeof(detail), "byte-identical; acceptance wall time %.1f s", elapsed);
  return detail;
}

}  // namespace
}  // namespace nerstress

int main() {
  using namespace nerstress;
  const auto start = Clock::now();
  const fs::path work = fs::temp_directory_path() / "nerstress_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"metric-oracle", MetricOracle},
      {"formula-checks", FormulaChecks},
      {"bio-safety", BioSafety},
      {"determinism", [&] { return Determinism(work); }},
      {"coverage-law", CoverageLaw},
      {"rank-window-law", RankWindowLaw},
      {"random-masking-contract", RandomMaskingContract},
      {"error-analysis-suite", ErrorAnalysis},
      {"dictionary-pipeline", DictionaryPipeline},
      {"end-to-end-golden", [&] { return GoldenEndToEnd(work, start); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    try {
      const std::string detail = check();
      std::cout << "PASS " << name << ": " << detail << "\n";
    } catch (const std::exception& e) {
      ++failed;
      std::cout << "FAIL " << name << ": " << e.what() << "\n";
    }
    std::cout.flush();
  }
  fs::remove_all(work);
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
