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

#include "nerstress/wikidict.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "nerstress/errors.h"
#include "nerstress/random.h"
#include "nerstress/text_util.h"

namespace nerstress {

using nlohmann::json;

namespace {

std::set<std::string> StringSet(const json& j, const char* key) {
  std::set<std::string> out;
  if (!j.contains(key)) return out;
  for (const json& v : j.at(key)) out.insert(v.get<std::string>());
  return out;
}

std::vector<std::string> StringList(const json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  for (const json& v : j.at(key)) out.push_back(v.get<std::string>());
  return out;
}

// Appends `surface` unless a case-insensitive duplicate is present.
void AppendUnique(std::vector<std::string>& list,
                  std::unordered_set<std::string>& seen_lower,
                  const std::string& surface) {
  if (seen_lower.insert(AsciiLower(surface)).second) list.push_back(surface);
}

std::vector<std::string> DedupPreservingOrder(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const std::string& s : in) {
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

}  // namespace

// ---- CurationRules ---------------------------------------------------------

bool CurationRules::ClassAllowed(const std::string& qid) const {
  if (deny_classes.count(qid)) return false;
  return allow_classes.empty() || allow_classes.count(qid) > 0;
}

bool CurationRules::EntityDenied(const std::string& surface) const {
  for (const std::string& denied : deny_entities) {
    if (EqualsIgnoreCase(denied, surface)) return true;
  }
  return false;
}

CurationRules CurationRules::FromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("curation rules must be a JSON object");
  CurationRules rules;
  try {
    rules.allow_classes = StringSet(j, "allow_classes");
    rules.deny_classes = StringSet(j, "deny_classes");
    rules.deny_entities = StringSet(j, "deny_entities");
    if (j.contains("per_class_limit")) {
      rules.per_class_limit = j.at("per_class_limit").get<std::size_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("curation rules: ") + e.what());
  }
  if (rules.per_class_limit == 0) {
    throw ConfigError("curation rules: per_class_limit must be >= 1");
  }
  return rules;
}

json CurationRules::ToJson() const {
  return {{"allow_classes", allow_classes},
          {"deny_classes", deny_classes},
          {"deny_entities", deny_entities},
          {"per_class_limit", per_class_limit}};
}

NamePartsTable NamePartsTable::FromJson(const json& j) {
  NamePartsTable parts;
  try {
    parts.first = StringList(j, "first");
    parts.middle = StringList(j, "middle");
    parts.last = StringList(j, "last");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("name parts: ") + e.what());
  }
  return parts;
}

// ---- AdversarialDictionary ------------------------------------------------

const std::vector<std::string>& AdversarialDictionary::Candidates(
    const std::string& type, const std::string& class_qid) const {
  static const std::vector<std::string> kEmpty;
  if (type == kPersonType && class_qid == kPersonClass) return person_names;
  auto t = types.find(type);
  if (t == types.end()) return kEmpty;
  auto c = t->second.find(class_qid);
  return c == t->second.end() ? kEmpty : c->second.surfaces;
}

void AdversarialDictionary::Validate() const {
  if (version != kDictionaryVersion) {
    throw InputError("unsupported dictionary version " + std::to_string(version));
  }
  for (const auto& [type, classes] : types) {
    for (const auto& [qid, entry] : classes) {
      const std::string where = type + "/" + qid;
      if (!IsValidQid(qid)) throw InputError("bad class id " + where);
      if (entry.surfaces.empty()) throw InputError("empty class " + where);
      std::unordered_set<std::string> seen;
      for (const std::string& s : entry.surfaces) {
        if (s.empty()) throw InputError("empty surface in " + where);
        if (!seen.insert(AsciiLower(s)).second) {
          throw InputError("duplicate surface '" + s + "' in " + where);
        }
      }
    }
  }
}

json AdversarialDictionary::ToJson() const {
  json types_json = json::object();
  for (const auto& [type, classes] : types) {
    json classes_json = json::object();
    for (const auto& [qid, entry] : classes) {
      classes_json[qid] = {{"label", entry.label}, {"surfaces", entry.surfaces}};
    }
    types_json[type] = classes_json;
  }
  json links_json = json::object();
  for (const auto& [type, by_surface] : links) {
    json inner = json::object();
    for (const auto& [surface, qids] : by_surface) inner[surface] = qids;
    links_json[type] = inner;
  }
  return {{"version", version},
          {"meta", meta},
          {"types", types_json},
          {"person_names", person_names},
          {"links", links_json}};
}

AdversarialDictionary AdversarialDictionary::FromJson(const json& j) {
  AdversarialDictionary dict;
  try {
    dict.version = j.at("version").get<int>();
    if (dict.version != kDictionaryVersion) {
      throw InputError("unsupported dictionary version " +
                       std::to_string(dict.version));
    }
    dict.meta = j.value("meta", json::object());
    for (const auto& [type, classes] : j.at("types").items()) {
      for (const auto& [qid, entry] : classes.items()) {
        dict.types[type][qid] = {entry.value("label", ""),
                                 entry.at("surfaces").get<std::vector<std::string>>()};
      }
    }
    dict.person_names = j.value("person_names", std::vector<std::string>{});
    if (j.contains("links")) {
      for (const auto& [type, by_surface] : j.at("links").items()) {
        for (const auto& [surface, qids] : by_surface.items()) {
          dict.links[type][surface] = qids.get<std::vector<std::string>>();
        }
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed dictionary: ") + e.what());
  }
  dict.Validate();
  return dict;
}

// ---- Build report -----------------------------------------------------------

json DictionaryBuildReport::ToJson() const {
  json types_json = json::object();
  TypeBuildStats total;
  for (const auto& [type, s] : per_type) {
    types_json[type] = {{"original_entities", s.original_entities},
                        {"linked_entities", s.linked_entities},
                        {"classes", s.classes},
                        {"adversarial_entities", s.adversarial_entities}};
    total.original_entities += s.original_entities;
    total.linked_entities += s.linked_entities;
    total.classes += s.classes;
    total.adversarial_entities += s.adversarial_entities;
  }
  json unlinked_json = json::array();
  for (const auto& [type, surface] : unlinked) {
    unlinked_json.push_back({{"type", type}, {"surface", surface}});
  }
  return {{"per_type", types_json},
          {"total",
           {{"original_entities", total.original_entities},
            {"linked_entities", total.linked_entities},
            {"classes", total.classes},
            {"adversarial_entities", total.adversarial_entities}}},
          {"unlinked", unlinked_json}};
}

std::string DictionaryBuildReport::ToText() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-14s %10s %8s %8s %12s\n", "type",
                "original", "linked", "classes", "adversarial");
  out << line;
  TypeBuildStats total;
  for (const auto& [type, s] : per_type) {
    const std::string classes =
        type == kPersonType ? "N/A" : std::to_string(s.classes);
    std::snprintf(line, sizeof(line), "%-14s %10zu %8zu %8s %12zu\n",
                  type.c_str(), s.original_entities, s.linked_entities,
                  classes.c_str(), s.adversarial_entities);
    out << line;
    total.original_entities += s.original_entities;
    total.linked_entities += s.linked_entities;
    total.classes += s.classes;
    total.adversarial_entities += s.adversarial_entities;
  }
  std::snprintf(line, sizeof(line), "%-14s %10zu %8zu %8zu %12zu\n", "Total",
                total.original_entities, total.linked_entities, total.classes,
                total.adversarial_entities);
  out << line;
  out << "unlinked: " << unlinked.size() << "\n";
  return out.str();
}

// ---- Pipeline stages --------------------------------------------------------

std::optional<EntityRecord> LinkEntity(KbClient& client,
                                       const std::string& surface) {
  if (surface.empty()) throw std::invalid_argument("LinkEntity: empty surface");
  for (EntityRecord& hit : client.Search(surface)) {
    if (EqualsIgnoreCase(hit.label, surface)) return std::move(hit);
    for (const std::string& alias : hit.aliases) {
      if (EqualsIgnoreCase(alias, surface)) return std::move(hit);
    }
  }
  return std::nullopt;
}

std::vector<FineClass> FineClasses(KbClient& client, const std::string& qid,
                                   const CurationRules& rules) {
  if (!IsValidQid(qid)) throw std::invalid_argument("FineClasses: bad QID " + qid);
  std::vector<FineClass> out;
  std::set<std::string> seen;
  for (FineClass& cls : client.InstanceOf(qid)) {
    if (!rules.ClassAllowed(cls.qid) || !seen.insert(cls.qid).second) continue;
    out.push_back(std::move(cls));
  }
  return out;
}

std::vector<EntityRecord> ExpandClass(KbClient& client,
                                      const std::string& class_qid,
                                      std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("ExpandClass: limit must be >= 1");
  std::vector<EntityRecord> members = client.Instances(class_qid);
  std::stable_sort(members.begin(), members.end(),
                   [](const EntityRecord& a, const EntityRecord& b) {
                     return QidLess(a.qid, b.qid);
                   });
  members.erase(std::unique(members.begin(), members.end(),
                            [](const EntityRecord& a, const EntityRecord& b) {
                              return a.qid == b.qid;
                            }),
                members.end());
  if (members.size() > limit) members.resize(limit);
  return members;
}

std::vector<std::string> OodFilter(
    const std::vector<std::string>& candidates,
    const std::set<std::string>& train_vocab,
    const std::optional<std::unordered_set<std::string>>& victim_errors) {
  std::vector<std::string> kept;
  for (const std::string& candidate : candidates) {
    bool keep;
    if (victim_errors) {
      keep = victim_errors->count(candidate) > 0;
    } else {
      const auto words = SplitWhitespace(candidate);
      keep = std::any_of(words.begin(), words.end(), [&](const std::string& w) {
        return train_vocab.count(w) == 0;
      });
    }
    if (keep) kept.push_back(candidate);
  }
  return kept;
}

std::size_t DistinctNameCount(const NamePartsTable& parts, MiddleNames middle) {
  const std::size_t f = DedupPreservingOrder(parts.first).size();
  const std::size_t m = DedupPreservingOrder(parts.middle).size();
  const std::size_t l = DedupPreservingOrder(parts.last).size();
  std::size_t middles = 1;
  if (m > 0) {
    if (middle == MiddleNames::kAlways) middles = m;
    if (middle == MiddleNames::kCoinFlip) middles = m + 1;
  }
  return f * middles * l;
}

namespace {

std::string ComposeName(const std::string& first, const std::string* middle,
                        const std::string& last) {
  return middle ? first + " " + *middle + " " + last : first + " " + last;
}

std::vector<std::string> EnumerateNames(const std::vector<std::string>& first,
                                        const std::vector<std::string>& middle,
                                        const std::vector<std::string>& last,
                                        MiddleNames policy) {
  std::vector<std::string> all;
  std::unordered_set<std::string> seen;
  auto add = [&](std::string name) {
    if (seen.insert(name).second) all.push_back(std::move(name));
  };
  for (const auto& f : first) {
    for (const auto& l : last) {
      if (middle.empty() || policy != MiddleNames::kAlways) add(ComposeName(f, nullptr, l));
      if (policy == MiddleNames::kNever) continue;
      for (const auto& m : middle) add(ComposeName(f, &m, l));
    }
  }
  return all;
}

}  // namespace

std::vector<std::string> GeneratePersonNames(const NamePartsTable& parts,
                                             std::size_t n, std::uint64_t seed,
                                             MiddleNames middle) {
  if (parts.first.empty() || parts.last.empty()) {
    throw std::invalid_argument("GeneratePersonNames: first and last names required");
  }
  if (n == 0) throw std::invalid_argument("GeneratePersonNames: n must be >= 1");
  const auto first = DedupPreservingOrder(parts.first);
  const auto mid = DedupPreservingOrder(parts.middle);
  const auto last = DedupPreservingOrder(parts.last);
  const std::size_t combos = DistinctNameCount(parts, middle);
  if (n > combos) {
    throw ExhaustedError("requested " + std::to_string(n) + " names but only " +
                         std::to_string(combos) + " combinations exist");
  }

  Rng rng(DeriveSeed(seed, {"person-names"}));
  // Dense requests sample from the full enumeration; sparse ones draw
  // combinations directly.
  if (n * 2 > combos) {
    std::vector<std::string> all = EnumerateNames(first, mid, last, middle);
    if (all.size() < n) {
      throw ExhaustedError("only " + std::to_string(all.size()) +
                           " distinct names exist");
    }
    rng.Shuffle(all);
    all.resize(n);
    return all;
  }
  std::vector<std::string> names;
  std::unordered_set<std::string> seen;
  const std::size_t max_draws = 64 * n + 1024;
  for (std::size_t draw = 0; names.size() < n && draw < max_draws; ++draw) {
    const std::string& f = first[rng.UniformIndex(first.size())];
    const std::string* m = nullptr;
    if (!mid.empty() && (middle == MiddleNames::kAlways ||
                         (middle == MiddleNames::kCoinFlip && rng.Coin()))) {
      m = &mid[rng.UniformIndex(mid.size())];
    }
    const std::string& l = last[rng.UniformIndex(last.size())];
    std::string name = ComposeName(f, m, l);
    if (seen.insert(name).second) names.push_back(std::move(name));
  }
  if (names.size() < n) {
    throw ExhaustedError("could not draw " + std::to_string(n) + " distinct names");
  }
  return names;
}

// ---- BuildDictionary ---------------------------------------------------------

namespace {

struct OriginalEntity {
  std::string type;
  std::string surface;
};

struct Resolution {
  std::optional<EntityRecord> record;
  std::vector<FineClass> classes;
};

}  // namespace

AdversarialDictionary BuildDictionary(const Corpus& corpus, KbClient& client,
                                      const CurationRules& rules,
                                      const NamePartsTable& names,
                                      const DictionaryBuildOptions& options,
                                      DictionaryBuildReport* report) {
  DictionaryBuildReport local_report;
  DictionaryBuildReport& rep = report ? *report : local_report;
  rep = {};

  // Distinct (type, surface) pairs in corpus order.
  std::vector<OriginalEntity> entities;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<std::string> person_originals;
  for (const Sentence& sentence : corpus.sentences) {
    for (const EntitySpan& span : ExtractSpans(sentence)) {
      if (!seen.insert({span.type, span.surface}).second) continue;
      ++rep.per_type[span.type].original_entities;
      if (span.type == kPersonType) {
        person_originals.push_back(span.surface);
      } else if (!rules.EntityDenied(span.surface)) {
        entities.push_back({span.type, span.surface});
      }
    }
  }

  std::vector<Resolution> resolved(entities.size());
  ParallelFor(entities.size(), options.workers, [&](std::size_t i) {
    Resolution r;
    r.record = LinkEntity(client, entities[i].surface);
    if (r.record) r.classes = FineClasses(client, r.record->qid, rules);
    resolved[i] = std::move(r);
  });

  // Expand each distinct class once, in first-seen order.
  std::vector<std::string> class_order;
  std::map<std::string, std::string> class_labels;
  for (const Resolution& r : resolved) {
    for (const FineClass& cls : r.classes) {
      if (class_labels.emplace(cls.qid, cls.label).second) {
        class_order.push_back(cls.qid);
      }
    }
  }
  std::vector<std::vector<EntityRecord>> members(class_order.size());
  ParallelFor(class_order.size(), options.workers, [&](std::size_t i) {
    members[i] = ExpandClass(client, class_order[i], rules.per_class_limit);
  });
  std::map<std::string, const std::vector<EntityRecord>*> members_of;
  for (std::size_t i = 0; i < class_order.size(); ++i) {
    members_of[class_order[i]] = &members[i];
  }

  // Originals linked into each (type, class), excluded from its list.
  std::map<std::pair<std::string, std::string>, std::unordered_set<std::string>>
      originals_by_class;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (const FineClass& cls : resolved[i].classes) {
      originals_by_class[{entities[i].type, cls.qid}].insert(
          AsciiLower(entities[i].surface));
    }
  }

  AdversarialDictionary dict;
  std::map<std::pair<std::string, std::string>, std::unordered_set<std::string>>
      seen_lower;
  std::map<std::pair<std::string, std::string>, bool> class_done;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const OriginalEntity& entity = entities[i];
    const Resolution& r = resolved[i];
    if (!r.record) {
      rep.unlinked.emplace_back(entity.type, entity.surface);
      continue;
    }
    ++rep.per_type[entity.type].linked_entities;
    for (const FineClass& cls : r.classes) {
      const auto key = std::make_pair(entity.type, cls.qid);
      if (class_done[key]) continue;
      class_done[key] = true;
      const auto& excluded = originals_by_class[key];
      std::vector<std::string> candidates;
      for (const EntityRecord& member : *members_of.at(cls.qid)) {
        if (member.label.empty() || rules.EntityDenied(member.label)) continue;
        if (excluded.count(AsciiLower(member.label))) continue;
        candidates.push_back(member.label);
      }
      candidates = OodFilter(candidates, options.train_vocab, options.victim_errors);
      auto& entry = dict.types[entity.type][cls.qid];
      entry.label = cls.label;
      for (const std::string& c : candidates) {
        AppendUnique(entry.surfaces, seen_lower[key], c);
      }
    }
  }

  // Drop classes whose lists came out empty, then record surviving links.
  for (auto type_it = dict.types.begin(); type_it != dict.types.end();) {
    auto& classes = type_it->second;
    for (auto it = classes.begin(); it != classes.end();) {
      it = it->second.surfaces.empty() ? classes.erase(it) : std::next(it);
    }
    type_it = classes.empty() ? dict.types.erase(type_it) : std::next(type_it);
  }
  for (std::size_t i = 0; i < entities.size(); ++i) {
    if (!resolved[i].record) continue;
    std::vector<std::string> surviving;
    for (const FineClass& cls : resolved[i].classes) {
      if (!dict.Candidates(entities[i].type, cls.qid).empty()) {
        surviving.push_back(cls.qid);
      }
    }
    if (!surviving.empty()) {
      dict.links[entities[i].type][entities[i].surface] = std::move(surviving);
    }
  }

  if (!person_originals.empty() && !names.first.empty() && !names.last.empty()) {
    const std::size_t available = DistinctNameCount(names, options.middle_names);
    const std::size_t n = std::min(options.person_name_count, available);
    if (n > 0) {
      std::unordered_set<std::string> originals;
      for (const auto& s : person_originals) originals.insert(AsciiLower(s));
      for (std::string& name :
           GeneratePersonNames(names, n, options.seed, options.middle_names)) {
        if (!originals.count(AsciiLower(name))) {
          dict.person_names.push_back(std::move(name));
        }
      }
    }
    rep.per_type[std::string(kPersonType)].linked_entities = person_originals.size();
  }

  for (auto& [type, stats] : rep.per_type) {
    if (type == kPersonType) {
      stats.adversarial_entities = dict.person_names.size();
      continue;
    }
    auto it = dict.types.find(type);
    if (it == dict.types.end()) continue;
    stats.classes = it->second.size();
    for (const auto& [qid, entry] : it->second) {
      stats.adversarial_entities += entry.surfaces.size();
    }
  }

  dict.meta = {
      {"source", options.source_name},
      {"timestamp", options.timestamp},
      {"filters",
       {{"rules", rules.ToJson()},
        {"ood_mode", options.victim_errors ? "victim_errors" : "train_vocab"},
        {"train_vocab_size", options.train_vocab.size()},
        {"victim_error_count",
         options.victim_errors ? options.victim_errors->size() : 0},
        {"person_name_count", options.person_name_count},
        {"seed", options.seed}}}};
  dict.Validate();
  return dict;
}

}  // namespace nerstress
