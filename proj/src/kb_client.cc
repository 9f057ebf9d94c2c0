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

#include "nerstress/kb_client.h"

#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "nerstress/errors.h"
#include "nerstress/random.h"
#include "nerstress/text_util.h"

namespace nerstress {

using nlohmann::json;

namespace {

constexpr std::string_view kEntityPrefix = "http://www.wikidata.org/entity/";

std::string LabelService() {
  return "SERVICE wikibase:label { bd:serviceParam wikibase:language \"en\". }";
}

// "http://www.wikidata.org/entity/Q956" -> "Q956".
std::string QidFromUri(const std::string& uri) {
  auto slash = uri.rfind('/');
  return slash == std::string::npos ? uri : uri.substr(slash + 1);
}

std::string BindingValue(const json& binding, const std::string& var) {
  auto it = binding.find(var);
  if (it == binding.end() || !it->is_object() || !it->contains("value")) {
    throw KbError("SPARQL binding missing '" + var + "'");
  }
  return (*it)["value"].get<std::string>();
}

const json& Bindings(const json& response) {
  if (!response.is_object() || !response.contains("results") ||
      !response["results"].contains("bindings") ||
      !response["results"]["bindings"].is_array()) {
    throw KbError("malformed SPARQL response");
  }
  return response["results"]["bindings"];
}

json SparqlResponse(const std::string& var, const json& members) {
  json bindings = json::array();
  for (const json& m : members) {
    bindings.push_back(
        {{var, {{"type", "uri"},
                {"value", std::string(kEntityPrefix) + m.at("qid").get<std::string>()}}},
         {var + "Label", {{"type", "literal"},
                          {"xml:lang", "en"},
                          {"value", m.at("label").get<std::string>()}}}});
  }
  return {{"head", {{"vars", {var, var + "Label"}}}},
          {"results", {{"bindings", bindings}}}};
}

}  // namespace

bool IsValidQid(std::string_view qid) {
  if (qid.size() < 2 || qid[0] != 'Q') return false;
  for (char c : qid.substr(1)) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

bool QidLess(std::string_view a, std::string_view b) {
  // Valid QIDs compare by digit count first, then lexicographically.
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

json KbRequest::ToJson() const {
  json params_json = json::object();
  for (const auto& [k, v] : params) params_json[k] = v;
  return {{"kind", kind}, {"params", params_json}};
}

std::string KbRequest::Digest() const { return Sha256Hex(ToJson().dump()); }

void KbClientOptions::SetEndpointBase(const std::string& base) {
  std::string trimmed = base;
  while (!trimmed.empty() && trimmed.back() == '/') trimmed.pop_back();
  search_url = trimmed + "/w/api.php";
  sparql_url = trimmed + "/sparql";
}

KbTransport HttpKbTransport() {
  return [](const std::string& url, const KbRequest& request,
            const KbClientOptions& options) -> std::string {
    // Split "scheme://host[:port]/path".
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw KbError("bad endpoint URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    std::string origin = url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
        options.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_follow_location(true);
    httplib::Headers headers = {{"User-Agent", options.user_agent},
                                {"Accept", "application/json"}};
    httplib::Params params(request.params.begin(), request.params.end());
    auto result = client.Get(path, params, headers);
    if (!result) {
      throw KbError("request to " + url + " failed: " +
                    httplib::to_string(result.error()));
    }
    if (result->status != 200) {
      throw KbError("request to " + url + " returned HTTP " +
                    std::to_string(result->status));
    }
    return result->body;
  };
}

KbClient::KbClient(KbClientOptions options, KbTransport transport)
    : options_(std::move(options)),
      transport_(transport ? std::move(transport) : HttpKbTransport()) {}

std::filesystem::path KbClient::CachePath(const KbRequest& request) const {
  return options_.cache_dir / (request.Digest() + ".json");
}

json KbClient::Fetch(const KbRequest& request) {
  if (!options_.cache_dir.empty()) {
    const auto path = CachePath(request);
    std::ifstream in(path, std::ios::binary);
    if (in) {
      std::stringstream buffer;
      buffer << in.rdbuf();
      try {
        return json::parse(buffer.str()).at("response");
      } catch (const json::exception& e) {
        throw KbError("corrupt cache entry " + path.string() + ": " + e.what());
      }
    }
  }
  if (options_.offline) {
    throw FixtureMissing("offline: no cached response for " +
                         request.ToJson().dump());
  }

  std::string body;
  {
    std::lock_guard<std::mutex> lock(network_mu_);
    const auto now = std::chrono::steady_clock::now();
    const auto ready = last_request_ + options_.min_interval;
    if (last_request_.time_since_epoch().count() != 0 && now < ready) {
      std::this_thread::sleep_for(ready - now);
    }
    ++network_requests_;
    const std::string& url =
        request.kind == "search" ? options_.search_url : options_.sparql_url;
    try {
      body = transport_(url, request, options_);
    } catch (...) {
      last_request_ = std::chrono::steady_clock::now();
      throw;
    }
    last_request_ = std::chrono::steady_clock::now();
  }
  json response;
  try {
    response = json::parse(body);
  } catch (const json::exception& e) {
    throw KbError(std::string("response is not JSON: ") + e.what());
  }
  if (!options_.cache_dir.empty()) Store(request, response);
  return response;
}

void KbClient::Store(const KbRequest& request, const json& response) const {
  if (options_.cache_dir.empty()) throw ConfigError("no cache directory set");
  std::filesystem::create_directories(options_.cache_dir);
  const auto path = CachePath(request);
  json entry = {{"request", request.ToJson()}, {"response", response}};
  // Write then rename so concurrent readers never see a partial file.
  const auto tmp = path.string() + ".tmp" +
                   std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  WriteFile(tmp, entry.dump(2) + "\n");
  std::filesystem::rename(tmp, path);
}

KbRequest KbClient::SearchRequest(const std::string& surface) const {
  return {"search",
          {{"action", "wbsearchentities"},
           {"search", surface},
           {"language", "en"},
           {"uselang", "en"},
           {"type", "item"},
           {"format", "json"},
           {"limit", std::to_string(options_.search_limit)}}};
}

KbRequest KbClient::InstanceOfRequest(const std::string& qid) const {
  return {"sparql",
          {{"format", "json"},
           {"query", "SELECT ?class ?classLabel WHERE { wd:" + qid +
                         " wdt:P31 ?class . " + LabelService() + " }"}}};
}

KbRequest KbClient::InstancesRequest(const std::string& class_qid) const {
  return {"sparql",
          {{"format", "json"},
           {"query", "SELECT ?item ?itemLabel WHERE { ?item wdt:P31 wd:" +
                         class_qid + " . " + LabelService() + " } LIMIT " +
                         std::to_string(options_.expand_fetch_cap)}}};
}

std::vector<EntityRecord> KbClient::Search(const std::string& surface) {
  const json response = Fetch(SearchRequest(surface));
  if (!response.is_object() || !response.contains("search") ||
      !response["search"].is_array()) {
    throw KbError("malformed search response for '" + surface + "'");
  }
  std::vector<EntityRecord> hits;
  for (const json& item : response["search"]) {
    EntityRecord record;
    record.qid = item.value("id", "");
    record.label = item.value("label", "");
    if (item.contains("aliases") && item["aliases"].is_array()) {
      for (const json& alias : item["aliases"]) {
        record.aliases.push_back(alias.get<std::string>());
      }
    }
    if (IsValidQid(record.qid)) hits.push_back(std::move(record));
  }
  return hits;
}

std::vector<FineClass> KbClient::InstanceOf(const std::string& qid) {
  std::vector<FineClass> classes;
  const json response = Fetch(InstanceOfRequest(qid));
  for (const json& binding : Bindings(response)) {
    FineClass cls{QidFromUri(BindingValue(binding, "class")),
                  BindingValue(binding, "classLabel")};
    if (IsValidQid(cls.qid)) classes.push_back(std::move(cls));
  }
  return classes;
}

std::vector<EntityRecord> KbClient::Instances(const std::string& class_qid) {
  std::vector<EntityRecord> members;
  const json response = Fetch(InstancesRequest(class_qid));
  for (const json& binding : Bindings(response)) {
    EntityRecord record{QidFromUri(BindingValue(binding, "item")),
                        BindingValue(binding, "itemLabel"),
                        {}};
    // The label service falls back to the QID when no English label exists.
    if (!IsValidQid(record.qid) || record.label == record.qid) continue;
    members.push_back(std::move(record));
  }
  return members;
}

void SeedKbCache(const json& description, const KbClient& client) {
  if (description.contains("search")) {
    for (const auto& [surface, hits] : description["search"].items()) {
      json items = json::array();
      for (const json& hit : hits) {
        json item = {{"id", hit.at("id")}, {"label", hit.at("label")}};
        if (hit.contains("aliases")) item["aliases"] = hit["aliases"];
        items.push_back(item);
      }
      client.Store(client.SearchRequest(surface),
                   {{"search", items}, {"success", 1}});
    }
  }
  if (description.contains("instance_of")) {
    for (const auto& [qid, classes] : description["instance_of"].items()) {
      client.Store(client.InstanceOfRequest(qid), SparqlResponse("class", classes));
    }
  }
  if (description.contains("instances")) {
    for (const auto& [qid, members] : description["instances"].items()) {
      client.Store(client.InstancesRequest(qid), SparqlResponse("item", members));
    }
  }
}

}  // namespace nerstress
