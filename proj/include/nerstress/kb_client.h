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

#ifndef NERSTRESS_KB_CLIENT_H_
#define NERSTRESS_KB_CLIENT_H_

#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

namespace nerstress {

struct EntityRecord {
  std::string qid;
  std::string label;
  std::vector<std::string> aliases;

  bool operator==(const EntityRecord&) const = default;
};

struct FineClass {
  std::string qid;
  std::string label;

  bool operator==(const FineClass&) const = default;
};

// "Q" followed by one or more digits.
bool IsValidQid(std::string_view qid);

// Numeric ordering of QIDs ("Q9" < "Q10").
bool QidLess(std::string_view a, std::string_view b);

// One knowledge-base request. `kind` is "search" (entity search API) or
// "sparql" (query service). The cache key is derived from kind and params
// only, so endpoint overrides keep hitting the same cache entries.
struct KbRequest {
  std::string kind;
  std::map<std::string, std::string> params;

  nlohmann::json ToJson() const;
  std::string Digest() const;
};

struct KbClientOptions {
  std::string search_url = "https://www.wikidata.org/w/api.php";
  std::string sparql_url = "https://query.wikidata.org/sparql";
  std::chrono::milliseconds timeout{30000};
  // Minimum spacing between consecutive network requests.
  std::chrono::milliseconds min_interval{250};
  std::filesystem::path cache_dir;
  bool offline = false;
  int search_limit = 10;
  // Reverse-P31 lookups fetch up to this many members before any sorting or
  // truncation, so cache entries do not depend on the caller's limit.
  int expand_fetch_cap = 2000;
  std::string user_agent = "nerstress/1.0 (entity dictionary builder)";

  // Points both endpoints at `base` (".../w/api.php" and ".../sparql").
  void SetEndpointBase(const std::string& base);
};

// Performs one HTTP GET and returns the body. Throws KbError.
using KbTransport =
    std::function<std::string(const std::string& url, const KbRequest& request,
                              const KbClientOptions& options)>;

KbTransport HttpKbTransport();

// Fronts the Wikidata entity-search and SPARQL endpoints with an on-disk
// response cache. Every response is stored as
// `<cache_dir>/<request digest>.json` holding {"request", "response"}.
// In offline mode the transport is never invoked; a cache miss throws
// FixtureMissing.
//
// Thread-safe. Network requests are serialized and rate limited; cache reads
// run concurrently.
class KbClient {
 public:
  explicit KbClient(KbClientOptions options, KbTransport transport = nullptr);

  const KbClientOptions& options() const { return options_; }

  nlohmann::json Fetch(const KbRequest& request);

  // Writes a response into the cache as if it had been fetched.
  void Store(const KbRequest& request, const nlohmann::json& response) const;

  std::vector<EntityRecord> Search(const std::string& surface);
  std::vector<FineClass> InstanceOf(const std::string& qid);
  // Members of `class_qid`, in response order, without labels equal to their
  // QID (items with no English label).
  std::vector<EntityRecord> Instances(const std::string& class_qid);

  KbRequest SearchRequest(const std::string& surface) const;
  KbRequest InstanceOfRequest(const std::string& qid) const;
  KbRequest InstancesRequest(const std::string& class_qid) const;

  // Number of transport invocations so far.
  std::size_t network_requests() const { return network_requests_.load(); }

 private:
  std::filesystem::path CachePath(const KbRequest& request) const;

  KbClientOptions options_;
  KbTransport transport_;
  std::mutex network_mu_;
  std::chrono::steady_clock::time_point last_request_{};
  std::atomic<std::size_t> network_requests_{0};
};

// Fills a cache with responses in the real wire formats from a compact
// description:
//   {"search":      {"<surface>": [{"id","label","aliases"}]},
//    "instance_of": {"<qid>": [{"qid","label"}]},
//    "instances":   {"<class qid>": [{"qid","label"}]}}
// Used to author offline fixtures.
void SeedKbCache(const nlohmann::json& description, const KbClient& client);

}  // namespace nerstress

#endif  // NERSTRESS_KB_CLIENT_H_
