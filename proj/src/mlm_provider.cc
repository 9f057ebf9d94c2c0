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

#include "nerstress/mlm_provider.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "httplib.h"
#include "nerstress/errors.h"
#include "nerstress/random.h"
#include "nerstress/resources.h"
#include "nerstress/text_util.h"

namespace nerstress {

using nlohmann::json;

json FillRequestJson(const std::vector<std::string>& tokens,
                     std::size_t mask_index, std::size_t top_k) {
  return {{"tokens", tokens}, {"mask_index", mask_index}, {"top_k", top_k}};
}

void ValidateFillRequest(const json& request) {
  if (!request.is_object()) throw ProviderError("request must be an object");
  if (!request.contains("tokens") || !request["tokens"].is_array() ||
      request["tokens"].empty()) {
    throw ProviderError("request.tokens must be a non-empty array");
  }
  std::size_t masks = 0;
  for (const json& t : request["tokens"]) {
    if (!t.is_string()) throw ProviderError("request.tokens must hold strings");
    if (t.get<std::string>() == kMaskToken) ++masks;
  }
  if (!request.contains("mask_index") || !request["mask_index"].is_number_unsigned()) {
    throw ProviderError("request.mask_index must be a non-negative integer");
  }
  const auto index = request["mask_index"].get<std::size_t>();
  if (index >= request["tokens"].size() ||
      request["tokens"][index].get<std::string>() != kMaskToken || masks != 1) {
    throw ProviderError("request must carry exactly one mask, at mask_index");
  }
  if (!request.contains("top_k") || !request["top_k"].is_number_unsigned() ||
      request["top_k"].get<std::size_t>() == 0) {
    throw ProviderError("request.top_k must be a positive integer");
  }
}

std::vector<MlmCandidate> ParseFillResponse(const json& response,
                                            std::size_t top_k) {
  if (!response.is_object() || !response.contains("candidates") ||
      !response["candidates"].is_array()) {
    throw ProviderError("response.candidates must be an array");
  }
  const json& list = response["candidates"];
  if (list.size() > top_k) {
    throw ProviderError("response has " + std::to_string(list.size()) +
                        " candidates, more than top_k=" + std::to_string(top_k));
  }
  std::vector<MlmCandidate> out;
  std::unordered_set<std::string> seen;
  for (const json& c : list) {
    if (!c.is_object() || !c.contains("token") || !c["token"].is_string() ||
        !c.contains("score") || !c["score"].is_number()) {
      throw ProviderError("candidate must be {token: string, score: number}");
    }
    MlmCandidate cand{c["token"].get<std::string>(), c["score"].get<double>()};
    if (cand.token.empty()) throw ProviderError("empty candidate token");
    if (!seen.insert(cand.token).second) {
      throw ProviderError("duplicate candidate '" + cand.token + "'");
    }
    if (!out.empty() && cand.score > out.back().score) {
      throw ProviderError("candidate scores are not non-increasing");
    }
    out.push_back(std::move(cand));
  }
  return out;
}

json FillResponseJson(const std::vector<MlmCandidate>& candidates) {
  json list = json::array();
  for (const MlmCandidate& c : candidates) {
    list.push_back({{"token", c.token}, {"score", c.score}});
  }
  return {{"candidates", list}};
}

// ---- StubMlmProvider --------------------------------------------------------

StubMlmProvider::StubMlmProvider()
    : StubMlmProvider(ParseWordList(resources::k_stub_lexicon_v1_txt)) {}

StubMlmProvider::StubMlmProvider(std::vector<std::string> table) {
  std::unordered_set<std::string> seen;
  for (std::string& t : table) {
    if (!t.empty() && t != kMaskToken && seen.insert(t).second) {
      table_.push_back(std::move(t));
    }
  }
  if (table_.empty()) throw ConfigError("stub provider table is empty");
}

StubMlmProvider StubMlmProvider::FromFile(const std::string& path) {
  return StubMlmProvider(ParseWordList(ReadFile(path)));
}

std::vector<MlmCandidate> StubMlmProvider::Fill(
    const std::vector<std::string>& tokens, std::size_t mask_index,
    std::size_t top_k) {
  ValidateFillRequest(FillRequestJson(tokens, mask_index, top_k));
  const std::uint64_t context =
      DeriveSeed(Fnv1a64(Join(tokens, "\x1f")), {std::to_string(mask_index)});
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(table_.size());
  for (std::size_t i = 0; i < table_.size(); ++i) {
    keyed[i] = {DeriveSeed(context, {table_[i]}), i};
  }
  const std::size_t n = std::min(top_k, table_.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(n),
                    keyed.end());
  std::vector<MlmCandidate> out;
  out.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    out.push_back({table_[keyed[r].second], 1.0 / static_cast<double>(r + 1)});
  }
  if (recording_) {
    std::lock_guard<std::mutex> lock(mu_);
    calls_.push_back({tokens, mask_index, top_k, out});
  }
  return out;
}

std::vector<StubMlmProvider::Call> StubMlmProvider::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

// ---- HttpMlmProvider --------------------------------------------------------

namespace {

httplib::Client MakeClient(const std::string& base_url,
                           std::chrono::milliseconds timeout) {
  httplib::Client client(base_url);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto micros =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  return client;
}

}  // namespace

HttpMlmProvider::HttpMlmProvider(std::string base_url,
                                 std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::vector<MlmCandidate> HttpMlmProvider::Fill(
    const std::vector<std::string>& tokens, std::size_t mask_index,
    std::size_t top_k) {
  const json request = FillRequestJson(tokens, mask_index, top_k);
  ValidateFillRequest(request);
  httplib::Client client = MakeClient(base_url_, timeout_);
  auto result = client.Post("/fill", request.dump(), "application/json");
  if (!result) {
    throw ProviderError("POST " + base_url_ + "/fill failed: " +
                        httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw ProviderError("POST " + base_url_ + "/fill returned HTTP " +
                        std::to_string(result->status));
  }
  json body;
  try {
    body = json::parse(result->body);
  } catch (const json::exception& e) {
    throw ProviderError(std::string("fill response is not JSON: ") + e.what());
  }
  return ParseFillResponse(body, top_k);
}

json HttpMlmProvider::Health() const {
  httplib::Client client = MakeClient(base_url_, timeout_);
  auto result = client.Get("/health");
  if (!result) {
    throw ProviderError("GET " + base_url_ + "/health failed: " +
                        httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    throw ProviderError("GET " + base_url_ + "/health returned HTTP " +
                        std::to_string(result->status));
  }
  try {
    return json::parse(result->body);
  } catch (const json::exception&) {
    return json::object();
  }
}

}  // namespace nerstress
