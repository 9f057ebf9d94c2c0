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

#ifndef NERSTRESS_MLM_PROVIDER_H_
#define NERSTRESS_MLM_PROVIDER_H_

#include <chrono>
#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace nerstress {

inline constexpr std::string_view kMaskToken = "[MASK]";

struct MlmCandidate {
  std::string token;
  double score = 0.0;

  bool operator==(const MlmCandidate&) const = default;
};

// Fill-mask capability. `tokens[mask_index]` holds kMaskToken; the result is
// ranked best first, has at most `top_k` entries, non-increasing scores and
// no duplicate tokens. Implementations must be safe to call concurrently.
// Failures throw ProviderError.
class MlmProvider {
 public:
  virtual ~MlmProvider() = default;
  virtual std::vector<MlmCandidate> Fill(const std::vector<std::string>& tokens,
                                         std::size_t mask_index,
                                         std::size_t top_k) = 0;
};

// Wire format helpers for POST /fill.
nlohmann::json FillRequestJson(const std::vector<std::string>& tokens,
                               std::size_t mask_index, std::size_t top_k);
// Checks a request body; throws ProviderError.
void ValidateFillRequest(const nlohmann::json& request);
// Parses and validates a response body against the request's top_k; throws
// ProviderError on any schema or ordering violation.
std::vector<MlmCandidate> ParseFillResponse(const nlohmann::json& response,
                                            std::size_t top_k);
nlohmann::json FillResponseJson(const std::vector<MlmCandidate>& candidates);

// In-process provider over a fixed token table. Each request ranks the table
// by a hash of (context, mask index, token), so the answer depends on every
// other token in the request. Scores are 1 / (rank + 1).
class StubMlmProvider : public MlmProvider {
 public:
  struct Call {
    std::vector<std::string> tokens;
    std::size_t mask_index;
    std::size_t top_k;
    std::vector<MlmCandidate> response;
  };

  // The built-in table (stub_lexicon_v1).
  StubMlmProvider();
  explicit StubMlmProvider(std::vector<std::string> table);
  // One token per line; '#' comments.
  static StubMlmProvider FromFile(const std::string& path);

  std::vector<MlmCandidate> Fill(const std::vector<std::string>& tokens,
                                 std::size_t mask_index,
                                 std::size_t top_k) override;

  // Keeps every request/response pair when enabled.
  void set_recording(bool on) { recording_ = on; }
  std::vector<Call> calls() const;
  std::size_t table_size() const { return table_.size(); }

 private:
  std::vector<std::string> table_;
  bool recording_ = false;
  mutable std::mutex mu_;
  std::vector<Call> calls_;
};

// Client for a fill-mask service speaking the JSON protocol over HTTP.
class HttpMlmProvider : public MlmProvider {
 public:
  explicit HttpMlmProvider(std::string base_url,
                           std::chrono::milliseconds timeout = std::chrono::seconds(30));

  std::vector<MlmCandidate> Fill(const std::vector<std::string>& tokens,
                                 std::size_t mask_index,
                                 std::size_t top_k) override;

  // GET /health; throws ProviderError unless the service answers 200.
  nlohmann::json Health() const;

 private:
  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

}  // namespace nerstress

#endif  // NERSTRESS_MLM_PROVIDER_H_
