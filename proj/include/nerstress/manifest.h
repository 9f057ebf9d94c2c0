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

#ifndef NERSTRESS_MANIFEST_H_
#define NERSTRESS_MANIFEST_H_

#include <map>
#include <string>

#include "json.hpp"

namespace nerstress {

inline constexpr std::string_view kToolName = "nerstress";
inline constexpr std::string_view kToolVersion = "1.0.0";

// Run record written next to every output: tool version, resolved config,
// seeds, and digests of inputs and outputs.
struct Manifest {
  std::string subcommand;
  nlohmann::json config = nlohmann::json::object();
  // Text of the resolved config file; feed it back with --config to rerun.
  std::string config_file;
  nlohmann::json seeds = nlohmann::json::object();
  std::map<std::string, std::string> inputs;   // role -> path
  std::map<std::string, std::string> outputs;  // role -> path

  // Digests every listed file that exists.
  nlohmann::json ToJson() const;
  void Write(const std::string& path) const;
};

}  // namespace nerstress

#endif  // NERSTRESS_MANIFEST_H_
