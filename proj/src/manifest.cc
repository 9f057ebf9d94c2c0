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

#include "nerstress/manifest.h"

#include <filesystem>

#include "nerstress/random.h"
#include "nerstress/text_util.h"

namespace nerstress {

using nlohmann::json;

namespace {

json DigestFiles(const std::map<std::string, std::string>& files) {
  json out = json::object();
  for (const auto& [role, path] : files) {
    json entry = {{"path", path}};
    if (path != "-" && std::filesystem::is_regular_file(path)) {
      entry["sha256"] = Sha256Hex(ReadFile(path));
    }
    out[role] = entry;
  }
  return out;
}

}  // namespace

json Manifest::ToJson() const {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"subcommand", subcommand},
          {"config", config},
          {"config_digest", Sha256Hex(config.dump())},
          {"config_file", config_file},
          {"seeds", seeds},
          {"inputs", DigestFiles(inputs)},
          {"outputs", DigestFiles(outputs)}};
}

void Manifest::Write(const std::string& path) const {
  WriteFile(path, ToJson().dump(2) + "\n");
}

}  // namespace nerstress
