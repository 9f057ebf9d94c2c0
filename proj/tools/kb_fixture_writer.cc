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

// Writes knowledge-base cache entries from a compact JSON description, in the
// same wire formats the live endpoints return.
//
//   kb_fixture_writer <description.json> <cache_dir>

#include <iostream>

#include "json.hpp"
#include "nerstress/errors.h"
#include "nerstress/kb_client.h"
#include "nerstress/text_util.h"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: " << argv[0] << " <description.json> <cache_dir>\n";
    return 1;
  }
  try {
    const auto description = nlohmann::json::parse(nerstress::ReadFile(argv[1]));
    nerstress::KbClientOptions options;
    options.cache_dir = argv[2];
    options.offline = true;
    nerstress::KbClient client(options);
    nerstress::SeedKbCache(description, client);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
