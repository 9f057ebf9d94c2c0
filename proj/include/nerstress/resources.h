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

#ifndef NERSTRESS_RESOURCES_H_
#define NERSTRESS_RESOURCES_H_

#include <string_view>

// Versioned data files from data/, embedded at build time.
namespace nerstress::resources {

extern const std::string_view k_stopwords_v1_txt;
extern const std::string_view k_pos_lexicon_v1_tsv;
extern const std::string_view k_stub_lexicon_v1_txt;

}  // namespace nerstress::resources

#endif  // NERSTRESS_RESOURCES_H_
