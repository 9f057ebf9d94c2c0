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

#ifndef NERSTRESS_TEXT_UTIL_H_
#define NERSTRESS_TEXT_UTIL_H_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace nerstress {

// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view text);

// Splits on '\n', stripping a trailing '\r' from each line.
std::vector<std::string_view> SplitLines(std::string_view text);

std::string_view Trim(std::string_view text);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// ASCII-only case folding; bytes >= 0x80 pass through unchanged.
std::string AsciiLower(std::string_view text);
bool EqualsIgnoreCase(std::string_view a, std::string_view b);

bool HasWhitespace(std::string_view text);

// True when every byte is ASCII punctuation (and the string is non-empty).
bool IsPunctuation(std::string_view text);

// True when the first byte is an ASCII letter or digit, or starts a
// multi-byte UTF-8 sequence.
bool StartsWordCharacter(std::string_view text);

// Parses a word-list file: one entry per line, '#' comments and blank lines
// skipped, entries trimmed.
std::vector<std::string> ParseWordList(std::string_view text);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view content);

// Runs fn(i) for i in [0, n) on up to `workers` threads. Callers write into
// pre-sized per-index slots, so output order never depends on scheduling.
// The first exception thrown by any task is rethrown after all threads join.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& fn);

}  // namespace nerstress

#endif  // NERSTRESS_TEXT_UTIL_H_
