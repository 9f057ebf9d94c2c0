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

#ifndef NERSTRESS_ERRORS_H_
#define NERSTRESS_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nerstress {

// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed column file. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Invalid BIO label or transition. `line()` is 1-based, 0 when the tags did
// not come from a file.
class TagError : public Error {
 public:
  TagError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what
                        : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Inconsistent inputs handed to an evaluation or transform.
class InputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Knowledge-base transport failure (network, timeout, HTTP status, bad body).
class KbError : public Error {
 public:
  using Error::Error;
};

// Offline knowledge-base lookup with no cached response.
class FixtureMissing : public Error {
 public:
  using Error::Error;
};

// Fill-mask provider failure or protocol violation.
class ProviderError : public Error {
 public:
  using Error::Error;
};

// More distinct samples requested than the source can produce.
class ExhaustedError : public Error {
 public:
  using Error::Error;
};

}  // namespace nerstress

#endif  // NERSTRESS_ERRORS_H_
