/*
 * Copyright 2026 The gcmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace gcmc {

/// Base class for every error raised by the compiler. `kind()` is a short
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Malformed input text. Carries the 1-based line (0 when unknown) and the
/// offending field name, if any.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& field,
             const std::string& message)
      : Error("parse", format(source, line, field, message)),
        line_(line),
        field_(field) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& source, int line,
                            const std::string& field,
                            const std::string& message) {
    std::string out = source;
    if (line > 0) out += ":" + std::to_string(line);
    if (!field.empty()) out += ": field '" + field + "'";
    return out + ": " + message;
  }

  int line_;
  std::string field_;
};

/// A loaded model or requirement violates a documented invariant.
class InvariantError : public Error {
 public:
  InvariantError(std::string rule, const std::string& message)
      : Error("invariant", message), rule_(std::move(rule)) {}

  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

class UnknownVariantError : public Error {
 public:
  explicit UnknownVariantError(const std::string& message)
      : Error("unknown-variant", message) {}
};

class InvalidConfigError : public Error {
 public:
  explicit InvalidConfigError(const std::string& message)
      : Error("invalid-config", message) {}
};

class WrongVariantError : public Error {
 public:
  explicit WrongVariantError(const std::string& message)
      : Error("wrong-variant", message) {}
};

class ConnectivityError : public Error {
 public:
  explicit ConnectivityError(const std::string& message)
      : Error("connectivity", message) {}
};

/// A lifetime bin no technology can serve.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& message)
      : Error("infeasible", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

}  // namespace gcmc
