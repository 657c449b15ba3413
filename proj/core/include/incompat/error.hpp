// Copyright 2026 The incompat Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace incompat {

/// Coarse failure classes. The CLI maps them onto process exit codes, so
/// callers that script table reproduction can tell "skipped" from "wrong".
enum class ErrorKind {
  kInvalidInput,
  kBudgetExceeded,
  kNumericalFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ErrorKind::kInvalidInput, what) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what)
      : Error(ErrorKind::kBudgetExceeded, what) {}
};

class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& what)
      : Error(ErrorKind::kNumericalFailure, what) {}
};

/// Raised when every measurement is proportional to the identity, so the
/// white-noise robustness is undefined (the measurements are noise-invariant).
class ZeroDenominator : public InvalidInput {
 public:
  explicit ZeroDenominator(const std::string& what) : InvalidInput(what) {}
};

/// Raised when an educated-guess family cannot be normalized into a POVM.
class InvalidParent : public NumericalFailure {
 public:
  explicit InvalidParent(const std::string& what) : NumericalFailure(what) {}
};

}  // namespace incompat
