// Copyright 2026 The ttq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TTQ_ERROR_H_
#define TTQ_ERROR_H_

#include <stdexcept>
#include <string>

namespace ttq {

// Base class for all harness errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input files. The message carries file and field.
class LoadError : public Error {
 public:
  LoadError(const std::string& location, const std::string& detail)
      : Error(location + ": " + detail), location_(location) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

// Arithmetic or precondition violation while evaluating a criterion.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// A fixture script failed to execute on a fresh database.
class ProvisionError : public Error {
 public:
  ProvisionError(const std::string& statement, const std::string& detail)
      : Error("provisioning failed at `" + statement + "`: " + detail),
        statement_(statement) {}
  const std::string& statement() const { return statement_; }

 private:
  std::string statement_;
};

// Bad command line or configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace ttq

#endif  // TTQ_ERROR_H_
