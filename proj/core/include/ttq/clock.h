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

#ifndef TTQ_CLOCK_H_
#define TTQ_CLOCK_H_

#include <string>

namespace ttq {

class Clock {
 public:
  virtual ~Clock() = default;
  // UTC, ISO 8601 with milliseconds.
  virtual std::string Now() const = 0;
};

class SystemClock : public Clock {
 public:
  std::string Now() const override;
};

// Always returns the same instant; used for byte-stable reports.
class FixedClock : public Clock {
 public:
  explicit FixedClock(std::string instant = "2000-01-01T00:00:00.000Z")
      : instant_(std::move(instant)) {}
  std::string Now() const override { return instant_; }

 private:
  std::string instant_;
};

}  // namespace ttq

#endif  // TTQ_CLOCK_H_
