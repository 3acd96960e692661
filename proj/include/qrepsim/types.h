// Copyright 2026 The qrepsim Authors
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

#ifndef QREPSIM_TYPES_H_
#define QREPSIM_TYPES_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qrepsim {

using NodeId = std::uint32_t;
using ObjectId = std::uint32_t;
using MessageId = std::uint64_t;

// Simulated time in integer milliseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kMillisPerSecond = 1000;

inline SimTime SecondsToSimTime(double seconds) {
  return static_cast<SimTime>(seconds * kMillisPerSecond + 0.5);
}

// Invalid or inconsistent configuration. Maps to exit status 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing run artifacts failed. Maps to exit status 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// No up node could host an object during initial placement.
class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Site selection was requested on an empty Q-table.
class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qrepsim

#endif  // QREPSIM_TYPES_H_
