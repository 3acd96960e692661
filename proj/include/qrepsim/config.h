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

#ifndef QREPSIM_CONFIG_H_
#define QREPSIM_CONFIG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qrepsim/sim.h"

namespace qrepsim {

// "section.key" -> value. Applied after the file, so overrides win.
using ConfigOverrides = std::map<std::string, std::string>;

// Parses INI-style text with [sim], [qrep] and [topology] sections. Missing
// keys keep their defaults. Throws ConfigError on unknown sections or keys
// (listing the valid ones), malformed values, or invariant violations.
ExperimentConfig ParseConfigText(std::string_view text,
                                 const ConfigOverrides& overrides = {});

// Throws IoError if the file cannot be read.
ExperimentConfig ParseConfigFile(const std::filesystem::path& path,
                                 const ConfigOverrides& overrides = {});

// Canonical dump of every key; ParseConfigText(ToIni(c)) reproduces c.
std::string ToIni(const ExperimentConfig& config);

// Flat "section.key" -> canonical value view of a config.
std::map<std::string, std::string> ConfigValues(const ExperimentConfig& config);

std::vector<std::string> ValidKeys(std::string_view section);

}  // namespace qrepsim

#endif  // QREPSIM_CONFIG_H_
