// Copyright 2026 The plap Authors
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
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace plap::csv {

/// Shortest round-trippable decimal form ("%.17g"); identical across runs.
[[nodiscard]] std::string num(double v);

/// "# seed=<seed>" provenance line written at the top of every artifact.
void write_seed_comment(std::ostream& os, std::uint64_t seed);

void write_row(std::ostream& os, const std::vector<std::string>& cells);

/// Opens path for writing, creating parent directories. Throws std::runtime_error on failure.
[[nodiscard]] std::ofstream open_output(const std::filesystem::path& path);

/// Splits a CSV line on commas, trimming surrounding whitespace.
[[nodiscard]] std::vector<std::string> split(std::string_view line);

} // namespace plap::csv
