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
#include <iosfwd>
#include <string>
#include <vector>

namespace plap {

struct SuiteOptions
{
    std::filesystem::path out_dir = "suite_out";
    std::uint64_t seed = 1;
    int threads = 1;
    /// Criterion ids to run; empty runs all twelve.
    std::vector<int> only;
};

struct CriterionResult
{
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

[[nodiscard]] std::string criterion_name(int id);

/// Runs one criterion (1..11) and writes its CSV artifacts into options.out_dir.
[[nodiscard]] CriterionResult run_criterion(int id, const SuiteOptions& options);

/// Runs the selected criteria in order. Criterion 12 reruns the others into a
/// scratch directory with the same seed and compares every CSV byte for byte.
[[nodiscard]] std::vector<CriterionResult> run_suite(const SuiteOptions& options);

/// id,name,pass,detail
void write_summary_csv(std::ostream& os, const std::vector<CriterionResult>& results);

} // namespace plap
