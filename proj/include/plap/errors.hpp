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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

/// Malformed or invalid input (configuration files, CSV data, model data).
class ConfigError : public std::runtime_error
{
  public:
    explicit ConfigError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what)
        , line_(line)
    {
    }

    /// 1-based source line, 0 when the error is not tied to a line.
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// A numerical procedure failed (Newton divergence, NaN, singular pivot).
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// An iterative method stopped without meeting its tolerance.
/// Carries the last iterate so callers can inspect or restart from it.
class ConvergenceError : public NumericalError
{
  public:
    ConvergenceError(const std::string& what, double last_residual, std::vector<double> last_iterate)
        : NumericalError(what)
        , last_residual_(last_residual)
        , last_iterate_(std::move(last_iterate))
    {
    }

    [[nodiscard]] double last_residual() const noexcept { return last_residual_; }
    [[nodiscard]] const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

  private:
    double last_residual_;
    std::vector<double> last_iterate_;
};

} // namespace plap
