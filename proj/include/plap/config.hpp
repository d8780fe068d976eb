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

#include "plap/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plap {

/// Closed expression grammar for forcing and initial data:
///   expr := term (('+' | '-') term)*
///   term := [number '*'] ( 'sin(' [k '*'] 'pi*x)' | 'x' ['^' m] | number )
/// where k is a positive integer and m a non-negative integer.
class Expression
{
  public:
    struct SineTerm
    {
        double coeff;
        int k;
    };
    struct MonomialTerm
    {
        double coeff;
        int m;
    };

    static Expression parse(std::string_view text, std::size_t line = 0);

    [[nodiscard]] double operator()(double x) const noexcept;
    [[nodiscard]] GridFunction sample(const Grid& grid) const;
    [[nodiscard]] const std::string& source() const noexcept { return source_; }
    [[nodiscard]] const std::vector<SineTerm>& sine_terms() const noexcept { return sines_; }
    [[nodiscard]] const std::vector<MonomialTerm>& monomial_terms() const noexcept { return monomials_; }

  private:
    std::string source_;
    std::vector<SineTerm> sines_;
    std::vector<MonomialTerm> monomials_;
};

/// Parsed configuration file: the model plus run options.
struct RunConfig
{
    ModelConfig model;
    std::optional<Expression> g_expression;
    std::string g_samples;
    std::optional<Expression> u0_expression;
    std::optional<Expression> v0_expression;
    std::size_t record_stride = 1;

    /// Every key with its effective value, in a fixed order.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys, repeated
/// keys, malformed values and p <= 2 (unless allow_p_le_2) raise ConfigError
/// with the offending line. g_samples paths are resolved against base_dir.
[[nodiscard]] RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir = {},
                                          bool allow_p_le_2 = false);
[[nodiscard]] RunConfig parse_config(const std::filesystem::path& path, bool allow_p_le_2 = false);

} // namespace plap
