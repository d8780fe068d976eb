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
#include "plap/config.hpp"

#include "plap/csv.hpp"
#include "plap/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace plap {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::size_t line, std::string_view key)
{
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError("malformed number '" + std::string(text) + "' for key '" + std::string(key) + "'", line);
    return v;
}

long long parse_integer(std::string_view text, std::size_t line, std::string_view key)
{
    text = trim(text);
    long long v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw ConfigError("malformed integer '" + std::string(text) + "' for key '" + std::string(key) + "'", line);
    return v;
}

std::vector<std::string_view> split_list(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!piece.empty())
            out.push_back(piece);
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return out;
}

class ExpressionParser
{
  public:
    ExpressionParser(std::string_view text, std::size_t line)
        : line_(line)
    {
        for (char c : text)
            if (c != ' ' && c != '\t')
                s_.push_back(c);
    }

    void run(std::vector<Expression::SineTerm>& sines, std::vector<Expression::MonomialTerm>& monomials)
    {
        if (s_.empty())
            fail("empty expression");
        double sign = 1.0;
        if (accept('-'))
            sign = -1.0;
        else
            accept('+');
        for (;;) {
            term(sign, sines, monomials);
            if (pos_ == s_.size())
                return;
            if (accept('+'))
                sign = 1.0;
            else if (accept('-'))
                sign = -1.0;
            else
                fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        }
    }

  private:
    std::string s_;
    std::size_t pos_ = 0;
    std::size_t line_;

    [[noreturn]] void fail(const std::string& why) const
    {
        throw ConfigError("bad expression at column " + std::to_string(pos_ + 1) + ": " + why, line_);
    }

    bool accept(char c)
    {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool accept(std::string_view word)
    {
        if (std::string_view(s_).substr(pos_).starts_with(word)) {
            pos_ += word.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view word)
    {
        if (!accept(word))
            fail("expected '" + std::string(word) + "'");
    }

    bool at_number() const { return pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'); }

    double number()
    {
        double v = 0.0;
        const auto* begin = s_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
        if (ec != std::errc{} || !std::isfinite(v))
            fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return v;
    }

    int small_integer(int min_value)
    {
        const std::size_t start = pos_;
        const double v = number();
        if (v != std::floor(v) || v < min_value || v > 1000) {
            pos_ = start;
            fail("expected an integer >= " + std::to_string(min_value));
        }
        return static_cast<int>(v);
    }

    void term(double sign, std::vector<Expression::SineTerm>& sines, std::vector<Expression::MonomialTerm>& monomials)
    {
        double coeff = sign;
        if (at_number()) {
            coeff *= number();
            if (!accept('*')) {
                monomials.push_back({coeff, 0});
                return;
            }
        }
        if (accept("sin(")) {
            int k = 1;
            if (at_number()) {
                k = small_integer(1);
                expect("*");
            }
            expect("pi*x)");
            sines.push_back({coeff, k});
        } else if (accept('x')) {
            int m = 1;
            if (accept('^'))
                m = small_integer(0);
            monomials.push_back({coeff, m});
        } else {
            fail("expected a number, 'sin(' or 'x'");
        }
    }
};

const std::vector<std::string_view>& known_keys()
{
    static const std::vector<std::string_view> keys = {
        "p",      "poly_coeffs", "power_terms",     "g_expression",  "g_samples",     "grid_n",
        "dt",     "t_end",       "newton_tol",      "newton_max_iter", "u0_expression", "v0_expression",
        "record_stride"};
    return keys;
}

std::string join_numbers(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
        out += (i ? ", " : "") + csv::num(values[i]);
    return out;
}

} // namespace

Expression Expression::parse(std::string_view text, std::size_t line)
{
    Expression e;
    e.source_ = std::string(trim(text));
    ExpressionParser(text, line).run(e.sines_, e.monomials_);
    return e;
}

double Expression::operator()(double x) const noexcept
{
    double sum = 0.0;
    for (const auto& t : sines_)
        sum += t.coeff * std::sin(t.k * std::numbers::pi * x);
    for (const auto& t : monomials_)
        sum += t.coeff * std::pow(x, t.m);
    return sum;
}

GridFunction Expression::sample(const Grid& grid) const
{
    return GridFunction::sample(grid, [this](double x) { return (*this)(x); });
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const
{
    const auto& nl = model.nonlinearity;
    std::string power;
    for (std::size_t i = 0; i < nl.power_terms().size(); ++i)
        power += (i ? ", " : "") + csv::num(nl.power_terms()[i].coeff) + ":" + csv::num(nl.power_terms()[i].exponent);

    std::vector<std::pair<std::string, std::string>> out = {
        {"p", csv::num(model.p)},
        {"poly_coeffs", join_numbers(nl.poly_coeffs())},
        {"power_terms", power},
    };
    if (!g_samples.empty())
        out.emplace_back("g_samples", g_samples);
    else
        out.emplace_back("g_expression", g_expression ? g_expression->source() : "0");
    out.emplace_back("grid_n", std::to_string(model.grid_n));
    out.emplace_back("dt", csv::num(model.dt));
    out.emplace_back("t_end", csv::num(model.t_end));
    out.emplace_back("newton_tol", csv::num(model.newton_tol));
    out.emplace_back("newton_max_iter", std::to_string(model.newton_max_iter));
    out.emplace_back("u0_expression", u0_expression ? u0_expression->source() : "0");
    out.emplace_back("v0_expression", v0_expression ? v0_expression->source() : "0");
    out.emplace_back("record_stride", std::to_string(record_stride));
    return out;
}

RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir, bool allow_p_le_2)
{
    std::map<std::string, std::pair<std::string, std::size_t>, std::less<>> entries;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto nl = text.find('\n', start);
        auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value'", line_no);
        const auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = trim(value.substr(1, value.size() - 2));
        if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
            throw ConfigError("unknown key '" + std::string(key) + "'", line_no);
        if (entries.count(key))
            throw ConfigError("duplicate key '" + std::string(key) + "'", line_no);
        entries.emplace(std::string(key), std::make_pair(std::string(value), line_no));
    }

    RunConfig rc;
    auto& m = rc.model;
    const auto get = [&](std::string_view key) -> const std::pair<std::string, std::size_t>* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    if (const auto* e = get("p")) {
        m.p = parse_double(e->first, e->second, "p");
        if (!(m.p > 2.0) && !allow_p_le_2)
            throw ConfigError("p must be > 2, got " + e->first, e->second);
        if (!(m.p > 1.0))
            throw ConfigError("p must be > 1, got " + e->first, e->second);
    }

    const auto* poly = get("poly_coeffs");
    const auto* power = get("power_terms");
    if (poly || power) {
        std::vector<double> coeffs;
        std::vector<PowerTerm> terms;
        if (poly)
            for (auto piece : split_list(poly->first))
                coeffs.push_back(parse_double(piece, poly->second, "poly_coeffs"));
        if (power) {
            for (auto piece : split_list(power->first)) {
                const auto colon = piece.find(':');
                if (colon == std::string_view::npos)
                    throw ConfigError("power_terms entries must be 'coeff:exponent'", power->second);
                const double b = parse_double(piece.substr(0, colon), power->second, "power_terms");
                const double q = parse_double(piece.substr(colon + 1), power->second, "power_terms");
                if (!(q > 1.0))
                    throw ConfigError("power_terms exponents must be > 1", power->second);
                terms.push_back({b, q});
            }
        }
        m.nonlinearity = Nonlinearity(std::move(coeffs), std::move(terms));
    }

    if (const auto* e = get("grid_n")) {
        const auto n = parse_integer(e->first, e->second, "grid_n");
        if (n < 2 || n > 1'000'000)
            throw ConfigError("grid_n must be in [2, 1000000]", e->second);
        m.grid_n = static_cast<std::size_t>(n);
    }
    if (const auto* e = get("dt")) {
        m.dt = parse_double(e->first, e->second, "dt");
        if (!(m.dt > 0.0))
            throw ConfigError("dt must be positive", e->second);
    }
    if (const auto* e = get("t_end")) {
        m.t_end = parse_double(e->first, e->second, "t_end");
        if (!(m.t_end >= m.dt))
            throw ConfigError("t_end must be >= dt", e->second);
    }
    if (const auto* e = get("newton_tol")) {
        m.newton_tol = parse_double(e->first, e->second, "newton_tol");
        if (!(m.newton_tol > 0.0))
            throw ConfigError("newton_tol must be positive", e->second);
    }
    if (const auto* e = get("newton_max_iter")) {
        const auto it = parse_integer(e->first, e->second, "newton_max_iter");
        if (it < 1 || it > 10000)
            throw ConfigError("newton_max_iter must be in [1, 10000]", e->second);
        m.newton_max_iter = static_cast<int>(it);
    }
    if (const auto* e = get("record_stride")) {
        const auto s = parse_integer(e->first, e->second, "record_stride");
        if (s < 1)
            throw ConfigError("record_stride must be >= 1", e->second);
        rc.record_stride = static_cast<std::size_t>(s);
    }

    const Grid grid(m.grid_n);
    const auto* g_expr = get("g_expression");
    const auto* g_file = get("g_samples");
    if (g_expr && g_file)
        throw ConfigError("give either g_expression or g_samples, not both", g_file->second);
    if (g_expr) {
        rc.g_expression = Expression::parse(g_expr->first, g_expr->second);
        m.forcing = rc.g_expression->sample(grid);
    } else if (g_file) {
        rc.g_samples = g_file->first;
        std::filesystem::path path(g_file->first);
        if (path.is_relative() && !base_dir.empty())
            path = base_dir / path;
        try {
            m.forcing = read_grid_function_csv(path.string(), grid);
        } catch (const ConfigError& err) {
            throw ConfigError("g_samples: " + std::string(err.what()), g_file->second);
        }
    } else {
        m.forcing = GridFunction(grid);
    }
    if (const auto* e = get("u0_expression"))
        rc.u0_expression = Expression::parse(e->first, e->second);
    if (const auto* e = get("v0_expression"))
        rc.v0_expression = Expression::parse(e->first, e->second);

    m.validate(allow_p_le_2);
    return rc;
}

RunConfig parse_config(const std::filesystem::path& path, bool allow_p_le_2)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.parent_path(), allow_p_le_2);
}

} // namespace plap
