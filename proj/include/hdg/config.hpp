#pragma once

#include "hdg/infsup.hpp"
#include "hdg/layout.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/study.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hdg
{

/// Study configuration, line-oriented `key = value` with sections:
///
///   [problem]  case, equation, k, tau, tau_n, tau_t, beta_x, beta_y, reaction, nu
///   [mesh]     generator (structured | lshape), levels (comma list)
///   [checks]   compare_monolithic, inf_sup, error_bounds, inf_sup_method,
///              inf_sup_max_dim, rate_fields, rate_min, rate_max, inf_sup_ratio_min
///   [output]   directory, prefix, plot_data
///
/// `#` and `;` start comments. Unknown sections and keys are rejected.
struct StudyConfig
{
    std::string case_name = "poisson_smooth";
    Equation equation = Equation::Poisson;
    int k = 1;
    double tau = 1.0;
    double tau_n = 1.0;
    double tau_t = 1.0;
    CaseParameters params;

    Domain generator = Domain::UnitSquare;
    std::vector<int> levels{4, 8, 16, 32};

    bool compare_monolithic = false;
    bool inf_sup = false;
    bool error_bounds = false;
    InfSupMethod inf_sup_method = InfSupMethod::Auto;
    int inf_sup_max_dim = dense_inf_sup_cap;
    std::vector<std::string> rate_fields;  ///< empty: the equation's defaults
    std::optional<double> rate_min;        ///< empty: k + 0.9
    std::optional<double> rate_max;
    double inf_sup_ratio_min = 0.8;

    std::string output_directory = ".";
    std::string prefix;                    ///< empty: the case name
    bool plot_data = false;

    bool operator==(const StudyConfig&) const = default;

    std::string output_prefix() const { return prefix.empty() ? case_name : prefix; }
    SolveOptions solve_options(unsigned seed = 1) const;
    std::vector<std::string> checked_rate_fields() const;
    double minimum_rate() const;
    double maximum_rate() const;
};

/// Throws ParseError (with line) for malformed lines and ConfigError for
/// unknown keys, invalid values, or inconsistent settings.
StudyConfig parse_config(const std::string& text);

/// Canonical text: every key in fixed order with full-precision numbers.
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const StudyConfig& config);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits. The [output]
/// section is left out so relocating results keeps the hash.
std::string config_hash(const StudyConfig& config);
std::uint64_t fnv1a(const std::string& bytes);

/// 17 significant digits, "nan" for NaN.
std::string format_double(double v);

} // namespace hdg
