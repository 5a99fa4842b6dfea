#include "hdg/config.hpp"

#include "hdg/basis.hpp"
#include "hdg/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace hdg
{

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

struct Entry
{
    std::string value;
    int line;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& schema()
{
    static const std::map<std::string, std::set<std::string>> s{
        {"problem",
         {"case", "equation", "k", "tau", "tau_n", "tau_t", "beta_x", "beta_y", "reaction", "nu"}},
        {"mesh", {"generator", "levels"}},
        {"checks",
         {"compare_monolithic", "inf_sup", "error_bounds", "inf_sup_method", "inf_sup_max_dim",
          "rate_fields", "rate_min", "rate_max", "inf_sup_ratio_min"}},
        {"output", {"directory", "prefix", "plot_data"}},
    };
    return s;
}

[[noreturn]] void bad_value(const Entry& e, const std::string& key, const std::string& why)
{
    throw ConfigError("line " + std::to_string(e.line) + ": invalid value '" + e.value +
                      "' for '" + key + "': " + why);
}

int to_int(const Entry& e, const std::string& key)
{
    int v = 0;
    const char* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end)
        bad_value(e, key, "expected an integer");
    return v;
}

double to_double(const Entry& e, const std::string& key)
{
    double v = 0;
    const char* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        bad_value(e, key, "expected a finite number");
    return v;
}

bool to_bool(const Entry& e, const std::string& key)
{
    if (e.value == "true" || e.value == "yes" || e.value == "1")
        return true;
    if (e.value == "false" || e.value == "no" || e.value == "0")
        return false;
    bad_value(e, key, "expected true or false");
}

std::string shortest(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string domain_name(Domain d) { return d == Domain::LShape ? "lshape" : "structured"; }

std::string method_name(InfSupMethod m)
{
    switch (m)
    {
    case InfSupMethod::Dense:
        return "dense";
    case InfSupMethod::Lanczos:
        return "lanczos";
    case InfSupMethod::Auto:
        break;
    }
    return "auto";
}

std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + v[i];
    return s;
}

} // namespace

SolveOptions StudyConfig::solve_options(unsigned seed) const
{
    SolveOptions o;
    o.k = k;
    o.tau = tau;
    o.tau_n = tau_n;
    o.tau_t = tau_t;
    o.compare_monolithic = compare_monolithic;
    o.inf_sup = inf_sup || error_bounds;
    o.error_bounds = error_bounds;
    o.inf_sup_method = inf_sup_method;
    o.inf_sup_max_dim = inf_sup_max_dim;
    o.seed = seed;
    return o;
}

std::vector<std::string> StudyConfig::checked_rate_fields() const
{
    if (!rate_fields.empty())
        return rate_fields;
    if (is_vector_problem(equation))
        return {"sigma_L2", "u_L2", "p_L2"};
    if (generator == Domain::LShape)
        return {"u_L2"};
    return {"u_L2", "p_L2"};
}

double StudyConfig::minimum_rate() const
{
    if (rate_min)
        return *rate_min;
    return generator == Domain::LShape ? 0.52 : k + 0.9;
}

double StudyConfig::maximum_rate() const
{
    if (rate_max)
        return *rate_max;
    return generator == Domain::LShape ? 0.82 : INFINITY;
}

StudyConfig parse_config(const std::string& text)
{
    std::map<std::string, Section> sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        const auto hash = raw.find_first_of("#;");
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty())
            continue;
        if (s.front() == '[')
        {
            if (s.back() != ']')
                throw ParseError(line, "unterminated section header");
            current = trim(s.substr(1, s.size() - 2));
            if (!schema().count(current))
                throw ConfigError("line " + std::to_string(line) + ": unknown section [" + current +
                                  "]");
            if (sections.count(current))
                throw ParseError(line, "duplicate section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, "expected 'key = value'");
        if (current.empty())
            throw ParseError(line, "key outside of any section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            throw ParseError(line, "empty key");
        if (!schema().at(current).count(key))
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "' in [" +
                              current + "]");
        if (sections[current].count(key))
            throw ParseError(line, "duplicate key '" + key + "'");
        sections[current][key] = {value, line};
    }

    StudyConfig c;
    auto get = [&](const std::string& sec, const std::string& key) -> const Entry* {
        const auto s = sections.find(sec);
        if (s == sections.end())
            return nullptr;
        const auto e = s->second.find(key);
        return e == s->second.end() ? nullptr : &e->second;
    };

    if (const Entry* e = get("problem", "case"))
        c.case_name = e->value;
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), c.case_name) == names.end())
        throw ConfigError("unknown case '" + c.case_name + "'");
    const ManufacturedCase mc = manufactured_case(c.case_name);
    c.equation = mc.equation;
    if (const Entry* e = get("problem", "equation"))
    {
        if (parse_equation(e->value) != mc.equation)
            bad_value(*e, "equation", "case '" + c.case_name + "' is " + to_string(mc.equation));
    }
    if (const Entry* e = get("problem", "k"))
    {
        c.k = to_int(*e, "k");
        if (c.k < 0 || c.k > max_degree)
            bad_value(*e, "k", "supported degrees are 0 to " + std::to_string(max_degree));
    }
    const std::pair<const char*, double*> reals[] = {
        {"tau", &c.tau},           {"tau_n", &c.tau_n},
        {"tau_t", &c.tau_t},       {"beta_x", &c.params.beta_x},
        {"beta_y", &c.params.beta_y}, {"reaction", &c.params.reaction},
        {"nu", &c.params.nu}};
    for (const auto& [key, dst] : reals)
        if (const Entry* e = get("problem", key))
            *dst = to_double(*e, key);

    c.generator = mc.domain;
    if (const Entry* e = get("mesh", "generator"))
    {
        if (e->value != "structured" && e->value != "lshape")
            bad_value(*e, "generator", "expected structured or lshape");
        if (e->value != domain_name(mc.domain))
            bad_value(*e, "generator", "case '" + c.case_name + "' needs " + domain_name(mc.domain));
    }
    if (const Entry* e = get("mesh", "levels"))
    {
        c.levels.clear();
        for (const std::string& item : split_list(e->value))
        {
            const int n = to_int({item, e->line}, "levels");
            if (n < 1)
                bad_value(*e, "levels", "levels must be positive");
            if (c.generator == Domain::LShape && n % 2 != 0)
                bad_value(*e, "levels", "L-shape levels must be even");
            c.levels.push_back(n);
        }
        if (c.levels.empty())
            bad_value(*e, "levels", "at least one level is required");
    }

    const std::pair<const char*, bool*> flags[] = {{"compare_monolithic", &c.compare_monolithic},
                                                   {"inf_sup", &c.inf_sup},
                                                   {"error_bounds", &c.error_bounds}};
    for (const auto& [key, dst] : flags)
        if (const Entry* e = get("checks", key))
            *dst = to_bool(*e, key);
    if (const Entry* e = get("checks", "inf_sup_method"))
    {
        if (e->value == "auto")
            c.inf_sup_method = InfSupMethod::Auto;
        else if (e->value == "dense")
            c.inf_sup_method = InfSupMethod::Dense;
        else if (e->value == "lanczos")
            c.inf_sup_method = InfSupMethod::Lanczos;
        else
            bad_value(*e, "inf_sup_method", "expected auto, dense or lanczos");
    }
    if (const Entry* e = get("checks", "inf_sup_max_dim"))
    {
        c.inf_sup_max_dim = to_int(*e, "inf_sup_max_dim");
        if (c.inf_sup_max_dim < 0)
            bad_value(*e, "inf_sup_max_dim", "must be nonnegative");
    }
    if (const Entry* e = get("checks", "rate_fields"))
    {
        const auto valid = error_names(c.equation);
        c.rate_fields = split_list(e->value);
        for (const std::string& f : c.rate_fields)
            if (std::find(valid.begin(), valid.end(), f) == valid.end())
                bad_value(*e, "rate_fields", "'" + f + "' is not an error of this equation");
    }
    if (const Entry* e = get("checks", "rate_min"))
        c.rate_min = to_double(*e, "rate_min");
    if (const Entry* e = get("checks", "rate_max"))
        c.rate_max = to_double(*e, "rate_max");
    if (const Entry* e = get("checks", "inf_sup_ratio_min"))
        c.inf_sup_ratio_min = to_double(*e, "inf_sup_ratio_min");

    if (const Entry* e = get("output", "directory"))
        c.output_directory = e->value;
    if (const Entry* e = get("output", "prefix"))
        c.prefix = e->value;
    if (const Entry* e = get("output", "plot_data"))
        c.plot_data = to_bool(*e, "plot_data");
    return c;
}

std::string serialize_config(const StudyConfig& c)
{
    std::ostringstream out;
    out << "[problem]\n";
    out << "case = " << c.case_name << "\n";
    out << "equation = " << to_string(c.equation) << "\n";
    out << "k = " << c.k << "\n";
    out << "tau = " << shortest(c.tau) << "\n";
    out << "tau_n = " << shortest(c.tau_n) << "\n";
    out << "tau_t = " << shortest(c.tau_t) << "\n";
    out << "beta_x = " << shortest(c.params.beta_x) << "\n";
    out << "beta_y = " << shortest(c.params.beta_y) << "\n";
    out << "reaction = " << shortest(c.params.reaction) << "\n";
    out << "nu = " << shortest(c.params.nu) << "\n";
    out << "\n[mesh]\n";
    out << "generator = " << domain_name(c.generator) << "\n";
    std::vector<std::string> lv;
    for (int n : c.levels)
        lv.push_back(std::to_string(n));
    out << "levels = " << join(lv) << "\n";
    out << "\n[checks]\n";
    out << "compare_monolithic = " << (c.compare_monolithic ? "true" : "false") << "\n";
    out << "inf_sup = " << (c.inf_sup ? "true" : "false") << "\n";
    out << "error_bounds = " << (c.error_bounds ? "true" : "false") << "\n";
    out << "inf_sup_method = " << method_name(c.inf_sup_method) << "\n";
    out << "inf_sup_max_dim = " << c.inf_sup_max_dim << "\n";
    if (!c.rate_fields.empty())
        out << "rate_fields = " << join(c.rate_fields) << "\n";
    if (c.rate_min)
        out << "rate_min = " << shortest(*c.rate_min) << "\n";
    if (c.rate_max)
        out << "rate_max = " << shortest(*c.rate_max) << "\n";
    out << "inf_sup_ratio_min = " << shortest(c.inf_sup_ratio_min) << "\n";
    out << "\n[output]\n";
    out << "directory = " << c.output_directory << "\n";
    if (!c.prefix.empty())
        out << "prefix = " << c.prefix << "\n";
    out << "plot_data = " << (c.plot_data ? "true" : "false") << "\n";
    return out.str();
}

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes)
    {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const StudyConfig& config)
{
    StudyConfig study = config;
    const StudyConfig defaults;
    study.output_directory = defaults.output_directory;
    study.prefix = defaults.prefix;
    study.plot_data = defaults.plot_data;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(serialize_config(study))));
    return buf;
}

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace hdg
