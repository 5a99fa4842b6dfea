#include "hdg/config.hpp"
#include "hdg/errors.hpp"
#include "hdg/mesh.hpp"
#include "hdg/study.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hdg;

namespace
{

constexpr int exit_config = 1;
constexpr int exit_assembly = 2;
constexpr int exit_solver = 3;
constexpr int exit_check = 4;

struct Common
{
    std::string config;
    std::string out;
    int level_override = 0;
    unsigned seed = 1;
};

StudyConfig load_config(const Common& opt)
{
    std::ifstream in(opt.config);
    if (!in)
        throw ConfigError("cannot read config file '" + opt.config + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    StudyConfig c = parse_config(buf.str());
    if (!opt.out.empty())
        c.output_directory = opt.out;
    return c;
}

ManufacturedCase config_case(const StudyConfig& c) { return manufactured_case(c.case_name, c.params); }

fs::path output_file(const StudyConfig& c, const std::string& suffix)
{
    fs::create_directories(c.output_directory);
    return fs::path(c.output_directory) / (c.output_prefix() + suffix);
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

std::string rounded(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string header_join(const std::vector<std::string>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i];
    return s;
}

bool report_bounds(const StudyConfig& c, const std::string& hash,
                   const std::vector<LevelResult>& levels)
{
    if (!c.error_bounds)
        return true;
    std::ostringstream csv;
    csv << "config_hash,n,bound,lhs,rhs,holds\n";
    bool ok = true;
    for (const LevelResult& l : levels)
        for (const BoundCheck& b : l.bounds)
        {
            csv << hash << "," << l.n << ",\"" << b.name << "\"," << format_double(b.lhs) << ","
                << format_double(b.rhs) << "," << (b.holds() ? 1 : 0) << "\n";
            if (!b.holds())
            {
                ok = false;
                std::cerr << "bound violated at n=" << l.n << ": " << b.name << " (" << b.lhs
                          << " > " << b.rhs << " * " << b.slack << ")\n";
            }
        }
    write_text(output_file(c, "_bounds.csv"), csv.str());
    return ok;
}

int cmd_solve(const Common& opt)
{
    const StudyConfig c = load_config(opt);
    const std::string hash = config_hash(c);
    const ManufacturedCase mc = config_case(c);
    const int n = opt.level_override > 0 ? opt.level_override : c.levels.back();
    const SolveOptions so = c.solve_options(opt.seed);
    const LevelResult r = solve_case(mc, n, so);
    const double identity = case_identity_residual(mc, n, so);

    std::vector<std::string> cols{"config_hash", "case", "equation", "k", "n", "h", "cells", "dofs",
                                  "condensed_dofs", "residual", "monolithic_difference", "gamma",
                                  "tau_min", "c_tau", "identity_residual"};
    for (const auto& [name, value] : r.errors)
        cols.push_back(name);
    std::ostringstream csv;
    csv << header_join(cols) << "\n";
    csv << hash << "," << c.case_name << "," << to_string(c.equation) << "," << c.k << "," << n
        << "," << format_double(r.h) << "," << r.cells << "," << r.dofs << "," << r.condensed_dofs
        << "," << format_double(r.residual) << "," << format_double(r.monolithic_difference) << ","
        << format_double(r.gamma) << "," << format_double(r.report.tau_min) << ","
        << format_double(r.report.c_tau) << "," << format_double(identity);
    for (const auto& [name, value] : r.errors)
        csv << "," << format_double(value);
    csv << "\n";
    const fs::path path = output_file(c, "_solve.csv");
    write_text(path, csv.str());

    std::cout << c.case_name << " k=" << c.k << " n=" << n << " dofs=" << r.dofs
              << " condensed=" << r.condensed_dofs << " residual=" << rounded(r.residual) << "\n";
    for (const auto& [name, value] : r.errors)
        std::cout << "  " << name << " = " << rounded(value) << "\n";
    for (const std::string& note : r.report.notes)
        std::cout << "  note: " << note << "\n";
    std::cout << "wrote " << path.string() << "\n";

    bool ok = report_bounds(c, hash, {r});
    if (!(r.residual < 1e-10))
    {
        std::cerr << "relative residual " << r.residual << " above 1e-10\n";
        ok = false;
    }
    if (!std::isnan(r.monolithic_difference) && !(r.monolithic_difference < 1e-9))
    {
        std::cerr << "condensed and monolithic solutions differ by " << r.monolithic_difference
                  << "\n";
        ok = false;
    }
    if (!(identity < 1e-11))
    {
        std::cerr << "identity residual " << identity << " above 1e-11\n";
        ok = false;
    }
    return ok ? 0 : exit_check;
}

int cmd_convergence(const Common& opt)
{
    StudyConfig c = load_config(opt);
    const std::string hash = config_hash(c);
    std::vector<int> levels = c.levels;
    if (opt.level_override > 0)
    {
        levels.assign(1, opt.level_override);
        while (levels.size() < std::max<std::size_t>(c.levels.size(), 3))
            levels.push_back(2 * levels.back());
    }
    const StudyReport rep = run_convergence_study(config_case(c), levels, c.solve_options(opt.seed));

    std::vector<std::string> cols{"config_hash", "n", "h", "dofs", "condensed_dofs", "gamma"};
    for (const std::string& e : rep.error_names)
        cols.push_back(e);
    for (const std::string& e : rep.error_names)
        cols.push_back("rate_" + e);
    std::ostringstream csv;
    csv << header_join(cols) << "\n";
    for (std::size_t i = 0; i < rep.levels.size(); ++i)
    {
        const LevelResult& l = rep.levels[i];
        csv << hash << "," << l.n << "," << format_double(l.h) << "," << l.dofs << ","
            << l.condensed_dofs << "," << format_double(l.gamma);
        for (const std::string& e : rep.error_names)
            csv << "," << format_double(l.error(e));
        for (const std::string& e : rep.error_names)
            csv << "," << (i == 0 ? std::string() : format_double(rep.rates(e)[i - 1]));
        csv << "\n";
    }
    const fs::path path = output_file(c, "_convergence.csv");
    write_text(path, csv.str());
    if (c.plot_data)
        for (const std::string& e : rep.error_names)
        {
            std::ostringstream dat;
            dat << "# h " << e << "\n";
            for (const LevelResult& l : rep.levels)
                dat << format_double(l.h) << " " << format_double(l.error(e)) << "\n";
            write_text(output_file(c, "_" + e + ".dat"), dat.str());
        }

    std::cout << c.case_name << " k=" << c.k << "\n";
    std::cout << "       h";
    for (const std::string& e : rep.error_names)
        std::cout << "  " << std::string(std::max<int>(0, 10 - static_cast<int>(e.size())), ' ') << e;
    std::cout << "\n";
    for (std::size_t i = 0; i < rep.levels.size(); ++i)
    {
        const LevelResult& l = rep.levels[i];
        std::cout << rounded(l.h);
        for (const std::string& e : rep.error_names)
            std::cout << "  " << rounded(l.error(e));
        std::cout << "\n";
        if (i > 0)
        {
            std::cout << "    rate ";
            for (const std::string& e : rep.error_names)
            {
                char buf[32];
                std::snprintf(buf, sizeof buf, "  %9.3f", rep.rates(e)[i - 1]);
                std::cout << buf;
            }
            std::cout << "\n";
        }
    }
    std::cout << "wrote " << path.string() << "\n";

    bool ok = report_bounds(c, hash, rep.levels);
    const double lo = c.minimum_rate(), hi = c.maximum_rate();
    for (const std::string& e : c.checked_rate_fields())
    {
        const double r = rep.last_rate(e);
        if (!(r >= lo && r <= hi))
        {
            std::cerr << "rate of " << e << " is " << r << ", outside [" << lo << ", " << hi
                      << "]\n";
            ok = false;
        }
    }
    for (const LevelResult& l : rep.levels)
        if (!(l.residual < 1e-10))
        {
            std::cerr << "relative residual " << l.residual << " at n=" << l.n << "\n";
            ok = false;
        }
    return ok ? 0 : exit_check;
}

int cmd_infsup(const Common& opt)
{
    const StudyConfig c = load_config(opt);
    const std::string hash = config_hash(c);
    const ManufacturedCase mc = config_case(c);
    const SolveOptions so = c.solve_options(opt.seed);
    const std::vector<int> levels =
        opt.level_override > 0 ? std::vector<int>{opt.level_override} : c.levels;
    std::ostringstream csv;
    csv << "config_hash,n,dimension,method,iterations,gamma,ratio\n";
    bool ok = true;
    double prev = NAN;
    for (int n : levels)
    {
        const InfSupEstimate est = case_inf_sup(mc, n, so);
        const double ratio = std::isnan(prev) ? NAN : est.gamma / prev;
        csv << hash << "," << n << "," << est.dimension << ","
            << (est.method == InfSupMethod::Dense ? "dense" : "lanczos") << "," << est.iterations
            << "," << format_double(est.gamma) << "," << (std::isnan(ratio) ? "" : format_double(ratio))
            << "\n";
        std::cout << "n=" << n << " dim=" << est.dimension << " gamma=" << rounded(est.gamma);
        if (!std::isnan(ratio))
            std::cout << " ratio=" << rounded(ratio);
        std::cout << "\n";
        if (!std::isnan(ratio) && !(ratio >= c.inf_sup_ratio_min))
        {
            std::cerr << "inf-sup ratio " << ratio << " at n=" << n << " below "
                      << c.inf_sup_ratio_min << "\n";
            ok = false;
        }
        prev = est.gamma;
    }
    const fs::path path = output_file(c, "_infsup.csv");
    write_text(path, csv.str());
    std::cout << "wrote " << path.string() << "\n";
    return ok ? 0 : exit_check;
}

int cmd_mesh_generate(const std::string& kind, int n, int refine, const std::string& out)
{
    Mesh m = kind == "lshape" ? generate_lshape(n) : generate_structured(n);
    for (int i = 0; i < refine; ++i)
        m = refine_uniform(m);
    const std::string text = save_mesh(m);
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text(out, text);
    return 0;
}

int cmd_mesh_inspect(const std::string& file)
{
    std::ifstream in(file);
    if (!in)
        throw ConfigError("cannot read mesh file '" + file + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const Mesh m = load_mesh(buf.str());
    std::cout << "vertices " << m.num_vertices() << "\n"
              << "cells " << m.num_cells() << "\n"
              << "facets " << m.num_facets() << "\n"
              << "boundary_facets " << m.num_boundary_facets() << "\n"
              << "dirichlet_facets " << m.num_facets_tagged(FacetTag::Dirichlet) << "\n"
              << "neumann_facets " << m.num_facets_tagged(FacetTag::Neumann) << "\n"
              << "domain_area " << format_double(m.domain_area()) << "\n"
              << "max_h " << format_double(m.max_cell_diameter()) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"HDG solver and verification harness"};
    app.require_subcommand(1);
    Common opt;
    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config, "study configuration file")->required();
        sub->add_option("--out", opt.out, "output directory (overrides [output] directory)");
        sub->add_option("--level-override", opt.level_override, "mesh resolution to use")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "seed for random trials");
    };
    CLI::App* solve = app.add_subcommand("solve", "solve one case on the finest level");
    CLI::App* conv = app.add_subcommand("convergence", "run a convergence study");
    CLI::App* infsup = app.add_subcommand("infsup", "estimate inf-sup constants per level");
    add_common(solve);
    add_common(conv);
    add_common(infsup);

    CLI::App* mesh = app.add_subcommand("mesh", "generate or inspect meshes");
    mesh->require_subcommand(1);
    std::string kind = "structured", out, file;
    int n = 1, refine = 0;
    CLI::App* gen = mesh->add_subcommand("generate", "write a generated mesh");
    gen->add_option("--kind", kind, "structured or lshape")
        ->check(CLI::IsMember({"structured", "lshape"}));
    gen->add_option("--n", n, "resolution")->required();
    gen->add_option("--refine", refine, "uniform refinements to apply")->check(CLI::NonNegativeNumber);
    gen->add_option("--out", out, "output file (default stdout)");
    CLI::App* inspect = mesh->add_subcommand("inspect", "print mesh statistics");
    inspect->add_option("file", file, "mesh file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try
    {
        if (*solve)
            return cmd_solve(opt);
        if (*conv)
            return cmd_convergence(opt);
        if (*infsup)
            return cmd_infsup(opt);
        if (*gen)
            return cmd_mesh_generate(kind, n, refine, out);
        if (*inspect)
            return cmd_mesh_inspect(file);
    }
    catch (const AssemblyError& e)
    {
        std::cerr << "assembly error: " << e.what() << "\n";
        return exit_assembly;
    }
    catch (const SolverError& e)
    {
        std::cerr << "solver error: " << e.what() << "\n";
        return exit_solver;
    }
    catch (const ParseError& e)
    {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const ConfigError& e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const TopologyError& e)
    {
        std::cerr << "topology error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_solver;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
    return 0;
}
