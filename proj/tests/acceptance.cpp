#include "hdg/basis.hpp"
#include "hdg/cdr.hpp"
#include "hdg/errors.hpp"
#include "hdg/infsup.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/norms.hpp"
#include "hdg/oseen.hpp"
#include "hdg/poisson.hpp"
#include "hdg/projection.hpp"
#include "hdg/stokes.hpp"
#include "hdg/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hdg;

namespace
{

struct Outcome
{
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what)
    {
        if (!ok)
        {
            pass = false;
            failures.push_back(what);
        }
    }
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

const std::vector<std::string> smooth_cases{"poisson_smooth", "cdr_smooth", "stokes_smooth",
                                            "oseen_smooth"};

std::vector<std::string> rate_fields(Equation eq)
{
    if (is_vector_problem(eq))
        return {"sigma_L2", "u_L2", "p_L2"};
    return {"u_L2", "p_L2"};
}

void convergence(Outcome& out)
{
    double worst_margin = std::numeric_limits<double>::infinity();
    for (const std::string& name : smooth_cases)
    {
        const ManufacturedCase mc = manufactured_case(name);
        for (int k = 0; k <= 2; ++k)
        {
            SolveOptions opts;
            opts.k = k;
            const StudyReport rep = run_convergence_study(mc, {4, 8, 16, 32}, opts);
            for (const std::string& f : rate_fields(mc.equation))
            {
                const double rate = rep.last_rate(f);
                worst_margin = std::min(worst_margin, rate - (k + 0.9));
                out.require(rate >= k + 0.9, name + " k=" + std::to_string(k) + " " + f + " rate " + num(rate));
            }
        }
    }
    out.detail << "smallest rate - (k + 0.9) = " << num(worst_margin);
}

void error_bounds(Outcome& out)
{
    int checked = 0;
    double worst = 0.0;
    for (const std::string& name : catalog_names())
    {
        const ManufacturedCase mc = manufactured_case(name);
        if (mc.regularity != Regularity::Smooth ||
            (mc.equation != Equation::Poisson && mc.equation != Equation::Stokes))
            continue;
        for (int k = 0; k <= 2; ++k)
            for (int n : {4, 8, 16})
            {
                SolveOptions opts;
                opts.k = k;
                opts.error_bounds = true;
                opts.inf_sup = true;
                opts.inf_sup_max_dim = std::numeric_limits<int>::max();
                const LevelResult r = solve_case(mc, n, opts);
                out.require(r.bounds.size() == 2, name + " missing bound at n=" + std::to_string(n));
                for (const BoundCheck& b : r.bounds)
                {
                    ++checked;
                    if (b.rhs > 1e-9)
                        worst = std::max(worst, b.lhs / b.rhs);
                    out.require(b.holds(), name + " k=" + std::to_string(k) + " n=" + std::to_string(n) +
                                               " " + b.name + ": " + num(b.lhs) + " > " + num(b.rhs));
                }
            }
    }
    out.detail << checked << " inequalities, largest lhs/rhs = " << num(worst);
}

void inf_sup(Outcome& out)
{
    double worst_ratio = std::numeric_limits<double>::infinity(), worst_diff = 0.0;
    for (const std::string& name : smooth_cases)
    {
        const ManufacturedCase mc = manufactured_case(name);
        SolveOptions opts;
        opts.k = 1;
        double prev = 0.0;
        std::string gammas;
        for (int n : {2, 4, 8})
        {
            opts.inf_sup_method = InfSupMethod::Lanczos;
            const double lz = case_inf_sup(mc, n, opts).gamma;
            opts.inf_sup_method = InfSupMethod::Dense;
            const double dn = case_inf_sup(mc, n, opts).gamma;
            const double diff = std::abs(lz - dn) / dn;
            worst_diff = std::max(worst_diff, diff);
            out.require(diff <= 1e-10, name + " n=" + std::to_string(n) + " Lanczos/dense differ by " + num(diff));
            if (n > 2)
            {
                worst_ratio = std::min(worst_ratio, dn / prev);
                out.require(dn / prev >= 0.8, name + " ratio " + num(dn / prev) + " at n=" + std::to_string(n));
            }
            prev = dn;
            gammas += (gammas.empty() ? "" : "/") + num(dn);
        }
        out.detail << name << " " << gammas << "; ";
    }
    out.detail << "smallest ratio " << num(worst_ratio) << ", largest dense/Lanczos gap " << num(worst_diff);
}

void identities(Outcome& out)
{
    const Mesh mesh = generate_structured(4);
    const std::vector<std::pair<std::string, VectorField>> fields{
        {"(1,1)", [](const Vec2&) { return Vec2(1, 1); }},
        {"(y,-x)", [](const Vec2& x) { return Vec2(x.y(), -x.x()); }}};
    double worst = 0.0;
    for (const auto& [label, beta] : fields)
        for (int k = 0; k <= 2; ++k)
        {
            CdrProblem cdr;
            cdr.beta = beta;
            cdr.div_beta = [](const Vec2&) { return 0.0; };
            cdr.c = [](const Vec2&) { return 1.0; };
            const double rc = verify_convection_identity(mesh, cdr, k, 20, 17 + k);
            OseenProblem os;
            os.beta = beta;
            os.div_beta = [](const Vec2&) { return 0.0; };
            const double ro = verify_oseen_identity(mesh, os, k, 20, 23 + k);
            worst = std::max({worst, rc, ro});
            out.require(rc <= 1e-11, "scalar identity beta=" + label + " k=" + std::to_string(k) + ": " + num(rc));
            out.require(ro <= 1e-11, "vector identity beta=" + label + " k=" + std::to_string(k) + ": " + num(ro));
        }
    out.detail << "2 identities x 2 fields x 3 degrees x 20 trials, largest residual " << num(worst);
}

void condensation(Outcome& out)
{
    double worst = 0.0;
    for (const std::string& name : smooth_cases)
    {
        const ManufacturedCase mc = manufactured_case(name);
        for (int k = 0; k <= 2; ++k)
            for (int n : {2, 4, 8})
            {
                SolveOptions opts;
                opts.k = k;
                opts.compare_monolithic = true;
                const LevelResult r = solve_case(mc, n, opts);
                worst = std::max(worst, r.monolithic_difference);
                out.require(r.monolithic_difference <= 1e-9,
                            name + " k=" + std::to_string(k) + " n=" + std::to_string(n) + ": " +
                                num(r.monolithic_difference));
            }
    }
    out.detail << "largest relative difference " << num(worst);
}

CellCoefficients stacked(const std::vector<Eigen::VectorXd>& v, int nk, int comps)
{
    return [&v, nk, comps](int c) {
        Eigen::MatrixXd m(nk, comps);
        for (int a = 0; a < comps; ++a)
            m.col(a) = v[c].segment(a * nk, nk);
        return m;
    };
}

ExactComponents components(const ScalarField& f)
{
    return [f](const Vec2& x) { return Eigen::VectorXd::Constant(1, f(x)); };
}

ExactComponents components(const VectorField& f)
{
    return [f](const Vec2& x) { return Eigen::VectorXd(f(x)); };
}

ExactComponents components(const TensorField& f)
{
    return [f](const Vec2& x) {
        const Mat2 t = f(x);
        return Eigen::VectorXd((Eigen::VectorXd(4) << t(0, 0), t(0, 1), t(1, 0), t(1, 1)).finished());
    };
}

void projection(Outcome& out)
{
    const ManufacturedCase pc = manufactured_case("poisson_smooth");
    const ManufacturedCase sc = manufactured_case("stokes_smooth");
    FacetParameter tau;
    double worst_residual = 0.0, worst_identity = 0.0, worst_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 2; ++k)
    {
        const int nk = cell_dim(k), deg = 2 * k + 4;
        std::vector<double> prev;
        for (int n : {4, 8, 16, 32})
        {
            const Mesh mesh = generate_structured(n);
            const PoissonProjection pp = hdg_project_poisson(mesh, k, tau, pc.u, pc.p);
            const StokesProjection sp = hdg_project_stokes(mesh, k, tau, tau, sc.sigma, sc.u, sc.p);
            worst_residual = std::max({worst_residual, pp.max_residual, sp.max_residual});
            const std::vector<double> e{
                l2_distance(mesh, k, deg, stacked(pp.u, nk, 2), components(pc.u), 2),
                l2_distance(mesh, k, deg, stacked(pp.p, nk, 1), components(pc.p), 1),
                l2_distance(mesh, k, deg, stacked(sp.sigma, nk, 4), components(sc.sigma), 4),
                l2_distance(mesh, k, deg, stacked(sp.u, nk, 2), components(sc.u), 2),
                l2_distance(mesh, k, deg, stacked(sp.p, nk, 1), components(sc.p), 1)};
            if (n == 32)
                for (std::size_t i = 0; i < e.size(); ++i)
                {
                    const double rate = std::log2(prev[i] / e[i]);
                    worst_margin = std::min(worst_margin, rate - (k + 0.9));
                    out.require(rate >= k + 0.9, "projection rate " + num(rate) + " for field " +
                                                     std::to_string(i) + " at k=" + std::to_string(k));
                }
            prev = e;
        }

        const Mesh mesh = generate_structured(3);
        const VectorField u = [k](const Vec2& x) { return Vec2(std::pow(x.x(), k) - 2 * x.y() * (k > 0), 1.5); };
        const ScalarField p = [k](const Vec2& x) { return std::pow(x.x() + x.y(), k) - 0.5; };
        const TensorField sigma = [k](const Vec2& x) {
            Mat2 t;
            t << std::pow(x.y(), k), 2.0, -std::pow(x.x(), k), 1.0;
            return t;
        };
        for (double t : {0.5, 1.0, 4.0})
        {
            FacetParameter tp;
            tp.value = t;
            const PoissonProjection pp = hdg_project_poisson(mesh, k, tp, u, p);
            const StokesProjection sp = hdg_project_stokes(mesh, k, tp, tau, sigma, u, p);
            worst_residual = std::max({worst_residual, pp.max_residual, sp.max_residual});
            for (double e : {l2_distance(mesh, k, deg, stacked(pp.u, nk, 2), components(u), 2),
                             l2_distance(mesh, k, deg, stacked(pp.p, nk, 1), components(p), 1),
                             l2_distance(mesh, k, deg, stacked(sp.sigma, nk, 4), components(sigma), 4),
                             l2_distance(mesh, k, deg, stacked(sp.u, nk, 2), components(u), 2),
                             l2_distance(mesh, k, deg, stacked(sp.p, nk, 1), components(p), 1)})
            {
                worst_identity = std::max(worst_identity, e);
                out.require(e <= 1e-12, "polynomial not reproduced at k=" + std::to_string(k) + ": " + num(e));
            }
        }
    }
    out.require(worst_residual < 1e-11, "moment residual " + num(worst_residual));
    out.detail << "moment residual " << num(worst_residual) << ", polynomial error " << num(worst_identity)
               << ", smallest rate - (k + 0.9) = " << num(worst_margin);
}

void lshape(Outcome& out)
{
    const ManufacturedCase mc = manufactured_case("poisson_lshape");
    SolveOptions opts;
    opts.k = 1;
    opts.error_bounds = true;
    opts.inf_sup = true;
    opts.inf_sup_max_dim = std::numeric_limits<int>::max();
    const StudyReport rep = run_convergence_study(mc, {4, 8, 16, 32}, opts);
    std::string rates;
    for (double r : rep.rates("u_L2"))
    {
        rates += (rates.empty() ? "" : ", ") + num(r);
        out.require(r >= 0.52 && r <= 0.82, "flux rate " + num(r) + " outside [0.52, 0.82]");
    }
    int held = 0, total = 0;
    for (const LevelResult& l : rep.levels)
    {
        out.require(l.bounds.size() == 2, "missing bound at n=" + std::to_string(l.n));
        for (const BoundCheck& b : l.bounds)
        {
            ++total;
            held += b.holds();
            out.require(b.holds(), "n=" + std::to_string(l.n) + " " + b.name + ": " + num(b.lhs) + " > " + num(b.rhs));
        }
    }
    out.detail << "flux rates " << rates << "; " << held << "/" << total << " inequalities hold";
}

void degenerate(Outcome& out)
{
    double worst_matrix = 0.0, worst_seminorm = 0.0;
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> d(-1, 1);
    for (int n : {2, 5})
    {
        Mesh mesh = generate_structured(n);
        for (int k = 0; k <= 2; ++k)
        {
            CdrProblem cdr;
            cdr.tau.value = 1.3;
            cdr.f = [](const Vec2& x) { return x.x(); };
            cdr.p_D = [](const Vec2& x) { return x.y(); };
            cdr.beta = [](const Vec2&) { return Vec2(0, 0); };
            cdr.div_beta = [](const Vec2&) { return 0.0; };
            const SparseMatrix dc = assemble_cdr(mesh, cdr, k).matrix -
                                    assemble_poisson(mesh, static_cast<const PoissonProblem&>(cdr), k).matrix;
            OseenProblem os;
            os.tau_n.value = 2.0;
            os.tau_t.value = 0.5;
            os.beta = cdr.beta;
            os.div_beta = cdr.div_beta;
            const SparseMatrix dv = assemble_oseen(mesh, os, k).matrix -
                                    assemble_stokes(mesh, static_cast<const StokesProblem&>(os), k).matrix;
            const double m = std::max(dc.coeffs().cwiseAbs().maxCoeff(), dv.coeffs().cwiseAbs().maxCoeff());
            worst_matrix = std::max(worst_matrix, m);
            out.require(m <= 1e-14, "beta = 0 differs by " + num(m));

            const SpaceLayout L = build_layout(mesh, k, Equation::Stokes);
            const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(L.total, [&] { return d(rng); });
            for (double t : {0.3, 1.0, 7.0})
            {
                FacetParameter tp;
                tp.value = t;
                const double s = vector_jump_seminorm(mesh, L, x, FacetWeight::S, tp, tp, 0.0);
                const double i = vector_jump_seminorm(mesh, L, x, FacetWeight::Identity, tp, tp, 0.0);
                const double rel = std::abs(s * s - t * i * i) / (s * s);
                worst_seminorm = std::max(worst_seminorm, rel);
                out.require(rel <= 1e-13, "S-seminorm mismatch " + num(rel));
            }
        }
    }
    out.detail << "largest entry difference " << num(worst_matrix) << ", seminorm mismatch " << num(worst_seminorm);
}

struct Criterion
{
    int id;
    const char* title;
    std::function<void(Outcome&)> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all{
        {1, "convergence on smooth cases", convergence},
        {2, "a priori error bounds", error_bounds},
        {3, "inf-sup non-degeneracy", inf_sup},
        {4, "algebraic identities", identities},
        {5, "condensation equivalence", condensation},
        {6, "projection correctness", projection},
        {7, "L-shape without regularity", lshape},
        {8, "degenerate-to-simpler consistency", degenerate},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.push_back(std::atoi(argv[i]));

    bool ok = true;
    for (const Criterion& c : all)
    {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        Outcome out;
        const auto start = std::chrono::steady_clock::now();
        try
        {
            c.run(out);
        }
        catch (const std::exception& e)
        {
            out.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "criterion " << c.id << " (" << c.title << "): " << (out.pass ? "PASS" : "FAIL") << " ["
                  << num(secs) << " s] " << out.detail.str() << "\n";
        for (const std::string& f : out.failures)
            std::cout << "    " << f << "\n";
        std::cout.flush();
        ok = ok && out.pass;
    }
    return ok ? 0 : 1;
}
