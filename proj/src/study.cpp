#include "hdg/study.hpp"

#include "hdg/cdr.hpp"
#include "hdg/element.hpp"
#include "hdg/errors.hpp"
#include "hdg/norms.hpp"
#include "hdg/oseen.hpp"
#include "hdg/poisson.hpp"
#include "hdg/projection.hpp"
#include "hdg/solver.hpp"
#include "hdg/stokes.hpp"

#include <chrono>

namespace hdg
{

double LevelResult::error(const std::string& name) const
{
    for (const auto& [key, value] : errors)
        if (key == name)
            return value;
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::string> error_names(Equation equation)
{
    if (is_vector_problem(equation))
        return {"sigma_L2", "u_L2", "p_L2", "sigma_proj_L2", "u_proj_L2", "p_proj_L2"};
    return {"u_L2", "u_Vh", "p_L2", "trace_jump", "u_proj_L2", "u_proj_Vh", "p_proj_L2"};
}

double observed_rate(double e_coarse, double e_fine, double h_coarse, double h_fine)
{
    return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

namespace
{

AssembledSystem assemble_case(const Mesh& mesh, const ManufacturedCase& mc, const SolveOptions& o)
{
    switch (mc.equation)
    {
    case Equation::Poisson:
        return assemble_poisson(mesh, poisson_problem(mc, o.tau), o.k);
    case Equation::CDR:
        return assemble_cdr(mesh, cdr_problem(mc, o.tau), o.k);
    case Equation::Stokes:
        return assemble_stokes(mesh, stokes_problem(mc, o.tau_n, o.tau_t), o.k);
    case Equation::Oseen:
        return assemble_oseen(mesh, oseen_problem(mc, o.tau_n, o.tau_t), o.k);
    }
    throw ConfigError("unknown equation");
}

CellCoefficients block(const SpaceLayout& L, const Eigen::VectorXd& x, int offset_of_cell0,
                       int components)
{
    return [&L, &x, offset_of_cell0, components](int c) {
        Eigen::MatrixXd C(L.nk, components);
        for (int a = 0; a < components; ++a)
            C.col(a) = x.segment(offset_of_cell0 + (c * components + a) * L.nk, L.nk);
        return C;
    };
}

CellCoefficients stacked(const std::vector<Eigen::VectorXd>& v, int nk, int components)
{
    return [&v, nk, components](int c) {
        Eigen::MatrixXd C(nk, components);
        for (int a = 0; a < components; ++a)
            C.col(a) = v[c].segment(a * nk, nk);
        return C;
    };
}

ExactComponents as_components(const VectorField& f)
{
    return [f](const Vec2& x) { return Eigen::VectorXd(f(x)); };
}

ExactComponents as_components(const ScalarField& f)
{
    return [f](const Vec2& x) { return Eigen::VectorXd::Constant(1, f(x)); };
}

ExactComponents as_components(const TensorField& f)
{
    return [f](const Vec2& x) {
        const Mat2 s = f(x);
        Eigen::VectorXd v(4);
        v << s(0, 0), s(0, 1), s(1, 0), s(1, 1);
        return v;
    };
}

double trace_jump_error(const Mesh& mesh, const AssembledSystem& sys, const Eigen::VectorXd& x,
                        const ManufacturedCase& mc, double tau, int degree)
{
    const SpaceLayout& L = sys.layout;
    const CellBasis basis(L.k);
    const FacetBasis fb(L.k);
    const std::vector<Eigen::VectorXd> pm = facet_l2_project(mesh, L.k, mc.p, degree);
    double total = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, 0, degree);
        const Eigen::VectorXd q = x.segment(L.p_dof(c, 0), L.nk);
        for (const FacetData& F : E.facets)
        {
            Eigen::VectorXd tr;
            if (L.eliminated(F.facet))
                tr = sys.facet_values[F.facet].size() > 0 ? sys.facet_values[F.facet]
                                                          : Eigen::VectorXd::Zero(L.nf).eval();
            else
                tr = x.segment(L.trace_dof(F.facet, 0, 0), L.nf);
            const Eigen::VectorXd ph = F.phi * q, pbar = F.psi * tr, pmp = F.psi * pm[F.facet];
            for (int i = 0; i < F.w.size(); ++i)
            {
                const double e = (mc.p(F.x[i]) - ph(i)) - (pmp(i) - pbar(i));
                total += F.w(i) * tau * e * e;
            }
        }
    }
    return std::sqrt(total);
}

} // namespace

LevelResult solve_case(const ManufacturedCase& mc, int n, const SolveOptions& o)
{
    const auto start = std::chrono::steady_clock::now();
    const Mesh mesh = case_mesh(mc, n);
    const AssembledSystem sys = assemble_case(mesh, mc, o);
    const SpaceLayout& L = sys.layout;
    const CondensedSystem cs = condense(sys);
    const Eigen::VectorXd x = solve(cs);

    LevelResult r;
    r.n = n;
    r.h = mesh.max_cell_diameter();
    r.cells = mesh.num_cells();
    r.dofs = L.total;
    r.condensed_dofs = cs.dim();
    r.report = sys.report;
    r.residual = relative_residual(sys.matrix, x, sys.rhs);
    if (o.compare_monolithic)
    {
        const Eigen::VectorXd xm = solve(sys);
        const double scale = std::max(xm.cwiseAbs().maxCoeff(), 1e-300);
        r.monolithic_difference = (x - xm).cwiseAbs().maxCoeff() / scale;
    }

    const int deg = 2 * o.k + 4;
    const bool vec = is_vector_problem(mc.equation);
    if (!vec)
    {
        PointWeight kinv;
        if (mc.kappa)
            kinv = [&mc](const Vec2& p) { return Eigen::MatrixXd(mc.kappa(p).inverse()); };
        FacetParameter tau;
        tau.value = o.tau;
        const PoissonProjection pr = hdg_project_poisson(mesh, o.k, tau, mc.u, mc.p, deg);
        const auto uh = block(L, x, L.u_offset, 2);
        const auto ph = block(L, x, L.p_offset, 1);
        const auto up = stacked(pr.u, L.nk, 2);
        const auto pp = stacked(pr.p, L.nk, 1);
        const auto ue = as_components(mc.u);
        const auto pe = as_components(mc.p);
        r.errors = {
            {"u_L2", l2_distance(mesh, o.k, deg, uh, ue, 2)},
            {"u_Vh", l2_distance(mesh, o.k, deg, uh, ue, 2, kinv)},
            {"p_L2", l2_distance(mesh, o.k, deg, ph, pe, 1)},
            {"trace_jump", trace_jump_error(mesh, sys, x, mc, o.tau, deg)},
            {"u_proj_L2", l2_distance(mesh, o.k, deg, up, ue, 2)},
            {"u_proj_Vh", l2_distance(mesh, o.k, deg, up, ue, 2, kinv)},
            {"p_proj_L2", l2_distance(mesh, o.k, deg, pp, pe, 1)},
            {"proj_residual", pr.max_residual},
        };
    }
    else
    {
        FacetParameter tn, tt;
        tn.value = o.tau_n;
        tt.value = o.tau_t;
        const StokesProjection pr =
            hdg_project_stokes(mesh, o.k, tn, tt, mc.sigma, mc.u, mc.p, deg);
        const auto se = as_components(mc.sigma);
        const auto ue = as_components(mc.u);
        const auto pe = as_components(mc.p);
        r.errors = {
            {"sigma_L2", l2_distance(mesh, o.k, deg, block(L, x, L.sigma_offset, 4), se, 4)},
            {"u_L2", l2_distance(mesh, o.k, deg, block(L, x, L.u_offset, 2), ue, 2)},
            {"p_L2", l2_distance(mesh, o.k, deg, block(L, x, L.p_offset, 1), pe, 1)},
            {"sigma_proj_L2", l2_distance(mesh, o.k, deg, stacked(pr.sigma, L.nk, 4), se, 4)},
            {"u_proj_L2", l2_distance(mesh, o.k, deg, stacked(pr.u, L.nk, 2), ue, 2)},
            {"p_proj_L2", l2_distance(mesh, o.k, deg, stacked(pr.p, L.nk, 1), pe, 1)},
            {"proj_residual", pr.max_residual},
        };
    }

    if (o.inf_sup && L.total <= o.inf_sup_max_dim)
    {
        const InfSupEstimate est =
            vec ? measure_inf_sup(mesh, sys, oseen_problem(mc, o.tau_n, o.tau_t), o.inf_sup_method,
                                  o.seed)
                : measure_inf_sup(mesh, sys, cdr_problem(mc, o.tau), o.inf_sup_method, o.seed);
        r.gamma = est.gamma;
    }

    if (o.error_bounds)
    {
        if (mc.equation == Equation::Poisson)
        {
            r.bounds.push_back({"u_Vh <= 2 u_proj_Vh", r.error("u_Vh"), 2 * r.error("u_proj_Vh")});
            if (!std::isnan(r.gamma))
                r.bounds.push_back({"p_L2 <= u_proj_Vh / gamma + p_proj_L2", r.error("p_L2"),
                                    r.error("u_proj_Vh") / r.gamma + r.error("p_proj_L2")});
        }
        else if (mc.equation == Equation::Stokes)
        {
            r.bounds.push_back(
                {"sigma_L2 <= 2 sigma_proj_L2", r.error("sigma_L2"), 2 * r.error("sigma_proj_L2")});
            if (!std::isnan(r.gamma))
                r.bounds.push_back({"u_L2 + p_L2 <= u_proj_L2 + p_proj_L2 + sigma_proj_L2 / "
                                    "(gamma sqrt(nu))",
                                    r.error("u_L2") + r.error("p_L2"),
                                    r.error("u_proj_L2") + r.error("p_proj_L2") +
                                        r.error("sigma_proj_L2") / (r.gamma * std::sqrt(mc.nu))});
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

InfSupEstimate case_inf_sup(const ManufacturedCase& mc, int n, const SolveOptions& o)
{
    const Mesh mesh = case_mesh(mc, n);
    const AssembledSystem sys = assemble_case(mesh, mc, o);
    if (is_vector_problem(mc.equation))
        return measure_inf_sup(mesh, sys, oseen_problem(mc, o.tau_n, o.tau_t), o.inf_sup_method,
                               o.seed);
    return measure_inf_sup(mesh, sys, cdr_problem(mc, o.tau), o.inf_sup_method, o.seed);
}

double case_identity_residual(const ManufacturedCase& mc, int n, const SolveOptions& o, int trials)
{
    const Mesh mesh = case_mesh(mc, n);
    if (mc.equation == Equation::CDR)
        return verify_convection_identity(mesh, cdr_problem(mc, o.tau), o.k, trials, o.seed);
    if (mc.equation == Equation::Oseen)
        return verify_oseen_identity(mesh, oseen_problem(mc, o.tau_n, o.tau_t), o.k, trials,
                                     o.seed);
    return 0.0;
}

std::vector<double> StudyReport::rates(const std::string& name) const
{
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        out.push_back(observed_rate(levels[i].error(name), levels[i + 1].error(name), levels[i].h,
                                    levels[i + 1].h));
    return out;
}

double StudyReport::last_rate(const std::string& name) const
{
    const std::vector<double> r = rates(name);
    return r.empty() ? std::numeric_limits<double>::quiet_NaN() : r.back();
}

StudyReport run_convergence_study(const ManufacturedCase& mc, const std::vector<int>& levels,
                                  const SolveOptions& opts)
{
    if (levels.size() < 3)
        throw ConfigError("a convergence study needs at least three levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] != 2 * levels[i - 1])
            throw ConfigError("levels must be consecutive uniform refinements (each twice the last)");
    StudyReport rep;
    rep.case_name = mc.name;
    rep.equation = mc.equation;
    rep.k = opts.k;
    for (int n : levels)
        rep.levels.push_back(solve_case(mc, n, opts));
    rep.error_names = error_names(mc.equation);
    return rep;
}

} // namespace hdg
