#pragma once

#include "hdg/infsup.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/system.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace hdg
{

struct SolveOptions
{
    int k = 1;
    double tau = 1.0;
    double tau_n = 1.0;
    double tau_t = 1.0;
    bool compare_monolithic = false;
    bool inf_sup = false;
    bool error_bounds = false;
    InfSupMethod inf_sup_method = InfSupMethod::Auto;
    int inf_sup_max_dim = dense_inf_sup_cap;
    unsigned seed = 1;
};

/// One side-by-side evaluation of an a priori bound, lhs <= rhs * slack.
struct BoundCheck
{
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 1.05;

    /// Both sides below 1e-9 counts as holding (exact discrete solutions).
    bool holds() const { return lhs <= rhs * slack || (lhs < 1e-9 && rhs < 1e-9); }
};

struct LevelResult
{
    int n = 0;
    double h = 0.0;
    int cells = 0;
    int dofs = 0;
    int condensed_dofs = 0;
    double residual = 0.0;
    double monolithic_difference = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<std::string, double>> errors;
    std::vector<BoundCheck> bounds;
    StabilityReport report;
    double seconds = 0.0;

    /// NaN when the level has no error of that name.
    double error(const std::string& name) const;
};

/// Assembles, condenses, solves, and measures one manufactured case on the
/// mesh of resolution n.
///
/// Scalar errors: u_L2, u_Vh, p_L2, trace_jump (|(p - p_h) - (P_M p - pbar_h)|_tau),
/// and the projection errors u_proj_L2, u_proj_Vh, p_proj_L2.
/// Vector errors: sigma_L2, u_L2, p_L2, sigma_proj_L2, u_proj_L2, p_proj_L2.
LevelResult solve_case(const ManufacturedCase& mc, int n, const SolveOptions& opts);

/// Inf-sup constant of the case's discrete form at resolution n, without solving.
InfSupEstimate case_inf_sup(const ManufacturedCase& mc, int n, const SolveOptions& opts);

/// Largest residual of the convection identity (CDR) or the Oseen identity
/// over `trials` random discrete fields; 0 for Poisson and Stokes.
double case_identity_residual(const ManufacturedCase& mc, int n, const SolveOptions& opts,
                              int trials = 20);

struct StudyReport
{
    std::string case_name;
    Equation equation = Equation::Poisson;
    int k = 0;
    std::vector<std::string> error_names;
    std::vector<LevelResult> levels;

    /// log(e_i / e_{i+1}) / log(h_i / h_{i+1}) for consecutive levels.
    std::vector<double> rates(const std::string& name) const;
    double last_rate(const std::string& name) const;
};

/// Throws ConfigError unless there are at least three levels, each doubling
/// the previous resolution.
StudyReport run_convergence_study(const ManufacturedCase& mc, const std::vector<int>& levels,
                                  const SolveOptions& opts);

/// Error names produced by solve_case for an equation, in report order.
std::vector<std::string> error_names(Equation equation);

double observed_rate(double e_coarse, double e_fine, double h_coarse, double h_fine);

} // namespace hdg
