#pragma once

#include "hdg/layout.hpp"
#include "hdg/problems.hpp"

#include <string>
#include <vector>

namespace hdg
{

enum class Regularity
{
    Smooth,
    Interface,
    CornerSingular
};

enum class Domain
{
    UnitSquare,
    LShape
};

/// Tunable coefficients of the catalog. Cases ignore what they do not use.
struct CaseParameters
{
    double beta_x = 1.0;
    double beta_y = 1.0;
    double reaction = 1.0;
    double nu = 1.0;

    bool operator==(const CaseParameters&) const = default;
};

/// Closed-form solution with its hand-derived forcing and boundary data.
/// Scalar cases fill p, u (= -kappa grad p); vector cases fill u, sigma, p.
struct ManufacturedCase
{
    std::string name;
    Equation equation = Equation::Poisson;
    Regularity regularity = Regularity::Smooth;
    double singular_exponent = 0.0;
    Domain domain = Domain::UnitSquare;
    std::string description;

    ScalarField p;
    VectorField u;
    TensorField sigma;

    TensorField kappa;
    double kappa_min = 1.0;
    double kappa_max = 1.0;
    VectorField beta;
    ScalarField div_beta;
    ScalarField c;
    double nu = 1.0;

    ScalarField f;
    VectorField f_vec;
    /// Boundary facets whose midpoint satisfies this are Neumann (empty: none).
    std::function<bool(const Vec2&)> neumann;
    ScalarField p_N;
    /// Points closer than this to a kink or to the boundary are skipped by the
    /// finite-difference residual check.
    std::function<bool(const Vec2&)> fd_admissible;
};

std::vector<std::string> catalog_names();

/// Throws ConfigError for unknown names.
ManufacturedCase manufactured_case(const std::string& name, const CaseParameters& params = {});

/// Mesh at resolution n for the case's domain, with its boundary tags.
Mesh case_mesh(const ManufacturedCase& mc, int n);

PoissonProblem poisson_problem(const ManufacturedCase& mc, double tau = 1.0);
CdrProblem cdr_problem(const ManufacturedCase& mc, double tau = 1.0);
StokesProblem stokes_problem(const ManufacturedCase& mc, double tau_n = 1.0, double tau_t = 1.0);
OseenProblem oseen_problem(const ManufacturedCase& mc, double tau_n = 1.0, double tau_t = 1.0);

/// Largest strong-form residual, relative to max(1, |f|), over `samples`
/// random admissible points. Derivatives come from Richardson-extrapolated
/// central differences of the closed-form fields, so the stored flux and
/// forcing are checked independently of their derivation.
double strong_residual_fd(const ManufacturedCase& mc, int samples = 50, unsigned seed = 1);

} // namespace hdg
