#pragma once

#include "hdg/mesh.hpp"

#include <functional>
#include <vector>

namespace hdg
{

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
using TensorField = std::function<Mat2(const Vec2&)>;

/// Piecewise-constant facet parameter: a uniform value unless per-facet
/// values are given.
struct FacetParameter
{
    double value = 1.0;
    std::vector<double> per_facet;

    double at(int facet) const
    {
        return per_facet.empty() ? value : per_facet[static_cast<std::size_t>(facet)];
    }
};

/// div(kappa grad p) = f, p = p_D on the Dirichlet part, -kappa grad p . n = p_N
/// on the Neumann part. Empty fields mean zero; an empty kappa means identity.
struct PoissonProblem
{
    TensorField kappa;
    double kappa_min = 1.0;
    double kappa_max = 1.0;
    ScalarField f;
    ScalarField p_D;
    ScalarField p_N;
    FacetParameter tau;
};

/// -div(kappa grad p) + beta . grad p + c p = f with p = p_D on the boundary.
/// When div_beta is empty it is computed by central differences.
struct CdrProblem : PoissonProblem
{
    VectorField beta;
    ScalarField div_beta;
    ScalarField c;
};

/// -div(nu grad u - p I) = f, div u = 0, u = g on the boundary.
/// S = tau_n n (x) n + tau_t (I - n (x) n) on every facet.
struct StokesProblem
{
    double nu = 1.0;
    VectorField f;
    VectorField g;
    FacetParameter tau_n;
    FacetParameter tau_t;
};

/// -div(nu grad u - u (x) beta - p I) = f with divergence-free beta.
struct OseenProblem : StokesProblem
{
    VectorField beta;
    ScalarField div_beta;
};

/// Stabilization tensor of one facet.
Mat2 stabilization_tensor(double tau_n, double tau_t, const Vec2& n);

/// Central-difference divergence with step 1e-6.
double divergence_fd(const VectorField& beta, const Vec2& x);

} // namespace hdg
