#pragma once

#include "hdg/problems.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hdg
{

/// Per-cell coefficients of (Pi_V u, Pi_Q p). u holds x then y.
struct PoissonProjection
{
    int k = 0;
    std::vector<Eigen::VectorXd> u;
    std::vector<Eigen::VectorXd> p;
    double max_residual = 0.0; ///< largest moment residual relative to its scale
};

/// Per-cell coefficients of (Pi_Sigma sigma, Pi_V u, Pi_Q p). sigma is row-major.
struct StokesProjection
{
    int k = 0;
    std::vector<Eigen::VectorXd> sigma;
    std::vector<Eigen::VectorXd> u;
    std::vector<Eigen::VectorXd> p;
    double max_residual = 0.0;
};

/// Element-wise projection defined by
///   (Pi_V u, v')_K = (u, v')_K             v' in P_{k-1}(K)^2
///   (Pi_Q p, q')_K = (p, q')_K             q' in P_{k-1}(K)
///   <Pi_V u.n + tau Pi_Q p, l>_F = <u.n + tau p, l>_F   l in P_k(F), F in dK.
/// Throws Error naming the cell when a local system is singular.
PoissonProjection hdg_project_poisson(const Mesh& mesh, int k, const FacetParameter& tau,
                                      const VectorField& u, const ScalarField& p, int degree = -1);

/// Element-wise projection defined by moments in P_{k-1}, the trace moment
/// (tr Pi sigma, w)_K = (tr sigma, w)_K for w in P_k, and on each facet
///   <Pi sigma n - Pi_Q p n - S Pi_V u, l> = <sigma n - p n - S u, l>,  l in P_k(F)^2.
StokesProjection hdg_project_stokes(const Mesh& mesh, int k, const FacetParameter& tau_n,
                                    const FacetParameter& tau_t, const TensorField& sigma,
                                    const VectorField& u, const ScalarField& p, int degree = -1);

/// Facet-wise L^2 projection onto P_k(F), coefficients in the facet basis.
std::vector<Eigen::VectorXd> facet_l2_project(const Mesh& mesh, int k, const ScalarField& g,
                                              int degree = -1);

/// Facet-wise mean values (projection onto constants).
std::vector<double> facet_mean(const Mesh& mesh, const ScalarField& g, int degree = 8);

/// Cell-wise mean of a vector field.
std::vector<Vec2> cell_mean(const Mesh& mesh, const VectorField& g, int degree = 8);

} // namespace hdg
