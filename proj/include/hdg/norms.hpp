#pragma once

#include "hdg/problems.hpp"
#include "hdg/system.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace hdg
{

/// Coefficient view of a solution vector, with the imposed values on
/// eliminated facets filled in.
struct DiscreteSolution
{
    const Mesh* mesh = nullptr;
    SpaceLayout layout;
    Eigen::VectorXd x;
    std::vector<Eigen::VectorXd> facet_values;

    Eigen::VectorXd sigma(int cell, int comp) const;
    Eigen::VectorXd u(int cell, int comp) const;
    Eigen::VectorXd p(int cell) const;
    Eigen::VectorXd trace(int facet, int comp) const;
};

DiscreteSolution make_solution(const Mesh& mesh, const AssembledSystem& system, Eigen::VectorXd x);

/// Per-cell coefficients: column j holds component j in the cell basis.
using CellCoefficients = std::function<Eigen::MatrixXd(int cell)>;
/// Exact field components at a point.
using ExactComponents = std::function<Eigen::VectorXd(const Vec2&)>;
/// Symmetric weight matrix at a point (empty means identity).
using PointWeight = std::function<Eigen::MatrixXd(const Vec2&)>;

/// ( sum_K integral (e^T W e) )^(1/2) with e = exact - discrete.
double l2_distance(const Mesh& mesh, int k, int degree, const CellCoefficients& coeffs,
                   const ExactComponents& exact, int components, const PointWeight& weight = {});

/// ||v||_{V_h} = (kappa^-1 v, v)^(1/2) for the u-block of x.
double vh_norm(const Mesh& mesh, const SpaceLayout& layout, const Eigen::VectorXd& x,
               const TensorField& kappa = {});

/// ||q||_0 of the p-block of x.
double pressure_l2_norm(const Mesh& mesh, const SpaceLayout& layout, const Eigen::VectorXd& x);

/// ||tau||_0 of the sigma-block and ||v||_0 of the u-block.
double sigma_l2_norm(const Mesh& mesh, const SpaceLayout& layout, const Eigen::VectorXd& x);
double velocity_l2_norm(const Mesh& mesh, const SpaceLayout& layout, const Eigen::VectorXd& x);

/// |q - qbar|_{w,s,F_h}, w = tau - (beta.n)/2 (beta may be empty).
/// Eliminated facets use zero trace unless `facet_values` is given.
double scalar_jump_seminorm(const Mesh& mesh, const SpaceLayout& layout, const Eigen::VectorXd& x,
                            const FacetParameter& tau, double s, const VectorField& beta = {},
                            const std::vector<Eigen::VectorXd>* facet_values = nullptr);

enum class FacetWeight
{
    Identity,
    S,
    SBeta
};

/// |v - vbar|_{W,s,F_h} with W = I, S, or S - (beta.n)/2 I.
double vector_jump_seminorm(const Mesh& mesh, const SpaceLayout& layout, const Eigen::VectorXd& x,
                            FacetWeight weight, const FacetParameter& tau_n,
                            const FacetParameter& tau_t, double s, const VectorField& beta = {},
                            const std::vector<Eigen::VectorXd>* facet_values = nullptr);

/// Gram matrix of the composite norm on the unknowns of `layout`:
///   Poisson/CDR:  (kappa^-1 v, v) + ||q||^2 + |q - qbar|^2_{tau_beta,0,F_h}
/// with tau_beta = tau - (beta.n)/2 for CDR.
SparseMatrix scalar_norm_matrix(const Mesh& mesh, const SpaceLayout& layout,
                                const CdrProblem& problem);

///   Stokes/Oseen: (nu^-1 tau, tau) + ||v||^2 + |v - vbar|^2_{W,0,F_h} + ||q||^2
/// with W = S (Stokes) or S_beta (Oseen). The multiplier row carries a unit
/// diagonal and is removed by the mean-zero reduction.
SparseMatrix vector_norm_matrix(const Mesh& mesh, const SpaceLayout& layout,
                                const OseenProblem& problem);

} // namespace hdg
