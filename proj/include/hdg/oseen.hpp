#pragma once

#include "hdg/problems.hpp"
#include "hdg/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hdg
{

/// Stokes blocks plus (u (x) beta, grad v) - <(beta.n) ubar, v - vbar>.
/// Throws AssemblyError when div beta != 0 or S - (beta.n)/2 I is not
/// positive definite on a facet.
AssembledSystem assemble_oseen(const Mesh& mesh, const OseenProblem& problem, int k,
                               const AssemblyOptions& opts = {});

/// Eigenvalues (ascending) of S_beta = S - (beta.n)/2 I at point x of a facet.
Eigen::Vector2d s_beta_eigenvalues(double tau_n, double tau_t, const Vec2& n, const Vec2& beta);

/// Smallest eigenvalue of S_beta over all facet quadrature points.
double s_beta_min(const Mesh& mesh, const OseenProblem& problem, int k);

/// (v (x) beta, grad v) and 1/2 <(beta.n) v, v> for cell coefficients v
/// (x then y per cell). degree < 0 selects 2k+2.
Eigen::Vector2d oseen_identity_sides(const Mesh& mesh, const OseenProblem& problem, int k,
                                     const std::vector<Eigen::VectorXd>& v, int degree = -1);

/// Largest |(v (x) beta, grad v) - 1/2 <(beta.n) v, v>| over random v in V_h.
double verify_oseen_identity(const Mesh& mesh, const OseenProblem& problem, int k, int trials,
                             unsigned seed = 1);

} // namespace hdg
