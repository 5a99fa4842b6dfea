#pragma once

#include "hdg/problems.hpp"
#include "hdg/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hdg
{

/// Poisson blocks plus (beta p, grad q) - ((c - div beta) p, q) - <(beta.n) pbar, q - qbar>.
/// Throws AssemblyError naming the cell or facet when c - div(beta)/2 < 0 or
/// tau - (beta.n)/2 <= 0 at a quadrature point.
AssembledSystem assemble_cdr(const Mesh& mesh, const CdrProblem& problem, int k,
                             const AssemblyOptions& opts = {});

/// Largest |lhs - rhs| of
///   (beta q, grad q) - ((c - div beta) q, q) - <(beta.n) qbar, q - qbar>
///     = -(c_beta q, q) + 1/2 <(beta.n)(q - qbar), q - qbar>
/// over `trials` random (q, qbar) in Q_h x M_h.
/// Both sides of the identity above for given cell coefficients q and facet
/// coefficients qbar (zero on Dirichlet facets). degree < 0 selects 2k+2.
Eigen::Vector2d convection_identity_sides(const Mesh& mesh, const CdrProblem& problem, int k,
                                          const std::vector<Eigen::VectorXd>& q,
                                          const std::vector<Eigen::VectorXd>& qbar,
                                          int degree = -1);

double verify_convection_identity(const Mesh& mesh, const CdrProblem& problem, int k, int trials,
                                  unsigned seed = 1);

} // namespace hdg
