#pragma once

#include "hdg/problems.hpp"
#include "hdg/system.hpp"

namespace hdg
{

/// Saddle-point system [[A, B^T], [B, -C]] over (u | p, trace).
/// Throws AssemblyError for tau <= 0 or kappa outside its declared bounds.
AssembledSystem assemble_poisson(const Mesh& mesh, const PoissonProblem& problem, int k,
                                 const AssemblyOptions& opts = {});

/// Right-hand side only: loads, Neumann data, and the Dirichlet lifting.
Eigen::VectorXd poisson_rhs_only(const Mesh& mesh, const PoissonProblem& problem,
                                 const SpaceLayout& layout, const AssemblyOptions& opts = {});

} // namespace hdg
