#pragma once

#include "hdg/problems.hpp"
#include "hdg/system.hpp"

namespace hdg
{

/// Symmetric system over (sigma | u | p | trace | multiplier) bordered by the
/// constraint that the pressure has zero mean. Boundary traces are fixed to
/// the facet projection of the boundary velocity.
/// Throws AssemblyError for nu <= 0 or tau_n, tau_t <= 0.
AssembledSystem assemble_stokes(const Mesh& mesh, const StokesProblem& problem, int k,
                                const AssemblyOptions& opts = {});

/// Right-hand side contribution of the boundary velocity alone.
Eigen::VectorXd stokes_dirichlet_lift(const Mesh& mesh, const StokesProblem& problem, int k,
                                      const AssemblyOptions& opts = {});

} // namespace hdg
