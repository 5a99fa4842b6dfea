#pragma once

#include "hdg/mesh.hpp"

#include <string>
#include <vector>

namespace hdg
{

enum class Equation
{
    Poisson,
    CDR,
    Stokes,
    Oseen
};

std::string to_string(Equation eq);
Equation parse_equation(const std::string& name);
inline bool is_vector_problem(Equation eq) noexcept
{
    return eq == Equation::Stokes || eq == Equation::Oseen;
}

/// Global numbering of the discrete unknowns. Blocks are field-major:
/// [sigma | u | p | trace | multiplier], each cell block in cell order and the
/// trace block in facet order. Eliminated facets own no trace unknowns.
///
/// Within a cell block components are contiguous: sigma stores xx, xy, yx, yy
/// (row-major), u stores x then y, each with cell_dim(k) coefficients. A trace
/// block stores facet_dim(k) coefficients per component.
struct SpaceLayout
{
    Equation equation = Equation::Poisson;
    int k = 0;
    int nk = 0;          ///< scalar cell basis size
    int nf = 0;          ///< scalar facet basis size
    int num_cells = 0;
    int sigma_components = 0; ///< 0 or 4
    int u_components = 2;
    int trace_components = 1;

    int sigma_offset = 0;
    int u_offset = 0;
    int p_offset = 0;
    int trace_offset = 0;
    int multiplier = -1; ///< index of the mean-zero constraint unknown, or -1
    int total = 0;

    /// First trace unknown of each facet, or -1 when eliminated.
    std::vector<int> facet_dof;

    int dim_sigma() const noexcept { return u_offset - sigma_offset; }
    int dim_u() const noexcept { return p_offset - u_offset; }
    int dim_p() const noexcept { return trace_offset - p_offset; }
    int dim_trace() const noexcept
    {
        return (multiplier >= 0 ? multiplier : total) - trace_offset;
    }
    int num_trace_facets() const noexcept { return dim_trace() / (nf * trace_components); }

    int sigma_dof(int cell, int comp, int i) const
    {
        return sigma_offset + (cell * sigma_components + comp) * nk + i;
    }
    int u_dof(int cell, int comp, int i) const
    {
        return u_offset + (cell * u_components + comp) * nk + i;
    }
    int p_dof(int cell, int i) const { return p_offset + cell * nk + i; }
    /// -1 for eliminated facets.
    int trace_dof(int facet, int comp, int j) const
    {
        const int base = facet_dof[facet];
        return base < 0 ? -1 : base + comp * nf + j;
    }
    bool eliminated(int facet) const { return facet_dof[facet] < 0; }
    bool is_trace(int dof) const noexcept
    {
        return dof >= trace_offset && (multiplier < 0 || dof < multiplier);
    }
};

/// Poisson/CDR eliminate Dirichlet facets; Stokes/Oseen eliminate every
/// boundary facet and append one multiplier for the pressure mean.
/// Throws ConfigError when Poisson/CDR has no Dirichlet facet, when a CDR
/// mesh carries Neumann facets, or when k is outside [0, max_degree].
SpaceLayout build_layout(const Mesh& mesh, int k, Equation equation);

} // namespace hdg
