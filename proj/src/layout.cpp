#include "hdg/layout.hpp"

#include "hdg/basis.hpp"
#include "hdg/errors.hpp"

namespace hdg
{

std::string to_string(Equation eq)
{
    switch (eq)
    {
    case Equation::Poisson:
        return "poisson";
    case Equation::CDR:
        return "cdr";
    case Equation::Stokes:
        return "stokes";
    case Equation::Oseen:
        return "oseen";
    }
    return "unknown";
}

Equation parse_equation(const std::string& name)
{
    if (name == "poisson")
        return Equation::Poisson;
    if (name == "cdr")
        return Equation::CDR;
    if (name == "stokes")
        return Equation::Stokes;
    if (name == "oseen")
        return Equation::Oseen;
    throw ConfigError("unknown equation '" + name + "'");
}

SpaceLayout build_layout(const Mesh& mesh, int k, Equation equation)
{
    check_degree(k);
    SpaceLayout l;
    l.equation = equation;
    l.k = k;
    l.nk = cell_dim(k);
    l.nf = facet_dim(k);
    l.num_cells = mesh.num_cells();
    const bool vec = is_vector_problem(equation);
    l.sigma_components = vec ? 4 : 0;
    l.u_components = 2;
    l.trace_components = vec ? 2 : 1;

    if (!vec)
    {
        if (mesh.num_facets_tagged(FacetTag::Dirichlet) == 0)
            throw ConfigError(to_string(equation) + " needs at least one Dirichlet facet");
        if (equation == Equation::CDR && mesh.num_facets_tagged(FacetTag::Neumann) > 0)
            throw ConfigError("cdr requires the whole boundary to be Dirichlet");
    }

    const int nc = mesh.num_cells();
    l.sigma_offset = 0;
    l.u_offset = l.sigma_offset + nc * l.sigma_components * l.nk;
    l.p_offset = l.u_offset + nc * l.u_components * l.nk;
    l.trace_offset = l.p_offset + nc * l.nk;
    int next = l.trace_offset;
    l.facet_dof.assign(mesh.num_facets(), -1);
    for (int f = 0; f < mesh.num_facets(); ++f)
    {
        const Facet& facet = mesh.facets()[f];
        const bool elim = vec ? facet.is_boundary() : facet.tag == FacetTag::Dirichlet;
        if (elim)
            continue;
        l.facet_dof[f] = next;
        next += l.trace_components * l.nf;
    }
    if (vec)
        l.multiplier = next++;
    l.total = next;
    return l;
}

} // namespace hdg
