#pragma once

#include "hdg/layout.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace hdg
{

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Stabilization bounds measured during assembly.
struct StabilityReport
{
    double tau_min = 0.0; ///< smallest effective stabilization (tau, tau_beta, or eig S_beta)
    double tau_max = 0.0;
    double h = 0.0;       ///< max cell diameter
    double c_tau = 0.0;   ///< tau_min / sqrt(h)
    double beta_w1inf = 0.0;
    std::vector<std::string> notes;
};

/// Square sparse system over the non-eliminated unknowns of `layout`.
/// Rows are test functions, columns trial functions.
struct AssembledSystem
{
    SpaceLayout layout;
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    bool symmetric = true;
    /// Trace coefficients imposed on eliminated facets (component-major), empty elsewhere.
    std::vector<Eigen::VectorXd> facet_values;
    StabilityReport report;
};

/// Quadrature degrees; negative values select 2k+2 for forms and 2k+4 for loads.
struct AssemblyOptions
{
    int form_degree = -1;
    int load_degree = -1;

    int forms(int k) const { return form_degree >= 0 ? form_degree : 2 * k + 2; }
    int loads(int k) const { return load_degree >= 0 ? load_degree : 2 * k + 4; }
};

} // namespace hdg
