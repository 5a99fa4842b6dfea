#pragma once

#include "hdg/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace hdg
{

/// Element-wise static condensation of an assembled system onto its retained
/// unknowns: traces, plus (Stokes/Oseen) the constant pressure mode of each
/// cell and the mean-zero multiplier.
struct CondensedSystem
{
    SparseMatrix matrix;            ///< Schur complement M_RR - M_RI M_II^-1 M_IR
    Eigen::VectorXd rhs;
    std::vector<int> retained;      ///< global index of each condensed unknown
    bool symmetric = true;
    double max_local_condition = 0.0;

    struct Local
    {
        std::vector<int> interior;  ///< global indices
        std::vector<int> coupled;   ///< condensed indices touching this cell
        Eigen::PartialPivLU<Eigen::MatrixXd> lu;
        Eigen::MatrixXd K_ic;       ///< interior rows, coupled columns
        Eigen::VectorXd b_i;
    };
    std::vector<Local> cells;
    int total = 0;                  ///< size of the full system

    int dim() const noexcept { return static_cast<int>(retained.size()); }
};

/// Throws SolverError naming the cell when a local interior block is singular
/// or its condition number exceeds 1e12.
CondensedSystem condense(const AssembledSystem& system);

/// Sparse direct solve: LDL^T for symmetric matrices with an LU fallback, LU
/// otherwise. Throws SolverError unless ||Mx - b|| < 1e-10 ||b||.
Eigen::VectorXd solve_sparse(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                             bool symmetric);

Eigen::VectorXd solve(const AssembledSystem& system);

/// Solves the condensed system and recovers every interior unknown.
Eigen::VectorXd solve(const CondensedSystem& system);

/// Relative residual ||Mx - b|| / ||b|| (absolute when b = 0).
double relative_residual(const SparseMatrix& matrix, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs);

} // namespace hdg
