#pragma once

#include "hdg/norms.hpp"
#include "hdg/system.hpp"

#include <Eigen/Dense>

namespace hdg
{

inline constexpr int dense_inf_sup_cap = 20000;

enum class InfSupMethod
{
    Dense,
    Lanczos,
    Auto ///< dense up to 1500 unknowns, Lanczos beyond
};

struct InfSupEstimate
{
    double gamma = 0.0;
    int dimension = 0;
    InfSupMethod method = InfSupMethod::Dense;
    int iterations = 0;
};

/// Operator pair on which the inf-sup constant is measured.
struct InfSupOperators
{
    SparseMatrix M;
    SparseMatrix N;
};

/// sigma_min(L^-1 M L^-T) with N = L L^T. Throws Error when N is not SPD or
/// the dimension exceeds dense_inf_sup_cap.
double dense_inf_sup(const Eigen::MatrixXd& M, const Eigen::MatrixXd& N);

/// Same quantity through Lanczos on M^-1 N M^-T N in the N inner product,
/// whose largest eigenvalue is gamma^-2. Throws Error when N is not SPD.
InfSupEstimate lanczos_inf_sup(const SparseMatrix& M, const SparseMatrix& N, unsigned seed = 1,
                               int max_iterations = 400, double tol = 1e-13);

InfSupEstimate estimate_inf_sup(const SparseMatrix& M, const SparseMatrix& N,
                                InfSupMethod method = InfSupMethod::Auto, unsigned seed = 1);

/// Restricts an assembled system and its norm Gram matrix to the discrete
/// spaces of the theory. Scalar problems pass through; for Stokes/Oseen the
/// multiplier is dropped and the pressure is restricted to zero mean by
/// expressing the constant mode of cell 0 through the others.
InfSupOperators inf_sup_operators(const Mesh& mesh, const AssembledSystem& system,
                                  const SparseMatrix& norm);

/// Composite-norm Gram matrix for the system's equation, then estimate_inf_sup.
InfSupEstimate measure_inf_sup(const Mesh& mesh, const AssembledSystem& system,
                               const CdrProblem& scalar, InfSupMethod method = InfSupMethod::Auto,
                               unsigned seed = 1);
InfSupEstimate measure_inf_sup(const Mesh& mesh, const AssembledSystem& system,
                               const OseenProblem& vector, InfSupMethod method = InfSupMethod::Auto,
                               unsigned seed = 1);

} // namespace hdg
