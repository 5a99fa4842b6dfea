#include "hdg/infsup.hpp"

#include "hdg/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>
#include <random>

namespace hdg
{

double dense_inf_sup(const Eigen::MatrixXd& M, const Eigen::MatrixXd& N)
{
    const Eigen::Index n = M.rows();
    if (M.cols() != n || N.rows() != n || N.cols() != n)
        throw Error("inf-sup operands must be square and of equal size");
    if (n > dense_inf_sup_cap)
        throw Error("dimension " + std::to_string(n) + " exceeds the dense inf-sup cap");
    if (n == 0)
        return 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(N);
    if (llt.info() != Eigen::Success || llt.matrixL().toDenseMatrix().diagonal().minCoeff() <= 0.0)
        throw Error("norm matrix is not symmetric positive definite");
    Eigen::MatrixXd A = llt.matrixL().solve(M);
    A = llt.matrixL().solve(A.transpose()).transpose();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    return svd.singularValues().minCoeff();
}

InfSupEstimate lanczos_inf_sup(const SparseMatrix& M, const SparseMatrix& N, unsigned seed,
                               int max_iterations, double tol)
{
    const Eigen::Index n = M.rows();
    InfSupEstimate out;
    out.method = InfSupMethod::Lanczos;
    out.dimension = static_cast<int>(n);
    if (n == 0)
        return out;

    if (Eigen::SimplicialLLT<SparseMatrix>(N).info() != Eigen::Success)
        throw Error("norm matrix is not positive definite");

    SparseMatrix Mc = M;
    Mc.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(Mc);
    if (lu.info() != Eigen::Success)
        throw SolverError("inf-sup operator is singular");
    SparseMatrix Mt = Mc.transpose();
    Mt.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lut;
    lut.compute(Mt);
    if (lut.info() != Eigen::Success)
        throw SolverError("inf-sup operator is singular");

    auto apply = [&](const Eigen::VectorXd& v) {
        const Eigen::VectorXd a = lut.solve(N * v);
        return Eigen::VectorXd(lu.solve(N * a));
    };

    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = dist(gen);
    const double nv = std::sqrt(v.dot(N * v));
    if (!(nv > 0.0))
        throw Error("norm matrix is not positive definite");
    v /= nv;

    const int m_max = static_cast<int>(std::min<Eigen::Index>(max_iterations, n));
    Eigen::MatrixXd V(n, m_max), NV(n, m_max);
    std::vector<double> alpha, beta;
    double theta = 0.0;
    for (int j = 0; j < m_max; ++j)
    {
        V.col(j) = v;
        NV.col(j) = N * v;
        Eigen::VectorXd w = apply(v);
        for (int pass = 0; pass < 2; ++pass)
        {
            const Eigen::VectorXd h = NV.leftCols(j + 1).transpose() * w;
            w -= V.leftCols(j + 1) * h;
            if (pass == 0)
                alpha.push_back(h(j));
        }
        const double b = std::sqrt(std::max(w.dot(N * w), 0.0));
        const int m = j + 1;
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i)
        {
            T(i, i) = alpha[i];
            if (i + 1 < m)
                T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        theta = es.eigenvalues()(m - 1);
        const double s = es.eigenvectors()(m - 1, m - 1);
        out.iterations = m;
        if (b * std::abs(s) <= tol * std::abs(theta) || b <= tol * std::abs(theta) || m == n)
            break;
        beta.push_back(b);
        v = w / b;
    }
    if (!(theta > 0.0))
        throw SolverError("Lanczos iteration produced a non-positive eigenvalue");
    out.gamma = 1.0 / std::sqrt(theta);
    return out;
}

InfSupEstimate estimate_inf_sup(const SparseMatrix& M, const SparseMatrix& N, InfSupMethod method,
                                unsigned seed)
{
    if (method == InfSupMethod::Auto)
        method = M.rows() <= 1500 ? InfSupMethod::Dense : InfSupMethod::Lanczos;
    if (method == InfSupMethod::Lanczos)
        return lanczos_inf_sup(M, N, seed);
    InfSupEstimate out;
    out.method = InfSupMethod::Dense;
    out.dimension = static_cast<int>(M.rows());
    out.gamma = dense_inf_sup(Eigen::MatrixXd(M), Eigen::MatrixXd(N));
    return out;
}

InfSupOperators inf_sup_operators(const Mesh& mesh, const AssembledSystem& system,
                                  const SparseMatrix& norm)
{
    const SpaceLayout& L = system.layout;
    if (L.multiplier < 0)
        return {system.matrix, norm};
    // Columns of Z: every unknown except the multiplier and p_{0,0}.
    const int p00 = L.p_dof(0, 0);
    const double a0 = mesh.cell_area(0);
    std::vector<Eigen::Triplet<double>> trip;
    int col = 0;
    for (int i = 0; i < L.total; ++i)
    {
        if (i == L.multiplier || i == p00)
            continue;
        trip.emplace_back(i, col, 1.0);
        if (i >= L.p_offset && i < L.trace_offset && (i - L.p_offset) % L.nk == 0)
            trip.emplace_back(p00, col, -mesh.cell_area((i - L.p_offset) / L.nk) / a0);
        ++col;
    }
    SparseMatrix Z(L.total, col);
    Z.setFromTriplets(trip.begin(), trip.end());
    InfSupOperators ops;
    ops.M = SparseMatrix(Z.transpose() * system.matrix * Z);
    ops.N = SparseMatrix(Z.transpose() * norm * Z);
    ops.M.prune(0.0);
    ops.N.prune(0.0);
    return ops;
}

InfSupEstimate measure_inf_sup(const Mesh& mesh, const AssembledSystem& system,
                               const CdrProblem& scalar, InfSupMethod method, unsigned seed)
{
    const InfSupOperators ops =
        inf_sup_operators(mesh, system, scalar_norm_matrix(mesh, system.layout, scalar));
    return estimate_inf_sup(ops.M, ops.N, method, seed);
}

InfSupEstimate measure_inf_sup(const Mesh& mesh, const AssembledSystem& system,
                               const OseenProblem& vector, InfSupMethod method, unsigned seed)
{
    const InfSupOperators ops =
        inf_sup_operators(mesh, system, vector_norm_matrix(mesh, system.layout, vector));
    return estimate_inf_sup(ops.M, ops.N, method, seed);
}

} // namespace hdg
