#include "hdg/solver.hpp"

#include "hdg/errors.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <functional>
#include <cmath>
#include <sstream>

namespace hdg
{

namespace
{

using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Cell owning each interior unknown, -1 for retained unknowns.
std::vector<int> interior_owner(const SpaceLayout& L)
{
    std::vector<int> owner(L.total, -1);
    const bool vec = is_vector_problem(L.equation);
    for (int c = 0; c < L.num_cells; ++c)
    {
        for (int s = 0; s < L.sigma_components; ++s)
            for (int i = 0; i < L.nk; ++i)
                owner[L.sigma_dof(c, s, i)] = c;
        for (int a = 0; a < L.u_components; ++a)
            for (int i = 0; i < L.nk; ++i)
                owner[L.u_dof(c, a, i)] = c;
        for (int i = vec ? 1 : 0; i < L.nk; ++i)
            owner[L.p_dof(c, i)] = c;
    }
    return owner;
}

Eigen::VectorXd refine_solution(const SparseMatrix& M, const Eigen::VectorXd& b,
                                const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_inv,
                                Eigen::VectorXd x, double bnorm)
{
    for (int it = 0; it < 3; ++it)
    {
        const Eigen::VectorXd r = b - M * x;
        if (r.norm() < 1e-13 * bnorm)
            break;
        x += apply_inv(r);
    }
    return x;
}

} // namespace

double relative_residual(const SparseMatrix& matrix, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs)
{
    const double r = (matrix * x - rhs).norm();
    const double b = rhs.norm();
    return b > 0.0 ? r / b : r;
}

Eigen::VectorXd solve_sparse(const SparseMatrix& matrix, const Eigen::VectorXd& rhs,
                             bool symmetric)
{
    const int n = static_cast<int>(rhs.size());
    if (matrix.rows() != n || matrix.cols() != n)
        throw SolverError("matrix and right-hand side sizes differ");
    if (n == 0)
        return Eigen::VectorXd();
    const double bnorm = rhs.norm();
    if (bnorm == 0.0)
        return Eigen::VectorXd::Zero(n);
    const double tol = 1e-10;

    if (symmetric)
    {
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(matrix);
        if (ldlt.info() == Eigen::Success)
        {
            Eigen::VectorXd x = ldlt.solve(rhs);
            if (ldlt.info() == Eigen::Success && x.allFinite())
            {
                x = refine_solution(
                    matrix, rhs, [&](const Eigen::VectorXd& r) { return Eigen::VectorXd(ldlt.solve(r)); },
                    x, bnorm);
                if (relative_residual(matrix, x, rhs) < tol)
                    return x;
            }
        }
    }

    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(matrix);
    lu.factorize(matrix);
    if (lu.info() != Eigen::Success)
        throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage());
    Eigen::VectorXd x = lu.solve(rhs);
    x = refine_solution(
        matrix, rhs, [&](const Eigen::VectorXd& r) { return Eigen::VectorXd(lu.solve(r)); }, x, bnorm);
    const double res = relative_residual(matrix, x, rhs);
    if (!(res < tol))
    {
        std::ostringstream os;
        os << "relative residual " << res << " above tolerance " << tol;
        throw SolverError(os.str());
    }
    return x;
}

Eigen::VectorXd solve(const AssembledSystem& system)
{
    return solve_sparse(system.matrix, system.rhs, system.symmetric);
}

CondensedSystem condense(const AssembledSystem& system)
{
    const SpaceLayout& L = system.layout;
    const std::vector<int> owner = interior_owner(L);
    const int nc = L.num_cells;
    CondensedSystem cs;
    cs.total = L.total;
    cs.symmetric = system.symmetric;
    cs.cells.resize(nc);

    std::vector<int> ret_index(L.total, -1), local_index(L.total, -1);
    for (int g = 0; g < L.total; ++g)
    {
        if (owner[g] < 0)
        {
            ret_index[g] = static_cast<int>(cs.retained.size());
            cs.retained.push_back(g);
        }
        else
        {
            auto& loc = cs.cells[owner[g]];
            local_index[g] = static_cast<int>(loc.interior.size());
            loc.interior.push_back(g);
        }
    }

    const RowMatrix R = system.matrix;
    // Pass 1: condensed unknowns coupled to each cell.
    for (int r = 0; r < L.total; ++r)
        for (RowMatrix::InnerIterator it(R, r); it; ++it)
        {
            const int c = static_cast<int>(it.col());
            if (owner[r] >= 0 && owner[c] >= 0 && owner[r] != owner[c])
                throw SolverError("interior unknowns of cells " + std::to_string(owner[r]) +
                                  " and " + std::to_string(owner[c]) + " are coupled");
            if (owner[r] >= 0 && owner[c] < 0)
                cs.cells[owner[r]].coupled.push_back(ret_index[c]);
            else if (owner[r] < 0 && owner[c] >= 0)
                cs.cells[owner[c]].coupled.push_back(ret_index[r]);
        }
    std::vector<Eigen::MatrixXd> Kii(nc), Kci(nc);
    for (int c = 0; c < nc; ++c)
    {
        auto& loc = cs.cells[c];
        std::sort(loc.coupled.begin(), loc.coupled.end());
        loc.coupled.erase(std::unique(loc.coupled.begin(), loc.coupled.end()), loc.coupled.end());
        const int ni = static_cast<int>(loc.interior.size());
        const int nr = static_cast<int>(loc.coupled.size());
        Kii[c] = Eigen::MatrixXd::Zero(ni, ni);
        Kci[c] = Eigen::MatrixXd::Zero(nr, ni);
        loc.K_ic = Eigen::MatrixXd::Zero(ni, nr);
        loc.b_i.resize(ni);
        for (int i = 0; i < ni; ++i)
            loc.b_i(i) = system.rhs(loc.interior[i]);
    }
    auto coupled_pos = [&](int cell, int ridx) {
        const auto& v = cs.cells[cell].coupled;
        return static_cast<int>(std::lower_bound(v.begin(), v.end(), ridx) - v.begin());
    };

    // Pass 2: fill blocks.
    std::vector<Eigen::Triplet<double>> trip;
    cs.rhs.resize(cs.dim());
    for (int i = 0; i < cs.dim(); ++i)
        cs.rhs(i) = system.rhs(cs.retained[i]);
    for (int r = 0; r < L.total; ++r)
        for (RowMatrix::InnerIterator it(R, r); it; ++it)
        {
            const int c = static_cast<int>(it.col());
            const double v = it.value();
            if (owner[r] >= 0)
            {
                if (owner[c] >= 0)
                    Kii[owner[r]](local_index[r], local_index[c]) = v;
                else
                    cs.cells[owner[r]].K_ic(local_index[r], coupled_pos(owner[r], ret_index[c])) = v;
            }
            else if (owner[c] >= 0)
                Kci[owner[c]](coupled_pos(owner[c], ret_index[r]), local_index[c]) = v;
            else
                trip.emplace_back(ret_index[r], ret_index[c], v);
        }

    for (int c = 0; c < nc; ++c)
    {
        auto& loc = cs.cells[c];
        if (loc.interior.empty())
            continue;
        loc.lu.compute(Kii[c]);
        const double rc = loc.lu.rcond();
        const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
        if (!(cond < 1e12))
            throw SolverError("local interior block of cell " + std::to_string(c) +
                              " is singular or ill-conditioned (condition ~ " +
                              std::to_string(cond) + ")");
        cs.max_local_condition = std::max(cs.max_local_condition, cond);
        const Eigen::MatrixXd X = loc.lu.solve(loc.K_ic);
        const Eigen::VectorXd y = loc.lu.solve(loc.b_i);
        const Eigen::MatrixXd Sk = Kci[c] * X;
        const Eigen::VectorXd sk = Kci[c] * y;
        const int nr = static_cast<int>(loc.coupled.size());
        for (int a = 0; a < nr; ++a)
        {
            cs.rhs(loc.coupled[a]) -= sk(a);
            for (int b = 0; b < nr; ++b)
                if (Sk(a, b) != 0.0)
                    trip.emplace_back(loc.coupled[a], loc.coupled[b], -Sk(a, b));
        }
    }
    cs.matrix.resize(cs.dim(), cs.dim());
    cs.matrix.setFromTriplets(trip.begin(), trip.end());
    cs.matrix.makeCompressed();
    return cs;
}

Eigen::VectorXd solve(const CondensedSystem& cs)
{
    Eigen::VectorXd xr = cs.dim() > 0 ? solve_sparse(cs.matrix, cs.rhs, cs.symmetric)
                                      : Eigen::VectorXd();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cs.total);
    for (int i = 0; i < cs.dim(); ++i)
        x(cs.retained[i]) = xr(i);
    for (const auto& loc : cs.cells)
    {
        if (loc.interior.empty())
            continue;
        Eigen::VectorXd rhs = loc.b_i;
        for (std::size_t a = 0; a < loc.coupled.size(); ++a)
            rhs -= loc.K_ic.col(static_cast<Eigen::Index>(a)) * xr(loc.coupled[a]);
        const Eigen::VectorXd xi = loc.lu.solve(rhs);
        for (std::size_t i = 0; i < loc.interior.size(); ++i)
            x(loc.interior[i]) = xi(static_cast<Eigen::Index>(i));
    }
    return x;
}

} // namespace hdg
