#include "hdg/projection.hpp"

#include "hdg/basis.hpp"
#include "hdg/element.hpp"
#include "hdg/errors.hpp"
#include "hdg/quadrature.hpp"

#include <Eigen/LU>

#include <cmath>

namespace hdg
{

namespace
{

Eigen::VectorXd solve_local(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int cell,
                            double& max_residual)
{
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
        throw Error("local projection system is singular in cell " + std::to_string(cell));
    const Eigen::VectorXd z = lu.solve(b);
    const Eigen::VectorXd r = A * z - b;
    for (int i = 0; i < r.size(); ++i)
    {
        const double scale = std::max(1.0, std::abs(b(i)));
        max_residual = std::max(max_residual, std::abs(r(i)) / scale);
    }
    return z;
}

} // namespace

PoissonProjection hdg_project_poisson(const Mesh& mesh, int k, const FacetParameter& tau,
                                      const VectorField& u, const ScalarField& p, int degree)
{
    const CellBasis basis(k);
    const FacetBasis fb(k);
    const int deg = degree >= 0 ? degree : 2 * k + 4;
    const int nk = basis.size(), nf = fb.size(), nm = cell_dim(k - 1);
    PoissonProjection out;
    out.k = k;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, deg, deg);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3 * nk, 3 * nk);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * nk);
        const Eigen::MatrixXd M = weighted_mass(E.phi, E.w);
        Eigen::MatrixXd fu(E.num_points(), 3);
        for (int q = 0; q < E.num_points(); ++q)
        {
            const Vec2 uq = u(E.x[q]);
            fu(q, 0) = uq.x();
            fu(q, 1) = uq.y();
            fu(q, 2) = p(E.x[q]);
        }
        const Eigen::MatrixXd loads = E.phi.transpose() * E.w.asDiagonal() * fu;
        int row = 0;
        for (int f = 0; f < 3; ++f)
            for (int i = 0; i < nm; ++i, ++row)
            {
                A.block(row, f * nk, 1, nk) = M.row(i);
                b(row) = loads(i, f);
            }
        for (const FacetData& F : E.facets)
        {
            const double t = tau.at(F.facet);
            Eigen::VectorXd g(F.w.size());
            for (int q = 0; q < F.w.size(); ++q)
                g(q) = u(F.x[q]).dot(F.normal) + t * p(F.x[q]);
            const Eigen::MatrixXd Mtp = weighted_product(F.psi, F.w, F.phi);
            const Eigen::VectorXd rhs = F.psi.transpose() * F.w.asDiagonal() * g;
            for (int j = 0; j < nf; ++j, ++row)
            {
                A.block(row, 0, 1, nk) = F.normal.x() * Mtp.row(j);
                A.block(row, nk, 1, nk) = F.normal.y() * Mtp.row(j);
                A.block(row, 2 * nk, 1, nk) = t * Mtp.row(j);
                b(row) = rhs(j);
            }
        }
        const Eigen::VectorXd z = solve_local(A, b, c, out.max_residual);
        out.u.push_back(z.head(2 * nk));
        out.p.push_back(z.tail(nk));
    }
    return out;
}

StokesProjection hdg_project_stokes(const Mesh& mesh, int k, const FacetParameter& tau_n,
                                    const FacetParameter& tau_t, const TensorField& sigma,
                                    const VectorField& u, const ScalarField& p, int degree)
{
    const CellBasis basis(k);
    const FacetBasis fb(k);
    const int deg = degree >= 0 ? degree : 2 * k + 4;
    const int nk = basis.size(), nf = fb.size(), nm = cell_dim(k - 1);
    const int U = 4 * nk, P = 6 * nk, n = 7 * nk;
    StokesProjection out;
    out.k = k;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, deg, deg);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        const Eigen::MatrixXd M = weighted_mass(E.phi, E.w);
        // Columns: sigma xx, xy, yx, yy, u x, u y, p.
        Eigen::MatrixXd fv(E.num_points(), 7);
        for (int q = 0; q < E.num_points(); ++q)
        {
            const Mat2 s = sigma(E.x[q]);
            const Vec2 uq = u(E.x[q]);
            fv.row(q) << s(0, 0), s(0, 1), s(1, 0), s(1, 1), uq.x(), uq.y(), p(E.x[q]);
        }
        const Eigen::MatrixXd loads = E.phi.transpose() * E.w.asDiagonal() * fv;
        int row = 0;
        for (int f = 0; f < 7; ++f)
            for (int i = 0; i < nm; ++i, ++row)
            {
                A.block(row, f * nk, 1, nk) = M.row(i);
                b(row) = loads(i, f);
            }
        for (int i = nm; i < nk; ++i, ++row)
        {
            A.block(row, 0, 1, nk) = M.row(i);
            A.block(row, 3 * nk, 1, nk) = M.row(i);
            b(row) = loads(i, 0) + loads(i, 3);
        }
        for (const FacetData& F : E.facets)
        {
            const Mat2 S = stabilization_tensor(tau_n.at(F.facet), tau_t.at(F.facet), F.normal);
            const Vec2& nrm = F.normal;
            Eigen::MatrixXd g(F.w.size(), 2);
            for (int q = 0; q < F.w.size(); ++q)
            {
                const Vec2 val = sigma(F.x[q]) * nrm - p(F.x[q]) * nrm - S * u(F.x[q]);
                g.row(q) = val.transpose();
            }
            const Eigen::MatrixXd Mtp = weighted_product(F.psi, F.w, F.phi);
            const Eigen::MatrixXd rhs = F.psi.transpose() * F.w.asDiagonal() * g;
            for (int a = 0; a < 2; ++a)
                for (int j = 0; j < nf; ++j, ++row)
                {
                    for (int bb = 0; bb < 2; ++bb)
                    {
                        A.block(row, (2 * a + bb) * nk, 1, nk) = nrm(bb) * Mtp.row(j);
                        A.block(row, U + bb * nk, 1, nk) = -S(a, bb) * Mtp.row(j);
                    }
                    A.block(row, P, 1, nk) = -nrm(a) * Mtp.row(j);
                    b(row) = rhs(j, a);
                }
        }
        const Eigen::VectorXd z = solve_local(A, b, c, out.max_residual);
        out.sigma.push_back(z.head(4 * nk));
        out.u.push_back(z.segment(U, 2 * nk));
        out.p.push_back(z.tail(nk));
    }
    return out;
}

std::vector<Eigen::VectorXd> facet_l2_project(const Mesh& mesh, int k, const ScalarField& g,
                                              int degree)
{
    const int deg = degree >= 0 ? degree : 2 * k + 4;
    std::vector<Eigen::VectorXd> out;
    for (int f = 0; f < mesh.num_facets(); ++f)
        out.push_back(facet_l2_coefficients(mesh, f, k, g, deg));
    return out;
}

std::vector<double> facet_mean(const Mesh& mesh, const ScalarField& g, int degree)
{
    std::vector<double> out;
    for (int f = 0; f < mesh.num_facets(); ++f)
        out.push_back(facet_l2_coefficients(mesh, f, 0, g, degree)(0));
    return out;
}

std::vector<Vec2> cell_mean(const Mesh& mesh, const VectorField& g, int degree)
{
    const QuadratureRule& qr = quadrature_rule(degree);
    std::vector<Vec2> out;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const CellGeometry geo = cell_geometry(mesh, c);
        Vec2 s = Vec2::Zero();
        for (int q = 0; q < qr.size(); ++q)
            s += 2.0 * qr.weights[q] * g(geo.to_physical(qr.points[q]));
        out.push_back(s);
    }
    return out;
}

} // namespace hdg
