#include "hdg/norms.hpp"

#include "hdg/element.hpp"
#include "hdg/errors.hpp"
#include "hdg/quadrature.hpp"

#include <cmath>

namespace hdg
{

Eigen::VectorXd DiscreteSolution::sigma(int cell, int comp) const
{
    return x.segment(layout.sigma_dof(cell, comp, 0), layout.nk);
}

Eigen::VectorXd DiscreteSolution::u(int cell, int comp) const
{
    return x.segment(layout.u_dof(cell, comp, 0), layout.nk);
}

Eigen::VectorXd DiscreteSolution::p(int cell) const
{
    return x.segment(layout.p_dof(cell, 0), layout.nk);
}

Eigen::VectorXd DiscreteSolution::trace(int facet, int comp) const
{
    if (layout.eliminated(facet))
    {
        const auto& v = facet_values[facet];
        return v.size() > 0 ? Eigen::VectorXd(v.segment(comp * layout.nf, layout.nf))
                            : Eigen::VectorXd(Eigen::VectorXd::Zero(layout.nf));
    }
    return x.segment(layout.trace_dof(facet, comp, 0), layout.nf);
}

DiscreteSolution make_solution(const Mesh& mesh, const AssembledSystem& system, Eigen::VectorXd x)
{
    DiscreteSolution s;
    s.mesh = &mesh;
    s.layout = system.layout;
    s.x = std::move(x);
    s.facet_values = system.facet_values;
    return s;
}

double l2_distance(const Mesh& mesh, int k, int degree, const CellCoefficients& coeffs,
                   const ExactComponents& exact, int components, const PointWeight& weight)
{
    const CellBasis basis(k);
    const QuadratureRule& qr = quadrature_rule(degree);
    std::vector<Eigen::VectorXd> phi;
    for (const Vec2& p : qr.points)
        phi.push_back(basis.values(p));
    double total = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const CellGeometry g = cell_geometry(mesh, c);
        const Eigen::MatrixXd C = coeffs ? coeffs(c) : Eigen::MatrixXd::Zero(basis.size(), components);
        for (int q = 0; q < qr.size(); ++q)
        {
            const Vec2 x = g.to_physical(qr.points[q]);
            Eigen::VectorXd e = C.transpose() * phi[q];
            if (exact)
                e = exact(x) - e;
            const double v = weight ? e.dot(weight(x) * e) : e.squaredNorm();
            total += qr.weights[q] * g.det * v;
        }
    }
    return std::sqrt(std::max(total, 0.0));
}

double vh_norm(const Mesh& mesh, const SpaceLayout& L, const Eigen::VectorXd& x,
               const TensorField& kappa)
{
    PointWeight w;
    if (kappa)
        w = [&kappa](const Vec2& p) { return Eigen::MatrixXd(kappa(p).inverse()); };
    return l2_distance(
        mesh, L.k, 2 * L.k + 2,
        [&](int c) {
            Eigen::MatrixXd C(L.nk, 2);
            C.col(0) = x.segment(L.u_dof(c, 0, 0), L.nk);
            C.col(1) = x.segment(L.u_dof(c, 1, 0), L.nk);
            return C;
        },
        {}, 2, w);
}

double pressure_l2_norm(const Mesh& mesh, const SpaceLayout& L, const Eigen::VectorXd& x)
{
    double t = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
        t += mesh.cell_area(c) * x.segment(L.p_dof(c, 0), L.nk).squaredNorm();
    return std::sqrt(t);
}

double sigma_l2_norm(const Mesh& mesh, const SpaceLayout& L, const Eigen::VectorXd& x)
{
    double t = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
        t += mesh.cell_area(c) * x.segment(L.sigma_dof(c, 0, 0), 4 * L.nk).squaredNorm();
    return std::sqrt(t);
}

double velocity_l2_norm(const Mesh& mesh, const SpaceLayout& L, const Eigen::VectorXd& x)
{
    double t = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
        t += mesh.cell_area(c) * x.segment(L.u_dof(c, 0, 0), 2 * L.nk).squaredNorm();
    return std::sqrt(t);
}

namespace
{

Eigen::VectorXd trace_of(const SpaceLayout& L, const Eigen::VectorXd& x, int facet, int comp,
                         const std::vector<Eigen::VectorXd>* fv)
{
    if (!L.eliminated(facet))
        return x.segment(L.trace_dof(facet, comp, 0), L.nf);
    if (fv && (*fv)[facet].size() > 0)
        return (*fv)[facet].segment(comp * L.nf, L.nf);
    return Eigen::VectorXd::Zero(L.nf);
}

} // namespace

double scalar_jump_seminorm(const Mesh& mesh, const SpaceLayout& L, const Eigen::VectorXd& x,
                            const FacetParameter& tau, double s, const VectorField& beta,
                            const std::vector<Eigen::VectorXd>* fv)
{
    const CellBasis basis(L.k);
    const FacetBasis fb(L.k);
    const int deg = 2 * L.k + 2;
    double total = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, 0, deg);
        const Eigen::VectorXd q = x.segment(L.p_dof(c, 0), L.nk);
        double cell = 0.0;
        for (const FacetData& F : E.facets)
        {
            const Eigen::VectorXd jump = F.phi * q - F.psi * trace_of(L, x, F.facet, 0, fv);
            for (int i = 0; i < F.w.size(); ++i)
            {
                double w = tau.at(F.facet);
                if (beta)
                    w -= 0.5 * beta(F.x[i]).dot(F.normal);
                cell += F.w(i) * w * jump(i) * jump(i);
            }
        }
        total += std::pow(E.h, 2.0 * s) * cell;
    }
    return std::sqrt(std::max(total, 0.0));
}

double vector_jump_seminorm(const Mesh& mesh, const SpaceLayout& L, const Eigen::VectorXd& x,
                            FacetWeight weight, const FacetParameter& tau_n,
                            const FacetParameter& tau_t, double s, const VectorField& beta,
                            const std::vector<Eigen::VectorXd>* fv)
{
    const CellBasis basis(L.k);
    const FacetBasis fb(L.k);
    const int deg = 2 * L.k + 2;
    double total = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, 0, deg);
        double cell = 0.0;
        for (const FacetData& F : E.facets)
        {
            Eigen::MatrixXd J(F.w.size(), 2);
            for (int a = 0; a < 2; ++a)
                J.col(a) = F.phi * x.segment(L.u_dof(c, a, 0), L.nk) -
                           F.psi * trace_of(L, x, F.facet, a, fv);
            Mat2 W = Mat2::Identity();
            if (weight != FacetWeight::Identity)
                W = stabilization_tensor(tau_n.at(F.facet), tau_t.at(F.facet), F.normal);
            for (int i = 0; i < F.w.size(); ++i)
            {
                Mat2 Wi = W;
                if (weight == FacetWeight::SBeta && beta)
                    Wi -= 0.5 * beta(F.x[i]).dot(F.normal) * Mat2::Identity();
                const Vec2 j = J.row(i).transpose();
                cell += F.w(i) * j.dot(Wi * j);
            }
        }
        total += std::pow(E.h, 2.0 * s) * cell;
    }
    return std::sqrt(std::max(total, 0.0));
}

namespace
{

void scatter_sym(const Eigen::MatrixXd& A, const std::vector<int>& dofs,
                 std::vector<Eigen::Triplet<double>>& trip)
{
    const int n = static_cast<int>(dofs.size());
    for (int r = 0; r < n; ++r)
    {
        if (dofs[r] < 0)
            continue;
        for (int c = 0; c < n; ++c)
            if (dofs[c] >= 0 && A(r, c) != 0.0)
                trip.emplace_back(dofs[r], dofs[c], A(r, c));
    }
}

} // namespace

SparseMatrix scalar_norm_matrix(const Mesh& mesh, const SpaceLayout& L, const CdrProblem& pb)
{
    const CellBasis basis(L.k);
    const FacetBasis fb(L.k);
    const int deg = 2 * L.k + 2;
    const int nk = L.nk, nf = L.nf, P = 2 * nk;
    const int nloc = 3 * nk + 3 * nf;
    const bool conv = L.equation == Equation::CDR && static_cast<bool>(pb.beta);
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<int> dofs(nloc);
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, deg, deg);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nloc, nloc);
        Eigen::VectorXd w00(E.num_points()), w01(E.num_points()), w11(E.num_points());
        for (int q = 0; q < E.num_points(); ++q)
        {
            const Mat2 Ki = pb.kappa ? Mat2(pb.kappa(E.x[q]).inverse()) : Mat2::Identity();
            w00(q) = E.w(q) * Ki(0, 0);
            w01(q) = E.w(q) * 0.5 * (Ki(0, 1) + Ki(1, 0));
            w11(q) = E.w(q) * Ki(1, 1);
        }
        A.block(0, 0, nk, nk) = weighted_mass(E.phi, w00);
        A.block(0, nk, nk, nk) = weighted_mass(E.phi, w01);
        A.block(nk, 0, nk, nk) = A.block(0, nk, nk, nk);
        A.block(nk, nk, nk, nk) = weighted_mass(E.phi, w11);
        A.block(P, P, nk, nk) = weighted_mass(E.phi, E.w);
        for (int l = 0; l < 3; ++l)
        {
            const FacetData& F = E.facets[l];
            Eigen::VectorXd wt(F.w.size());
            for (int i = 0; i < F.w.size(); ++i)
            {
                double t = pb.tau.at(F.facet);
                if (conv)
                    t -= 0.5 * pb.beta(F.x[i]).dot(F.normal);
                wt(i) = F.w(i) * t;
            }
            const int T = 3 * nk + l * nf;
            const Eigen::MatrixXd Mpt = weighted_product(F.phi, wt, F.psi);
            A.block(P, P, nk, nk) += weighted_mass(F.phi, wt);
            A.block(P, T, nk, nf) -= Mpt;
            A.block(T, P, nf, nk) -= Mpt.transpose();
            A.block(T, T, nf, nf) += weighted_mass(F.psi, wt);
        }
        for (int i = 0; i < nk; ++i)
        {
            dofs[i] = L.u_dof(c, 0, i);
            dofs[nk + i] = L.u_dof(c, 1, i);
            dofs[P + i] = L.p_dof(c, i);
        }
        for (int l = 0; l < 3; ++l)
            for (int j = 0; j < nf; ++j)
                dofs[3 * nk + l * nf + j] = L.trace_dof(E.facets[l].facet, 0, j);
        scatter_sym(A, dofs, trip);
    }
    SparseMatrix N(L.total, L.total);
    N.setFromTriplets(trip.begin(), trip.end());
    return N;
}

SparseMatrix vector_norm_matrix(const Mesh& mesh, const SpaceLayout& L, const OseenProblem& pb)
{
    const CellBasis basis(L.k);
    const FacetBasis fb(L.k);
    const int deg = 2 * L.k + 2;
    const int nk = L.nk, nf = L.nf;
    const int U = 4 * nk, P = 6 * nk, T = 7 * nk;
    const int nloc = 7 * nk + 6 * nf;
    const bool conv = L.equation == Equation::Oseen && static_cast<bool>(pb.beta);
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<int> dofs(nloc);
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, deg, deg);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nloc, nloc);
        const Eigen::MatrixXd M = weighted_mass(E.phi, E.w);
        for (int s = 0; s < 4; ++s)
            A.block(s * nk, s * nk, nk, nk) = M / pb.nu;
        for (int a = 0; a < 2; ++a)
            A.block(U + a * nk, U + a * nk, nk, nk) = M;
        A.block(P, P, nk, nk) = M;
        for (int l = 0; l < 3; ++l)
        {
            const FacetData& F = E.facets[l];
            const Mat2 S = stabilization_tensor(pb.tau_n.at(F.facet), pb.tau_t.at(F.facet), F.normal);
            Eigen::VectorXd wb = F.w;
            if (conv)
                for (int i = 0; i < F.w.size(); ++i)
                    wb(i) = F.w(i) * pb.beta(F.x[i]).dot(F.normal);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                {
                    Eigen::VectorXd wt = S(a, b) * F.w;
                    if (conv && a == b)
                        wt -= 0.5 * wb;
                    if (wt.cwiseAbs().maxCoeff() == 0.0)
                        continue;
                    const int Ta = T + (2 * l + a) * nf, Tb = T + (2 * l + b) * nf;
                    const Eigen::MatrixXd Mpt = weighted_product(F.phi, wt, F.psi);
                    A.block(U + a * nk, U + b * nk, nk, nk) += weighted_mass(F.phi, wt);
                    A.block(U + a * nk, Tb, nk, nf) -= Mpt;
                    A.block(Ta, U + b * nk, nf, nk) -= Mpt.transpose();
                    A.block(Ta, Tb, nf, nf) += weighted_mass(F.psi, wt);
                }
        }
        for (int i = 0; i < nk; ++i)
        {
            for (int s = 0; s < 4; ++s)
                dofs[s * nk + i] = L.sigma_dof(c, s, i);
            for (int a = 0; a < 2; ++a)
                dofs[U + a * nk + i] = L.u_dof(c, a, i);
            dofs[P + i] = L.p_dof(c, i);
        }
        for (int l = 0; l < 3; ++l)
            for (int a = 0; a < 2; ++a)
                for (int j = 0; j < nf; ++j)
                    dofs[T + (2 * l + a) * nf + j] = L.trace_dof(E.facets[l].facet, a, j);
        scatter_sym(A, dofs, trip);
    }
    if (L.multiplier >= 0)
        trip.emplace_back(L.multiplier, L.multiplier, 1.0);
    SparseMatrix N(L.total, L.total);
    N.setFromTriplets(trip.begin(), trip.end());
    return N;
}

} // namespace hdg
