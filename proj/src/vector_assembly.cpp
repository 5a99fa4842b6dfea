#include "hdg/element.hpp"
#include "hdg/errors.hpp"
#include "hdg/oseen.hpp"
#include "hdg/quadrature.hpp"
#include "hdg/stokes.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>

namespace hdg
{

namespace
{

using Triplets = std::vector<Eigen::Triplet<double>>;

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

double div_beta_at(const OseenProblem& pb, const Vec2& x)
{
    return pb.div_beta ? pb.div_beta(x) : divergence_fd(pb.beta, x);
}

AssembledSystem assemble_vector(const Mesh& mesh, const OseenProblem& pb, int k, Equation eq,
                                const AssemblyOptions& opts, bool build_matrix)
{
    AssembledSystem sys;
    sys.layout = build_layout(mesh, k, eq);
    const SpaceLayout& L = sys.layout;
    const bool conv = eq == Equation::Oseen && static_cast<bool>(pb.beta);
    sys.symmetric = !conv;

    if (!(pb.nu > 0.0))
        throw AssemblyError("viscosity nu = " + fmt(pb.nu) + " must be positive");
    for (int f = 0; f < mesh.num_facets(); ++f)
    {
        if (!(pb.tau_n.at(f) > 0.0))
            throw AssemblyError("tau_n = " + fmt(pb.tau_n.at(f)) + " <= 0 on facet " +
                                std::to_string(f));
        if (!(pb.tau_t.at(f) > 0.0))
            throw AssemblyError("tau_t = " + fmt(pb.tau_t.at(f)) + " <= 0 on facet " +
                                std::to_string(f));
    }

    const CellBasis basis(k);
    const FacetBasis fbasis(k);
    const int nk = L.nk, nf = L.nf;
    const int fdeg = opts.forms(k), ldeg = opts.loads(k);

    sys.facet_values.assign(mesh.num_facets(), Eigen::VectorXd());
    for (int f = 0; f < mesh.num_facets(); ++f)
    {
        if (!L.eliminated(f))
            continue;
        Eigen::VectorXd v(2 * nf);
        for (int a = 0; a < 2; ++a)
        {
            std::function<double(const Vec2&)> ga;
            if (pb.g)
                ga = [&pb, a](const Vec2& x) { return pb.g(x)(a); };
            v.segment(a * nf, nf) = facet_l2_coefficients(mesh, f, k, ga, ldeg);
        }
        sys.facet_values[f] = v;
    }

    sys.rhs = Eigen::VectorXd::Zero(L.total);
    Triplets trip;
    const int SG = 0, U = 4 * nk, P = 6 * nk, T = 7 * nk;
    const int nloc = 7 * nk + 6 * nf;
    auto tr = [&](int l, int a) { return T + (2 * l + a) * nf; };
    const double nu_inv = 1.0 / pb.nu;

    double tau_min = std::numeric_limits<double>::infinity(), tau_max = 0.0;
    double beta_max = 0.0;
    const double div_tol = pb.div_beta ? 1e-10 : 1e-6;

    std::vector<int> dofs(nloc);
    std::vector<double> fixed(nloc, 0.0);

    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fbasis, fdeg, fdeg);
        const int nq = E.num_points();
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nloc, nloc);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(nloc);

        const Eigen::MatrixXd M = weighted_mass(E.phi, E.w);
        const Eigen::MatrixXd G[2] = {weighted_product(E.phi, E.w, E.dphi_x),
                                      weighted_product(E.phi, E.w, E.dphi_y)};
        for (int s = 0; s < 4; ++s)
            A.block(SG + s * nk, SG + s * nk, nk, nk) = nu_inv * M;

        // b1(tau, (u, ubar)) in sigma rows; b2((v, vbar), p) in u and trace rows.
        for (int a = 0; a < 2; ++a)
            for (int bb = 0; bb < 2; ++bb)
                A.block(SG + (2 * a + bb) * nk, U + a * nk, nk, nk) -= G[bb];
        for (int a = 0; a < 2; ++a)
            A.block(U + a * nk, P, nk, nk) += G[a].transpose();
        for (int l = 0; l < 3; ++l)
        {
            const FacetData& F = E.facets[l];
            for (int bb = 0; bb < 2; ++bb)
            {
                const Eigen::VectorXd wn = F.w * F.normal(bb);
                const Eigen::MatrixXd Mpp = weighted_mass(F.phi, wn);
                const Eigen::MatrixXd Mpt = weighted_product(F.phi, wn, F.psi);
                for (int a = 0; a < 2; ++a)
                {
                    A.block(SG + (2 * a + bb) * nk, U + a * nk, nk, nk) += Mpp;
                    A.block(SG + (2 * a + bb) * nk, tr(l, a), nk, nf) -= Mpt;
                }
                A.block(U + bb * nk, P, nk, nk) -= Mpp;
                A.block(tr(l, bb), P, nf, nk) += Mpt.transpose();
            }
        }
        A.block(U, SG, 3 * nk + 6 * nf, 4 * nk) =
            A.block(SG, U, 4 * nk, 3 * nk + 6 * nf).transpose();
        A.block(P, U, nk, 2 * nk) = A.block(U, P, 2 * nk, nk).transpose();
        A.block(P, T, nk, 6 * nf) = A.block(T, P, 6 * nf, nk).transpose();

        for (int l = 0; l < 3; ++l)
        {
            const FacetData& F = E.facets[l];
            const double tn = pb.tau_n.at(F.facet), tt = pb.tau_t.at(F.facet);
            const Mat2 S = stabilization_tensor(tn, tt, F.normal);
            const Eigen::MatrixXd Mpp = weighted_mass(F.phi, F.w);
            const Eigen::MatrixXd Mpt = weighted_product(F.phi, F.w, F.psi);
            const Eigen::MatrixXd Mtt = weighted_mass(F.psi, F.w);
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb)
                {
                    const double s = S(a, bb);
                    if (s == 0.0)
                        continue;
                    A.block(U + a * nk, U + bb * nk, nk, nk) -= s * Mpp;
                    A.block(U + a * nk, tr(l, bb), nk, nf) += s * Mpt;
                    A.block(tr(l, a), U + bb * nk, nf, nk) += s * Mpt.transpose();
                    A.block(tr(l, a), tr(l, bb), nf, nf) -= s * Mtt;
                }
            if (!conv)
            {
                tau_min = std::min({tau_min, tn, tt});
                tau_max = std::max({tau_max, tn, tt});
            }
        }

        if (conv)
        {
            Eigen::VectorXd bx(nq), by(nq);
            for (int q = 0; q < nq; ++q)
            {
                const Vec2 beta = pb.beta(E.x[q]);
                const double divb = div_beta_at(pb, E.x[q]);
                if (std::abs(divb) > div_tol * std::max(1.0, beta.norm()))
                    throw AssemblyError("div(beta) = " + fmt(divb) + " is not zero in cell " +
                                        std::to_string(c));
                bx(q) = E.w(q) * beta.x();
                by(q) = E.w(q) * beta.y();
                beta_max = std::max(beta_max, beta.norm());
            }
            const Eigen::MatrixXd Cv = E.dphi_x.transpose() * bx.asDiagonal() * E.phi +
                                       E.dphi_y.transpose() * by.asDiagonal() * E.phi;
            for (int a = 0; a < 2; ++a)
                A.block(U + a * nk, U + a * nk, nk, nk) += Cv;
            for (int l = 0; l < 3; ++l)
            {
                const FacetData& F = E.facets[l];
                const double tn = pb.tau_n.at(F.facet), tt = pb.tau_t.at(F.facet);
                Eigen::VectorXd wbn(F.w.size());
                for (int q = 0; q < F.w.size(); ++q)
                {
                    const Vec2 beta = pb.beta(F.x[q]);
                    const Eigen::Vector2d ev = s_beta_eigenvalues(tn, tt, F.normal, beta);
                    if (!(ev(0) > 0.0))
                        throw AssemblyError("S - (beta.n)/2 I has eigenvalue " + fmt(ev(0)) +
                                            " <= 0 on facet " + std::to_string(F.facet) +
                                            " (cell " + std::to_string(c) + ")");
                    tau_min = std::min(tau_min, ev(0));
                    tau_max = std::max(tau_max, ev(1));
                    wbn(q) = F.w(q) * beta.dot(F.normal);
                }
                const Eigen::MatrixXd Mpt = weighted_product(F.phi, wbn, F.psi);
                const Eigen::MatrixXd Mtt = weighted_mass(F.psi, wbn);
                for (int a = 0; a < 2; ++a)
                {
                    A.block(U + a * nk, tr(l, a), nk, nf) -= Mpt;
                    A.block(tr(l, a), tr(l, a), nf, nf) += Mtt;
                }
            }
        }

        if (pb.f)
            for (int a = 0; a < 2; ++a)
                b.segment(U + a * nk, nk) =
                    -cell_load(E.geo, basis, ldeg, [&pb, a](const Vec2& x) { return pb.f(x)(a); });

        for (int i = 0; i < nk; ++i)
        {
            for (int s = 0; s < 4; ++s)
                dofs[SG + s * nk + i] = L.sigma_dof(c, s, i);
            for (int a = 0; a < 2; ++a)
                dofs[U + a * nk + i] = L.u_dof(c, a, i);
            dofs[P + i] = L.p_dof(c, i);
        }
        for (int l = 0; l < 3; ++l)
        {
            const int f = E.facets[l].facet;
            for (int a = 0; a < 2; ++a)
                for (int j = 0; j < nf; ++j)
                {
                    dofs[tr(l, a) + j] = L.trace_dof(f, a, j);
                    fixed[tr(l, a) + j] = L.eliminated(f) ? sys.facet_values[f](a * nf + j) : 0.0;
                }
        }

        const int n = nloc;
        for (int r = 0; r < n; ++r)
        {
            const int gr = dofs[r];
            if (gr < 0)
                continue;
            sys.rhs(gr) += b(r);
            for (int cc = 0; cc < n; ++cc)
            {
                const double v = A(r, cc);
                if (v == 0.0)
                    continue;
                if (dofs[cc] >= 0)
                {
                    if (build_matrix)
                        trip.emplace_back(gr, dofs[cc], v);
                }
                else
                    sys.rhs(gr) -= v * fixed[cc];
            }
        }
        // Pressure mean constraint: the integral of the constant mode is the cell area.
        if (build_matrix)
        {
            trip.emplace_back(L.multiplier, L.p_dof(c, 0), E.area);
            trip.emplace_back(L.p_dof(c, 0), L.multiplier, E.area);
        }
    }

    if (build_matrix)
    {
        sys.matrix.resize(L.total, L.total);
        sys.matrix.setFromTriplets(trip.begin(), trip.end());
        sys.matrix.makeCompressed();
    }
    StabilityReport& r = sys.report;
    r.tau_min = tau_min;
    r.tau_max = tau_max;
    r.h = mesh.max_cell_diameter();
    r.c_tau = tau_min / std::sqrt(r.h);
    r.beta_w1inf = beta_max;
    if (r.c_tau < 1.0)
        r.notes.push_back("tau_min = " + fmt(tau_min) + " below h^(1/2) = " + fmt(std::sqrt(r.h)));
    if (conv && !pb.div_beta)
        r.notes.push_back("div(beta) computed by central differences (step 1e-6)");
    return sys;
}

} // namespace

AssembledSystem assemble_stokes(const Mesh& mesh, const StokesProblem& problem, int k,
                                const AssemblyOptions& opts)
{
    OseenProblem pb;
    static_cast<StokesProblem&>(pb) = problem;
    return assemble_vector(mesh, pb, k, Equation::Stokes, opts, true);
}

Eigen::VectorXd stokes_dirichlet_lift(const Mesh& mesh, const StokesProblem& problem, int k,
                                      const AssemblyOptions& opts)
{
    OseenProblem pb;
    static_cast<StokesProblem&>(pb) = problem;
    pb.f = nullptr;
    return assemble_vector(mesh, pb, k, Equation::Stokes, opts, false).rhs;
}

AssembledSystem assemble_oseen(const Mesh& mesh, const OseenProblem& problem, int k,
                               const AssemblyOptions& opts)
{
    return assemble_vector(mesh, problem, k, Equation::Oseen, opts, true);
}

Eigen::Vector2d s_beta_eigenvalues(double tau_n, double tau_t, const Vec2& n, const Vec2& beta)
{
    const double shift = 0.5 * beta.dot(n);
    Eigen::Vector2d ev(tau_n - shift, tau_t - shift);
    if (ev(0) > ev(1))
        std::swap(ev(0), ev(1));
    return ev;
}

double s_beta_min(const Mesh& mesh, const OseenProblem& pb, int k)
{
    const LineRule& lr = line_rule(AssemblyOptions{}.forms(k));
    double m = std::numeric_limits<double>::infinity();
    for (int c = 0; c < mesh.num_cells(); ++c)
        for (int l = 0; l < 3; ++l)
        {
            const int f = mesh.cell_facets(c)[l].facet;
            const Facet& F = mesh.facets()[f];
            const Vec2 n = mesh.outward_normal(c, l);
            const Vec2& A = mesh.vertices()[F.vertices[0]];
            const Vec2& B = mesh.vertices()[F.vertices[1]];
            for (double s : lr.points)
            {
                const Vec2 beta = pb.beta ? pb.beta(A + s * (B - A)) : Vec2::Zero();
                m = std::min(m, s_beta_eigenvalues(pb.tau_n.at(f), pb.tau_t.at(f), n, beta)(0));
            }
        }
    return m;
}

Eigen::Vector2d oseen_identity_sides(const Mesh& mesh, const OseenProblem& pb, int k,
                                     const std::vector<Eigen::VectorXd>& v, int degree)
{
    const CellBasis basis(k);
    const FacetBasis fbasis(k);
    const int deg = degree >= 0 ? degree : 2 * k + 2;
    const int nk = basis.size();
    double lhs = 0.0, rhs = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fbasis, deg, deg);
        for (int a = 0; a < 2; ++a)
        {
            const Eigen::VectorXd va = v[c].segment(a * nk, nk);
            const Eigen::VectorXd vq = E.phi * va;
            const Eigen::VectorXd gx = E.dphi_x * va, gy = E.dphi_y * va;
            for (int i = 0; i < E.num_points(); ++i)
            {
                const Vec2 beta = pb.beta(E.x[i]);
                lhs += E.w(i) * vq(i) * (beta.x() * gx(i) + beta.y() * gy(i));
            }
            for (const FacetData& F : E.facets)
            {
                const Eigen::VectorXd vf = F.phi * va;
                for (int i = 0; i < F.w.size(); ++i)
                    rhs += 0.5 * F.w(i) * pb.beta(F.x[i]).dot(F.normal) * vf(i) * vf(i);
            }
        }
    }
    return {lhs, rhs};
}

double verify_oseen_identity(const Mesh& mesh, const OseenProblem& pb, int k, int trials,
                             unsigned seed)
{
    const int nk = cell_dim(k);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t)
    {
        std::vector<Eigen::VectorXd> v(mesh.num_cells());
        for (auto& vc : v)
            vc = Eigen::VectorXd::NullaryExpr(2 * nk, [&] { return U(rng); });
        const Eigen::Vector2d sides = oseen_identity_sides(mesh, pb, k, v);
        worst = std::max(worst, std::abs(sides(0) - sides(1)));
    }
    return worst;
}

} // namespace hdg
