#include "hdg/cdr.hpp"
#include "hdg/element.hpp"
#include "hdg/errors.hpp"
#include "hdg/poisson.hpp"

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

void scatter(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const std::vector<int>& dofs,
             const std::vector<double>& fixed, Triplets* trip, Eigen::VectorXd& rhs)
{
    const int n = static_cast<int>(dofs.size());
    for (int r = 0; r < n; ++r)
    {
        const int gr = dofs[r];
        if (gr < 0)
            continue;
        rhs(gr) += b(r);
        for (int c = 0; c < n; ++c)
        {
            const double v = A(r, c);
            if (v == 0.0)
                continue;
            if (dofs[c] >= 0)
            {
                if (trip)
                    trip->emplace_back(gr, dofs[c], v);
            }
            else
                rhs(gr) -= v * fixed[c];
        }
    }
}

Mat2 kappa_at(const PoissonProblem& pb, const Vec2& x, int cell)
{
    if (!pb.kappa)
        return Mat2::Identity();
    const Mat2 K = pb.kappa(x);
    const double scale = K.cwiseAbs().maxCoeff();
    if (std::abs(K(0, 1) - K(1, 0)) > 1e-12 * scale)
        throw AssemblyError("kappa is not symmetric in cell " + std::to_string(cell));
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Mat2>(K).eigenvalues();
    if (ev(0) < pb.kappa_min * (1.0 - 1e-10) || ev(1) > pb.kappa_max * (1.0 + 1e-10))
        throw AssemblyError("kappa eigenvalues [" + fmt(ev(0)) + ", " + fmt(ev(1)) +
                            "] outside declared bounds [" + fmt(pb.kappa_min) + ", " +
                            fmt(pb.kappa_max) + "] in cell " + std::to_string(cell));
    return K;
}

double div_beta_at(const CdrProblem& pb, const Vec2& x)
{
    return pb.div_beta ? pb.div_beta(x) : divergence_fd(pb.beta, x);
}

AssembledSystem assemble_scalar(const Mesh& mesh, const CdrProblem& pb, int k, Equation eq,
                                const AssemblyOptions& opts, bool build_matrix)
{
    AssembledSystem sys;
    sys.layout = build_layout(mesh, k, eq);
    const SpaceLayout& L = sys.layout;
    const bool conv = eq == Equation::CDR && static_cast<bool>(pb.beta);
    sys.symmetric = !conv;

    for (int f = 0; f < mesh.num_facets(); ++f)
        if (!(pb.tau.at(f) > 0.0))
            throw AssemblyError("tau = " + fmt(pb.tau.at(f)) + " <= 0 on facet " + std::to_string(f));

    const CellBasis basis(k);
    const FacetBasis fbasis(k);
    const int nk = L.nk, nf = L.nf;
    const int fdeg = opts.forms(k), ldeg = opts.loads(k);

    sys.facet_values.assign(mesh.num_facets(), Eigen::VectorXd());
    for (int f = 0; f < mesh.num_facets(); ++f)
        if (L.eliminated(f))
            sys.facet_values[f] = facet_l2_coefficients(mesh, f, k, pb.p_D, ldeg);

    sys.rhs = Eigen::VectorXd::Zero(L.total);
    Triplets trip;
    const int nloc = 3 * nk + 3 * nf;
    const int P = 2 * nk;
    auto tr = [&](int l) { return 3 * nk + l * nf; };
    const double load_sign = eq == Equation::CDR ? -1.0 : 1.0;

    double tau_min = std::numeric_limits<double>::infinity(), tau_max = 0.0;
    double beta_max = 0.0;
    bool fd_div = false;

    std::vector<int> dofs(nloc);
    std::vector<double> fixed(nloc, 0.0);

    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fbasis, fdeg, fdeg);
        const int nq = E.num_points();
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nloc, nloc);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(nloc);

        Eigen::VectorXd w00(nq), w01(nq), w11(nq);
        for (int q = 0; q < nq; ++q)
        {
            const Mat2 Ki = kappa_at(pb, E.x[q], c).inverse();
            w00(q) = E.w(q) * Ki(0, 0);
            w01(q) = E.w(q) * 0.5 * (Ki(0, 1) + Ki(1, 0));
            w11(q) = E.w(q) * Ki(1, 1);
        }
        A.block(0, 0, nk, nk) = weighted_mass(E.phi, w00);
        A.block(0, nk, nk, nk) = weighted_mass(E.phi, w01);
        A.block(nk, 0, nk, nk) = A.block(0, nk, nk, nk);
        A.block(nk, nk, nk, nk) = weighted_mass(E.phi, w11);

        A.block(0, P, nk, nk) += weighted_product(E.phi, E.w, E.dphi_x);
        A.block(nk, P, nk, nk) += weighted_product(E.phi, E.w, E.dphi_y);
        for (int l = 0; l < 3; ++l)
        {
            const FacetData& F = E.facets[l];
            for (int a = 0; a < 2; ++a)
            {
                const Eigen::VectorXd wn = F.w * F.normal(a);
                A.block(a * nk, P, nk, nk) -= weighted_product(F.phi, wn, F.phi);
                A.block(a * nk, tr(l), nk, nf) += weighted_product(F.phi, wn, F.psi);
            }
        }
        // b_P((q, qbar), u) mirrors b_P((p, pbar), v).
        A.block(P, 0, nk + 3 * nf, 2 * nk) = A.block(0, P, 2 * nk, nk + 3 * nf).transpose();

        for (int l = 0; l < 3; ++l)
        {
            const FacetData& F = E.facets[l];
            const double tau = pb.tau.at(F.facet);
            const Eigen::MatrixXd Mpt = weighted_product(F.phi, F.w, F.psi);
            A.block(P, P, nk, nk) -= tau * weighted_mass(F.phi, F.w);
            A.block(P, tr(l), nk, nf) += tau * Mpt;
            A.block(tr(l), P, nf, nk) += tau * Mpt.transpose();
            A.block(tr(l), tr(l), nf, nf) -= tau * weighted_mass(F.psi, F.w);
            if (!conv)
            {
                tau_min = std::min(tau_min, tau);
                tau_max = std::max(tau_max, tau);
            }
        }

        if (conv)
        {
            Eigen::VectorXd bx(nq), by(nq), wr(nq);
            for (int q = 0; q < nq; ++q)
            {
                const Vec2 beta = pb.beta(E.x[q]);
                const double divb = div_beta_at(pb, E.x[q]);
                const double cc = pb.c ? pb.c(E.x[q]) : 0.0;
                if (cc - 0.5 * divb < -1e-12)
                    throw AssemblyError("c - div(beta)/2 = " + fmt(cc - 0.5 * divb) +
                                        " < 0 in cell " + std::to_string(c));
                bx(q) = E.w(q) * beta.x();
                by(q) = E.w(q) * beta.y();
                wr(q) = E.w(q) * (cc - divb);
                beta_max = std::max(beta_max, beta.norm());
            }
            fd_div = fd_div || !pb.div_beta;
            A.block(P, P, nk, nk) += E.dphi_x.transpose() * bx.asDiagonal() * E.phi +
                                     E.dphi_y.transpose() * by.asDiagonal() * E.phi -
                                     weighted_mass(E.phi, wr);
            for (int l = 0; l < 3; ++l)
            {
                const FacetData& F = E.facets[l];
                const double tau = pb.tau.at(F.facet);
                Eigen::VectorXd wbn(F.w.size());
                for (int q = 0; q < F.w.size(); ++q)
                {
                    const double bn = pb.beta(F.x[q]).dot(F.normal);
                    const double tb = tau - 0.5 * bn;
                    if (!(tb > 0.0))
                        throw AssemblyError("tau - (beta.n)/2 = " + fmt(tb) + " <= 0 on facet " +
                                            std::to_string(F.facet) + " (cell " +
                                            std::to_string(c) + ")");
                    tau_min = std::min(tau_min, tb);
                    tau_max = std::max(tau_max, tb);
                    wbn(q) = F.w(q) * bn;
                }
                A.block(P, tr(l), nk, nf) -= weighted_product(F.phi, wbn, F.psi);
                A.block(tr(l), tr(l), nf, nf) += weighted_mass(F.psi, wbn);
            }
        }

        b.segment(P, nk) = load_sign * cell_load(E.geo, basis, ldeg, pb.f);
        if (eq == Equation::Poisson)
            for (int l = 0; l < 3; ++l)
            {
                const FacetData& F = E.facets[l];
                if (F.tag == FacetTag::Neumann)
                    b.segment(tr(l), nf) +=
                        F.length * facet_l2_coefficients(mesh, F.facet, k, pb.p_N, ldeg);
            }

        for (int i = 0; i < nk; ++i)
        {
            dofs[i] = L.u_dof(c, 0, i);
            dofs[nk + i] = L.u_dof(c, 1, i);
            dofs[P + i] = L.p_dof(c, i);
        }
        for (int l = 0; l < 3; ++l)
        {
            const int f = E.facets[l].facet;
            for (int j = 0; j < nf; ++j)
            {
                dofs[tr(l) + j] = L.trace_dof(f, 0, j);
                fixed[tr(l) + j] = L.eliminated(f) ? sys.facet_values[f](j) : 0.0;
            }
        }
        scatter(A, b, dofs, fixed, build_matrix ? &trip : nullptr, sys.rhs);
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
    if (fd_div)
        r.notes.push_back("div(beta) computed by central differences (step 1e-6)");
    return sys;
}

} // namespace

AssembledSystem assemble_poisson(const Mesh& mesh, const PoissonProblem& problem, int k,
                                 const AssemblyOptions& opts)
{
    CdrProblem pb;
    static_cast<PoissonProblem&>(pb) = problem;
    return assemble_scalar(mesh, pb, k, Equation::Poisson, opts, true);
}

Eigen::VectorXd poisson_rhs_only(const Mesh& mesh, const PoissonProblem& problem,
                                 const SpaceLayout& layout, const AssemblyOptions& opts)
{
    CdrProblem pb;
    static_cast<PoissonProblem&>(pb) = problem;
    return assemble_scalar(mesh, pb, layout.k, layout.equation, opts, false).rhs;
}

AssembledSystem assemble_cdr(const Mesh& mesh, const CdrProblem& problem, int k,
                             const AssemblyOptions& opts)
{
    return assemble_scalar(mesh, problem, k, Equation::CDR, opts, true);
}

Eigen::Vector2d convection_identity_sides(const Mesh& mesh, const CdrProblem& pb, int k,
                                          const std::vector<Eigen::VectorXd>& q,
                                          const std::vector<Eigen::VectorXd>& qbar, int degree)
{
    const CellBasis basis(k);
    const FacetBasis fbasis(k);
    const int deg = degree >= 0 ? degree : 2 * k + 2;
    double lhs = 0.0, rhs = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fbasis, deg, deg);
        const Eigen::VectorXd& qc = q[c];
        const Eigen::VectorXd qv = E.phi * qc;
        const Eigen::VectorXd gx = E.dphi_x * qc, gy = E.dphi_y * qc;
        for (int i = 0; i < E.num_points(); ++i)
        {
            const Vec2 beta = pb.beta(E.x[i]);
            const double divb = div_beta_at(pb, E.x[i]);
            const double cc = pb.c ? pb.c(E.x[i]) : 0.0;
            lhs += E.w(i) * (qv(i) * (beta.x() * gx(i) + beta.y() * gy(i)) -
                             (cc - divb) * qv(i) * qv(i));
            rhs -= E.w(i) * (cc - 0.5 * divb) * qv(i) * qv(i);
        }
        for (const FacetData& F : E.facets)
        {
            const Eigen::VectorXd qf = F.phi * qc;
            const Eigen::VectorXd qb = F.psi * qbar[F.facet];
            for (int i = 0; i < F.w.size(); ++i)
            {
                const double bn = pb.beta(F.x[i]).dot(F.normal);
                const double jump = qf(i) - qb(i);
                lhs -= F.w(i) * bn * qb(i) * jump;
                rhs += 0.5 * F.w(i) * bn * jump * jump;
            }
        }
    }
    return {lhs, rhs};
}

double verify_convection_identity(const Mesh& mesh, const CdrProblem& pb, int k, int trials,
                                  unsigned seed)
{
    const SpaceLayout L = build_layout(mesh, k, Equation::CDR);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t)
    {
        std::vector<Eigen::VectorXd> q(mesh.num_cells()), qbar(mesh.num_facets());
        for (auto& v : q)
            v = Eigen::VectorXd::NullaryExpr(L.nk, [&] { return U(rng); });
        for (int f = 0; f < mesh.num_facets(); ++f)
        {
            qbar[f] = Eigen::VectorXd::Zero(L.nf);
            if (!L.eliminated(f))
                for (int j = 0; j < L.nf; ++j)
                    qbar[f](j) = U(rng);
        }
        const Eigen::Vector2d sides = convection_identity_sides(mesh, pb, k, q, qbar);
        worst = std::max(worst, std::abs(sides(0) - sides(1)));
    }
    return worst;
}

} // namespace hdg
