#include "support.hpp"

#include "hdg/element.hpp"
#include "hdg/errors.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/norms.hpp"
#include "hdg/solver.hpp"
#include "hdg/stokes.hpp"
#include "hdg/study.hpp"

#include <Eigen/Eigenvalues>

#include <random>

using namespace hdg;
using hdg::test::max_abs_diff;
using hdg::test::rel_asymmetry;

namespace
{

struct VectorExact
{
    TensorField sigma;
    VectorField u;
    ScalarField p;
};

Eigen::Vector3d errors(const Mesh& mesh, const AssembledSystem& sys, const Eigen::VectorXd& x,
                       const VectorExact& ex)
{
    const DiscreteSolution s = make_solution(mesh, sys, x);
    const int k = sys.layout.k, nk = sys.layout.nk, deg = 2 * k + 4;
    const double es = l2_distance(
        mesh, k, deg,
        [&](int c) {
            Eigen::MatrixXd m(nk, 4);
            for (int a = 0; a < 4; ++a)
                m.col(a) = s.sigma(c, a);
            return m;
        },
        [&](const Vec2& y) {
            const Mat2 t = ex.sigma(y);
            return Eigen::VectorXd((Eigen::VectorXd(4) << t(0, 0), t(0, 1), t(1, 0), t(1, 1)).finished());
        },
        4);
    const double eu = l2_distance(
        mesh, k, deg,
        [&](int c) {
            Eigen::MatrixXd m(nk, 2);
            m << s.u(c, 0), s.u(c, 1);
            return m;
        },
        [&](const Vec2& y) { return Eigen::VectorXd(ex.u(y)); }, 2);
    const double ep = l2_distance(
        mesh, k, deg, [&](int c) { return Eigen::MatrixXd(s.p(c)); },
        [&](const Vec2& y) { return Eigen::VectorXd::Constant(1, ex.p(y)); }, 1);
    return {es, eu, ep};
}

Mesh single_cell()
{
    return Mesh::from_connectivity({Vec2(0, 0), Vec2(2, 0), Vec2(0, 1)}, {{0, 1, 2}});
}

StokesProblem quadratic_problem(double nu)
{
    StokesProblem pb;
    pb.nu = nu;
    pb.f = [nu](const Vec2& x) { return Vec2(-2 * nu + x.y(), x.x()); };
    pb.g = [](const Vec2& x) { return Vec2(x.x() * x.x(), -2 * x.x() * x.y()); };
    pb.tau_n.value = 2.0;
    pb.tau_t.value = 0.5;
    return pb;
}

} // namespace

TEST_CASE("stabilization tensor eigenpairs")
{
    const Vec2 n = Vec2(3, 4).normalized();
    const Vec2 t(-n.y(), n.x());
    const Mat2 S = stabilization_tensor(2.5, 0.75, n);
    CHECK((S * n - 2.5 * n).norm() < 1e-15);
    CHECK((S * t - 0.75 * t).norm() < 1e-15);
    CHECK(std::abs(S(0, 1) - S(1, 0)) < 1e-15);
    CHECK((stabilization_tensor(1.2, 1.2, n) - 1.2 * Mat2::Identity()).norm() < 1e-15);
}

TEST_CASE("single cell lowest order entries")
{
    const Mesh mesh = single_cell();
    StokesProblem pb;
    pb.nu = 0.25;
    pb.tau_n.value = 3.0;
    pb.tau_t.value = 0.5;
    pb.f = [](const Vec2&) { return Vec2(1.0, 2.0); };
    pb.g = [](const Vec2& x) { return Vec2(x.x(), 2.0 * x.y()); };
    const AssembledSystem sys = assemble_stokes(mesh, pb, 0);
    const SpaceLayout& L = sys.layout;
    REQUIRE(L.total == 8);
    REQUIRE(L.dim_trace() == 0);

    const double area = 1.0;
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 8);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(8);
    for (int s = 0; s < 4; ++s)
        expected(L.sigma_dof(0, s, 0), L.sigma_dof(0, s, 0)) = area / pb.nu;
    const int p = L.p_dof(0, 0);
    expected(p, L.multiplier) = expected(L.multiplier, p) = area;
    Mat2 Suu = Mat2::Zero();
    Vec2 Sg = Vec2::Zero();
    Mat2 gn = Mat2::Zero();
    double ng = 0.0;
    for (int l = 0; l < 3; ++l)
    {
        const int f = mesh.cell_facets(0)[l].facet;
        const Vec2 n = mesh.outward_normal(0, l);
        const double len = mesh.facet_diameter(f);
        const Mat2 S = stabilization_tensor(3.0, 0.5, n);
        const Vec2 g = pb.g(mesh.facet_midpoint(f));
        Suu += len * S;
        Sg += len * S * g;
        gn += len * g * n.transpose();
        ng += len * n.dot(g);
    }
    for (int a = 0; a < 2; ++a)
    {
        for (int b = 0; b < 2; ++b)
        {
            expected(L.u_dof(0, a, 0), L.u_dof(0, b, 0)) = -Suu(a, b);
            rhs(L.sigma_dof(0, 2 * a + b, 0)) = gn(a, b);
        }
        rhs(L.u_dof(0, a, 0)) = -area * pb.f(Vec2::Zero())(a) - Sg(a);
    }
    rhs(p) = -ng;
    CHECK(max_abs_diff(Eigen::MatrixXd(sys.matrix), expected) < 1e-14);
    CHECK((sys.rhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("rotation flow is reproduced exactly")
{
    const ManufacturedCase mc = manufactured_case("stokes_rotation");
    SolveOptions opts;
    for (int k : {1, 2})
    {
        opts.k = k;
        const LevelResult r = solve_case(mc, 3, opts);
        CHECK(r.error("sigma_L2") < 1e-11);
        CHECK(r.error("u_L2") < 1e-11);
        CHECK(r.error("p_L2") < 1e-11);
    }
}

TEST_CASE("quadratic velocity and bilinear pressure are reproduced at k = 2")
{
    for (double nu : {1.0, 0.1})
    {
        const StokesProblem pb = quadratic_problem(nu);
        const VectorExact ex{[nu](const Vec2& x) {
                                 Mat2 s;
                                 s << 2 * x.x(), 0.0, -2 * x.y(), -2 * x.x();
                                 return Mat2(nu * s);
                             },
                             pb.g, [](const Vec2& x) { return x.x() * x.y() - 0.25; }};
        const Mesh mesh = generate_structured(3);
        const AssembledSystem sys = assemble_stokes(mesh, pb, 2);
        const Eigen::VectorXd x = solve(sys);
        const Eigen::Vector3d e = errors(mesh, sys, x, ex);
        CHECK(e.maxCoeff() < 1e-10);
    }
}

TEST_CASE("system structure")
{
    const Mesh mesh = generate_structured(3);
    StokesProblem pb = quadratic_problem(0.5);
    for (int k = 0; k <= 2; ++k)
    {
        const AssembledSystem sys = assemble_stokes(mesh, pb, k);
        const SpaceLayout& L = sys.layout;
        CHECK(sys.symmetric);
        CHECK(rel_asymmetry(sys.matrix) < 1e-14);
        const Eigen::MatrixXd D(sys.matrix);
        const Eigen::MatrixXd a = D.block(0, 0, L.dim_sigma(), L.dim_sigma());
        CHECK(Eigen::LLT<Eigen::MatrixXd>(a).info() == Eigen::Success);

        std::vector<int> idx;
        for (int i = L.u_offset; i < L.p_offset; ++i)
            idx.push_back(i);
        for (int i = L.trace_offset; i < L.trace_offset + L.dim_trace(); ++i)
            idx.push_back(i);
        Eigen::MatrixXd c(idx.size(), idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j)
                c(i, j) = -D(idx[i], idx[j]);
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues();
        CHECK(ev.minCoeff() > -1e-12 * ev.maxCoeff());
        for (int i = L.p_offset; i < L.trace_offset; ++i)
            for (int j = L.p_offset; j < L.trace_offset; ++j)
                CHECK(D(i, j) == 0.0);
    }
}

TEST_CASE("boundary lift")
{
    const Mesh mesh = generate_structured(2);
    StokesProblem pb = quadratic_problem(1.0);
    const Eigen::VectorXd lift = stokes_dirichlet_lift(mesh, pb, 1);
    StokesProblem no_force = pb;
    no_force.f = nullptr;
    CHECK((assemble_stokes(mesh, no_force, 1).rhs - lift).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(lift.cwiseAbs().maxCoeff() > 0.01);
    pb.g = nullptr;
    CHECK(stokes_dirichlet_lift(mesh, pb, 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("discrete pressure has zero mean and the normal stress is conserved")
{
    const ManufacturedCase mc = manufactured_case("stokes_smooth");
    const Mesh mesh = case_mesh(mc, 4);
    const StokesProblem pb = stokes_problem(mc, 1.5, 0.5);
    const int k = 1;
    const AssembledSystem sys = assemble_stokes(mesh, pb, k);
    const Eigen::VectorXd x = solve(sys);
    const DiscreteSolution s = make_solution(mesh, sys, x);
    double mean = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c)
        mean += mesh.cell_area(c) * s.p(c)(0);
    CHECK(std::abs(mean) < 1e-13);

    const CellBasis basis(k);
    const FacetBasis fb(k);
    std::vector<Eigen::MatrixXd> moment(mesh.num_facets(), Eigen::MatrixXd::Zero(k + 1, 2));
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, 2 * k + 2, 2 * k + 2);
        for (const FacetData& F : E.facets)
        {
            const Mat2 S = stabilization_tensor(1.5, 0.5, F.normal);
            const Eigen::VectorXd pf = F.phi * s.p(c);
            Eigen::MatrixX2d jump(F.w.size(), 2), sn(F.w.size(), 2);
            for (int a = 0; a < 2; ++a)
            {
                jump.col(a) = F.phi * s.u(c, a) - F.psi * s.trace(F.facet, a);
                sn.col(a) = F.phi * s.sigma(c, 2 * a) * F.normal.x() +
                            F.phi * s.sigma(c, 2 * a + 1) * F.normal.y();
            }
            const Eigen::MatrixX2d flux = sn - pf * F.normal.transpose() - jump * S;
            moment[F.facet] += F.psi.transpose() * F.w.asDiagonal() * flux;
        }
    }
    double worst = 0.0;
    for (int f = 0; f < mesh.num_facets(); ++f)
        if (!mesh.facets()[f].is_boundary())
            worst = std::max(worst, moment[f].cwiseAbs().maxCoeff());
    CHECK(worst < 1e-12);
}

TEST_CASE("S-weighted jump seminorm scales with tau")
{
    const Mesh mesh = generate_structured(3);
    const SpaceLayout L = build_layout(mesh, 2, Equation::Stokes);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-1, 1);
    const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(L.total, [&] { return d(rng); });
    FacetParameter t;
    t.value = 2.7;
    for (double s : {0.0, 1.0})
    {
        const double js = vector_jump_seminorm(mesh, L, x, FacetWeight::S, t, t, s);
        const double ji = vector_jump_seminorm(mesh, L, x, FacetWeight::Identity, t, t, s);
        CHECK(js * js == doctest::Approx(2.7 * ji * ji).epsilon(1e-13));
    }
    FacetParameter small, large;
    small.value = 0.5;
    large.value = 4.0;
    const double mixed = vector_jump_seminorm(mesh, L, x, FacetWeight::S, large, small, 0.0);
    const double lo = vector_jump_seminorm(mesh, L, x, FacetWeight::S, small, small, 0.0);
    const double hi = vector_jump_seminorm(mesh, L, x, FacetWeight::S, large, large, 0.0);
    CHECK(lo < mixed);
    CHECK(mixed < hi);
}

TEST_CASE("invalid parameters are rejected")
{
    const Mesh mesh = generate_structured(2);
    StokesProblem pb = quadratic_problem(1.0);
    pb.nu = 0.0;
    CHECK_THROWS_AS(assemble_stokes(mesh, pb, 1), AssemblyError);
    pb.nu = -1.0;
    CHECK_THROWS_AS(assemble_stokes(mesh, pb, 1), AssemblyError);
    pb.nu = 1.0;
    pb.tau_n.value = 0.0;
    CHECK_THROWS_AS(assemble_stokes(mesh, pb, 1), AssemblyError);
    pb.tau_n.value = 1.0;
    pb.tau_t.value = -0.1;
    CHECK_THROWS_AS(assemble_stokes(mesh, pb, 1), AssemblyError);
}
