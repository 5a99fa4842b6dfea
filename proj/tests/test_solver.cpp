#include "support.hpp"

#include "hdg/cdr.hpp"
#include "hdg/errors.hpp"
#include "hdg/manufactured.hpp"
#include "hdg/oseen.hpp"
#include "hdg/poisson.hpp"
#include "hdg/solver.hpp"
#include "hdg/stokes.hpp"

#include <algorithm>

using namespace hdg;

namespace
{

AssembledSystem poisson_system(int n, int k)
{
    const ManufacturedCase mc = manufactured_case("poisson_smooth");
    return assemble_poisson(case_mesh(mc, n), poisson_problem(mc), k);
}

Eigen::MatrixXd dense_schur(const AssembledSystem& sys, const std::vector<int>& retained)
{
    const Eigen::MatrixXd D(sys.matrix);
    std::vector<int> interior;
    for (int i = 0; i < sys.layout.total; ++i)
        if (std::find(retained.begin(), retained.end(), i) == retained.end())
            interior.push_back(i);
    const int nr = static_cast<int>(retained.size()), ni = static_cast<int>(interior.size());
    Eigen::MatrixXd rr(nr, nr), ri(nr, ni), ir(ni, nr), ii(ni, ni);
    for (int a = 0; a < nr; ++a)
    {
        for (int b = 0; b < nr; ++b)
            rr(a, b) = D(retained[a], retained[b]);
        for (int b = 0; b < ni; ++b)
        {
            ri(a, b) = D(retained[a], interior[b]);
            ir(b, a) = D(interior[b], retained[a]);
        }
    }
    for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b)
            ii(a, b) = D(interior[a], interior[b]);
    return rr - ri * ii.fullPivLu().solve(ir);
}

} // namespace

TEST_CASE("condensed dimensions")
{
    const CondensedSystem cs = condense(poisson_system(2, 1));
    CHECK(cs.dim() == 16);
    for (int g : cs.retained)
        CHECK(g >= cs.total - 16);

    const ManufacturedCase mc = manufactured_case("stokes_smooth");
    const AssembledSystem st = assemble_stokes(case_mesh(mc, 2), stokes_problem(mc), 1);
    const CondensedSystem cst = condense(st);
    CHECK(cst.dim() == 32 + 8 + 1);
    CHECK(std::count(cst.retained.begin(), cst.retained.end(), st.layout.multiplier) == 1);
    for (int c = 0; c < 8; ++c)
        CHECK(std::count(cst.retained.begin(), cst.retained.end(), st.layout.p_dof(c, 0)) == 1);
}

TEST_CASE("Schur complement matches the dense formula")
{
    const AssembledSystem sys = poisson_system(2, 1);
    const CondensedSystem cs = condense(sys);
    const Eigen::MatrixXd ref = dense_schur(sys, cs.retained);
    CHECK(hdg::test::max_abs_diff(Eigen::MatrixXd(cs.matrix), ref) < 1e-12 * ref.cwiseAbs().maxCoeff());
    CHECK(cs.symmetric);
    CHECK(hdg::test::rel_asymmetry(cs.matrix) < 1e-13);
    const Eigen::MatrixXd negative = -Eigen::MatrixXd(cs.matrix);
    CHECK(Eigen::LLT<Eigen::MatrixXd>(negative).info() == Eigen::Success);
    CHECK(cs.max_local_condition >= 1.0);
}

TEST_CASE("fully eliminated single cell")
{
    const Mesh mesh = Mesh::from_connectivity({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {{0, 1, 2}});
    PoissonProblem pb;
    pb.p_D = [](const Vec2& x) { return 2.0 - x.x() + 3.0 * x.y(); };
    const AssembledSystem sys = assemble_poisson(mesh, pb, 1);
    const CondensedSystem cs = condense(sys);
    CHECK(cs.dim() == 0);
    const Eigen::VectorXd x = solve(cs);
    CHECK((x - solve(sys)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(relative_residual(sys.matrix, x, sys.rhs) < 1e-13);
}

TEST_CASE("condensed and monolithic solutions agree")
{
    const auto check = [](const AssembledSystem& sys) {
        const Eigen::VectorXd xc = solve(condense(sys));
        const Eigen::VectorXd xm = solve(sys);
        CHECK((xc - xm).norm() < 1e-10 * xm.norm());
        CHECK(relative_residual(sys.matrix, xc, sys.rhs) < 1e-10);
    };
    check(poisson_system(4, 2));
    const ManufacturedCase cdr = manufactured_case("cdr_rotation");
    const AssembledSystem cs = assemble_cdr(case_mesh(cdr, 4), cdr_problem(cdr), 1);
    CHECK_FALSE(cs.symmetric);
    check(cs);
    const ManufacturedCase st = manufactured_case("stokes_smooth");
    check(assemble_stokes(case_mesh(st, 4), stokes_problem(st), 1));
    const ManufacturedCase os = manufactured_case("oseen_smooth");
    check(assemble_oseen(case_mesh(os, 4), oseen_problem(os), 2));
}

TEST_CASE("trivial right-hand sides and matrices")
{
    SparseMatrix I(5, 5);
    I.setIdentity();
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
    CHECK((solve_sparse(I, b, true) - b).norm() == 0.0);
    CHECK((solve_sparse(I, b, false) - b).norm() == 0.0);
    CHECK(solve_sparse(I, Eigen::VectorXd::Zero(5), true).norm() == 0.0);
    CHECK(relative_residual(I, b, Eigen::VectorXd::Zero(5)) == doctest::Approx(b.norm()));

    AssembledSystem sys = poisson_system(2, 1);
    sys.rhs.setZero();
    CHECK(solve(condense(sys)).norm() == 0.0);
    CHECK_THROWS_AS(solve_sparse(I, Eigen::VectorXd::Ones(4), true), SolverError);
}

TEST_CASE("solves are deterministic")
{
    const AssembledSystem sys = poisson_system(8, 2);
    const Eigen::VectorXd a = solve(condense(sys));
    const Eigen::VectorXd b = solve(condense(sys));
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("singular systems are reported")
{
    SparseMatrix Z(3, 3);
    Z.insert(0, 0) = 1.0;
    Z.insert(1, 1) = 1.0;
    CHECK_THROWS_AS(solve_sparse(Z, Eigen::VectorXd::Ones(3), true), SolverError);
    CHECK_THROWS_AS(solve_sparse(Z, Eigen::VectorXd::Ones(3), false), SolverError);

    AssembledSystem sys = poisson_system(2, 1);
    SparseMatrix blank(sys.layout.total, sys.layout.total);
    sys.matrix = blank;
    try
    {
        condense(sys);
        FAIL("expected a solver error");
    }
    catch (const SolverError& e)
    {
        CHECK(std::string(e.what()).find("cell") != std::string::npos);
    }
}
