#include "support.hpp"

#include "hdg/basis.hpp"
#include "hdg/element.hpp"
#include "hdg/errors.hpp"
#include "hdg/layout.hpp"
#include "hdg/mesh.hpp"
#include "hdg/quadrature.hpp"

#include <cmath>

using namespace hdg;

namespace
{

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i)
        r *= i;
    return r;
}

} // namespace

TEST_CASE("closed-form monomial integrals")
{
    CHECK(reference_monomial_integral(0, 0) == doctest::Approx(0.5));
    CHECK(reference_monomial_integral(1, 0) == doctest::Approx(1.0 / 6.0));
    CHECK(reference_monomial_integral(1, 1) == doctest::Approx(1.0 / 24.0));
    CHECK(reference_monomial_integral(2, 0) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("triangle rules integrate monomials exactly")
{
    for (int d = 0; d <= max_quadrature_degree; ++d)
    {
        const QuadratureRule& q = quadrature_rule(d);
        CHECK(q.degree >= d);
        double sum = 0.0;
        for (int i = 0; i < q.size(); ++i)
        {
            sum += q.weights[i];
            const Eigen::Vector3d b = q.barycentric(i);
            CHECK(b.minCoeff() >= -1e-14);
            CHECK(b.sum() == doctest::Approx(1.0));
        }
        CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));
        for (int a = 0; a <= d; ++a)
            for (int b = 0; a + b <= d; ++b)
            {
                double s = 0.0;
                for (int i = 0; i < q.size(); ++i)
                    s += q.weights[i] * std::pow(q.points[i].x(), a) * std::pow(q.points[i].y(), b);
                const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                CHECK(std::abs(s - exact) <= 1e-13 * std::max(1.0, exact));
            }
    }
}

TEST_CASE("line rules integrate monomials exactly")
{
    for (int d = 0; d <= max_quadrature_degree; ++d)
    {
        const LineRule& r = line_rule(d);
        for (int a = 0; a <= d; ++a)
        {
            double s = 0.0;
            for (int i = 0; i < r.size(); ++i)
                s += r.weights[i] * std::pow(r.points[i], a);
            CHECK(s == doctest::Approx(1.0 / (a + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("quadrature degree out of range")
{
    CHECK_THROWS_AS(quadrature_rule(-1), ConfigError);
    CHECK_THROWS_AS(quadrature_rule(max_quadrature_degree + 1), ConfigError);
}

TEST_CASE("cell basis dimensions and orthonormality")
{
    const QuadratureRule& q = quadrature_rule(2 * max_degree);
    for (int k = 0; k <= max_degree; ++k)
    {
        const CellBasis basis(k);
        CHECK(basis.size() == cell_dim(k));
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(basis.size(), basis.size());
        for (int i = 0; i < q.size(); ++i)
        {
            const Eigen::VectorXd v = basis.values(q.points[i]);
            G += 2.0 * q.weights[i] * v * v.transpose();
        }
        CHECK((G - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff() <
              1e-13 * std::sqrt(basis.gram_condition()));
        CHECK(basis.values(Vec2(0.3, 0.1))(0) == doctest::Approx(1.0));
        CHECK(basis.gram_condition() >= 1.0);
    }
    CHECK(cell_dim(2) == 6);
    CHECK(facet_dim(3) == 4);
    CHECK_THROWS_AS(CellBasis(max_degree + 1), ConfigError);
}

TEST_CASE("cell basis gradients match finite differences")
{
    const double eps = 1e-6;
    const Vec2 pts[] = {{0.2, 0.3}, {0.6, 0.1}, {0.05, 0.9}};
    for (int k = 0; k <= max_degree; ++k)
    {
        const CellBasis basis(k);
        for (const Vec2& x : pts)
        {
            const Eigen::MatrixX2d g = basis.gradients(x);
            const Eigen::VectorXd dx =
                (basis.values(x + Vec2(eps, 0)) - basis.values(x - Vec2(eps, 0))) / (2 * eps);
            const Eigen::VectorXd dy =
                (basis.values(x + Vec2(0, eps)) - basis.values(x - Vec2(0, eps))) / (2 * eps);
            CHECK((g.col(0) - dx).cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, dx.cwiseAbs().maxCoeff()));
            CHECK((g.col(1) - dy).cwiseAbs().maxCoeff() < 1e-7 * std::max(1.0, dy.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("facet basis is orthonormal on the unit interval")
{
    const LineRule& r = line_rule(2 * max_degree);
    for (int k = 0; k <= max_degree; ++k)
    {
        const FacetBasis basis(k);
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (int i = 0; i < r.size(); ++i)
        {
            const Eigen::VectorXd v = basis.values(r.points[i]);
            G += r.weights[i] * v * v.transpose();
        }
        CHECK((G - Eigen::MatrixXd::Identity(k + 1, k + 1)).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(basis.values(0.7)(0) == doctest::Approx(1.0));
        if (k >= 1)
            CHECK(basis.values(1.0)(1) == doctest::Approx(std::sqrt(3.0)));
    }
}

TEST_CASE("affine map and element data")
{
    Mesh mesh = generate_structured(3);
    const int k = 2;
    const CellBasis basis(k);
    const FacetBasis fb(k);
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const CellGeometry geo = cell_geometry(mesh, c);
        const auto& cell = mesh.cells()[c];
        CHECK((geo.to_physical(Vec2(0, 0)) - mesh.vertices()[cell[0]]).norm() < 1e-15);
        CHECK((geo.to_physical(Vec2(1, 0)) - mesh.vertices()[cell[1]]).norm() < 1e-15);
        CHECK((geo.to_physical(Vec2(0, 1)) - mesh.vertices()[cell[2]]).norm() < 1e-15);
        const Vec2 x(0.4, 0.35);
        CHECK((geo.to_physical(geo.to_reference(x)) - x).norm() < 1e-14);
        CHECK(geo.det == doctest::Approx(2.0 * mesh.cell_area(c)));

        const ElementData E = make_element(mesh, c, basis, fb, 2 * k + 2, 2 * k + 2);
        CHECK(E.w.sum() == doctest::Approx(E.area).epsilon(1e-13));
        const Eigen::MatrixXd Mass = weighted_mass(E.phi, E.w);
        CHECK((Mass - E.area * Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff() <
              1e-13);
        double perimeter = 0.0;
        for (const FacetData& F : E.facets)
        {
            CHECK(F.w.sum() == doctest::Approx(F.length).epsilon(1e-13));
            CHECK(F.normal.norm() == doctest::Approx(1.0));
            perimeter += F.length;
            for (std::size_t q = 0; q < F.x.size(); ++q)
            {
                const Eigen::VectorXd direct = basis.values(E.geo.to_reference(F.x[q]));
                CHECK((F.phi.row(static_cast<int>(q)).transpose() - direct).cwiseAbs().maxCoeff() < 1e-13);
            }
        }
        double expected = 0.0;
        for (const auto& cf : mesh.cell_facets(c))
            expected += mesh.facet_diameter(cf.facet);
        CHECK(perimeter == doctest::Approx(expected));
    }
}

TEST_CASE("facet traces agree from both neighbours")
{
    const Mesh mesh = generate_structured(2);
    const CellBasis basis(1);
    const FacetBasis fb(1);
    std::vector<std::vector<Vec2>> seen(mesh.num_facets());
    std::vector<Vec2> normal(mesh.num_facets(), Vec2::Zero());
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const ElementData E = make_element(mesh, c, basis, fb, 4, 4);
        for (const FacetData& F : E.facets)
        {
            if (seen[F.facet].empty())
            {
                seen[F.facet] = F.x;
                normal[F.facet] = F.normal;
                continue;
            }
            REQUIRE(seen[F.facet].size() == F.x.size());
            for (std::size_t q = 0; q < F.x.size(); ++q)
                CHECK((seen[F.facet][q] - F.x[q]).norm() < 1e-15);
            CHECK((normal[F.facet] + F.normal).norm() < 1e-15);
        }
    }
}

TEST_CASE("cell load and facet projection")
{
    const Mesh mesh = generate_structured(2);
    const CellBasis basis(2);
    const CellGeometry geo = cell_geometry(mesh, 3);
    const Eigen::VectorXd one = cell_load(geo, basis, 4, [](const Vec2&) { return 1.0; });
    CHECK(one(0) == doctest::Approx(mesh.cell_area(3)));
    CHECK(one.tail(one.size() - 1).cwiseAbs().maxCoeff() < 1e-14);

    const auto g = [](const Vec2& x) { return 2.0 + x.x() - 3.0 * x.y(); };
    for (int f = 0; f < mesh.num_facets(); ++f)
    {
        const Eigen::VectorXd c0 = facet_l2_coefficients(mesh, f, 0, [](const Vec2&) { return 5.0; }, 2);
        CHECK(c0(0) == doctest::Approx(5.0));
        const Eigen::VectorXd c1 = facet_l2_coefficients(mesh, f, 1, g, 4);
        const Facet& F = mesh.facets()[f];
        const Vec2 a = mesh.vertices()[F.vertices[0]], b = mesh.vertices()[F.vertices[1]];
        for (double s : {0.0, 0.3, 1.0})
        {
            const double rec = FacetBasis(1).values(s).dot(c1);
            CHECK(rec == doctest::Approx(g(a + s * (b - a))).epsilon(1e-13));
        }
    }
}

TEST_CASE("space layout counts")
{
    const Mesh m1 = generate_structured(1);
    const SpaceLayout P = build_layout(m1, 0, Equation::Poisson);
    CHECK(P.dim_sigma() == 0);
    CHECK(P.dim_u() == 4);
    CHECK(P.dim_p() == 2);
    CHECK(P.dim_trace() == 1);
    CHECK(P.multiplier == -1);
    CHECK(P.total == 7);
    int eliminated = 0;
    for (int f = 0; f < m1.num_facets(); ++f)
        eliminated += P.eliminated(f);
    CHECK(eliminated == 4);

    const SpaceLayout S = build_layout(m1, 1, Equation::Stokes);
    CHECK(S.dim_sigma() == 24);
    CHECK(S.dim_u() == 12);
    CHECK(S.dim_p() == 6);
    CHECK(S.dim_trace() == 4);
    CHECK(S.multiplier == S.total - 1);
    CHECK(S.total == 24 + 12 + 6 + 4 + 1);

    const Mesh m4 = generate_structured(4);
    const SpaceLayout L = build_layout(m4, 2, Equation::Oseen);
    std::vector<int> hit(L.total, 0);
    for (int c = 0; c < m4.num_cells(); ++c)
        for (int i = 0; i < L.nk; ++i)
        {
            for (int a = 0; a < 4; ++a)
                ++hit[L.sigma_dof(c, a, i)];
            for (int a = 0; a < 2; ++a)
                ++hit[L.u_dof(c, a, i)];
            ++hit[L.p_dof(c, i)];
        }
    for (int f = 0; f < m4.num_facets(); ++f)
        if (!L.eliminated(f))
            for (int a = 0; a < 2; ++a)
                for (int j = 0; j < L.nf; ++j)
                {
                    CHECK(L.is_trace(L.trace_dof(f, a, j)));
                    ++hit[L.trace_dof(f, a, j)];
                }
    ++hit[L.multiplier];
    CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
}

TEST_CASE("layout validation")
{
    Mesh m = generate_structured(2);
    m.tag_boundary([](const Vec2&) { return true; }, FacetTag::Neumann);
    CHECK_THROWS_AS(build_layout(m, 1, Equation::Poisson), ConfigError);
    Mesh mixed = generate_structured(2);
    mixed.tag_boundary([](const Vec2& x) { return x.x() < 1e-12; }, FacetTag::Neumann);
    CHECK_NOTHROW(build_layout(mixed, 1, Equation::Poisson));
    CHECK_THROWS_AS(build_layout(mixed, 1, Equation::CDR), ConfigError);
    CHECK_NOTHROW(build_layout(mixed, 1, Equation::Stokes));
    CHECK_THROWS_AS(build_layout(generate_structured(2), max_degree + 1, Equation::Poisson), ConfigError);
    CHECK(parse_equation(to_string(Equation::Oseen)) == Equation::Oseen);
    CHECK_THROWS_AS(parse_equation("heat"), ConfigError);
}
