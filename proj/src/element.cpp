#include "hdg/element.hpp"

#include "hdg/errors.hpp"
#include "hdg/quadrature.hpp"

#include <cmath>

namespace hdg
{

CellGeometry cell_geometry(const Mesh& mesh, int cell)
{
    const auto& c = mesh.cells()[cell];
    const Vec2& a = mesh.vertices()[c[0]];
    const Vec2& b = mesh.vertices()[c[1]];
    const Vec2& d = mesh.vertices()[c[2]];
    CellGeometry g;
    g.x0 = a;
    g.J.col(0) = b - a;
    g.J.col(1) = d - a;
    const double det = g.J.determinant();
    if (!(std::abs(det) > 0.0))
        throw AssemblyError("cell " + std::to_string(cell) + " has zero area");
    g.det = std::abs(det);
    g.Jinv = g.J.inverse();
    return g;
}

ElementData make_element(const Mesh& mesh, int cell, const CellBasis& basis,
                         const FacetBasis& facet_basis, int cell_degree, int facet_degree)
{
    ElementData e;
    e.cell = cell;
    e.geo = cell_geometry(mesh, cell);
    e.area = mesh.cell_area(cell);
    e.h = mesh.cell_diameter(cell);
    const int n = basis.size();

    const QuadratureRule& qr = quadrature_rule(cell_degree);
    const int nq = qr.size();
    e.w.resize(nq);
    e.phi.resize(nq, n);
    e.dphi_x.resize(nq, n);
    e.dphi_y.resize(nq, n);
    const Mat2 JinvT = e.geo.Jinv.transpose();
    for (int q = 0; q < nq; ++q)
    {
        e.x.push_back(e.geo.to_physical(qr.points[q]));
        e.w(q) = qr.weights[q] * e.geo.det;
        e.phi.row(q) = basis.values(qr.points[q]).transpose();
        const Eigen::MatrixX2d g = basis.gradients(qr.points[q]) * JinvT.transpose();
        e.dphi_x.row(q) = g.col(0).transpose();
        e.dphi_y.row(q) = g.col(1).transpose();
    }

    const LineRule& lr = line_rule(facet_degree);
    const int nl = lr.size();
    for (int i = 0; i < 3; ++i)
    {
        const CellFacet& cf = mesh.cell_facets(cell)[i];
        const Facet& f = mesh.facets()[cf.facet];
        FacetData& fd = e.facets[i];
        fd.facet = cf.facet;
        fd.tag = f.tag;
        fd.normal = cf.sign * f.normal;
        fd.length = f.length;
        fd.w.resize(nl);
        fd.phi.resize(nl, n);
        fd.psi.resize(nl, facet_basis.size());
        const Vec2& A = mesh.vertices()[f.vertices[0]];
        const Vec2& B = mesh.vertices()[f.vertices[1]];
        for (int q = 0; q < nl; ++q)
        {
            const double s = lr.points[q];
            const Vec2 x = A + s * (B - A);
            fd.x.push_back(x);
            fd.w(q) = lr.weights[q] * f.length;
            fd.phi.row(q) = basis.values(e.geo.to_reference(x)).transpose();
            fd.psi.row(q) = facet_basis.values(s).transpose();
        }
    }
    return e;
}

Eigen::MatrixXd weighted_mass(const Eigen::MatrixXd& phi, const Eigen::VectorXd& w)
{
    return phi.transpose() * w.asDiagonal() * phi;
}

Eigen::MatrixXd weighted_product(const Eigen::MatrixXd& a, const Eigen::VectorXd& w,
                                 const Eigen::MatrixXd& b)
{
    return a.transpose() * w.asDiagonal() * b;
}

Eigen::VectorXd facet_l2_coefficients(const Mesh& mesh, int facet, int k,
                                      const std::function<double(const Vec2&)>& g,
                                      int degree)
{
    const FacetBasis fb(k);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(fb.size());
    if (!g)
        return c;
    const Facet& f = mesh.facets()[facet];
    const Vec2& A = mesh.vertices()[f.vertices[0]];
    const Vec2& B = mesh.vertices()[f.vertices[1]];
    const LineRule& lr = line_rule(degree);
    for (int q = 0; q < lr.size(); ++q)
        c += lr.weights[q] * g(A + lr.points[q] * (B - A)) * fb.values(lr.points[q]);
    return c;
}

Eigen::VectorXd cell_load(const CellGeometry& geo, const CellBasis& basis, int degree,
                          const std::function<double(const Vec2&)>& g)
{
    Eigen::VectorXd b = Eigen::VectorXd::Zero(basis.size());
    if (!g)
        return b;
    const QuadratureRule& qr = quadrature_rule(degree);
    for (int q = 0; q < qr.size(); ++q)
        b += qr.weights[q] * geo.det * g(geo.to_physical(qr.points[q])) * basis.values(qr.points[q]);
    return b;
}

} // namespace hdg
