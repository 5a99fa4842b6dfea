#pragma once

#include "hdg/mesh.hpp"
#include "hdg/system.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <set>

namespace hdg::test
{

inline double rel_asymmetry(const SparseMatrix& m)
{
    const Eigen::MatrixXd d(m);
    return (d - d.transpose()).cwiseAbs().maxCoeff() / d.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const SparseMatrix& a, const SparseMatrix& b)
{
    return (Eigen::MatrixXd(a) - Eigen::MatrixXd(b)).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

/// Every structural and geometric mesh invariant.
inline void check_mesh_invariants(const Mesh& m)
{
    double area = 0.0;
    for (int c = 0; c < m.num_cells(); ++c)
    {
        const auto& cell = m.cells()[c];
        const Vec2 a = m.vertices()[cell[0]], b = m.vertices()[cell[1]], d = m.vertices()[cell[2]];
        const double signed_area = 0.5 * ((b - a).x() * (d - a).y() - (b - a).y() * (d - a).x());
        CHECK(signed_area > 0.0);
        CHECK(std::abs(signed_area - m.cell_area(c)) < 1e-14);
        area += m.cell_area(c);
        const double hk = m.cell_diameter(c);
        for (int l = 0; l < 3; ++l)
        {
            const int f = m.cell_facets(c)[l].facet;
            const double hf = m.facet_diameter(f);
            CHECK(hk <= 2 * hf + 1e-14);
            CHECK(hf <= hk + 1e-14);
            const Vec2 n = m.outward_normal(c, l);
            CHECK(std::abs(n.norm() - 1.0) < 1e-14);
            const Vec2 mid = m.facet_midpoint(f);
            CHECK(n.dot(mid - m.cell_centroid(c)) > 0.0);
        }
    }
    CHECK(std::abs(area - m.domain_area()) <= 1e-12 * m.domain_area());
    int interior = 0, boundary = 0;
    for (int f = 0; f < m.num_facets(); ++f)
    {
        const Facet& F = m.facets()[f];
        if (F.is_boundary())
        {
            ++boundary;
            CHECK(F.tag != FacetTag::Interior);
        }
        else
        {
            ++interior;
            CHECK(F.tag == FacetTag::Interior);
            Vec2 sum = Vec2::Zero();
            for (int side = 0; side < 2; ++side)
            {
                const int c = F.cells[side];
                for (int l = 0; l < 3; ++l)
                    if (m.cell_facets(c)[l].facet == f)
                        sum += m.outward_normal(c, l);
            }
            CHECK(sum.norm() < 1e-14);
        }
    }
    CHECK(interior + boundary == m.num_facets());
    CHECK(boundary == m.num_boundary_facets());
}

/// Edge count from raw connectivity, independent of the mesh's facet table.
inline int count_edges(const Mesh& m)
{
    std::set<std::pair<int, int>> edges;
    for (const auto& c : m.cells())
        for (int i = 0; i < 3; ++i)
        {
            const int a = c[i], b = c[(i + 1) % 3];
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    return static_cast<int>(edges.size());
}

} // namespace hdg::test
