#pragma once

#include "hdg/basis.hpp"
#include "hdg/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace hdg
{

/// Affine map x = x0 + J * xi from the reference triangle onto a cell.
struct CellGeometry
{
    Vec2 x0;
    Mat2 J;
    Mat2 Jinv;
    double det = 0.0; ///< |det J| = 2 * area

    Vec2 to_physical(const Vec2& ref) const { return x0 + J * ref; }
    Vec2 to_reference(const Vec2& x) const { return Jinv * (x - x0); }
};

CellGeometry cell_geometry(const Mesh& mesh, int cell);

/// Quadrature data on one facet of a cell, parametrized from the facet's
/// first vertex to its second so both neighbours see the same points.
struct FacetData
{
    int facet = -1;
    FacetTag tag = FacetTag::Interior;
    Vec2 normal;     ///< outward for the owning cell
    double length = 0.0;
    std::vector<Vec2> x;     ///< physical points
    Eigen::VectorXd w;       ///< weights scaled by the facet length
    Eigen::MatrixXd phi;     ///< cell basis, points x functions
    Eigen::MatrixXd psi;     ///< facet basis, points x functions
};

/// Tabulated basis data for one cell: volume quadrature and its three facets.
struct ElementData
{
    int cell = -1;
    CellGeometry geo;
    double area = 0.0;
    double h = 0.0;
    std::vector<Vec2> x;     ///< physical cell points
    Eigen::VectorXd w;       ///< weights scaled by |det J|
    Eigen::MatrixXd phi;     ///< points x functions
    Eigen::MatrixXd dphi_x;  ///< physical x-derivatives
    Eigen::MatrixXd dphi_y;  ///< physical y-derivatives
    std::array<FacetData, 3> facets;

    int num_points() const noexcept { return static_cast<int>(w.size()); }
};

ElementData make_element(const Mesh& mesh, int cell, const CellBasis& basis,
                         const FacetBasis& facet_basis, int cell_degree, int facet_degree);

/// Weighted mass matrix  sum_q w_q c_q phi_i phi_j.
Eigen::MatrixXd weighted_mass(const Eigen::MatrixXd& phi, const Eigen::VectorXd& w);

/// Weighted mixed product  sum_q w_q a_i(q) b_j(q), result rows a, cols b.
Eigen::MatrixXd weighted_product(const Eigen::MatrixXd& a, const Eigen::VectorXd& w,
                                 const Eigen::MatrixXd& b);

/// Coefficients of the L^2(F) projection of `g` onto P_k(F) in the facet basis.
Eigen::VectorXd facet_l2_coefficients(const Mesh& mesh, int facet, int k,
                                      const std::function<double(const Vec2&)>& g,
                                      int degree);

/// Load vector  integral over the cell of g * phi_i, with its own quadrature.
Eigen::VectorXd cell_load(const CellGeometry& geo, const CellBasis& basis, int degree,
                          const std::function<double(const Vec2&)>& g);

} // namespace hdg
