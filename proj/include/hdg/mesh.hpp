#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace hdg
{

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class FacetTag
{
    Interior,
    Dirichlet,
    Neumann
};

/// Local facet of a cell: global facet index plus the sign that turns the
/// stored facet normal into the outward normal of that cell.
struct CellFacet
{
    int facet;
    int sign;
};

struct Facet
{
    std::array<int, 2> vertices; ///< sorted, vertices[0] < vertices[1]
    std::array<int, 2> cells;    ///< cells[1] == -1 on the boundary
    FacetTag tag;
    Vec2 normal; ///< unit normal of the edge vertices[0] -> vertices[1], rotated clockwise
    double length;

    bool is_boundary() const noexcept { return cells[1] < 0; }
    int num_cells() const noexcept { return is_boundary() ? 1 : 2; }
};

struct BoundaryEdge
{
    int a;
    int b;
    FacetTag tag;
};

/// Conforming 2D triangulation with facet topology. Immutable once built.
///
/// Local facet i of a cell is the edge opposite to local vertex i, so facet 0
/// joins vertices 1 and 2, facet 1 joins 2 and 0, facet 2 joins 0 and 1.
class Mesh
{
public:
    /// Builds topology and geometry. Cells are reoriented counterclockwise.
    /// Boundary edges not listed in `boundary` are tagged Dirichlet.
    /// Throws TopologyError on degenerate or non-conforming input.
    static Mesh from_connectivity(std::vector<Vec2> vertices,
                                  std::vector<std::array<int, 3>> cells,
                                  const std::vector<BoundaryEdge>& boundary = {});

    const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
    const std::vector<std::array<int, 3>>& cells() const noexcept { return cells_; }
    const std::vector<Facet>& facets() const noexcept { return facets_; }
    const std::array<CellFacet, 3>& cell_facets(int cell) const { return cell_facets_[cell]; }

    int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
    int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
    int num_facets() const noexcept { return static_cast<int>(facets_.size()); }
    int num_boundary_facets() const noexcept;
    int num_facets_tagged(FacetTag tag) const noexcept;

    double cell_area(int cell) const { return area_[cell]; }
    double cell_diameter(int cell) const { return h_cell_[cell]; }
    double facet_diameter(int facet) const { return facets_[facet].length; }
    double max_cell_diameter() const noexcept;
    double domain_area() const noexcept { return domain_area_; }

    Vec2 cell_centroid(int cell) const;
    Vec2 facet_midpoint(int facet) const;
    /// Outward unit normal of `cell` on its local facet `local`.
    Vec2 outward_normal(int cell, int local) const;

    /// Retags boundary facets whose midpoint satisfies `pred`.
    void tag_boundary(const std::function<bool(const Vec2&)>& pred, FacetTag tag);

    std::vector<BoundaryEdge> boundary_edges() const;

private:
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<Facet> facets_;
    std::vector<std::array<CellFacet, 3>> cell_facets_;
    std::vector<double> area_;
    std::vector<double> h_cell_;
    double domain_area_ = 0.0;
};

/// n x n squares on the unit square, each split along its lower-left to
/// upper-right diagonal. All boundary facets Dirichlet.
Mesh generate_structured(int n);

/// (-1,1)^2 minus [0,1) x (-1,0], n cells per unit of length 2 in each
/// direction (n even). Re-entrant corner at the origin.
Mesh generate_lshape(int n);

/// Red refinement: every triangle split into four congruent children.
Mesh refine_uniform(const Mesh& mesh);

/// Plain-text `hdgmesh 1` format.
std::string save_mesh(const Mesh& mesh);
Mesh load_mesh(const std::string& text);

} // namespace hdg
