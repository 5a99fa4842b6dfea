#include "hdg/mesh.hpp"

#include "hdg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace hdg
{

namespace
{

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

std::pair<int, int> sorted_pair(int a, int b)
{
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

Mesh Mesh::from_connectivity(std::vector<Vec2> vertices,
                             std::vector<std::array<int, 3>> cells,
                             const std::vector<BoundaryEdge>& boundary)
{
    if (vertices.empty())
        throw TopologyError("mesh has no vertices");
    if (cells.empty())
        throw TopologyError("mesh has no cells");

    Mesh m;
    m.vertices_ = std::move(vertices);
    m.cells_ = std::move(cells);
    const int nv = m.num_vertices();

    std::set<std::array<int, 3>> seen;
    for (std::size_t c = 0; c < m.cells_.size(); ++c)
    {
        auto& cell = m.cells_[c];
        for (int v : cell)
            if (v < 0 || v >= nv)
                throw TopologyError("cell " + std::to_string(c) + " references vertex " +
                                    std::to_string(v) + " out of range");
        if (cell[0] == cell[1] || cell[1] == cell[2] || cell[0] == cell[2])
            throw TopologyError("cell " + std::to_string(c) + " repeats a vertex");
        auto key = cell;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second)
            throw TopologyError("duplicate cell " + std::to_string(c));

        double a = signed_area(m.vertices_[cell[0]], m.vertices_[cell[1]], m.vertices_[cell[2]]);
        if (a < 0.0)
        {
            std::swap(cell[1], cell[2]);
            a = -a;
        }
        const Vec2& p0 = m.vertices_[cell[0]];
        const Vec2& p1 = m.vertices_[cell[1]];
        const Vec2& p2 = m.vertices_[cell[2]];
        const double h = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
        if (!(a > 1e-14 * h * h))
            throw TopologyError("cell " + std::to_string(c) + " is degenerate (zero area)");
        m.area_.push_back(a);
        m.h_cell_.push_back(h);
        m.domain_area_ += a;
    }

    std::map<std::pair<int, int>, int> edge_index;
    m.cell_facets_.resize(m.cells_.size());
    for (int c = 0; c < m.num_cells(); ++c)
    {
        const auto& cell = m.cells_[c];
        for (int i = 0; i < 3; ++i)
        {
            const int from = cell[(i + 1) % 3];
            const int to = cell[(i + 2) % 3];
            const auto key = sorted_pair(from, to);
            auto it = edge_index.find(key);
            int f;
            if (it == edge_index.end())
            {
                f = m.num_facets();
                edge_index.emplace(key, f);
                Facet facet;
                facet.vertices = {key.first, key.second};
                facet.cells = {c, -1};
                facet.tag = FacetTag::Interior;
                const Vec2 d = m.vertices_[key.second] - m.vertices_[key.first];
                facet.length = d.norm();
                facet.normal = Vec2(d.y(), -d.x()) / facet.length;
                m.facets_.push_back(facet);
            }
            else
            {
                f = it->second;
                auto& facet = m.facets_[f];
                if (facet.cells[1] >= 0)
                    throw TopologyError("facet (" + std::to_string(key.first) + ", " +
                                        std::to_string(key.second) +
                                        ") is shared by more than two cells");
                facet.cells[1] = c;
            }
            m.cell_facets_[c][i] = CellFacet{f, from == key.first ? 1 : -1};
        }
    }

    for (auto& facet : m.facets_)
    {
        if (facet.is_boundary())
            facet.tag = FacetTag::Dirichlet;
        else
        {
            // The two cells must traverse a shared edge in opposite directions.
            const int c0 = facet.cells[0], c1 = facet.cells[1];
            int s0 = 0, s1 = 0;
            const int f = static_cast<int>(&facet - m.facets_.data());
            for (const auto& cf : m.cell_facets_[c0])
                if (cf.facet == f)
                    s0 = cf.sign;
            for (const auto& cf : m.cell_facets_[c1])
                if (cf.facet == f)
                    s1 = cf.sign;
            if (s0 == s1)
                throw TopologyError("cells " + std::to_string(c0) + " and " + std::to_string(c1) +
                                    " overlap across facet " + std::to_string(f));
        }
    }

    for (const auto& be : boundary)
    {
        auto it = edge_index.find(sorted_pair(be.a, be.b));
        if (it == edge_index.end())
            throw TopologyError("boundary edge (" + std::to_string(be.a) + ", " +
                                std::to_string(be.b) + ") is not an edge of the mesh");
        auto& facet = m.facets_[it->second];
        if (!facet.is_boundary())
            throw TopologyError("boundary edge (" + std::to_string(be.a) + ", " +
                                std::to_string(be.b) + ") is an interior facet");
        if (be.tag == FacetTag::Interior)
            throw TopologyError("boundary edge cannot be tagged interior");
        facet.tag = be.tag;
    }
    return m;
}

int Mesh::num_boundary_facets() const noexcept
{
    return static_cast<int>(
        std::count_if(facets_.begin(), facets_.end(), [](const Facet& f) { return f.is_boundary(); }));
}

int Mesh::num_facets_tagged(FacetTag tag) const noexcept
{
    return static_cast<int>(
        std::count_if(facets_.begin(), facets_.end(), [tag](const Facet& f) { return f.tag == tag; }));
}

double Mesh::max_cell_diameter() const noexcept
{
    return *std::max_element(h_cell_.begin(), h_cell_.end());
}

Vec2 Mesh::cell_centroid(int cell) const
{
    const auto& c = cells_[cell];
    return (vertices_[c[0]] + vertices_[c[1]] + vertices_[c[2]]) / 3.0;
}

Vec2 Mesh::facet_midpoint(int facet) const
{
    const auto& f = facets_[facet];
    return 0.5 * (vertices_[f.vertices[0]] + vertices_[f.vertices[1]]);
}

Vec2 Mesh::outward_normal(int cell, int local) const
{
    const auto& cf = cell_facets_[cell][local];
    return cf.sign * facets_[cf.facet].normal;
}

void Mesh::tag_boundary(const std::function<bool(const Vec2&)>& pred, FacetTag tag)
{
    for (int f = 0; f < num_facets(); ++f)
        if (facets_[f].is_boundary() && pred(facet_midpoint(f)))
            facets_[f].tag = tag;
}

std::vector<BoundaryEdge> Mesh::boundary_edges() const
{
    std::vector<BoundaryEdge> out;
    for (const auto& f : facets_)
        if (f.is_boundary())
            out.push_back({f.vertices[0], f.vertices[1], f.tag});
    return out;
}

Mesh generate_structured(int n)
{
    if (n < 1)
        throw ConfigError("structured mesh needs n >= 1, got " + std::to_string(n));
    std::vector<Vec2> verts;
    verts.reserve((n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            verts.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::array<int, 3>> cells;
    cells.reserve(2 * n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
        {
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    return Mesh::from_connectivity(std::move(verts), std::move(cells));
}

Mesh generate_lshape(int n)
{
    if (n < 2 || n % 2 != 0)
        throw ConfigError("L-shape mesh needs an even n >= 2, got " + std::to_string(n));
    const int half = n / 2;
    std::vector<Vec2> verts;
    std::map<std::pair<int, int>, int> index;
    auto in_domain_square = [half](int i, int j) { return !(i >= half && j < half); };
    auto vid = [&](int i, int j) {
        auto key = std::make_pair(i, j);
        auto it = index.find(key);
        if (it != index.end())
            return it->second;
        const int id = static_cast<int>(verts.size());
        verts.emplace_back(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n);
        index.emplace(key, id);
        return id;
    };
    std::vector<std::array<int, 3>> cells;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
        {
            if (!in_domain_square(i, j))
                continue;
            const int v00 = vid(i, j), v10 = vid(i + 1, j), v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
            cells.push_back({v00, v10, v11});
            cells.push_back({v00, v11, v01});
        }
    return Mesh::from_connectivity(std::move(verts), std::move(cells));
}

Mesh refine_uniform(const Mesh& mesh)
{
    std::vector<Vec2> verts = mesh.vertices();
    const int nv = mesh.num_vertices();
    for (int f = 0; f < mesh.num_facets(); ++f)
        verts.push_back(mesh.facet_midpoint(f));
    auto mid = [&](int cell, int local) { return nv + mesh.cell_facets(cell)[local].facet; };

    std::vector<std::array<int, 3>> cells;
    cells.reserve(4 * mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c)
    {
        const auto& v = mesh.cells()[c];
        const int m12 = mid(c, 0), m20 = mid(c, 1), m01 = mid(c, 2);
        cells.push_back({v[0], m01, m20});
        cells.push_back({m01, v[1], m12});
        cells.push_back({m20, m12, v[2]});
        cells.push_back({m01, m12, m20});
    }
    std::vector<BoundaryEdge> boundary;
    for (int f = 0; f < mesh.num_facets(); ++f)
    {
        const auto& facet = mesh.facets()[f];
        if (!facet.is_boundary())
            continue;
        boundary.push_back({facet.vertices[0], nv + f, facet.tag});
        boundary.push_back({nv + f, facet.vertices[1], facet.tag});
    }
    return Mesh::from_connectivity(std::move(verts), std::move(cells), boundary);
}

std::string save_mesh(const Mesh& mesh)
{
    std::ostringstream os;
    char buf[96];
    os << "hdgmesh 1\n";
    os << "vertices " << mesh.num_vertices() << "\n";
    for (const auto& v : mesh.vertices())
    {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x(), v.y());
        os << buf;
    }
    os << "cells " << mesh.num_cells() << "\n";
    for (const auto& c : mesh.cells())
        os << c[0] << " " << c[1] << " " << c[2] << "\n";
    const auto boundary = mesh.boundary_edges();
    os << "boundary " << boundary.size() << "\n";
    for (const auto& b : boundary)
        os << b.a << " " << b.b << " " << (b.tag == FacetTag::Neumann ? "N" : "D") << "\n";
    return os.str();
}

namespace
{

struct LineReader
{
    std::istringstream in;
    int line_no = 0;

    explicit LineReader(const std::string& text) : in(text) {}

    // Next non-empty line with comments stripped, split into tokens.
    bool next(std::vector<std::string>& tokens)
    {
        std::string line;
        while (std::getline(in, line))
        {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            tokens.clear();
            for (std::string t; ls >> t;)
                tokens.push_back(t);
            if (!tokens.empty())
                return true;
        }
        return false;
    }
};

long parse_int(const std::string& s, int line)
{
    try
    {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size())
            throw ParseError(line, "expected an integer, got '" + s + "'");
        return v;
    }
    catch (const std::logic_error&)
    {
        throw ParseError(line, "expected an integer, got '" + s + "'");
    }
}

double parse_double(const std::string& s, int line)
{
    try
    {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw ParseError(line, "expected a number, got '" + s + "'");
        return v;
    }
    catch (const std::logic_error&)
    {
        throw ParseError(line, "expected a number, got '" + s + "'");
    }
}

long read_section(LineReader& r, const std::string& name)
{
    std::vector<std::string> tok;
    if (!r.next(tok))
        throw ParseError(r.line_no + 1, "missing section '" + name + "'");
    if (tok.size() != 2 || tok[0] != name)
        throw ParseError(r.line_no, "expected '" + name + " <count>'");
    const long count = parse_int(tok[1], r.line_no);
    if (count < 0)
        throw ParseError(r.line_no, "negative count in section '" + name + "'");
    return count;
}

} // namespace

Mesh load_mesh(const std::string& text)
{
    LineReader r(text);
    std::vector<std::string> tok;
    if (!r.next(tok) || tok.size() != 2 || tok[0] != "hdgmesh" || tok[1] != "1")
        throw ParseError(r.line_no, "expected header 'hdgmesh 1'");

    const long nv = read_section(r, "vertices");
    if (nv == 0)
        throw ParseError(r.line_no, "empty vertex section");
    std::vector<Vec2> verts;
    for (long i = 0; i < nv; ++i)
    {
        if (!r.next(tok))
            throw ParseError(r.line_no + 1, "unexpected end of file in vertex section");
        if (tok.size() != 2)
            throw ParseError(r.line_no, "vertex line needs 2 coordinates");
        verts.emplace_back(parse_double(tok[0], r.line_no), parse_double(tok[1], r.line_no));
    }

    const long nc = read_section(r, "cells");
    if (nc == 0)
        throw ParseError(r.line_no, "empty cell section");
    std::vector<std::array<int, 3>> cells;
    for (long i = 0; i < nc; ++i)
    {
        if (!r.next(tok))
            throw ParseError(r.line_no + 1, "unexpected end of file in cell section");
        if (tok.size() != 3)
            throw ParseError(r.line_no, "cell line needs 3 vertex indices");
        std::array<int, 3> c{};
        for (int j = 0; j < 3; ++j)
        {
            const long v = parse_int(tok[j], r.line_no);
            if (v < 0 || v >= nv)
                throw ParseError(r.line_no, "vertex index " + tok[j] + " out of range");
            c[j] = static_cast<int>(v);
        }
        cells.push_back(c);
    }

    const long nb = read_section(r, "boundary");
    std::vector<BoundaryEdge> boundary;
    for (long i = 0; i < nb; ++i)
    {
        if (!r.next(tok))
            throw ParseError(r.line_no + 1, "unexpected end of file in boundary section");
        if (tok.size() != 3)
            throw ParseError(r.line_no, "boundary line needs 'i j TAG'");
        FacetTag tag;
        if (tok[2] == "D")
            tag = FacetTag::Dirichlet;
        else if (tok[2] == "N")
            tag = FacetTag::Neumann;
        else
            throw ParseError(r.line_no, "boundary tag must be D or N, got '" + tok[2] + "'");
        boundary.push_back({static_cast<int>(parse_int(tok[0], r.line_no)),
                            static_cast<int>(parse_int(tok[1], r.line_no)), tag});
    }
    if (r.next(tok))
        throw ParseError(r.line_no, "trailing content after boundary section");

    return Mesh::from_connectivity(std::move(verts), std::move(cells), boundary);
}

} // namespace hdg
