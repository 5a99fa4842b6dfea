#pragma once

#include "hdg/mesh.hpp"

#include <vector>

namespace hdg
{

/// Rule on the reference triangle {x, y >= 0, x + y <= 1}. Weights sum to 1/2.
struct QuadratureRule
{
    int degree = 0;
    std::vector<Vec2> points;
    std::vector<double> weights;

    int size() const noexcept { return static_cast<int>(weights.size()); }
    /// Barycentric coordinates (1 - x - y, x, y) of point i.
    Eigen::Vector3d barycentric(int i) const;
};

/// Gauss-Legendre rule on [0, 1]. Weights sum to 1.
struct LineRule
{
    int degree = 0;
    std::vector<double> points;
    std::vector<double> weights;

    int size() const noexcept { return static_cast<int>(weights.size()); }
};

inline constexpr int max_quadrature_degree = 20;

/// Triangle rule exact for polynomials of total degree <= `degree`.
/// Throws ConfigError outside [0, max_quadrature_degree].
const QuadratureRule& quadrature_rule(int degree);

/// Edge rule exact for polynomials of degree <= `degree`.
const LineRule& line_rule(int degree);

/// Closed-form integral of x^a y^b over the reference triangle.
double reference_monomial_integral(int a, int b);

} // namespace hdg
