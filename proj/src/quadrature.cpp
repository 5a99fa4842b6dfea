#include "hdg/quadrature.hpp"

#include "hdg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <mutex>

namespace hdg
{

namespace
{

// Golub-Welsch nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    if (m == 1)
    {
        w[0] = 2.0;
        return;
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int i = 1; i < m; ++i)
    {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = b;
        J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int i = 0; i < m; ++i)
    {
        x[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        w[i] = 2.0 * v0 * v0;
    }
    // Symmetrize to kill round-off in the eigen-solve.
    for (int i = 0; i < m / 2; ++i)
    {
        const double xs = 0.5 * (x[m - 1 - i] - x[i]);
        const double ws = 0.5 * (w[i] + w[m - 1 - i]);
        x[i] = -xs;
        x[m - 1 - i] = xs;
        w[i] = w[m - 1 - i] = ws;
    }
    if (m % 2 == 1)
        x[m / 2] = 0.0;
}

LineRule make_line_rule(int degree)
{
    const int m = degree / 2 + 1;
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    LineRule r;
    r.degree = degree;
    for (int i = 0; i < m; ++i)
    {
        r.points.push_back(0.5 * (x[i] + 1.0));
        r.weights.push_back(0.5 * w[i]);
    }
    return r;
}

// Collapsed (Duffy) tensor rule. The Jacobian (1 - s) adds one degree in s.
QuadratureRule make_triangle_rule(int degree)
{
    const int m = (degree + 2 + 1) / 2;
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    QuadratureRule r;
    r.degree = degree;
    for (int i = 0; i < m; ++i)
    {
        const double s = 0.5 * (x[i] + 1.0);
        for (int j = 0; j < m; ++j)
        {
            const double t = 0.5 * (x[j] + 1.0);
            r.points.emplace_back(s, (1.0 - s) * t);
            r.weights.push_back(0.25 * w[i] * w[j] * (1.0 - s));
        }
    }
    return r;
}

void check_degree(int degree)
{
    if (degree < 0 || degree > max_quadrature_degree)
        throw ConfigError("quadrature degree " + std::to_string(degree) + " outside [0, " +
                          std::to_string(max_quadrature_degree) + "]");
}

} // namespace

Eigen::Vector3d QuadratureRule::barycentric(int i) const
{
    const Vec2& p = points[i];
    return {1.0 - p.x() - p.y(), p.x(), p.y()};
}

const QuadratureRule& quadrature_rule(int degree)
{
    check_degree(degree);
    static std::array<QuadratureRule, max_quadrature_degree + 1> cache;
    static std::once_flag once;
    std::call_once(once, [] {
        for (int d = 0; d <= max_quadrature_degree; ++d)
            cache[d] = make_triangle_rule(d);
    });
    return cache[degree];
}

const LineRule& line_rule(int degree)
{
    check_degree(degree);
    static std::array<LineRule, max_quadrature_degree + 1> cache;
    static std::once_flag once;
    std::call_once(once, [] {
        for (int d = 0; d <= max_quadrature_degree; ++d)
            cache[d] = make_line_rule(d);
    });
    return cache[degree];
}

double reference_monomial_integral(int a, int b)
{
    // a! b! / (a + b + 2)!
    double num = 1.0;
    for (int i = 2; i <= a; ++i)
        num *= i;
    for (int i = 2; i <= b; ++i)
        num *= i;
    double den = 1.0;
    for (int i = 2; i <= a + b + 2; ++i)
        den *= i;
    return num / den;
}

} // namespace hdg
