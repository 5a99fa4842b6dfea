#include "hdg/problems.hpp"

namespace hdg
{

Mat2 stabilization_tensor(double tau_n, double tau_t, const Vec2& n)
{
    const Mat2 nn = n * n.transpose();
    return tau_n * nn + tau_t * (Mat2::Identity() - nn);
}

double divergence_fd(const VectorField& beta, const Vec2& x)
{
    const double h = 1e-6;
    const Vec2 ex(h, 0.0), ey(0.0, h);
    return (beta(x + ex).x() - beta(x - ex).x() + beta(x + ey).y() - beta(x - ey).y()) / (2.0 * h);
}

} // namespace hdg
