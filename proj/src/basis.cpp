#include "hdg/basis.hpp"

#include "hdg/errors.hpp"
#include "hdg/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <cmath>

namespace hdg
{

void check_degree(int k)
{
    if (k < 0 || k > max_degree)
        throw ConfigError("polynomial degree " + std::to_string(k) + " outside [0, " +
                          std::to_string(max_degree) + "]");
}

CellBasis::CellBasis(int k) : k_(k), n_(cell_dim(k))
{
    check_degree(k);
    for (int d = 0; d <= k; ++d)
        for (int b = 0; b <= d; ++b)
            powers_.push_back({d - b, b});

    gram_.resize(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            gram_(i, j) = 2.0 * reference_monomial_integral(powers_[i][0] + powers_[j][0],
                                                            powers_[i][1] + powers_[j][1]);
    Eigen::LLT<Eigen::MatrixXd> llt(gram_);
    if (llt.info() != Eigen::Success)
        throw Error("monomial Gram matrix is not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    coeff_ = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n_, n_));
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(gram_).singularValues();
    gram_cond_ = sv(0) / sv(n_ - 1);
}

Eigen::VectorXd CellBasis::values(const Vec2& ref) const
{
    Eigen::VectorXd m(n_);
    for (int i = 0; i < n_; ++i)
        m(i) = std::pow(ref.x(), powers_[i][0]) * std::pow(ref.y(), powers_[i][1]);
    return coeff_ * m;
}

Eigen::MatrixX2d CellBasis::gradients(const Vec2& ref) const
{
    Eigen::MatrixX2d dm(n_, 2);
    for (int i = 0; i < n_; ++i)
    {
        const int a = powers_[i][0], b = powers_[i][1];
        dm(i, 0) = a == 0 ? 0.0 : a * std::pow(ref.x(), a - 1) * std::pow(ref.y(), b);
        dm(i, 1) = b == 0 ? 0.0 : b * std::pow(ref.x(), a) * std::pow(ref.y(), b - 1);
    }
    return coeff_ * dm;
}

FacetBasis::FacetBasis(int k) : k_(k)
{
    check_degree(k);
}

Eigen::VectorXd FacetBasis::values(double s) const
{
    Eigen::VectorXd v(k_ + 1);
    const double t = 2.0 * s - 1.0;
    double p0 = 1.0, p1 = t;
    for (int j = 0; j <= k_; ++j)
    {
        double pj;
        if (j == 0)
            pj = 1.0;
        else if (j == 1)
            pj = t;
        else
        {
            pj = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = pj;
        }
        v(j) = std::sqrt(2.0 * j + 1.0) * pj;
    }
    return v;
}

} // namespace hdg
