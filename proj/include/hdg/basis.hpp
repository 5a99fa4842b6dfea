#pragma once

#include "hdg/mesh.hpp"

#include <Eigen/Dense>

namespace hdg
{

inline constexpr int max_degree = 4;

/// Number of polynomials of total degree <= k in two variables.
constexpr int cell_dim(int k) noexcept { return k < 0 ? 0 : (k + 1) * (k + 2) / 2; }
constexpr int facet_dim(int k) noexcept { return k < 0 ? 0 : k + 1; }

/// Modal basis of P_k on the reference triangle, orthonormal for the mean
/// inner product (2 * integral over the reference cell). The first function is
/// the constant 1 and the first cell_dim(j) functions span P_j.
class CellBasis
{
public:
    explicit CellBasis(int k);

    int degree() const noexcept { return k_; }
    int size() const noexcept { return n_; }

    Eigen::VectorXd values(const Vec2& ref) const;
    /// Row i holds the reference gradient of function i.
    Eigen::MatrixX2d gradients(const Vec2& ref) const;

    /// Reference Gram matrix of the monomials and its condition number.
    const Eigen::MatrixXd& monomial_gram() const noexcept { return gram_; }
    double gram_condition() const noexcept { return gram_cond_; }

private:
    int k_;
    int n_;
    std::vector<std::array<int, 2>> powers_;
    Eigen::MatrixXd coeff_; // basis = coeff_ * monomials
    Eigen::MatrixXd gram_;
    double gram_cond_ = 1.0;
};

/// Scaled Legendre polynomials on [0, 1], orthonormal in L^2(0, 1).
class FacetBasis
{
public:
    explicit FacetBasis(int k);

    int degree() const noexcept { return k_; }
    int size() const noexcept { return k_ + 1; }

    Eigen::VectorXd values(double s) const;

private:
    int k_;
};

void check_degree(int k);

} // namespace hdg
