#include "adbeam/beam_operator.hpp"

#include "adbeam/detail/stencil.hpp"
#include "adbeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adbeam {

void BeamParams::validate() const
{
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ContractViolation("beam: rho must be positive");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ContractViolation("beam: mu must be positive");
    if (!(length > 0.0) || !std::isfinite(length)) throw ContractViolation("beam: length must be positive");
}

Grid::Grid(double length, std::size_t n_points) : length_(length), n_points_(n_points), spacing_(0.0)
{
    if (!(length > 0.0) || !std::isfinite(length)) throw ContractViolation("grid: length must be positive");
    if (n_points < min_points)
        throw ContractViolation("grid: need at least 5 points for the biharmonic stencil, got " +
                                std::to_string(n_points));
    spacing_ = length / static_cast<double>(n_points - 1);
}

std::vector<double> Grid::coordinates() const
{
    std::vector<double> xs(n_points_);
    for (std::size_t i = 0; i < n_points_; ++i) xs[i] = x(i);
    return xs;
}

std::vector<double> Grid::trapezoid_weights() const
{
    std::vector<double> w(n_points_, spacing_);
    w.front() = w.back() = 0.5 * spacing_;
    return w;
}

void apply_biharmonic(const BeamParams& params, const Grid& grid, std::span<const double> u, std::span<double> out)
{
    const std::size_t n = grid.n_points();
    if (u.size() != n || out.size() != n)
        throw ContractViolation("apply_biharmonic: vector length does not match the grid");

    const double h = grid.spacing();
    const double c = -params.mu / (h * h * h * h);
    std::vector<double> s(n);
    detail::undivided_second_difference(u.data(), s.data(), n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c * detail::undivided_fourth_difference(s.data(), i, n);
}

std::vector<double> apply_biharmonic(const BeamParams& params, const Grid& grid, std::span<const double> u)
{
    std::vector<double> out(grid.n_points());
    apply_biharmonic(params, grid, u, out);
    return out;
}

std::vector<double> second_difference(const Grid& grid, std::span<const double> u)
{
    const std::size_t n = grid.n_points();
    if (u.size() != n) throw ContractViolation("second_difference: vector length does not match the grid");
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    std::vector<double> s(n);
    detail::undivided_second_difference(u.data(), s.data(), n);
    for (double& v : s) v *= inv_h2;
    return s;
}

Eigen::MatrixXd operator_matrix(const BeamParams& params, const Grid& grid)
{
    const std::size_t n = grid.n_points();
    Eigen::MatrixXd m(n, n);
    std::vector<double> basis(n, 0.0);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < n; ++j) {
        basis[j] = 1.0;
        apply_biharmonic(params, grid, basis, column);
        for (std::size_t i = 0; i < n; ++i) m(i, j) = column[i];
        basis[j] = 0.0;
    }
    return m;
}

double weighted_inner(const Grid& grid, std::span<const double> v, std::span<const double> z)
{
    const std::size_t n = grid.n_points();
    if (v.size() != n || z.size() != n) throw ContractViolation("weighted_inner: vector length does not match the grid");
    double sum = 0.5 * (v[0] * z[0] + v[n - 1] * z[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) sum += v[i] * z[i];
    return grid.spacing() * sum;
}

Eigen::VectorXd discrete_spectrum(const BeamParams& params, const Grid& grid)
{
    // W(-M) is symmetric, so W^{-1/2} W(-M) W^{-1/2} = W^{1/2}(-M)W^{-1/2}
    // is a symmetric matrix similar to -M.
    const Eigen::MatrixXd m = operator_matrix(params, grid);
    const std::size_t n = grid.n_points();
    Eigen::VectorXd sqrt_w = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    sqrt_w(0) = sqrt_w(static_cast<Eigen::Index>(n - 1)) = std::sqrt(0.5);

    Eigen::MatrixXd s = -(sqrt_w.asDiagonal() * m * sqrt_w.cwiseInverse().asDiagonal());
    s = 0.5 * (s + s.transpose()) / params.rho;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

std::vector<double> discrete_frequencies(const BeamParams& params, const Grid& grid, std::size_t count)
{
    if (count + 2 > grid.n_points()) throw ContractViolation("discrete_frequencies: count exceeds the grid size");
    const Eigen::VectorXd lambda = discrete_spectrum(params, grid);
    std::vector<double> omega;
    omega.reserve(count);
    // The first two eigenvalues belong to the affine kernel.
    for (std::size_t k = 0; k < count; ++k) omega.push_back(std::sqrt(std::max(0.0, lambda(static_cast<Eigen::Index>(k + 2)))));
    return omega;
}

} // namespace adbeam
