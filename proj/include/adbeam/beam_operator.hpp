#pragma once

#include "adbeam/beam_params.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace adbeam {

/// Uniform node grid x_i = i h on [0, L].
class Grid {
public:
    static constexpr std::size_t min_points = 5;

    Grid(double length, std::size_t n_points);

    std::size_t n_points() const noexcept { return n_points_; }
    double length() const noexcept { return length_; }
    double spacing() const noexcept { return spacing_; }
    double x(std::size_t i) const noexcept { return static_cast<double>(i) * spacing_; }
    std::vector<double> coordinates() const;

    /// Composite trapezoidal weights (h/2 at the ends, h inside).
    std::vector<double> trapezoid_weights() const;

private:
    double length_;
    std::size_t n_points_;
    double spacing_;
};

struct BeamState {
    double time = 0.0;
    std::vector<double> displacement;
    std::vector<double> velocity;
};

/// out = -mu D4 u with free-edge closure.
///
/// Interior rows use the five-point stencil. At each end the two ghost values
/// come from second-order enforcement of u_xx = 0 and u_xxx = 0:
///   u_{-1} = 2u_0 - u_1,   u_{-2} = 4u_0 - 4u_1 + u_2,
/// which leaves the rows (2, -4, 2) and (-2, 5, -4, 1) and their mirror images.
/// Affine vectors are annihilated exactly.
void apply_biharmonic(const BeamParams& params, const Grid& grid, std::span<const double> u, std::span<double> out);
std::vector<double> apply_biharmonic(const BeamParams& params, const Grid& grid, std::span<const double> u);

/// Second differences (u_{i-1} - 2u_i + u_{i+1}) / h^2 at every node; the end
/// values vanish under the closure above.
std::vector<double> second_difference(const Grid& grid, std::span<const double> u);

/// Dense assembly of apply_biharmonic. Test and spectrum path only.
///
/// M is not symmetric in the Euclidean product: the closure rows differ from
/// their transposes by the factor 1/2 of the end quadrature weights. W M is
/// symmetric for the trapezoid weight matrix W.
Eigen::MatrixXd operator_matrix(const BeamParams& params, const Grid& grid);

/// Trapezoid inner product h * sum_i w_i v_i z_i. The operator is self-adjoint
/// and -M is positive semidefinite under this pairing.
double weighted_inner(const Grid& grid, std::span<const double> v, std::span<const double> z);

/// Smallest `count` nonzero angular frequencies sqrt(lambda) of -M / rho,
/// skipping the two-dimensional rigid-body kernel.
std::vector<double> discrete_frequencies(const BeamParams& params, const Grid& grid, std::size_t count);

/// Full spectrum of -M / rho in ascending order.
Eigen::VectorXd discrete_spectrum(const BeamParams& params, const Grid& grid);

} // namespace adbeam
