#pragma once

#include <algorithm>
#include <cmath>

namespace adbeam {

enum class PotentialKind {
    ExactCapped, ///< Phi(u) = u^2 on [-1,1], 1 outside.
    SmoothedEps  ///< C^1 regularization with linear ramp-down of Phi' on 1 <= |u| <= 1+eps.
};

/// Adhesion law of the substrate.
///
/// `kappa` is the constant of the lower bound Phi(u) >= kappa u^2 on [-1,1].
/// It is stored rather than derived; the factory functions set it for the two
/// built-in laws. `selection_at_one` is the force assigned at u = +1 for the
/// capped law (its negation is used at u = -1) and must lie in [0, Phi'(1-)].
struct PotentialSpec {
    PotentialKind kind = PotentialKind::ExactCapped;
    double eps = 0.0;
    double kappa = 1.0;
    double selection_at_one = 0.0;

    static PotentialSpec exact(double selection_at_one = 0.0);
    static PotentialSpec smoothed(double eps);

    /// Left limit Phi'(1-): 2 for the capped law, 2 - eps for the smoothed one.
    double slope_at_one() const noexcept;

    /// Throws ContractViolation when the fields are inconsistent.
    void validate() const;
};

double eval_phi(const PotentialSpec& spec, double u);

/// Classical derivative. Throws DomainError for the capped law at u = +-1,
/// where only `select_h` is meaningful.
double eval_phi_prime(const PotentialSpec& spec, double u);

/// Pointwise selection h(u) from the subdifferential of Phi'.
/// For the smoothed law Phi' is continuous and this is Phi'.
double select_h(const PotentialSpec& spec, double u);

/// sup_u |Phi_eps(u) - Phi(u)| against the capped law, from a dense sample
/// plus the four breakpoints +-1, +-(1+eps).
double smoothing_residual(double eps);

namespace detail {

// Both force laws are written as selects so the stepping loops vectorize.
inline double capped_force(double u, double selection_at_one) noexcept
{
    const double a = std::abs(u);
    const double at_one = a == 1.0 ? std::copysign(selection_at_one, u) : 0.0;
    return a < 1.0 ? 2.0 * u : at_one;
}

// Magnitude (2-eps) min(|u|, (1+eps-|u|)/eps), clipped at zero: the core
// branch wins on |u| <= 1, the ramp on [1, 1+eps], zero beyond.
inline double smoothed_force(double u, double eps) noexcept
{
    const double a = std::abs(u);
    const double shape = std::max(0.0, std::min(a, (1.0 + eps - a) / eps));
    return std::copysign((2.0 - eps) * shape, u);
}

} // namespace detail

} // namespace adbeam
