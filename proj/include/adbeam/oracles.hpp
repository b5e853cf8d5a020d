#pragma once

// Reference solutions that share no code with the beam solver: closed-form
// spatially uniform solutions, an adaptive integrator for the uniform-state
// ODE rho u'' = -h(u), and the free-free characteristic equation.

#include "adbeam/beam_params.hpp"
#include "adbeam/potential.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace adbeam::oracles {

/// The five explicit uniform solutions (all with rho = mu = 1).
enum class ClosedFormId {
    SmoothedOscillating, ///< (1-eps) cos(sqrt(2-eps) t) under the smoothed law
    SmoothedResting,     ///< 1+eps at rest under the smoothed law
    CappedEscaping,      ///< eps t + 1 + eps under the capped law
    CappedOscillating,   ///< (1-eps) cos(sqrt(2) t) under the capped law
    CappedKink           ///< sqrt(2) sin(sqrt(2) t), then sqrt(2) t + 1 - pi/4
};

inline constexpr ClosedFormId all_closed_forms[] = {
    ClosedFormId::SmoothedOscillating, ClosedFormId::SmoothedResting, ClosedFormId::CappedEscaping,
    ClosedFormId::CappedOscillating, ClosedFormId::CappedKink};

std::string_view name(ClosedFormId id);

struct ScalarState {
    double u = 0.0;
    double v = 0.0;
};

/// Exact (u, u_t) at time t. `eps` is ignored for CappedKink.
ScalarState eval_closed_form(ClosedFormId id, double eps, double t);

/// Constant energy of the solution on a beam of the given length.
double closed_form_energy(ClosedFormId id, double eps, double length);

/// Adhesion law under which the closed form solves the problem.
PotentialSpec closed_form_potential(ClosedFormId id, double eps);

/// Detachment time pi / (4 sqrt 2) of the kink solution.
double kink_time();

struct OdeSeries {
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> v;
    /// Times where |u| crossed a breakpoint of the force law.
    std::vector<double> events;
};

/// Integrates rho u'' = -h(u) with adaptive Dormand-Prince 5(4) steps.
///
/// The force law is piecewise affine, so each piece is integrated on its own
/// and crossings of |u| = 1 (and |u| = 1 + eps for the smoothed law) are
/// located by bisection to 1e-13 in time. Samples are taken at multiples of
/// `sample_dt` up to `horizon`. Requires tol <= 1e-10.
OdeSeries uniform_ode_oracle(const PotentialSpec& spec, double rho, double u0, double v0, double horizon,
                             double sample_dt, double tol = 1e-12);

/// First `count` (<= 10) positive roots x_k of cos(x) cosh(x) = 1, bisected to 1e-12.
std::vector<double> free_free_roots(std::size_t count);

/// omega_k = (x_k / L)^2 sqrt(mu / rho).
std::vector<double> free_free_frequencies(const BeamParams& params, std::size_t count);

} // namespace adbeam::oracles
