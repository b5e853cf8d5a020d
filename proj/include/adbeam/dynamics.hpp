#pragma once

#include "adbeam/beam_operator.hpp"
#include "adbeam/potential.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace adbeam {

/// Kinetic, bending and adhesion parts of the beam energy, each integrated
/// with the trapezoid rule on the grid.
struct EnergyBreakdown {
    double kinetic = 0.0;
    double bending = 0.0;
    double adhesion = 0.0;
    double total = 0.0;
};

/// `potential == nullopt` drops the substrate: the free linear beam.
using Substrate = std::optional<PotentialSpec>;

EnergyBreakdown energy(const BeamParams& params, const Grid& grid, const Substrate& potential, const BeamState& state);

/// theta h^2 / 2 sqrt(rho / mu) with theta = 0.9.
///
/// The stencil symbol of D4 peaks at 16 / h^4, so the fastest discrete mode has
/// omega_max = 4 sqrt(mu / rho) / h^2 and Verlet needs dt omega_max <= 2.
double stability_limit(const BeamParams& params, const Grid& grid);

/// One velocity-Verlet step of rho u_tt = -mu D4 u - h(u).
/// Throws StabilityError when dt exceeds stability_limit.
BeamState step(const BeamParams& params, const Grid& grid, const Substrate& potential, const BeamState& state,
               double dt);

/// Same update with no stability check. Used to probe the bound itself.
BeamState step_unchecked(const BeamParams& params, const Grid& grid, const Substrate& potential,
                         const BeamState& state, double dt);

/// Fraction of nodes with |u| < 1 (attached to the substrate).
double contact_fraction(std::span<const double> displacement);

struct Simulation {
    BeamParams params;
    std::size_t n_points = 401;
    Substrate potential = PotentialSpec::exact();
    std::vector<double> u0;
    std::vector<double> u1;
    double horizon = 1.0;
    /// Requested step; nullopt means half the stability limit. The effective
    /// step is shrunk so that a whole number of steps lands on the horizon.
    std::optional<double> dt;
    std::size_t record_stride = 1;
};

struct Trajectory {
    Grid grid{1.0, Grid::min_points};
    double dt = 0.0;
    std::size_t record_stride = 1;
    std::size_t steps = 0;
    std::vector<BeamState> states;
    std::vector<EnergyBreakdown> energies;
    std::vector<double> contact_fraction;
};

/// Worst energy excess over the initial value. Relative to E(0) unless
/// E(0) == 0, in which case the absolute excess is reported.
struct DissipationReport {
    double initial_energy = 0.0;
    double max_excess = 0.0;
    bool relative = true;
    /// max |E(t) - E(0)| with the same normalization, for drift studies.
    double max_drift = 0.0;
};

/// Resolved step count and step size for a simulation.
struct StepPlan {
    std::size_t steps = 0;
    double dt = 0.0;
};
StepPlan plan_steps(const Simulation& sim);

/// Integrates to the horizon. Records t = 0, every `record_stride` steps, and
/// the final step. Throws NumericalFailure on a non-finite state and
/// StabilityError when the requested dt is above the limit.
Trajectory simulate(const Simulation& sim);

DissipationReport dissipation_report(const Trajectory& trajectory);

} // namespace adbeam
