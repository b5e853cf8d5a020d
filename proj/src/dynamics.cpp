#include "adbeam/dynamics.hpp"

#include "adbeam/detail/stencil.hpp"
#include "adbeam/error.hpp"

#include <algorithm>
#include <cmath>

namespace adbeam {

namespace {

constexpr double stability_safety = 0.9;
constexpr std::size_t finite_check_interval = 256;

struct NoForce {
    double operator()(double) const noexcept { return 0.0; }
};

struct CappedForce {
    double selection_at_one;
    double operator()(double u) const noexcept { return detail::capped_force(u, selection_at_one); }
};

struct SmoothedForce {
    double eps;
    double operator()(double u) const noexcept { return detail::smoothed_force(u, eps); }
};

template <class Fn>
decltype(auto) with_force(const Substrate& potential, Fn&& fn)
{
    if (!potential) return fn(NoForce{});
    if (potential->kind == PotentialKind::ExactCapped) return fn(CappedForce{potential->selection_at_one});
    return fn(SmoothedForce{potential->eps});
}

/// Velocity-Verlet kernel on raw arrays. Owns the second-difference scratch.
template <class Force>
class Verlet {
public:
    Verlet(const BeamParams& params, const Grid& grid, Force force)
        : n_(grid.n_points()),
          stiffness_(-params.mu / (grid.spacing() * grid.spacing() * grid.spacing() * grid.spacing())),
          inv_rho_(1.0 / params.rho),
          force_(force),
          s_(grid.n_points())
    {
    }

    void acceleration(const double* u, double* a) { update<false>(u, a, nullptr, 0.0); }

    // `a` holds the acceleration at the incoming u and is refreshed in place.
    void advance(double dt, double* __restrict u, double* __restrict v, double* __restrict a)
    {
        const double half = 0.5 * dt;
        for (std::size_t i = 0; i < n_; ++i) {
            v[i] += half * a[i];
            u[i] += dt * v[i];
        }
        update<true>(u, a, v, half);
    }

private:
    // a = (-mu D4 u - h(u)) / rho, optionally followed by the closing half-kick.
    template <bool Kick>
    void update(const double* __restrict u, double* __restrict a, double* __restrict v, double half)
    {
        double* __restrict s = s_.data();
        detail::undivided_second_difference(u, s, n_);
        const std::size_t last = n_ - 1;
        a[0] = (stiffness_ * (2.0 * s[1]) - force_(u[0])) * inv_rho_;
        for (std::size_t i = 1; i < last; ++i)
            a[i] = (stiffness_ * ((s[i - 1] - 2.0 * s[i]) + s[i + 1]) - force_(u[i])) * inv_rho_;
        a[last] = (stiffness_ * (2.0 * s[last - 1]) - force_(u[last])) * inv_rho_;
        if constexpr (Kick) {
            for (std::size_t i = 0; i < n_; ++i) v[i] += half * a[i];
        }
    }

private:
    std::size_t n_;
    double stiffness_;
    double inv_rho_;
    Force force_;
    std::vector<double> s_;
};

bool all_finite(const std::vector<double>& xs)
{
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

void check_state(const Grid& grid, const BeamState& state)
{
    if (state.displacement.size() != grid.n_points() || state.velocity.size() != grid.n_points())
        throw ContractViolation("state length does not match the grid");
}

} // namespace

EnergyBreakdown energy(const BeamParams& params, const Grid& grid, const Substrate& potential, const BeamState& state)
{
    check_state(grid, state);
    const std::size_t n = grid.n_points();
    const std::vector<double> w = grid.trapezoid_weights();
    const std::vector<double> uxx = second_difference(grid, state.displacement);

    EnergyBreakdown e;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = state.velocity[i];
        e.kinetic += w[i] * v * v;
        e.bending += w[i] * uxx[i] * uxx[i];
        if (potential) e.adhesion += w[i] * eval_phi(*potential, state.displacement[i]);
    }
    e.kinetic *= 0.5 * params.rho;
    e.bending *= 0.5 * params.mu;
    e.total = e.kinetic + e.bending + e.adhesion;
    return e;
}

double stability_limit(const BeamParams& params, const Grid& grid)
{
    params.validate();
    const double h = grid.spacing();
    return stability_safety * h * h / 2.0 * std::sqrt(params.rho / params.mu);
}

BeamState step_unchecked(const BeamParams& params, const Grid& grid, const Substrate& potential,
                         const BeamState& state, double dt)
{
    check_state(grid, state);
    BeamState next = state;
    std::vector<double> a(grid.n_points());
    with_force(potential, [&](auto force) {
        Verlet kernel(params, grid, force);
        kernel.acceleration(next.displacement.data(), a.data());
        kernel.advance(dt, next.displacement.data(), next.velocity.data(), a.data());
    });
    next.time = state.time + dt;
    return next;
}

BeamState step(const BeamParams& params, const Grid& grid, const Substrate& potential, const BeamState& state,
               double dt)
{
    const double limit = stability_limit(params, grid);
    if (!(dt > 0.0)) throw ContractViolation("step: dt must be positive");
    if (dt > limit) throw StabilityError(dt, limit);
    return step_unchecked(params, grid, potential, state, dt);
}

double contact_fraction(std::span<const double> displacement)
{
    if (displacement.empty()) return 0.0;
    const auto attached =
        std::count_if(displacement.begin(), displacement.end(), [](double u) { return std::abs(u) < 1.0; });
    return static_cast<double>(attached) / static_cast<double>(displacement.size());
}

StepPlan plan_steps(const Simulation& sim)
{
    sim.params.validate();
    const Grid grid(sim.params.length, sim.n_points);
    if (!(sim.horizon > 0.0) || !std::isfinite(sim.horizon)) throw ContractViolation("simulate: horizon must be positive");
    const double limit = stability_limit(sim.params, grid);
    const double requested = sim.dt.value_or(0.5 * limit);
    if (!(requested > 0.0)) throw ContractViolation("simulate: dt must be positive");
    if (requested > limit) throw StabilityError(requested, limit);

    StepPlan plan;
    // The small slack keeps horizon = k * dt from rounding up to k + 1 steps.
    plan.steps = static_cast<std::size_t>(std::ceil(sim.horizon / requested * (1.0 - 1e-12)));
    plan.steps = std::max<std::size_t>(plan.steps, 1);
    plan.dt = sim.horizon / static_cast<double>(plan.steps);
    return plan;
}

Trajectory simulate(const Simulation& sim)
{
    const StepPlan plan = plan_steps(sim);
    if (sim.potential) sim.potential->validate();
    if (sim.record_stride == 0) throw ContractViolation("simulate: record_stride must be positive");

    Trajectory traj;
    traj.grid = Grid(sim.params.length, sim.n_points);
    traj.dt = plan.dt;
    traj.record_stride = sim.record_stride;
    traj.steps = plan.steps;

    BeamState state{0.0, sim.u0, sim.u1};
    check_state(traj.grid, state);
    if (!all_finite(state.displacement) || !all_finite(state.velocity)) throw NumericalFailure(0.0);

    const std::size_t expected_records = plan.steps / sim.record_stride + 2;
    traj.states.reserve(expected_records);
    traj.energies.reserve(expected_records);
    traj.contact_fraction.reserve(expected_records);

    auto record = [&] {
        traj.states.push_back(state);
        traj.energies.push_back(energy(sim.params, traj.grid, sim.potential, state));
        traj.contact_fraction.push_back(contact_fraction(state.displacement));
    };

    with_force(sim.potential, [&](auto force) {
        Verlet kernel(sim.params, traj.grid, force);
        std::vector<double> a(sim.n_points);
        double* u = state.displacement.data();
        double* v = state.velocity.data();
        kernel.acceleration(u, a.data());
        record();
        for (std::size_t k = 1; k <= plan.steps; ++k) {
            kernel.advance(plan.dt, u, v, a.data());
            // Times are k * dt, never accumulated.
            state.time = static_cast<double>(k) * plan.dt;
            const bool recording = k % sim.record_stride == 0 || k == plan.steps;
            if (recording || k % finite_check_interval == 0) {
                if (!all_finite(state.displacement) || !all_finite(state.velocity)) throw NumericalFailure(state.time);
            }
            if (recording) record();
        }
    });
    return traj;
}

DissipationReport dissipation_report(const Trajectory& trajectory)
{
    DissipationReport report;
    if (trajectory.energies.empty()) return report;
    const double e0 = trajectory.energies.front().total;
    report.initial_energy = e0;
    report.relative = e0 != 0.0;
    const double scale = report.relative ? std::abs(e0) : 1.0;
    for (const EnergyBreakdown& e : trajectory.energies) {
        report.max_excess = std::max(report.max_excess, (e.total - e0) / scale);
        report.max_drift = std::max(report.max_drift, std::abs(e.total - e0) / scale);
    }
    return report;
}

} // namespace adbeam
