#include "adbeam/analysis.hpp"

#include "adbeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace adbeam {

namespace {

void require_same_records(const Trajectory& a, const Trajectory& b)
{
    if (a.states.size() != b.states.size())
        throw ContractViolation("trajectories do not share recorded times");
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        const double ta = a.states[k].time;
        const double tb = b.states[k].time;
        if (std::abs(ta - tb) > 1e-9 * std::max(1.0, std::abs(ta)))
            throw ContractViolation("trajectories do not share recorded times");
    }
}

double sup_distance(const Trajectory& a, const Trajectory& b)
{
    require_same_records(a, b);
    double sup = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        sup = std::max(sup, l2_distance(a.grid, a.states[k].displacement, b.states[k].displacement));
    return sup;
}

Trajectory run(const BeamParams& params, std::size_t n_points, const Substrate& potential, InitialData data,
               const RunControl& control, const RunSink& sink = {}, const std::string& label = {})
{
    Simulation sim;
    sim.params = params;
    sim.n_points = n_points;
    sim.potential = potential;
    sim.u0 = std::move(data.u0);
    sim.u1 = std::move(data.u1);
    sim.horizon = control.horizon;
    sim.dt = control.dt;
    sim.record_stride = control.record_stride;
    Trajectory trajectory = simulate(sim);
    if (sink) sink(label, trajectory);
    return trajectory;
}

std::string eps_label(double eps)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", eps);
    return buf;
}

} // namespace

double l2_norm(const Grid& grid, std::span<const double> a) { return std::sqrt(weighted_inner(grid, a, a)); }

double l2_distance(const Grid& grid, std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw ContractViolation("l2_distance: length mismatch");
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    return l2_norm(grid, diff);
}

// ---------------------------------------------------------------------------

double adhesion_threshold(double kappa, double mu)
{
    if (!(kappa > 0.0) || !(mu > 0.0)) throw ContractViolation("adhesion_threshold: kappa and mu must be positive");
    return 4.0 * kappa * mu / std::max(3.0, 2.0 * kappa);
}

AdhesionVerdict adhesion_check(const BeamParams& params, const Grid& grid, const PotentialSpec& spec,
                               std::span<const double> u0, std::span<const double> u1)
{
    if (u0.size() != grid.n_points() || u1.size() != grid.n_points())
        throw ContractViolation("adhesion_check: data length does not match the grid");
    AdhesionVerdict verdict;
    for (double u : u0) verdict.sup_norm_u0 = std::max(verdict.sup_norm_u0, std::abs(u));
    const BeamState state{0.0, {u0.begin(), u0.end()}, {u1.begin(), u1.end()}};
    verdict.initial_energy = energy(params, grid, spec, state).total;
    verdict.threshold = adhesion_threshold(spec.kappa, params.mu);
    verdict.hypothesis_met = verdict.sup_norm_u0 < 1.0 && verdict.initial_energy < verdict.threshold;
    return verdict;
}

double max_abs_displacement(const Trajectory& trajectory)
{
    double sup = 0.0;
    for (const BeamState& s : trajectory.states)
        for (double u : s.displacement) sup = std::max(sup, std::abs(u));
    return sup;
}

bool verify_no_detachment(const Trajectory& trajectory) { return max_abs_displacement(trajectory) < 1.0; }

InitialData random_adhesive_data(const BeamParams& params, const Grid& grid, const PotentialSpec& spec,
                                 std::mt19937_64& rng, double max_sup, double max_energy)
{
    if (!(max_sup > 0.0 && max_sup < 1.0)) throw ContractViolation("random_adhesive_data: max_sup must lie in (0, 1)");
    if (!(max_energy > 0.0)) throw ContractViolation("random_adhesive_data: max_energy must be positive");

    constexpr int modes = 4;
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> fill(0.3, 1.0);
    const std::size_t n = grid.n_points();
    const double pi_over_l = std::numbers::pi / grid.length();

    InitialData data{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    for (int k = 0; k < modes; ++k) {
        // Higher modes carry much more bending energy; damp them.
        const double damp = 1.0 / ((k + 1.0) * (k + 1.0));
        const double a = coeff(rng) * damp;
        const double b = coeff(rng) * damp;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = std::cos(k * pi_over_l * grid.x(i));
            data.u0[i] += a * c;
            data.u1[i] += b * c;
        }
    }

    double sup = 0.0;
    for (double u : data.u0) sup = std::max(sup, std::abs(u));
    const auto scaled_energy = [&](double s) {
        BeamState st{0.0, data.u0, data.u1};
        for (double& u : st.displacement) u *= s;
        for (double& v : st.velocity) v *= s;
        return energy(params, grid, spec, st).total;
    };
    double scale = sup > 0.0 ? fill(rng) * max_sup / sup : 1.0;
    const double e = scaled_energy(scale);
    if (e > 0.0) scale *= std::min(1.0, std::sqrt(fill(rng) * max_energy / e));
    // Quadratic scaling is exact only inside the core; shrink until both bounds hold.
    while (scaled_energy(scale) > max_energy || scale * sup > max_sup) scale *= 0.95;

    for (double& u : data.u0) u *= scale;
    for (double& v : data.u1) v *= scale;
    return data;
}

// ---------------------------------------------------------------------------

std::string to_string(AffineClass c)
{
    switch (c) {
    case AffineClass::Trivial: return "trivial";
    case AffineClass::AttachedPlus: return "at_or_above_one";
    case AffineClass::AttachedMinus: return "at_or_below_minus_one";
    case AffineClass::Unclassified: return "unclassified";
    }
    return "unclassified";
}

AffineState long_time_probe(const Trajectory& trajectory, TimeWindow window, const ProbeTolerances& tol)
{
    if (trajectory.states.size() < 2) throw ContractViolation("long_time_probe: trajectory too short");
    const double t_first = trajectory.states.front().time;
    const double t_last = trajectory.states.back().time;
    if (!(window.begin < window.end) || window.begin < t_first || window.end > t_last * (1.0 + 1e-12))
        throw ContractViolation("long_time_probe: window outside the recorded trajectory");

    const Grid& grid = trajectory.grid;
    const std::size_t n = grid.n_points();

    std::vector<double> mean(n, 0.0);
    double duration = 0.0;
    const BeamState* prev = nullptr;
    for (const BeamState& s : trajectory.states) {
        if (s.time < window.begin || s.time > window.end) continue;
        if (prev) {
            const double dt = s.time - prev->time;
            for (std::size_t i = 0; i < n; ++i) mean[i] += 0.5 * dt * (prev->displacement[i] + s.displacement[i]);
            duration += dt;
        }
        prev = &s;
    }
    if (!(duration > 0.0)) throw ContractViolation("long_time_probe: window holds fewer than two records");
    for (double& m : mean) m /= duration;

    // Weighted least squares for a x + b with trapezoid weights.
    const std::vector<double> w = grid.trapezoid_weights();
    double sw = 0.0, sx = 0.0, sxx = 0.0, sy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.x(i);
        sw += w[i];
        sx += w[i] * x;
        sxx += w[i] * x * x;
        sy += w[i] * mean[i];
        sxy += w[i] * x * mean[i];
    }
    const double det = sw * sxx - sx * sx;
    AffineState state;
    state.slope = (sw * sxy - sx * sy) / det;
    state.intercept = (sy - state.slope * sx) / sw;

    double misfit = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = mean[i] - (state.slope * grid.x(i) + state.intercept);
        misfit += w[i] * r * r;
    }
    state.residual = std::sqrt(misfit);

    double amplitude = 0.0;
    for (double u : trajectory.states.front().displacement) amplitude = std::max(amplitude, std::abs(u));
    const double scale = std::max(1.0, amplitude);

    const double left = state.intercept;
    const double right = state.slope * grid.length() + state.intercept;
    const double lo = std::min(left, right);
    const double hi = std::max(left, right);

    if (state.residual > tol.fit * scale * std::sqrt(grid.length()))
        state.classification = AffineClass::Unclassified;
    else if (std::max(std::abs(lo), std::abs(hi)) <= tol.zero * scale)
        state.classification = AffineClass::Trivial;
    else if (lo >= 1.0 - tol.one)
        state.classification = AffineClass::AttachedPlus;
    else if (hi <= -1.0 + tol.one)
        state.classification = AffineClass::AttachedMinus;
    else
        state.classification = AffineClass::Unclassified;
    return state;
}

// ---------------------------------------------------------------------------

std::vector<LinearizationReport> linearization_experiment(const BeamParams& params, std::size_t n_points,
                                                          const PotentialSpec& spec,
                                                          std::span<const double> base_u0,
                                                          std::span<const double> base_u1,
                                                          std::span<const int> scales, const RunControl& control,
                                                          const RunSink& sink)
{
    if (base_u0.size() != n_points || base_u1.size() != n_points)
        throw ContractViolation("linearization_experiment: data length does not match the grid");
    const std::vector<double> u0(base_u0.begin(), base_u0.end());
    const std::vector<double> u1(base_u1.begin(), base_u1.end());
    const ScaledFamily family = [&](int n) {
        InitialData data{u0, u1};
        for (double& u : data.u0) u /= n;
        for (double& v : data.u1) v /= n;
        return data;
    };
    return linearization_experiment(params, n_points, spec, family, scales, control, sink);
}

ScaledFamily high_frequency_family(const Grid& grid, double amplitude)
{
    return [grid, amplitude](int n) {
        const std::size_t m = grid.n_points();
        InitialData data{std::vector<double>(m), std::vector<double>(m, 0.0)};
        const double k = 2.0 * std::numbers::pi * n / grid.length();
        for (std::size_t i = 0; i < m; ++i) data.u0[i] = amplitude * std::cos(k * grid.x(i)) / (double(n) * n);
        return data;
    };
}

std::vector<LinearizationReport> linearization_experiment(const BeamParams& params, std::size_t n_points,
                                                          const PotentialSpec& spec, const ScaledFamily& family,
                                                          std::span<const int> scales, const RunControl& control,
                                                          const RunSink& sink)
{
    const Grid grid(params.length, n_points);
    if (!family) throw ContractViolation("linearization_experiment: missing data family");

    std::vector<LinearizationReport> reports;
    for (int scale : scales) {
        if (scale < 1) throw ContractViolation("linearization_experiment: scales must be positive");
        LinearizationReport rep;
        rep.scale = scale;

        InitialData data = family(scale);
        if (data.u0.size() != n_points || data.u1.size() != n_points)
            throw ContractViolation("linearization_experiment: data length does not match the grid");
        rep.verdict = adhesion_check(params, grid, spec, data.u0, data.u1);
        if (!rep.verdict.hypothesis_met) {
            rep.skipped = true;
            rep.skip_reason = rep.verdict.sup_norm_u0 >= 1.0 ? "sup |u0| >= 1" : "initial energy not below threshold";
            reports.push_back(rep);
            continue;
        }

        const std::string tag = "_n" + std::to_string(scale);
        const Trajectory nonlinear = run(params, n_points, spec, data, control, sink, "nonlinear" + tag);
        const Trajectory linear = run(params, n_points, std::nullopt, std::move(data), control, sink, "linear" + tag);
        require_same_records(nonlinear, linear);
        rep.no_detachment = verify_no_detachment(nonlinear);
        rep.verdict.conclusion_checked = rep.no_detachment;

        const double min_coeff = std::min(params.rho, params.mu);
        std::vector<double> dw(n_points), w(n_points), force_sq(n_points);
        double integral = 0.0; // int_0^t e^{-s} F(s) ds, trapezoid in time
        double prev_t = 0.0, prev_weighted = 0.0;
        for (std::size_t k = 0; k < nonlinear.states.size(); ++k) {
            const BeamState& a = nonlinear.states[k];
            const BeamState& b = linear.states[k];
            for (std::size_t i = 0; i < n_points; ++i) {
                dw[i] = a.velocity[i] - b.velocity[i];
                w[i] = a.displacement[i] - b.displacement[i];
                const double h = select_h(spec, a.displacement[i]);
                force_sq[i] = h * h;
            }
            const double vel_norm = l2_norm(grid, dw);
            const double curv_norm = l2_norm(grid, second_difference(grid, w));
            const double defect = vel_norm + curv_norm;
            rep.defect = std::max(rep.defect, defect);

            const double t = a.time;
            const double weighted = std::exp(-t) * weighted_inner(grid, force_sq, std::vector<double>(n_points, 1.0));
            if (k > 0) integral += 0.5 * (t - prev_t) * (prev_weighted + weighted);
            prev_t = t;
            prev_weighted = weighted;
            const double envelope = std::exp(t) * integral / (2.0 * params.rho);

            const double gap = 0.5 * (params.rho * vel_norm * vel_norm + params.mu * curv_norm * curv_norm);
            if (envelope > 0.0) rep.max_envelope_ratio = std::max(rep.max_envelope_ratio, gap / envelope);
            // Relative slack only absorbs rounding in the quadratures.
            const double slack = 1e-12 * std::max(gap, envelope);
            if (gap > envelope + slack) rep.envelope_holds = false;
            if (defect * defect > 2.0 * envelope / min_coeff + slack) rep.defect_bound_holds = false;
        }
        reports.push_back(rep);
    }
    return reports;
}

// ---------------------------------------------------------------------------

std::vector<RegularizationRow> regularization_study(const BeamParams& params, std::size_t n_points,
                                                    const DataFamily& data, std::span<const double> eps_list,
                                                    const RunControl& control, const LimitOracle& oracle,
                                                    double capped_selection, const RunSink& sink)
{
    if (!data) throw ContractViolation("regularization_study: missing data family");
    for (std::size_t k = 1; k < eps_list.size(); ++k)
        if (!(eps_list[k] < eps_list[k - 1]))
            throw ContractViolation("regularization_study: eps_list must be strictly decreasing");

    std::vector<RegularizationRow> rows;
    for (double eps : eps_list) {
        RegularizationRow row;
        row.eps = eps;
        const InitialData d = data(eps);
        const std::string tag = "_eps" + eps_label(eps);
        const Trajectory smooth = run(params, n_points, PotentialSpec::smoothed(eps), d, control, sink, "smoothed" + tag);
        const Trajectory capped =
            run(params, n_points, PotentialSpec::exact(capped_selection), d, control, sink, "capped" + tag);
        row.distance_to_capped = sup_distance(smooth, capped);
        if (oracle) {
            double sup = 0.0;
            std::vector<double> ref(n_points);
            for (const BeamState& s : smooth.states) {
                for (std::size_t i = 0; i < n_points; ++i) ref[i] = oracle(s.time, smooth.grid.x(i));
                sup = std::max(sup, l2_distance(smooth.grid, s.displacement, ref));
            }
            row.distance_to_oracle = sup;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<WitnessRow> nonuniqueness_witness(const BeamParams& params, std::size_t n_points,
                                              std::span<const double> eps_list, const RunControl& control,
                                              const RunSink& sink)
{
    const Grid grid(params.length, n_points);
    const double omega = std::sqrt(2.0 / params.rho);
    std::vector<WitnessRow> rows;
    for (double eps : eps_list) {
        WitnessRow row;
        row.eps = eps;
        const InitialData below{std::vector<double>(n_points, 1.0 - eps), std::vector<double>(n_points, 0.0)};
        const InitialData above{std::vector<double>(n_points, 1.0 + eps), std::vector<double>(n_points, 0.0)};
        const std::vector<double> ones(n_points, 1.0);
        row.data_to_limit = l2_distance(grid, below.u0, ones);

        const std::string tag = "_eps" + eps_label(eps);
        const Trajectory u = run(params, n_points, PotentialSpec::smoothed(eps), below, control, sink, "below" + tag);
        const Trajectory v = run(params, n_points, PotentialSpec::smoothed(eps), above, control, sink, "above" + tag);
        require_same_records(u, v);
        row.terminal_gap = l2_distance(grid, u.states.back().displacement, v.states.back().displacement);

        std::vector<double> limit(n_points);
        for (std::size_t k = 0; k < u.states.size(); ++k) {
            std::fill(limit.begin(), limit.end(), std::cos(omega * u.states[k].time));
            row.oscillating_to_limit = std::max(row.oscillating_to_limit, l2_distance(grid, u.states[k].displacement, limit));
            row.resting_to_limit = std::max(row.resting_to_limit, l2_distance(grid, v.states[k].displacement, ones));
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<RefinementRow> dt_refinement_study(const Simulation& base, std::size_t levels)
{
    if (levels == 0) throw ContractViolation("dt_refinement_study: need at least one level");
    const StepPlan plan = plan_steps(base);

    std::vector<Trajectory> runs;
    std::vector<RefinementRow> rows;
    for (std::size_t l = 0; l < levels; ++l) {
        Simulation sim = base;
        const double factor = std::ldexp(1.0, static_cast<int>(l));
        sim.dt = plan.dt / factor;
        sim.record_stride = base.record_stride << l;
        runs.push_back(simulate(sim));
        RefinementRow row;
        row.dt = runs.back().dt;
        row.drift = dissipation_report(runs.back()).max_drift;
        rows.push_back(row);
    }
    for (std::size_t l = 0; l + 1 < levels; ++l) rows[l].distance_to_next = sup_distance(runs[l], runs[l + 1]);
    return rows;
}

} // namespace adbeam
