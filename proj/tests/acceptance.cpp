// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "adbeam/analysis.hpp"
#include "adbeam/beam_operator.hpp"
#include "adbeam/dynamics.hpp"
#include "adbeam/error.hpp"
#include "adbeam/oracles.hpp"

#include <cfloat>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace adbeam;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...)
{
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

Simulation uniform(std::size_t n, const PotentialSpec& spec, double u0, double v0, double horizon, std::size_t stride)
{
    Simulation sim;
    sim.n_points = n;
    sim.potential = spec;
    sim.u0.assign(n, u0);
    sim.u1.assign(n, v0);
    sim.horizon = horizon;
    sim.record_stride = stride;
    return sim;
}

double sup_error(const Trajectory& t, const std::function<double(double)>& ref)
{
    double err = 0.0;
    for (const BeamState& s : t.states) {
        const double r = ref(s.time);
        for (double u : s.displacement) err = std::max(err, std::abs(u - r));
    }
    return err;
}

double sup_energy_deviation(const Trajectory& t, double exact)
{
    double dev = 0.0;
    for (const EnergyBreakdown& e : t.energies) dev = std::max(dev, std::abs(e.total - exact) / exact);
    return dev;
}

// --- 1 --------------------------------------------------------------------

Outcome smoothed_replay()
{
    const double eps = 0.1;
    Simulation sim = uniform(401, PotentialSpec::smoothed(eps), 1.0 - eps, 0.0, 10.0, 1000);
    const auto start = std::chrono::steady_clock::now();
    const Trajectory t = simulate(sim);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double w = std::sqrt(2.0 - eps);
    const double err = sup_error(t, [&](double s) { return (1.0 - eps) * std::cos(w * s); });
    const double energy = oracles::closed_form_energy(oracles::ClosedFormId::SmoothedOscillating, eps, 1.0);
    const double dev = sup_energy_deviation(t, energy);
    return {err <= 1e-4 && dev <= 1e-6 && seconds < 10.0 && energy == 1.9 * 0.81 / 2.0,
            fmt("sup error %.3e (<= 1e-4), energy %.6g rel. dev %.3e (<= 1e-6), runtime %.2f s (< 10), steps %zu",
                err, energy, dev, seconds, t.steps)};
}

// --- 2 --------------------------------------------------------------------

Outcome kink()
{
    const std::size_t stride = 100;
    const Trajectory t = simulate(uniform(401, PotentialSpec::exact(), 0.0, 2.0, 2.0, stride));
    const double tk = oracles::kink_time();
    const double err = sup_error(t, [](double s) { return oracles::eval_closed_form(oracles::ClosedFormId::CappedKink, 0.0, s).u; });
    const double dev = sup_energy_deviation(t, 2.0);

    // Second time difference of the recorded displacement. It follows -2u up to
    // -2 at the kink; the switch is the first record where it climbs back
    // above the midpoint between -2 and 0.
    double detected = -1.0;
    double before = 0.0, after = 0.0, prev = 0.0;
    bool have_after = false;
    for (std::size_t k = 1; k + 1 < t.states.size(); ++k) {
        const double d = t.states[k + 1].time - t.states[k].time;
        if (std::abs(d - (t.states[k].time - t.states[k - 1].time)) > 1e-12) continue;
        const double acc =
            (t.states[k + 1].displacement[200] - 2.0 * t.states[k].displacement[200] + t.states[k - 1].displacement[200]) /
            (d * d);
        if (t.states[k].time < tk - 2.0 * d) before = acc;
        if (detected < 0.0 && prev < -1.0 && acc > -1.0) detected = t.states[k].time;
        prev = acc;
        if (!have_after && t.states[k].time > tk + 2.0 * d) {
            after = acc;
            have_after = true;
        }
    }
    const double record_step = t.dt * stride;
    const bool located = detected > 0.0 && std::abs(detected - tk) <= record_step;
    const bool jump = std::abs(before + 2.0) < 1e-2 && have_after && std::abs(after) < 1e-2;
    return {err <= 1e-3 && dev <= 1e-3 && located && jump,
            fmt("sup error %.3e (<= 1e-3), energy rel. dev %.3e (<= 1e-3), switch detected at %.6f vs %.6f "
                "(record step %.2e), u_tt %.4f -> %.4f",
                err, dev, detected, tk, record_step, before, after)};
}

// --- 3 --------------------------------------------------------------------

Outcome divergence_pair()
{
    const double eps = 0.1;
    const Trajectory up = simulate(uniform(401, PotentialSpec::exact(0.0), 1.0 + eps, eps, 5.0, 1000));
    const Trajectory down = simulate(uniform(401, PotentialSpec::exact(0.0), 1.0 - eps, 0.0, 5.0, 1000));

    const double err_up = sup_error(up, [&](double s) { return eps * s + 1.0 + eps; });
    const double roundoff = static_cast<double>(up.steps) * DBL_EPSILON * max_abs_displacement(up);
    const double err_down = sup_error(down, [&](double s) { return (1.0 - eps) * std::cos(std::sqrt(2.0) * s); });
    const bool up_detached = !verify_no_detachment(up);
    const bool down_attached = verify_no_detachment(down);

    bool distance_ok = true;
    double worst = 0.0;
    for (double len : {1.0, 2.5, 7.0}) {
        const Grid g(len, 401);
        const std::vector<double> a(401, 1.0 + eps), b(401, 1.0 - eps), va(401, eps), vb(401, 0.0);
        const double d = l2_distance(g, a, b) + l2_distance(g, va, vb);
        const double rel = std::abs(d - 3.0 * eps * std::sqrt(len)) / (3.0 * eps * std::sqrt(len));
        worst = std::max(worst, rel);
        // Summation rounding over the grid: n ulps.
        distance_ok = distance_ok && rel <= 401.0 * DBL_EPSILON;
    }
    return {err_up <= roundoff && up_detached && err_down <= 1e-4 && down_attached && distance_ok,
            fmt("escaping error %.3e (roundoff bound %.3e), detached %s; oscillating error %.3e (<= 1e-4), "
                "attached %s; data distance rel. error %.1e vs 3 eps sqrt(L) (<= %.1e)",
                err_up, roundoff, up_detached ? "yes" : "no", err_down, down_attached ? "yes" : "no", worst, 401.0 * DBL_EPSILON)};
}

// --- 4 --------------------------------------------------------------------

Outcome adhesion_regime()
{
    const BeamParams p{1.0, 1.0, 1.0};
    const std::size_t n = 101;
    const Grid g(p.length, n);
    const PotentialSpec spec = PotentialSpec::exact();
    std::mt19937_64 rng(20240611);
    int met = 0, attached = 0;
    double worst = 0.0, max_e0 = 0.0;
    for (int k = 0; k < 20; ++k) {
        InitialData d = random_adhesive_data(p, g, spec, rng, 0.8, 1.2);
        const AdhesionVerdict v = adhesion_check(p, g, spec, d.u0, d.u1);
        if (v.hypothesis_met && v.sup_norm_u0 <= 0.8 && v.initial_energy <= 1.2) ++met;
        max_e0 = std::max(max_e0, v.initial_energy);
        Simulation sim;
        sim.params = p;
        sim.n_points = n;
        sim.potential = spec;
        sim.u0 = std::move(d.u0);
        sim.u1 = std::move(d.u1);
        sim.horizon = 50.0;
        sim.record_stride = 50;
        const Trajectory t = simulate(sim);
        worst = std::max(worst, max_abs_displacement(t));
        if (verify_no_detachment(t)) ++attached;
    }
    return {met == 20 && attached == 20,
            fmt("%d/20 configs meet the hypothesis (max E(0) %.3f), %d/20 stay attached, max |u| %.4f", met, max_e0,
                attached, worst)};
}

// --- 5 --------------------------------------------------------------------

Outcome linearization()
{
    const BeamParams p{1.0, 1.0, 1.0};
    const std::size_t n = 101;
    const Grid g(p.length, n);
    std::vector<double> u0(n), u1(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) u0[i] = 0.05 * std::cos(2.0 * M_PI * g.x(i) / p.length);
    const int scales[] = {1, 2, 3, 4, 5};
    const auto reps = linearization_experiment(p, n, PotentialSpec::exact(), u0, u1, scales, {2.0, {}, 20});

    bool decreasing = true, envelope = true, ran = true;
    std::string defects;
    for (std::size_t k = 0; k < reps.size(); ++k) {
        ran = ran && !reps[k].skipped;
        envelope = envelope && reps[k].envelope_holds;
        if (k > 0) decreasing = decreasing && reps[k].defect < reps[k - 1].defect;
        defects += fmt("%s%.4e", k ? ", " : "", reps[k].defect);
    }
    const double ratio = reps.back().defect / reps.front().defect;
    return {ran && decreasing && ratio <= 0.3 && envelope,
            fmt("defects [%s], ratio %.4f (<= 0.3), strictly decreasing %s, envelope holds %s", defects.c_str(), ratio,
                decreasing ? "yes" : "no", envelope ? "yes" : "no")};
}

// --- 6 --------------------------------------------------------------------

Outcome spectrum()
{
    const BeamParams p{1.0, 1.0, 1.0};
    const auto exact = oracles::free_free_frequencies(p, 3);
    const std::size_t sizes[] = {101, 201, 401};
    double err[3][3];
    double kernel = 0.0;
    for (int s = 0; s < 3; ++s) {
        const Grid g(p.length, sizes[s]);
        const auto w = discrete_frequencies(p, g, 3);
        for (int k = 0; k < 3; ++k) err[s][k] = std::abs(w[k] - exact[k]);
        const double norm_m = operator_matrix(p, g).cwiseAbs().rowwise().sum().maxCoeff();
        for (auto [a, b] : {std::pair{0.0, 1.0}, {1.0, 0.0}, {-2.5, 0.75}}) {
            std::vector<double> u(sizes[s]);
            double sup = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                u[i] = a * g.x(i) + b;
                sup = std::max(sup, std::abs(u[i]));
            }
            for (double v : apply_biharmonic(p, g, u)) kernel = std::max(kernel, std::abs(v) / (norm_m * sup));
        }
    }
    double min_order = 1e9;
    std::string orders;
    for (int k = 0; k < 3; ++k) {
        const double o1 = std::log2(err[0][k] / err[1][k]);
        const double o2 = std::log2(err[1][k] / err[2][k]);
        min_order = std::min({min_order, o1, o2});
        orders += fmt("%s%.3f/%.3f", k ? ", " : "", o1, o2);
    }
    return {min_order >= 1.9 && kernel <= 1e-12,
            fmt("observed orders [%s] (>= 1.9), affine kernel residual %.2e relative (<= 1e-12)", orders.c_str(), kernel)};
}

// --- 7 --------------------------------------------------------------------

Outcome energy_discipline()
{
    const BeamParams p{1.0, 1.0, 1.0};
    const std::size_t n = 51;
    const Grid g(p.length, n);
    std::vector<double> u0(n), u1(n);
    for (std::size_t i = 0; i < n; ++i) {
        u0[i] = 0.3 + 0.9 * std::cos(M_PI * g.x(i));
        u1[i] = 0.5 * std::cos(2.0 * M_PI * g.x(i));
    }
    double ratio_lo = 1e9, ratio_hi = 0.0;
    std::string ratios;
    for (double eps : {0.1, 0.5}) {
        Simulation sim;
        sim.params = p;
        sim.n_points = n;
        sim.potential = PotentialSpec::smoothed(eps);
        sim.u0 = u0;
        sim.u1 = u1;
        sim.horizon = 1.0;
        sim.dt = stability_limit(p, g) / 2.0;
        const double coarse = dissipation_report(simulate(sim)).max_drift;
        sim.dt = stability_limit(p, g) / 4.0;
        sim.record_stride = 2;
        const double fine = dissipation_report(simulate(sim)).max_drift;
        const double r = coarse / fine;
        ratio_lo = std::min(ratio_lo, r);
        ratio_hi = std::max(ratio_hi, r);
        ratios += fmt("%seps %.2g: %.3f", ratios.empty() ? "" : ", ", eps, r);
    }

    // Capped law: the kink, a detaching cosine and a random attached state.
    double excess = 0.0;
    std::vector<Simulation> capped;
    capped.push_back(uniform(101, PotentialSpec::exact(), 0.0, 2.0, 5.0, 10));
    Simulation cos_run = uniform(101, PotentialSpec::exact(), 0.0, 0.0, 5.0, 10);
    const Grid g101(1.0, 101);
    for (std::size_t i = 0; i < 101; ++i) cos_run.u0[i] = 1.3 * std::cos(M_PI * g101.x(i));
    capped.push_back(cos_run);
    Simulation mixed = cos_run;
    for (std::size_t i = 0; i < 101; ++i) mixed.u1[i] = 1.5 * std::sin(3.0 * M_PI * g101.x(i));
    capped.push_back(mixed);
    for (const Simulation& sim : capped) excess = std::max(excess, dissipation_report(simulate(sim)).max_excess);

    return {ratio_lo >= 3.5 && ratio_hi <= 4.5 && excess <= 1e-3,
            fmt("drift ratios under dt halving [%s] (in [3.5, 4.5]); capped-law max excess over E(0) %.3e (<= 1e-3)",
                ratios.c_str(), excess)};
}

// --- 8 --------------------------------------------------------------------

Outcome witness()
{
    const BeamParams p{1.0, 1.0, 1.0};
    const double eps_list[] = {0.01, 0.005, 0.0025};
    const auto rows = nonuniqueness_witness(p, 101, eps_list, {2.0, {}, 100});
    bool ok = true;
    std::string detail;
    for (const WitnessRow& r : rows) {
        ok = ok && r.terminal_gap >= 0.5 * std::sqrt(p.length);
        detail += fmt("%seps %.4g: gap %.4f, |u - cos| %.2e, |v - 1| %.2e, data %.2e", detail.empty() ? "" : "; ", r.eps,
                      r.terminal_gap, r.oscillating_to_limit, r.resting_to_limit, r.data_to_limit);
    }
    for (std::size_t k = 1; k < rows.size(); ++k)
        ok = ok && rows[k].oscillating_to_limit < rows[k - 1].oscillating_to_limit &&
             rows[k].resting_to_limit < rows[k - 1].resting_to_limit;
    return {ok, detail + fmt("; analytic gap %.4f", std::abs(std::cos(2.0 * std::sqrt(2.0)) - 1.0))};
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"smoothed uniform replay", smoothed_replay},
        {"kink solution", kink},
        {"escaping and oscillating pair", divergence_pair},
        {"no detachment below the threshold", adhesion_regime},
        {"linearization defect decay", linearization},
        {"free-free spectrum", spectrum},
        {"energy discipline", energy_discipline},
        {"nonuniqueness witness", witness},
    };
    int failed = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %d %s: %s -- %s\n", index, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
