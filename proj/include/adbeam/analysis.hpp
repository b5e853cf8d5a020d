#pragma once

#include "adbeam/dynamics.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace adbeam {

// --- adhesion threshold ----------------------------------------------------

/// 4 kappa mu / max(3, 2 kappa). Never exceeds 2 mu.
double adhesion_threshold(double kappa, double mu);

struct AdhesionVerdict {
    double sup_norm_u0 = 0.0;
    double initial_energy = 0.0;
    double threshold = 0.0;
    /// sup |u0| < 1 and E(0) < threshold, both strict.
    bool hypothesis_met = false;
    /// Set once a trajectory has been checked: max |u| < 1 throughout.
    std::optional<bool> conclusion_checked;
};

AdhesionVerdict adhesion_check(const BeamParams& params, const Grid& grid, const PotentialSpec& spec,
                               std::span<const double> u0, std::span<const double> u1);

double max_abs_displacement(const Trajectory& trajectory);

/// True iff every recorded node value satisfies |u| < 1.
bool verify_no_detachment(const Trajectory& trajectory);

struct InitialData {
    std::vector<double> u0;
    std::vector<double> u1;
};

/// Random smooth data with sup |u0| <= max_sup < 1 and E(0) <= max_energy.
///
/// Both fields are short random cosine series; the pair is then scaled down.
/// While |u0| < 1 the adhesion energy is kappa-quadratic, so E scales with the
/// square of the factor.
InitialData random_adhesive_data(const BeamParams& params, const Grid& grid, const PotentialSpec& spec,
                                 std::mt19937_64& rng, double max_sup, double max_energy);

// --- long-time probe ---------------------------------------------------------

enum class AffineClass { Trivial, AttachedPlus, AttachedMinus, Unclassified };

std::string to_string(AffineClass c);

struct AffineState {
    double slope = 0.0;
    double intercept = 0.0;
    /// L2 misfit of the affine fit to the window-averaged displacement.
    double residual = 0.0;
    AffineClass classification = AffineClass::Unclassified;
};

struct TimeWindow {
    double begin = 0.0;
    double end = 0.0;
};

/// Classification tolerances. `zero` and `fit` are multiplied by
/// max(1, sup |u(0)|); `fit` is further multiplied by sqrt(L).
struct ProbeTolerances {
    double zero = 1e-3;
    double one = 1e-3;
    double fit = 1e-3;
};

/// Averages the recorded displacement over the window (trapezoid in time),
/// fits a x + b in the trapezoid L2 sense and classifies the fit as
/// identically zero, >= 1 everywhere, <= -1 everywhere, or none of these.
/// A finite window is only a proxy for the subsequential limit; bounded
/// oscillating runs come out Unclassified.
AffineState long_time_probe(const Trajectory& trajectory, TimeWindow window, const ProbeTolerances& tol = {});

/// Receives every underlying run of a harness with a short label
/// (e.g. "nonlinear_n3"). Harness callers use it to write per-run CSVs.
using RunSink = std::function<void(const std::string& label, const Trajectory& trajectory)>;

// --- linearization -------------------------------------------------------------

struct RunControl {
    double horizon = 1.0;
    std::optional<double> dt;
    std::size_t record_stride = 1;
};

struct LinearizationReport {
    int scale = 1;
    bool skipped = false;
    std::string skip_reason;
    AdhesionVerdict verdict;
    /// sup_t ||d_t w||_2 + ||d_xx w||_2 with w the nonlinear minus linear run.
    double defect = 0.0;
    /// sup_t of (rho ||d_t w||^2 + mu ||d_xx w||^2) / 2 divided by the Gronwall envelope.
    double max_envelope_ratio = 0.0;
    /// (rho ||d_t w||^2 + mu ||d_xx w||^2) / 2 <= envelope(t) at every recorded t.
    bool envelope_holds = true;
    /// defect(t)^2 <= envelope(t) * 2 / min(rho, mu) at every recorded t.
    bool defect_bound_holds = true;
    bool no_detachment = true;
};

/// Data of scale n for the linearization runs.
using ScaledFamily = std::function<InitialData(int n)>;

/// Runs the nonlinear and the free linear beam from family(n) for each n in
/// `scales` and records the energy-norm gap between them. A scale whose data
/// fail the adhesion hypothesis is reported as skipped.
std::vector<LinearizationReport> linearization_experiment(const BeamParams& params, std::size_t n_points,
                                                          const PotentialSpec& spec, const ScaledFamily& family,
                                                          std::span<const int> scales, const RunControl& control,
                                                          const RunSink& sink = {});

/// The family (base_u0 / n, base_u1 / n).
std::vector<LinearizationReport> linearization_experiment(const BeamParams& params, std::size_t n_points,
                                                          const PotentialSpec& spec,
                                                          std::span<const double> base_u0,
                                                          std::span<const double> base_u1,
                                                          std::span<const int> scales, const RunControl& control,
                                                          const RunSink& sink = {});

/// u0 = amplitude cos(2 pi n x / L) / n^2, u1 = 0: weakly but not strongly
/// null in H^2, with bending energy independent of n.
ScaledFamily high_frequency_family(const Grid& grid, double amplitude);

// --- regularization ------------------------------------------------------------

/// Initial data as a function of the smoothing parameter.
using DataFamily = std::function<InitialData(double eps)>;
/// Reference displacement u(t, x) the smoothed runs should approach.
using LimitOracle = std::function<double(double t, double x)>;

struct RegularizationRow {
    double eps = 0.0;
    /// sup_t ||u_eps - u_capped||_2 on recorded times.
    double distance_to_capped = 0.0;
    std::optional<double> distance_to_oracle;
};

/// For each eps (strictly decreasing) runs the smoothed law and the capped law
/// (with `capped_selection` at |u| = 1) from `data(eps)`.
std::vector<RegularizationRow> regularization_study(const BeamParams& params, std::size_t n_points,
                                                    const DataFamily& data, std::span<const double> eps_list,
                                                    const RunControl& control, const LimitOracle& oracle = {},
                                                    double capped_selection = 0.0, const RunSink& sink = {});

struct WitnessRow {
    double eps = 0.0;
    /// ||u_eps - v_eps||_2 at the horizon.
    double terminal_gap = 0.0;
    /// sup_t ||u_eps - cos(sqrt(2/rho) t)||_2.
    double oscillating_to_limit = 0.0;
    /// sup_t ||v_eps - 1||_2.
    double resting_to_limit = 0.0;
    /// Initial data distance to (1, 0): ||u0 - 1||_2 + ||u1||_2, same for both runs.
    double data_to_limit = 0.0;
};

/// Two smoothed-law runs from uniform data (1 - eps, 0) and (1 + eps, 0).
/// Their data converge to (1, 0) while the runs approach different limits.
std::vector<WitnessRow> nonuniqueness_witness(const BeamParams& params, std::size_t n_points,
                                              std::span<const double> eps_list, const RunControl& control,
                                              const RunSink& sink = {});

// --- time-step refinement ------------------------------------------------------

struct RefinementRow {
    double dt = 0.0;
    /// max_t |E(t) - E(0)|, relative to E(0) when nonzero.
    double drift = 0.0;
    /// sup_t ||u_dt - u_{dt/2}||_2 against the next level; empty on the last.
    std::optional<double> distance_to_next;
};

/// Runs `base` at dt, dt/2, ... (`levels` runs). The record stride doubles per
/// level so all runs share recorded times.
std::vector<RefinementRow> dt_refinement_study(const Simulation& base, std::size_t levels);

/// Trapezoid L2 norm of a - b on the grid.
double l2_distance(const Grid& grid, std::span<const double> a, std::span<const double> b);
double l2_norm(const Grid& grid, std::span<const double> a);

} // namespace adbeam
