#include "adbeam/oracles.hpp"

#include "adbeam/error.hpp"

#include <algorithm>
#include <initializer_list>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace adbeam::oracles {

namespace {

constexpr double sqrt2 = std::numbers::sqrt2;
constexpr double pi = std::numbers::pi;

} // namespace

std::string_view name(ClosedFormId id)
{
    switch (id) {
    case ClosedFormId::SmoothedOscillating: return "smoothed_oscillating";
    case ClosedFormId::SmoothedResting: return "smoothed_resting";
    case ClosedFormId::CappedEscaping: return "capped_escaping";
    case ClosedFormId::CappedOscillating: return "capped_oscillating";
    case ClosedFormId::CappedKink: return "capped_kink";
    }
    return "unknown";
}

double kink_time() { return pi / (4.0 * sqrt2); }

ScalarState eval_closed_form(ClosedFormId id, double eps, double t)
{
    if (id != ClosedFormId::CappedKink && !(eps > 0.0)) throw ContractViolation("closed form: eps must be positive");
    switch (id) {
    case ClosedFormId::SmoothedOscillating: {
        const double w = std::sqrt(2.0 - eps);
        return {(1.0 - eps) * std::cos(w * t), -(1.0 - eps) * w * std::sin(w * t)};
    }
    case ClosedFormId::SmoothedResting: return {1.0 + eps, 0.0};
    case ClosedFormId::CappedEscaping: return {eps * t + 1.0 + eps, eps};
    case ClosedFormId::CappedOscillating:
        return {(1.0 - eps) * std::cos(sqrt2 * t), -(1.0 - eps) * sqrt2 * std::sin(sqrt2 * t)};
    case ClosedFormId::CappedKink:
        if (t <= kink_time()) return {sqrt2 * std::sin(sqrt2 * t), 2.0 * std::cos(sqrt2 * t)};
        return {sqrt2 * t + 1.0 - pi / 4.0, sqrt2};
    }
    throw ContractViolation("closed form: unknown id");
}

double closed_form_energy(ClosedFormId id, double eps, double length)
{
    switch (id) {
    case ClosedFormId::SmoothedOscillating: return (2.0 - eps) * (1.0 - eps) * (1.0 - eps) / 2.0 * length;
    case ClosedFormId::SmoothedResting: return (2.0 - eps) * (1.0 + eps) / 2.0 * length;
    case ClosedFormId::CappedEscaping: return (eps * eps + 2.0) / 2.0 * length;
    case ClosedFormId::CappedOscillating: return (1.0 - eps) * (1.0 - eps) * length;
    case ClosedFormId::CappedKink: return 2.0 * length;
    }
    throw ContractViolation("closed form: unknown id");
}

PotentialSpec closed_form_potential(ClosedFormId id, double eps)
{
    switch (id) {
    case ClosedFormId::SmoothedOscillating:
    case ClosedFormId::SmoothedResting: return PotentialSpec::smoothed(eps);
    default: return PotentialSpec::exact(0.0);
    }
}

// ---------------------------------------------------------------------------
// Uniform-state ODE

namespace {

/// One affine piece f(u) = slope u + offset of the force law on [lo, hi].
struct Piece {
    double lo;
    double hi;
    double slope;
    double offset;
};

struct Y {
    double u;
    double v;
};

class PiecewiseForce {
public:
    explicit PiecewiseForce(const PotentialSpec& spec) : spec_(spec)
    {
        if (spec.kind == PotentialKind::ExactCapped)
            breaks_ = {-1.0, 1.0};
        else
            breaks_ = {-1.0 - spec.eps, -1.0, 1.0, 1.0 + spec.eps};
    }

    // Piece containing u; on a breakpoint the direction of motion decides,
    // then the sign of the force. Returns false if u sits at rest on a
    // breakpoint with zero selected force.
    bool locate(double u, double v, Piece& piece) const
    {
        const auto it = std::find(breaks_.begin(), breaks_.end(), u);
        double direction = 0.0;
        if (it != breaks_.end()) {
            direction = v != 0.0 ? v : -select_h(spec_, u);
            if (direction == 0.0) return false;
        }
        // Probe slightly inside the chosen side.
        double probe = u;
        if (direction > 0.0) probe = std::nextafter(u, HUGE_VAL);
        if (direction < 0.0) probe = std::nextafter(u, -HUGE_VAL);
        piece = make_piece(probe);
        return true;
    }

private:
    Piece make_piece(double probe) const
    {
        double lo = -HUGE_VAL;
        double hi = HUGE_VAL;
        for (double b : breaks_) {
            if (b <= probe) lo = b;
            if (b > probe) {
                hi = b;
                break;
            }
        }
        // The law is affine on each piece: recover it from two interior samples.
        const double a = std::isfinite(lo) ? (std::isfinite(hi) ? lo + 0.25 * (hi - lo) : lo + 1.0) : hi - 2.0;
        const double b = std::isfinite(hi) ? (std::isfinite(lo) ? lo + 0.75 * (hi - lo) : hi - 1.0) : lo + 2.0;
        const double fa = select_h(spec_, a);
        const double fb = select_h(spec_, b);
        const double slope = (fb - fa) / (b - a);
        return {lo, hi, slope, fa - slope * a};
    }

    PotentialSpec spec_;
    std::vector<double> breaks_;
};

// Dormand-Prince 5(4) tableau. The ODE is autonomous, so the nodes c_i are unused.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

struct RkResult {
    Y y;
    Y err;
};

RkResult dopri_step(const Piece& p, double rho, Y y, double h)
{
    auto f = [&](Y s) { return Y{s.v, -(p.slope * s.u + p.offset) / rho}; };
    auto add = [](Y base, std::initializer_list<std::pair<double, Y>> terms, double hh) {
        for (auto [w, k] : terms) {
            base.u += hh * w * k.u;
            base.v += hh * w * k.v;
        }
        return base;
    };
    const Y k1 = f(y);
    const Y k2 = f(add(y, {{a21, k1}}, h));
    const Y k3 = f(add(y, {{a31, k1}, {a32, k2}}, h));
    const Y k4 = f(add(y, {{a41, k1}, {a42, k2}, {a43, k3}}, h));
    const Y k5 = f(add(y, {{a51, k1}, {a52, k2}, {a53, k3}, {a54, k4}}, h));
    const Y k6 = f(add(y, {{a61, k1}, {a62, k2}, {a63, k3}, {a64, k4}, {a65, k5}}, h));
    const Y next = add(y, {{b1, k1}, {b3, k3}, {b4, k4}, {b5, k5}, {b6, k6}}, h);
    const Y k7 = f(next);
    const Y err = add(Y{0.0, 0.0}, {{e1, k1}, {e3, k3}, {e4, k4}, {e5, k5}, {e6, k6}, {e7, k7}}, h);
    return {next, err};
}

bool inside(const Piece& p, double u) { return u >= p.lo && u <= p.hi; }

} // namespace

OdeSeries uniform_ode_oracle(const PotentialSpec& spec, double rho, double u0, double v0, double horizon,
                             double sample_dt, double tol)
{
    spec.validate();
    if (!(tol > 0.0 && tol <= 1e-10)) throw ContractViolation("uniform_ode_oracle: tol must lie in (0, 1e-10]");
    if (!(rho > 0.0)) throw ContractViolation("uniform_ode_oracle: rho must be positive");
    if (!(horizon >= 0.0) || !(sample_dt > 0.0)) throw ContractViolation("uniform_ode_oracle: bad time grid");

    constexpr double event_resolution = 1e-13;
    const PiecewiseForce force(spec);
    const auto n_samples = static_cast<std::size_t>(std::floor(horizon / sample_dt * (1.0 + 1e-12))) + 1;

    OdeSeries out;
    out.t.reserve(n_samples);
    out.u.reserve(n_samples);
    out.v.reserve(n_samples);

    double t = 0.0;
    Y y{u0, v0};
    Piece piece{};
    bool moving = force.locate(y.u, y.v, piece);
    double h = std::min(sample_dt, 1e-3);

    for (std::size_t j = 0; j < n_samples; ++j) {
        const double target = static_cast<double>(j) * sample_dt;
        while (moving && t < target) {
            const double span = target - t;
            const double trial = std::min(h, span);
            const RkResult r = dopri_step(piece, rho, y, trial);
            const double scale_u = tol + tol * std::max(std::abs(y.u), std::abs(r.y.u));
            const double scale_v = tol + tol * std::max(std::abs(y.v), std::abs(r.y.v));
            const double err = std::max(std::abs(r.err.u) / scale_u, std::abs(r.err.v) / scale_v);
            if (err > 1.0) {
                h = trial * std::max(0.2, 0.9 * std::pow(err, -0.2));
                if (h < 1e-15) throw NumericalFailure(t);
                continue;
            }
            if (!inside(piece, r.y.u)) {
                // Bisect the step length for the crossing of the piece boundary.
                double lo = 0.0;
                double hi = trial;
                while (hi - lo > event_resolution) {
                    const double mid = 0.5 * (lo + hi);
                    if (inside(piece, dopri_step(piece, rho, y, mid).y.u))
                        lo = mid;
                    else
                        hi = mid;
                }
                Y at = dopri_step(piece, rho, y, hi).y;
                // Snap onto the breakpoint that was crossed.
                at.u = at.u > piece.hi ? piece.hi : piece.lo;
                t += hi;
                y = at;
                out.events.push_back(t);
                moving = force.locate(y.u, y.v, piece);
                continue;
            }
            t = trial == span ? target : t + trial;
            y = r.y;
            const double grow = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
            h = trial * grow;
        }
        out.t.push_back(target);
        out.u.push_back(y.u);
        out.v.push_back(y.v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Free-free characteristic equation

std::vector<double> free_free_roots(std::size_t count)
{
    if (count > 10) throw ContractViolation("free_free_roots: at most 10 roots");
    // cos(x) - 1/cosh(x) has the same roots and stays O(1); it changes sign
    // exactly once on each [k pi, (k+1) pi] for k >= 1.
    auto g = [](double x) { return std::cos(x) - 1.0 / std::cosh(x); };
    std::vector<double> roots;
    roots.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        double lo = static_cast<double>(k) * pi;
        double hi = lo + pi;
        double glo = g(lo);
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            const double gmid = g(mid);
            if ((gmid < 0.0) == (glo < 0.0)) {
                lo = mid;
                glo = gmid;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

std::vector<double> free_free_frequencies(const BeamParams& params, std::size_t count)
{
    params.validate();
    std::vector<double> omega = free_free_roots(count);
    for (double& x : omega) {
        const double beta = x / params.length;
        x = beta * beta * std::sqrt(params.mu / params.rho);
    }
    return omega;
}

} // namespace adbeam::oracles
