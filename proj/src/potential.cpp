#include "adbeam/potential.hpp"

#include "adbeam/error.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace adbeam {

PotentialSpec PotentialSpec::exact(double selection_at_one)
{
    PotentialSpec spec;
    spec.kind = PotentialKind::ExactCapped;
    spec.eps = 0.0;
    spec.kappa = 1.0;
    spec.selection_at_one = selection_at_one;
    spec.validate();
    return spec;
}

PotentialSpec PotentialSpec::smoothed(double eps)
{
    PotentialSpec spec;
    spec.kind = PotentialKind::SmoothedEps;
    spec.eps = eps;
    spec.kappa = (2.0 - eps) / 2.0;
    spec.selection_at_one = 0.0;
    spec.validate();
    return spec;
}

double PotentialSpec::slope_at_one() const noexcept
{
    return kind == PotentialKind::ExactCapped ? 2.0 : 2.0 - eps;
}

void PotentialSpec::validate() const
{
    if (!(kappa > 0.0)) throw ContractViolation("potential: kappa must be positive");
    if (kind == PotentialKind::SmoothedEps) {
        // eps >= 2 makes the ramp slope (2-eps)/eps non-positive.
        if (!(eps > 0.0 && eps < 2.0))
            throw ContractViolation("potential: smoothed eps must lie in (0, 2), got " + std::to_string(eps));
        return;
    }
    if (!(selection_at_one >= 0.0 && selection_at_one <= slope_at_one()))
        throw ContractViolation("potential: selection_at_one must lie in [0, 2], got " +
                                std::to_string(selection_at_one));
}

double eval_phi(const PotentialSpec& spec, double u)
{
    const double a = std::abs(u);
    if (spec.kind == PotentialKind::ExactCapped) return a <= 1.0 ? u * u : 1.0;

    const double e = spec.eps;
    if (a <= 1.0) return (2.0 - e) / 2.0 * u * u;
    if (a >= 1.0 + e) return (2.0 - e) * (1.0 + e) / 2.0;
    // Even extension of the shoulder branch on [1, 1+eps].
    return (2.0 - e) / e * ((1.0 + e) * (a - 0.5) - a * a / 2.0);
}

double eval_phi_prime(const PotentialSpec& spec, double u)
{
    if (spec.kind == PotentialKind::ExactCapped) {
        if (std::abs(u) == 1.0)
            throw DomainError("Phi' of the capped law is undefined at u = +-1; use select_h");
        return detail::capped_force(u, 0.0);
    }
    return detail::smoothed_force(u, spec.eps);
}

double select_h(const PotentialSpec& spec, double u)
{
    if (spec.kind == PotentialKind::ExactCapped) return detail::capped_force(u, spec.selection_at_one);
    return detail::smoothed_force(u, spec.eps);
}

double smoothing_residual(double eps)
{
    if (!(eps > 0.0)) throw ContractViolation("smoothing_residual: eps must be positive");
    const PotentialSpec exact = PotentialSpec::exact();
    const PotentialSpec smooth = PotentialSpec::smoothed(eps);

    // Outside |u| <= 1+eps both laws are constant, so one unit of margin suffices.
    const double reach = 2.0 + eps;
    const double step = 1e-4;
    double sup = 0.0;
    const long samples = static_cast<long>(std::ceil(2.0 * reach / step));
    for (long k = 0; k <= samples; ++k) {
        const double u = -reach + static_cast<double>(k) * step;
        sup = std::max(sup, std::abs(eval_phi(smooth, u) - eval_phi(exact, u)));
    }
    const std::array<double, 4> breaks{-1.0 - eps, -1.0, 1.0, 1.0 + eps};
    for (double u : breaks) sup = std::max(sup, std::abs(eval_phi(smooth, u) - eval_phi(exact, u)));
    return sup;
}

} // namespace adbeam
