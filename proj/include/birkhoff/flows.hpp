#pragma once

// Suspension flows over a mixing shift of finite type with a locally
// constant roof rho > 0.  The level sets of the flow average of a
// capped observable phi are ratio level sets downstairs,
//
//     { x : lim S_n phi / S_n rho = alpha },
//
// and the constraint int phi / int rho = alpha rewrites as
// int (phi - alpha rho) dmu = 0, so the ratio-constrained pressure reuses
// the dual solver with the combined potential.  Entropy transfers by the
// time-change relation h_(mu_rho) = h_mu / int rho dmu, which turns the
// flow entropy of a level set into the unique root in h of
//
//     G(h) = sup { h_mu - h int rho dmu : ratio = alpha } = 0,
//
// strictly decreasing because rho is bounded away from zero.  The cap phi
// is taken already fiber-integrated; for fiber-constant observables
// phi = Phi * rho (see with_fiber_constant_cap).

#include <cmath>
#include <utility>

#include "birkhoff/errors.hpp"
#include "birkhoff/pressure.hpp"
#include "birkhoff/spectrum.hpp"
#include "birkhoff/sft.hpp"

namespace birkhoff {

class SuspensionSystem {
public:
    SuspensionSystem(SftSystem base, Potential roof, Potential cap)
        : base_(std::move(base)), roof_(std::move(roof)), cap_(std::move(cap)) {
        if (roof_.alphabet_size() != base_.alphabet_size() ||
            cap_.alphabet_size() != base_.alphabet_size())
            throw PreconditionError("roof/cap alphabet does not match the base");
        if (!(roof_.min_value() > 0.0))
            throw PreconditionError("roof must be bounded below away from zero");
    }

    // Observable constant along fibers: the integrated cap is Phi * rho.
    static SuspensionSystem with_fiber_constant_cap(SftSystem base, Potential roof,
                                                    const Potential& fiber_value) {
        Potential cap = pointwise_product(base, fiber_value, roof);
        return SuspensionSystem(std::move(base), std::move(roof), std::move(cap));
    }

    const SftSystem& base() const { return base_; }
    const Potential& roof() const { return roof_; }
    const Potential& cap() const { return cap_; }

private:
    SftSystem base_;
    Potential roof_;
    Potential cap_;
};

namespace detail {

// Extremal-mean value of phi - alpha*rho as a function of alpha; strictly
// decreasing since rho > 0, so its root is the extremal ratio of cycles.
inline double ratio_endpoint(const SftSystem& sft, const Potential& phi, const Potential& rho,
                             bool maximum) {
    const double span =
        std::max(std::abs(phi.min_value()), std::abs(phi.max_value())) / rho.min_value() + 1.0;
    double lo = -span, hi = span;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const Potential shifted = linear_combination(sft, 1.0, phi, -mid, rho);
        const auto [mn, mx] = spectrum_domain(sft, shifted);
        const double g = maximum ? mx : mn;
        if (g > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, std::abs(lo) + std::abs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// The interval of int phi dmu / int rho dmu over invariant measures.
inline std::pair<double, double> ratio_domain(const SuspensionSystem& sys) {
    const RecodedSystem rec = higher_block_recode(sys.base(), {sys.cap(), sys.roof()});
    return {detail::ratio_endpoint(rec.sft, rec.potentials[0], rec.potentials[1], false),
            detail::ratio_endpoint(rec.sft, rec.potentials[0], rec.potentials[1], true)};
}

// sup { h_mu + int psi dmu : int phi dmu / int rho dmu = alpha }, with the
// same interior/boundary protocol as constrained_pressure applied to the
// combined potential phi - alpha*rho at level zero.
inline ConstrainedPressure ratio_constrained_pressure(const SuspensionSystem& sys, const Potential& psi,
                                                      double alpha, const PressureOptions& opts = {}) {
    const auto [lo, hi] = ratio_domain(sys);
    if (alpha < lo - kDomainSlack || alpha > hi + kDomainSlack)
        throw AlphaOutOfDomainError("alpha outside the ratio spectrum domain");
    const Potential combined = linear_combination(sys.base(), 1.0, sys.cap(), -alpha, sys.roof());
    ConstrainedPressure out = constrained_pressure(sys.base(), combined, psi, 0.0, opts);
    out.alpha = alpha;
    return out;
}

// Topological entropy of the suspension flow: the unique root of
// P(-h rho) = 0.
inline double flow_topological_entropy(const SuspensionSystem& sys, const PressureOptions& opts = {}) {
    const double base_entropy = classical_pressure(sys.base(), Potential::zero(sys.base()), opts).value;
    const double rho_min = sys.roof().min_value();
    double lo = 0.0, hi = base_entropy / rho_min + 1.0;
    const double width = 1e-11 / std::max(1.0, sys.roof().max_value());
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const double p = classical_pressure(sys.base(), scale(sys.base(), -mid, sys.roof()), opts).value;
        if (p > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double h = 0.5 * (lo + hi);
    const double residual = classical_pressure(sys.base(), scale(sys.base(), -h, sys.roof()), opts).value;
    if (std::abs(residual) > 1e-10)
        throw ConvergenceFailureError("flow entropy root residual above tolerance");
    return h;
}

// Entropy of the level set of the flow average at alpha: the root in h of
// G(h) = ratio-constrained pressure of -h rho.  Degenerate level sets
// (G(0) <= 0) carry zero entropy.
inline double flow_entropy_spectrum(const SuspensionSystem& sys, double alpha,
                                    const PressureOptions& opts = {}) {
    const auto g = [&](double h) {
        return ratio_constrained_pressure(sys, scale(sys.base(), -h, sys.roof()), alpha, opts).value;
    };
    const double g0 = g(0.0);
    if (g0 <= 0.0) {
        if (g0 < -1e-6) throw BracketFailureError("level-set pressure negative at h = 0");
        return 0.0;
    }
    const double base_entropy = classical_pressure(sys.base(), Potential::zero(sys.base()), opts).value;
    double lo = 0.0, hi = base_entropy / sys.roof().min_value() + 1.0;
    const double width = 1e-11 / std::max(1.0, sys.roof().max_value());
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double h = 0.5 * (lo + hi);
    if (std::abs(g(h)) > 1e-9)
        throw ConvergenceFailureError("flow spectrum root residual above tolerance");
    return h;
}

}  // namespace birkhoff
