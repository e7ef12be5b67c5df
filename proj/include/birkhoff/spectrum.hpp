#pragma once

// Constrained pressure of Birkhoff level sets,
//
//     F(alpha) = sup { h_mu + int psi dmu : int phi dmu = alpha },
//
// computed by convex duality: F(alpha) = inf_q [ P(psi + q phi) - q alpha ],
// where the infimum is located by monotone root-finding on the pressure
// gradient q -> int phi dmu_q.  Interior alpha yields an equilibrium
// witness; at the endpoints of the spectrum domain the dual parameter
// escapes to infinity, so the value is instead the classical pressure of
// psi restricted to the subgraph of extremal-mean cycles, and the result
// carries a `boundary` flag.
//
// The q-bracket grows as [-2^k, 2^k] (capped at k = 60; beyond the cap an
// alpha is treated as a boundary case), then a safeguarded secant solves
// |gradient - alpha| <= 1e-11.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/mean_cycle.hpp"
#include "birkhoff/pressure.hpp"
#include "birkhoff/sft.hpp"

namespace birkhoff {

inline constexpr double kDomainSlack = 1e-9;      // absolute slack at interval endpoints
inline constexpr double kGradientTolerance = 1e-11;
inline constexpr int kMaxBracketDoublings = 60;

struct ConstrainedPressure {
    double alpha = 0.0;
    double value = 0.0;                       // nats
    double q_opt = 0.0;                       // +-inf at boundary
    std::optional<MarkovMeasure> witness;     // absent at boundary
    bool boundary = false;
};

struct SpectrumCurve {
    std::vector<ConstrainedPressure> points;  // strictly increasing alpha
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    double psi_pressure = 0.0;                // P(psi), the global upper bound
};

namespace detail {

// Everything reduced to one recoded depth <= 2 system.
struct DualKernel {
    SftSystem sft;
    Potential phi;
    Potential psi;
    PressureOptions opts;

    static DualKernel build(const SftSystem& sft_in, const Potential& phi_in, const Potential& psi_in,
                            const PressureOptions& opts) {
        RecodedSystem rec = higher_block_recode(sft_in, {phi_in, psi_in});
        return DualKernel{std::move(rec.sft), std::move(rec.potentials[0]), std::move(rec.potentials[1]),
                          opts};
    }

    Potential tilted(double q) const { return linear_combination(sft, 1.0, psi, q, phi); }
    double pressure(double q) const { return classical_pressure(sft, tilted(q), opts).value; }
    MarkovMeasure equilibrium(double q) const { return equilibrium_measure(sft, tilted(q), opts); }
    double gradient(double q) const { return equilibrium(q).integral(sft, phi); }
};

// Monotone root of gradient(q) = alpha inside [lo, hi] with
// g(lo) <= alpha <= g(hi); safeguarded secant (Illinois damping).
inline double solve_gradient(const DualKernel& k, double alpha, double lo, double hi, double glo,
                             double ghi) {
    if (std::abs(glo - alpha) <= kGradientTolerance) return lo;
    if (std::abs(ghi - alpha) <= kGradientTolerance) return hi;
    double flo = glo - alpha, fhi = ghi - alpha;
    double q = lo;
    for (int iter = 0; iter < 400; ++iter) {
        q = (fhi != flo) ? (lo - flo * (hi - lo) / (fhi - flo)) : 0.5 * (lo + hi);
        if (!(q > lo) || !(q < hi)) q = 0.5 * (lo + hi);
        const double f = k.gradient(q) - alpha;
        if (std::abs(f) <= kGradientTolerance) return q;
        if (f > 0.0) {
            hi = q;
            fhi = f;
            flo *= 0.5;  // Illinois: damp the stagnant end
        } else {
            lo = q;
            flo = f;
            fhi *= 0.5;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi))) return 0.5 * (lo + hi);
    }
    throw ConvergenceFailureError("dual gradient root-finding hit its iteration cap");
}

inline ConstrainedPressure boundary_point(const DualKernel& k, const MeanCycleAnalysis& cycles,
                                          double alpha, bool upper) {
    ConstrainedPressure out;
    out.alpha = alpha;
    out.boundary = true;
    out.q_opt = upper ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
    out.value = restricted_pressure(k.sft, k.psi, upper ? cycles.max_tight : cycles.min_tight);
    return out;
}

inline ConstrainedPressure constrained_pressure_impl(const DualKernel& k, double alpha,
                                                     std::optional<double> q_hint) {
    const MeanCycleAnalysis cycles = mean_cycle_analysis(k.sft, k.phi);
    const double lo_alpha = cycles.min_mean, hi_alpha = cycles.max_mean;
    if (alpha < lo_alpha - kDomainSlack || alpha > hi_alpha + kDomainSlack)
        throw AlphaOutOfDomainError("alpha outside the spectrum domain: the level set is empty");

    // Degenerate domain: the constraint is vacuous.
    if (hi_alpha - lo_alpha <= 2.0 * kDomainSlack) {
        ConstrainedPressure out;
        out.alpha = alpha;
        out.q_opt = 0.0;
        const PressureResult p = classical_pressure(k.sft, k.psi, k.opts);
        out.value = p.value;
        out.witness = k.equilibrium(0.0);
        return out;
    }
    if (alpha <= lo_alpha + kDomainSlack) return boundary_point(k, cycles, alpha, false);
    if (alpha >= hi_alpha - kDomainSlack) return boundary_point(k, cycles, alpha, true);

    // Bracket the dual parameter; the gradient is nondecreasing with
    // limits equal to the domain endpoints.
    double lo, hi, glo, ghi;
    try {
        if (q_hint) {
            lo = *q_hint - 1.0;
            hi = *q_hint + 1.0;
        } else {
            lo = -1.0;
            hi = 1.0;
        }
        glo = k.gradient(lo);
        ghi = k.gradient(hi);
        int doublings = 0;
        while (glo > alpha) {
            if (++doublings > kMaxBracketDoublings) return boundary_point(k, cycles, alpha, false);
            lo -= (hi - lo);
            glo = k.gradient(lo);
        }
        while (ghi < alpha) {
            if (++doublings > kMaxBracketDoublings) return boundary_point(k, cycles, alpha, true);
            hi += (hi - lo);
            ghi = k.gradient(hi);
        }
    } catch (const ConvergenceFailureError&) {
        // The tilted matrix degenerated numerically before straddling:
        // alpha is indistinguishable from an endpoint at working precision.
        return boundary_point(k, cycles, alpha, alpha > 0.5 * (lo_alpha + hi_alpha));
    }

    ConstrainedPressure out;
    out.alpha = alpha;
    out.q_opt = detail::solve_gradient(k, alpha, lo, hi, glo, ghi);
    out.value = k.pressure(out.q_opt) - out.q_opt * alpha;
    out.witness = k.equilibrium(out.q_opt);
    return out;
}

}  // namespace detail

inline ConstrainedPressure constrained_pressure(const SftSystem& sft, const Potential& phi,
                                                const Potential& psi, double alpha,
                                                const PressureOptions& opts = {}) {
    return detail::constrained_pressure_impl(detail::DualKernel::build(sft, phi, psi, opts), alpha,
                                             std::nullopt);
}

// Samples F on a uniform alpha-grid over the spectrum domain, endpoints
// included; neighbouring grid points warm-start the dual parameter.  A
// degenerate domain yields a single point.
inline SpectrumCurve spectrum_curve(const SftSystem& sft, const Potential& phi, const Potential& psi,
                                    int grid_size, const PressureOptions& opts = {}) {
    if (grid_size < 2) throw PreconditionError("grid size must be >= 2");
    const detail::DualKernel k = detail::DualKernel::build(sft, phi, psi, opts);
    const auto [lo, hi] = spectrum_domain(k.sft, k.phi);

    SpectrumCurve curve;
    curve.alpha_min = lo;
    curve.alpha_max = hi;
    curve.psi_pressure = classical_pressure(k.sft, k.psi, opts).value;
    if (hi - lo <= 2.0 * kDomainSlack) {
        curve.points.push_back(detail::constrained_pressure_impl(k, 0.5 * (lo + hi), std::nullopt));
        return curve;
    }
    std::optional<double> hint;
    for (int i = 0; i < grid_size; ++i) {
        const double alpha = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        ConstrainedPressure point = detail::constrained_pressure_impl(k, alpha, hint);
        if (!point.boundary) hint = point.q_opt;
        curve.points.push_back(std::move(point));
    }
    return curve;
}

struct FullPressurePoint {
    double alpha_star = 0.0;       // int phi d m_psi
    double constrained_value = 0.0;
    double classical_value = 0.0;
    double check = 0.0;            // |F(alpha*) - P(psi)|
};

// At alpha* = int phi d m_psi the level set carries full pressure.
inline FullPressurePoint full_pressure_point(const SftSystem& sft, const Potential& phi,
                                             const Potential& psi, const PressureOptions& opts = {}) {
    const detail::DualKernel k = detail::DualKernel::build(sft, phi, psi, opts);
    FullPressurePoint out;
    out.alpha_star = k.gradient(0.0);
    out.classical_value = classical_pressure(k.sft, k.psi, opts).value;
    out.constrained_value = detail::constrained_pressure_impl(k, out.alpha_star, std::nullopt).value;
    out.check = std::abs(out.constrained_value - out.classical_value);
    return out;
}

}  // namespace birkhoff
