#pragma once

// Hausdorff dimension of Birkhoff level sets for full-branch piecewise
// linear expanding maps of [0,1].  Such a map is conjugate to the full
// shift on its branches with the geometric potential psi(i) = log s_i,
// and the dimension of { x : lim (1/n) S_n phi = alpha } is the unique
// root in s of the pressure equation
//
//     s  |->  F_alpha(-s psi) = sup { h_mu - s int psi dmu : int phi dmu = alpha },
//
// strictly decreasing because every invariant measure satisfies
// int psi dmu >= min_i log s_i > 0.  Markov (non-full-branch) partitions
// and parabolic branches with slope 1 are outside this model: for a
// parabolic fixed point the pressure function degenerates to 0 for every
// s and the root is no longer informative.

#include <cmath>
#include <utility>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/spectrum.hpp"
#include "birkhoff/sft.hpp"

namespace birkhoff {

struct IntervalMapModel {
    struct Branch {
        double left = 0.0;
        double right = 0.0;
        double slope = 0.0;  // magnitude; the branch maps [left,right] affinely onto [0,1]
        bool operator==(const Branch&) const = default;
    };
    std::vector<Branch> branches;
    bool operator==(const IntervalMapModel&) const = default;
};

// Validates the partition geometry and uniform expansion.
inline IntervalMapModel make_interval_map(std::vector<IntervalMapModel::Branch> branches) {
    if (branches.empty()) throw InvalidModelError("interval map needs at least one branch");
    double cursor = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto& b = branches[i];
        if (std::abs(b.left - cursor) > 1e-9)
            throw InvalidModelError("branch intervals must partition [0,1] without gaps or overlaps");
        if (!(b.right > b.left)) throw InvalidModelError("branch interval is empty");
        if (!(b.slope > 1.0))
            throw InvalidModelError("expansion requires every slope > 1");
        if (std::abs((b.right - b.left) - 1.0 / b.slope) > 1e-9)
            throw InvalidModelError("branch length must equal 1/slope for a full affine branch");
        cursor = b.right;
    }
    if (std::abs(cursor - 1.0) > 1e-9)
        throw InvalidModelError("branch intervals must cover [0,1]");
    return IntervalMapModel{std::move(branches)};
}

inline IntervalMapModel interval_map_from_slopes(const std::vector<double>& slopes) {
    std::vector<IntervalMapModel::Branch> branches;
    double cursor = 0.0;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        if (!(slopes[i] > 1.0)) throw InvalidModelError("expansion requires every slope > 1");
        const double len = 1.0 / slopes[i];
        branches.push_back({cursor, i + 1 == slopes.size() ? 1.0 : cursor + len, slopes[i]});
        cursor += len;
    }
    return make_interval_map(std::move(branches));
}

// The conjugate symbolic system: the full shift on the branches with the
// depth-1 geometric potential log f' = log slope.
inline std::pair<SftSystem, Potential> symbolic_model(const IntervalMapModel& map) {
    const int m = static_cast<int>(map.branches.size());
    std::vector<std::vector<int>> transitions(static_cast<std::size_t>(m),
                                              std::vector<int>(static_cast<std::size_t>(m), 1));
    SftSystem sft(std::move(transitions));
    std::vector<double> table;
    table.reserve(static_cast<std::size_t>(m));
    for (const auto& b : map.branches) table.push_back(std::log(b.slope));
    Potential psi(sft, 1, std::move(table));
    return {std::move(sft), std::move(psi)};
}

struct DimensionResult {
    double alpha = 0.0;
    double dim = 0.0;        // in [0,1]
    double residual = 0.0;   // F_alpha(-dim psi), re-evaluated at the root
    bool unique_zero = true;
};

inline DimensionResult level_set_dimension(const IntervalMapModel& map, const Potential& phi,
                                           double alpha, const PressureOptions& opts = {}) {
    const auto [sft, psi] = symbolic_model(map);
    if (phi.alphabet_size() != sft.alphabet_size())
        throw PreconditionError("phi alphabet does not match the branch count");
    const auto pressure_at = [&](double s) {
        return constrained_pressure(sft, phi, scale(sft, -s, psi), alpha, opts).value;
    };

    const double f0 = pressure_at(0.0);   // level-set entropy, >= 0
    const double f1 = pressure_at(1.0);   // <= P(-psi) = 0 for a full partition
    if (f1 > 1e-8)
        throw NoSignChangeError("pressure positive at s = 1: dimension would exceed 1");
    DimensionResult out;
    out.alpha = alpha;
    if (f0 <= 0.0) {
        out.dim = 0.0;
        out.residual = f0;
        return out;
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double f = pressure_at(mid);
        if (std::abs(f) <= 1e-11) {
            lo = hi = mid;
            break;
        }
        if (f > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.dim = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
    out.residual = pressure_at(out.dim);
    return out;
}

inline std::vector<DimensionResult> dimension_spectrum(const IntervalMapModel& map, const Potential& phi,
                                                       int grid_size, const PressureOptions& opts = {}) {
    if (grid_size < 2) throw PreconditionError("grid size must be >= 2");
    const auto [sft, psi] = symbolic_model(map);
    (void)psi;
    const auto [lo, hi] = spectrum_domain(sft, phi);
    std::vector<DimensionResult> out;
    if (hi - lo <= 2.0 * kDomainSlack) {
        out.push_back(level_set_dimension(map, phi, 0.5 * (lo + hi), opts));
        return out;
    }
    for (int i = 0; i < grid_size; ++i) {
        const double alpha = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        out.push_back(level_set_dimension(map, phi, alpha, opts));
    }
    return out;
}

}  // namespace birkhoff
