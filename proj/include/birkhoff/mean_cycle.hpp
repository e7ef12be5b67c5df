#pragma once

// Extremal mean cycles of the weighted transition graph.
//
// The domain of the level spectrum equals the interval of measure
// integrals of the potential, and its endpoints are the minimum and
// maximum mean weight over directed cycles (periodic-orbit measures are
// dense in integral values on a mixing shift of finite type).  The
// minimum mean is computed by the classic n*|E| dynamic program with a
// virtual super-source; ties break toward smaller node index.  Weights
// are doubles, so results carry ~1e-12 slack rather than exact rational
// arithmetic.

#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/sft.hpp"

namespace birkhoff {

namespace detail {

// Edge weights for a depth <= 2 potential: the weight of i -> j is the
// potential read on the window starting at i.
inline std::vector<double> edge_weights(const SftSystem& sft, const Potential& pot) {
    if (pot.depth() > 2) throw PreconditionError("edge weights need depth <= 2 (recode first)");
    const int m = sft.alphabet_size();
    std::vector<double> w(static_cast<std::size_t>(m) * m, std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (!sft.allowed(i, j)) continue;
            if (pot.depth() == 1) {
                const int win[1] = {i};
                w[static_cast<std::size_t>(i) * m + j] = pot.value(win);
            } else {
                const int win[2] = {i, j};
                w[static_cast<std::size_t>(i) * m + j] = pot.value(win);
            }
        }
    return w;
}

// Karp's dynamic program over walks from a super-source joined to every
// node by a zero-weight edge.  Every node has an in-edge, so all rows
// past the first are finite.
inline double karp_min_mean(int m, const std::vector<double>& weights) {
    const double inf = std::numeric_limits<double>::infinity();
    const int rows = m + 2;  // walk lengths 0..m+1 in the augmented graph
    std::vector<std::vector<double>> d(static_cast<std::size_t>(rows),
                                       std::vector<double>(static_cast<std::size_t>(m), inf));
    for (int v = 0; v < m; ++v) d[1][static_cast<std::size_t>(v)] = 0.0;  // one step from the source
    for (int k = 2; k < rows; ++k)
        for (int v = 0; v < m; ++v) {
            double best = inf;
            for (int u = 0; u < m; ++u) {
                const double w = weights[static_cast<std::size_t>(u) * m + v];
                if (std::isnan(w) || d[k - 1][static_cast<std::size_t>(u)] == inf) continue;
                const double cand = d[k - 1][static_cast<std::size_t>(u)] + w;
                if (cand < best) best = cand;
            }
            d[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)] = best;
        }
    const int last = rows - 1;
    double mu = inf;
    for (int v = 0; v < m; ++v) {
        if (d[static_cast<std::size_t>(last)][static_cast<std::size_t>(v)] == inf) continue;
        double worst = -inf;
        for (int k = 1; k < last; ++k) {
            if (d[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)] == inf) continue;
            const double ratio = (d[static_cast<std::size_t>(last)][static_cast<std::size_t>(v)] -
                                  d[static_cast<std::size_t>(k)][static_cast<std::size_t>(v)]) /
                                 static_cast<double>(last - k);
            if (ratio > worst) worst = ratio;
        }
        if (worst < mu) mu = worst;
    }
    return mu;
}

// Dual potentials for the reduced weights w - mu: h(v) = min over walks
// into v; Bellman-Ford style, stable because no cycle is negative.
inline std::vector<double> min_walk_potentials(int m, const std::vector<double>& reduced) {
    std::vector<double> h(static_cast<std::size_t>(m), 0.0);
    for (int pass = 0; pass <= m; ++pass) {
        bool changed = false;
        for (int u = 0; u < m; ++u)
            for (int v = 0; v < m; ++v) {
                const double w = reduced[static_cast<std::size_t>(u) * m + v];
                if (std::isnan(w)) continue;
                const double cand = h[static_cast<std::size_t>(u)] + w;
                if (cand < h[static_cast<std::size_t>(v)] - 1e-15) {
                    h[static_cast<std::size_t>(v)] = cand;
                    changed = true;
                }
            }
        if (!changed) break;
    }
    return h;
}

}  // namespace detail

struct MeanCycleAnalysis {
    double min_mean = 0.0;
    double max_mean = 0.0;
    // Edge masks (row-major, m*m) of the edges lying on extremal-mean
    // cycles: the tight edges of the dual potentials.
    std::vector<std::uint8_t> min_tight;
    std::vector<std::uint8_t> max_tight;
};

inline MeanCycleAnalysis mean_cycle_analysis(const SftSystem& sft, const Potential& pot) {
    const int m = sft.alphabet_size();
    const std::vector<double> w = detail::edge_weights(sft, pot);
    double scale = 1.0;
    for (double x : w)
        if (!std::isnan(x)) scale = std::max(scale, std::abs(x));
    const double tol = 1e-9 * scale;

    MeanCycleAnalysis out;
    out.min_mean = detail::karp_min_mean(m, w);
    std::vector<double> neg(w);
    for (double& x : neg)
        if (!std::isnan(x)) x = -x;
    out.max_mean = -detail::karp_min_mean(m, neg);

    const auto tight_mask = [&](double mu, bool maximum) {
        std::vector<double> reduced(w);
        for (double& x : reduced)
            if (!std::isnan(x)) x = maximum ? (mu - x) : (x - mu);
        const std::vector<double> h = detail::min_walk_potentials(m, reduced);
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(m) * m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double r = reduced[static_cast<std::size_t>(i) * m + j];
                if (std::isnan(r)) continue;
                if (h[static_cast<std::size_t>(i)] + r <= h[static_cast<std::size_t>(j)] + tol)
                    mask[static_cast<std::size_t>(i) * m + j] = 1;
            }
        return mask;
    };
    out.min_tight = tight_mask(out.min_mean, false);
    out.max_tight = tight_mask(out.max_mean, true);
    return out;
}

// The spectrum domain: the closed interval of integrals of `pot` over
// invariant measures.  Degenerate (single-point) intervals are allowed.
inline std::pair<double, double> spectrum_domain(const SftSystem& sft, const Potential& pot) {
    if (pot.depth() > 2) {
        const RecodedSystem rec = higher_block_recode(sft, {pot});
        return spectrum_domain(rec.sft, rec.potentials[0]);
    }
    const MeanCycleAnalysis a = mean_cycle_analysis(sft, pot);
    return {a.min_mean, a.max_mean};
}

}  // namespace birkhoff
