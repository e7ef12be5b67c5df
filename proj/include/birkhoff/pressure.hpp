#pragma once

// Classical topological pressure on a mixing shift of finite type via the
// Perron eigenvalue of the weighted transfer matrix
//
//     M(i,j) = T(i,j) * exp(psi(ij)),        psi of depth <= 2,
//
// with P(psi) = log lambda(M) = sup { h_mu + int psi dmu }.  The solver is
// a deterministic power iteration started from the all-ones vector; each
// composite step applies M primitivity_power times (a strictly positive
// map), which contracts the Hilbert metric regardless of where the ones
// of M sit.  All arithmetic runs on the max-normalised matrix
// exp(psi - max psi), so potentials of any magnitude stay inside the
// representable range; the reported residual is scale-invariant
// (normalised by the eigenvalue and the sup norm of the eigenvector).
// Logs are in nats.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/mean_cycle.hpp"
#include "birkhoff/sft.hpp"

namespace birkhoff {

struct PressureOptions {
    double relative_tolerance = 1e-13;
    long iteration_cap = 1'000'000;
};

struct PressureResult {
    double value = 0.0;                // log Perron eigenvalue, nats
    std::vector<double> eigen_left;    // positive row vector, sup-norm 1
    std::vector<double> eigen_right;   // positive column vector, sup-norm 1
    long iterations = 0;
    double residual = 0.0;             // max|M r - e^value r| / (e^value * max r)
};

namespace detail {

// Log-weights of the transfer matrix; NaN marks a forbidden transition.
inline std::vector<double> log_transfer_weights(const SftSystem& sft, const Potential& psi) {
    if (psi.depth() > 2) throw PreconditionError("pressure needs depth <= 2 (recode first)");
    return edge_weights(sft, psi);
}

struct ScaledTransfer {
    int m = 0;
    double log_scale = 0.0;            // max log-weight
    std::vector<double> a;             // exp(theta - log_scale), 0 off support

    void multiply(const std::vector<double>& v, std::vector<double>& out) const {
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            const double* row = &a[static_cast<std::size_t>(i) * m];
            for (int j = 0; j < m; ++j) acc += row[j] * v[static_cast<std::size_t>(j)];
            out[static_cast<std::size_t>(i)] = acc;
        }
    }
    void multiply_left(const std::vector<double>& u, std::vector<double>& out) const {
        for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] = 0.0;
        for (int i = 0; i < m; ++i) {
            const double ui = u[static_cast<std::size_t>(i)];
            const double* row = &a[static_cast<std::size_t>(i) * m];
            for (int j = 0; j < m; ++j) out[static_cast<std::size_t>(j)] += ui * row[j];
        }
    }
};

inline ScaledTransfer scaled_transfer(int m, const std::vector<double>& theta) {
    ScaledTransfer t;
    t.m = m;
    t.log_scale = -std::numeric_limits<double>::infinity();
    for (double x : theta)
        if (!std::isnan(x) && x > t.log_scale) t.log_scale = x;
    t.a.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (std::size_t e = 0; e < t.a.size(); ++e)
        if (!std::isnan(theta[e])) t.a[e] = std::exp(theta[e] - t.log_scale);
    return t;
}

struct PerronData {
    double log_lambda = 0.0;           // log of the Perron root of the scaled matrix
    std::vector<double> right, left;   // sup-norm 1, entrywise positive
    long iterations = 0;
    double residual = 0.0;
};

inline PerronData perron(const ScaledTransfer& t, int primitivity_power, const PressureOptions& opts) {
    const int m = t.m;
    const std::size_t ms = static_cast<std::size_t>(m);
    PerronData out;
    out.right.assign(ms, 1.0 / static_cast<double>(m));
    out.left.assign(ms, 1.0 / static_cast<double>(m));
    std::vector<double> buf(ms, 0.0);

    const auto sup = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s = std::max(s, std::abs(x));
        return s;
    };
    const auto l1_normalise = [&](std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        if (s <= 0.0 || !std::isfinite(s)) throw ConvergenceFailureError("transfer matrix numerically vanished");
        for (double& x : v) x /= s;
        return s;
    };

    double lambda = 0.0;
    long iters = 0;
    const auto both_residuals = [&]() {
        t.multiply(out.right, buf);
        double resid = 0.0;
        const double vmax = sup(out.right);
        for (std::size_t i = 0; i < ms; ++i)
            resid = std::max(resid, std::abs(buf[i] - lambda * out.right[i]) / vmax);
        t.multiply_left(out.left, buf);
        const double umax = sup(out.left);
        for (std::size_t i = 0; i < ms; ++i)
            resid = std::max(resid, std::abs(buf[i] - lambda * out.left[i]) / umax);
        return resid / lambda;
    };
    bool converged = false;
    while (iters < opts.iteration_cap) {
        for (int step = 0; step < primitivity_power && iters < opts.iteration_cap; ++step) {
            t.multiply(out.right, buf);
            out.right.swap(buf);
            lambda = l1_normalise(out.right);
            t.multiply_left(out.left, buf);
            out.left.swap(buf);
            l1_normalise(out.left);
            ++iters;
        }
        if (both_residuals() <= opts.relative_tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged && both_residuals() > 1e-10)
        throw ConvergenceFailureError("power iteration hit its cap with residual above tolerance");

    // Rayleigh refinement: lambda = l M r / (l r) is second-order accurate.
    t.multiply(out.right, buf);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ms; ++i) {
        num += out.left[i] * buf[i];
        den += out.left[i] * out.right[i];
    }
    lambda = num / den;
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ConvergenceFailureError("Perron eigenvalue is not positive");

    const double rmax = sup(out.right);
    const double lmax = sup(out.left);
    for (double& x : out.right) x /= rmax;
    for (double& x : out.left) x /= lmax;
    for (double x : out.right)
        if (!(x > 0.0)) throw ConvergenceFailureError("Perron right vector is not positive");
    for (double x : out.left)
        if (!(x > 0.0)) throw ConvergenceFailureError("Perron left vector is not positive");

    t.multiply(out.right, buf);
    double resid = 0.0;
    for (std::size_t i = 0; i < ms; ++i) resid = std::max(resid, std::abs(buf[i] - lambda * out.right[i]));
    out.residual = resid / lambda;  // sup-norm of r is 1
    out.log_lambda = std::log(lambda);
    out.iterations = iters;
    return out;
}

}  // namespace detail

inline PressureResult classical_pressure(const SftSystem& sft, const Potential& psi,
                                         const PressureOptions& opts = {}) {
    if (psi.depth() > 2) {
        const RecodedSystem rec = higher_block_recode(sft, {psi});
        return classical_pressure(rec.sft, rec.potentials[0], opts);
    }
    const std::vector<double> theta = detail::log_transfer_weights(sft, psi);
    const detail::ScaledTransfer t = detail::scaled_transfer(sft.alphabet_size(), theta);
    const detail::PerronData p = detail::perron(t, sft.primitivity_power(), opts);
    PressureResult out;
    out.value = t.log_scale + p.log_lambda;
    out.eigen_left = p.left;
    out.eigen_right = p.right;
    out.iterations = p.iterations;
    out.residual = p.residual;
    return out;
}

// Equilibrium state of psi from the Perron data:
//   P(i,j) = M(i,j) r_j / (lambda r_i),   pi_i = l_i r_i / (l . r).
// Satisfies h + int psi dmu = P(psi) to solver accuracy.
inline MarkovMeasure equilibrium_measure(const SftSystem& sft, const Potential& psi,
                                         const PressureOptions& opts = {}) {
    if (psi.depth() > 2)
        throw PreconditionError("equilibrium measure needs depth <= 2 (recode first)");
    const std::vector<double> theta = detail::log_transfer_weights(sft, psi);
    const int m = sft.alphabet_size();
    const detail::ScaledTransfer t = detail::scaled_transfer(m, theta);
    const detail::PerronData p = detail::perron(t, sft.primitivity_power(), opts);
    const double lambda = std::exp(p.log_lambda);

    std::vector<double> stochastic(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        double row = 0.0;
        for (int j = 0; j < m; ++j) {
            const double a = t.a[static_cast<std::size_t>(i) * m + j];
            if (a <= 0.0) continue;
            const double v = a * p.right[static_cast<std::size_t>(j)] / (lambda * p.right[static_cast<std::size_t>(i)]);
            stochastic[static_cast<std::size_t>(i) * m + j] = v;
            row += v;
        }
        for (int j = 0; j < m; ++j) stochastic[static_cast<std::size_t>(i) * m + j] /= row;
    }
    std::vector<double> pi(static_cast<std::size_t>(m), 0.0);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        pi[static_cast<std::size_t>(i)] = p.left[static_cast<std::size_t>(i)] * p.right[static_cast<std::size_t>(i)];
        total += pi[static_cast<std::size_t>(i)];
    }
    for (double& x : pi) x /= total;
    // Polish the stationary vector on the stochastic matrix itself so the
    // invariance check holds to its 1e-12 tolerance.
    std::vector<double> next(static_cast<std::size_t>(m), 0.0);
    for (int pass = 0; pass < 256; ++pass) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                next[static_cast<std::size_t>(j)] +=
                    pi[static_cast<std::size_t>(i)] * stochastic[static_cast<std::size_t>(i) * m + j];
        double total2 = 0.0;
        for (double x : next) total2 += x;
        double diff = 0.0;
        for (int j = 0; j < m; ++j) {
            next[static_cast<std::size_t>(j)] /= total2;
            diff = std::max(diff, std::abs(next[static_cast<std::size_t>(j)] - pi[static_cast<std::size_t>(j)]));
        }
        pi.swap(next);
        if (diff < 1e-16) break;
    }
    return MarkovMeasure(sft, std::move(stochastic), std::move(pi));
}

// d/dq P(psi + q phi) = int phi d mu_{psi + q phi}, computed from Perron
// data, never by finite differences; nondecreasing in q by convexity.
inline double pressure_gradient(const SftSystem& sft, const Potential& psi, const Potential& phi,
                                double q, const PressureOptions& opts = {}) {
    if (psi.depth() > 2 || phi.depth() > 2) {
        const RecodedSystem rec = higher_block_recode(sft, {psi, phi});
        return pressure_gradient(rec.sft, rec.potentials[0], rec.potentials[1], q, opts);
    }
    const Potential combined = linear_combination(sft, 1.0, psi, q, phi);
    const MarkovMeasure mu = equilibrium_measure(sft, combined, opts);
    return mu.integral(sft, phi);
}

namespace detail {

// Strongly connected components (Kosaraju); returns component id per node.
inline std::vector<int> scc_ids(int m, const std::vector<std::uint8_t>& edges, int& count) {
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(m));
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    const std::function<void(int)> dfs = [&](int v) {
        seen[static_cast<std::size_t>(v)] = 1;
        for (int j = 0; j < m; ++j)
            if (edges[static_cast<std::size_t>(v) * m + j] && !seen[static_cast<std::size_t>(j)]) dfs(j);
        order.push_back(v);
    };
    for (int s = 0; s < m; ++s)
        if (!seen[static_cast<std::size_t>(s)]) dfs(s);

    std::vector<int> comp(static_cast<std::size_t>(m), -1);
    count = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (comp[static_cast<std::size_t>(*it)] != -1) continue;
        std::vector<int> stack{*it};
        comp[static_cast<std::size_t>(*it)] = count;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int u = 0; u < m; ++u)
                if (edges[static_cast<std::size_t>(u) * m + v] && comp[static_cast<std::size_t>(u)] == -1) {
                    comp[static_cast<std::size_t>(u)] = count;
                    stack.push_back(u);
                }
        }
        ++count;
    }
    return comp;
}

// log spectral radius of a nonnegative irreducible block; the identity
// shift A + I makes the iteration aperiodic and subtracts out exactly.
inline double log_spectral_radius_irreducible(const std::vector<double>& a, int n) {
    std::vector<double> v(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n));
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    double lambda = 1.0;
    for (long iter = 0; iter < 400000; ++iter) {
        for (int i = 0; i < n; ++i) {
            double acc = v[static_cast<std::size_t>(i)];  // + I
            for (int j = 0; j < n; ++j) acc += a[static_cast<std::size_t>(i) * n + j] * v[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = acc;
        }
        double s = 0.0;
        for (double x : w) s += x;
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / s;
        if (std::abs(s - lambda) <= 1e-15 * s && iter > 4) {
            lambda = s;
            break;
        }
        lambda = s;
    }
    return std::log(lambda - 1.0);
}

}  // namespace detail

// Pressure of psi restricted to the sub-shift spanned by `edge_mask`
// (not necessarily mixing): the maximum over strongly connected pieces of
// the log spectral radius of the masked transfer matrix.  Returns -inf
// when the mask carries no cycle.
inline double restricted_pressure(const SftSystem& sft, const Potential& psi,
                                  const std::vector<std::uint8_t>& edge_mask) {
    if (psi.depth() > 2) throw PreconditionError("restricted pressure needs depth <= 2");
    const int m = sft.alphabet_size();
    const std::vector<double> theta = detail::log_transfer_weights(sft, psi);
    double shift = -std::numeric_limits<double>::infinity();
    for (int e = 0; e < m * m; ++e)
        if (edge_mask[static_cast<std::size_t>(e)] && !std::isnan(theta[static_cast<std::size_t>(e)]))
            shift = std::max(shift, theta[static_cast<std::size_t>(e)]);
    if (shift == -std::numeric_limits<double>::infinity()) return shift;

    int count = 0;
    const std::vector<int> comp = detail::scc_ids(m, edge_mask, count);
    double best = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < count; ++c) {
        std::vector<int> nodes;
        for (int v = 0; v < m; ++v)
            if (comp[static_cast<std::size_t>(v)] == c) nodes.push_back(v);
        const int n = static_cast<int>(nodes.size());
        bool has_edge = false;
        std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const std::size_t e = static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)]) * m +
                                      static_cast<std::size_t>(nodes[static_cast<std::size_t>(j)]);
                if (edge_mask[e] && !std::isnan(theta[e])) {
                    a[static_cast<std::size_t>(i) * n + j] = std::exp(theta[e] - shift);
                    has_edge = true;
                }
            }
        if (!has_edge) continue;
        best = std::max(best, shift + detail::log_spectral_radius_irreducible(a, n));
    }
    return best;
}

}  // namespace birkhoff
