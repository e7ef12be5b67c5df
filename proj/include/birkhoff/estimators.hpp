#pragma once

// Definition-level estimators.  At the cylinder scale of a shift of
// finite type the admissible n-words form a maximal (n, eps)-separated
// set, so the separated-set pressure sums, the level-set approximants
// X(alpha, n, delta) and Katok's spanning formula all become exact finite
// sums over words.  Every estimator weighs a word by its cyclic Birkhoff
// sum, so the word's average is the exact integral of its periodic-orbit
// measure; a word whose cyclic closure is inadmissible (possible only for
// depth >= 2 potentials off a full shift) falls back to the cover-sum
// convention, the supremum of the dangling windows over admissible
// continuations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/mean_cycle.hpp"
#include "birkhoff/sft.hpp"

namespace birkhoff {

struct EstimateReport {
    long n = 0;
    double delta = std::numeric_limits<double>::quiet_NaN();
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;        // meaningful only when !empty
    double value_lower = 0.0;  // covering estimates carry [lower, upper]
    double value_upper = 0.0;
    std::uint64_t word_count = 0;
    bool exact = false;
    bool empty = false;        // distinguished "-inf" state; never a raw float
};

namespace detail {

// Streaming log-sum-exp; deterministic in insertion order.
class LogSumExp {
public:
    void add(double x) {
        if (count_ == 0) {
            max_ = x;
            sum_ = 1.0;
        } else if (x <= max_) {
            sum_ += std::exp(x - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
        ++count_;
    }
    bool empty() const { return count_ == 0; }
    double value() const { return max_ + std::log(sum_); }

private:
    double max_ = 0.0;
    double sum_ = 0.0;
    std::uint64_t count_ = 0;
};

inline void check_word_budget(const SftSystem& sft, int n, std::uint64_t cap) {
    const double bound = static_cast<double>(n) * std::log(static_cast<double>(sft.alphabet_size()));
    if (bound > std::log(static_cast<double>(cap)) + 1e-12)
        throw ResourceLimitError("alphabet^n exceeds the word cap");
}

// Cyclic weight of an admissible word given its plain window sum: wrap
// windows when the closure is admissible, else the sup-completion of the
// dangling tail.
inline double cyclic_weight(const SftSystem& sft, const Potential& pot, std::span<const int> w,
                            double nonwrap) {
    const int k = pot.depth();
    const int n = static_cast<int>(w.size());
    if (k == 1) return nonwrap;

    bool closes = sft.allowed(w[static_cast<std::size_t>(n - 1)], w[0]);
    std::vector<int> window(static_cast<std::size_t>(k));
    if (closes) {
        double seam = 0.0;
        for (int i = n - k + 1; i < n; ++i) {
            for (int t = 0; t < k; ++t)
                window[static_cast<std::size_t>(t)] = w[static_cast<std::size_t>((i + t) % n)];
            if (!sft.admissible(window)) {
                closes = false;
                break;
            }
            seam += pot.value(window);
        }
        if (closes) return nonwrap + seam;
    }

    // sup over admissible continuations y of length k-1 of the k-1
    // dangling windows w[i..n-1] y[0..].
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> y(static_cast<std::size_t>(k - 1));
    const std::function<void(int)> rec = [&](int pos) {
        if (pos == k - 1) {
            double tail = 0.0;
            for (int i = n - k + 1; i < n; ++i) {
                for (int t = 0; t < k; ++t) {
                    const int idx = i + t;
                    window[static_cast<std::size_t>(t)] =
                        idx < n ? w[static_cast<std::size_t>(idx)] : y[static_cast<std::size_t>(idx - n)];
                }
                tail += pot.value(window);
            }
            best = std::max(best, tail);
            return;
        }
        const int prev = pos == 0 ? w[static_cast<std::size_t>(n - 1)] : y[static_cast<std::size_t>(pos - 1)];
        for (int s = 0; s < sft.alphabet_size(); ++s)
            if (sft.allowed(prev, s)) {
                y[static_cast<std::size_t>(pos)] = s;
                rec(pos + 1);
            }
    };
    rec(0);
    return nonwrap + best;
}

// Enumerates admissible n-words in lexicographic order while maintaining
// incremental plain window sums for each potential.
template <class Leaf>
void enumerate_word_sums(const SftSystem& sft, int n, const std::vector<const Potential*>& pots,
                         Leaf&& leaf) {
    const std::size_t np = pots.size();
    std::vector<std::vector<double>> partial(np, std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    std::vector<double> sums(np, 0.0);
    const std::function<void(int)> rec = [&](int pos) {
        const int m = sft.alphabet_size();
        for (int s = 0; s < m; ++s) {
            if (pos > 0 && !sft.allowed(w[static_cast<std::size_t>(pos - 1)], s)) continue;
            w[static_cast<std::size_t>(pos)] = s;
            for (std::size_t p = 0; p < np; ++p) {
                const int k = pots[p]->depth();
                const double prev = pos > 0 ? partial[p][static_cast<std::size_t>(pos - 1)] : 0.0;
                double add = 0.0;
                if (pos + 1 >= k)
                    add = pots[p]->value(std::span<const int>(w).subspan(
                        static_cast<std::size_t>(pos + 1 - k), static_cast<std::size_t>(k)));
                partial[p][static_cast<std::size_t>(pos)] = prev + add;
            }
            if (pos == n - 1) {
                for (std::size_t p = 0; p < np; ++p) sums[p] = partial[p][static_cast<std::size_t>(pos)];
                leaf(std::span<const int>(w), std::span<const double>(sums));
            } else {
                rec(pos + 1);
            }
        }
    };
    rec(0);
}

}  // namespace detail

// (1/n) log sum over admissible n-words of exp(cyclic Birkhoff sum of
// psi): the separated-set pressure sum at cylinder scale.  Exact.
inline EstimateReport separated_pressure_estimate(const SftSystem& sft, const Potential& psi, int n,
                                                  std::uint64_t cap = kDefaultWordCap) {
    if (n < psi.depth()) throw PreconditionError("n must be at least the potential depth");
    detail::check_word_budget(sft, n, cap);
    detail::LogSumExp lse;
    std::uint64_t count = 0;
    detail::enumerate_word_sums(sft, n, {&psi}, [&](std::span<const int> w, std::span<const double> s) {
        lse.add(detail::cyclic_weight(sft, psi, w, s[0]));
        ++count;
    });
    EstimateReport rep;
    rep.n = n;
    rep.value = lse.value() / static_cast<double>(n);
    rep.value_lower = rep.value_upper = rep.value;
    rep.word_count = count;
    rep.exact = true;
    return rep;
}

// Restricts the sum to words whose cyclic average of phi is delta-close
// to alpha: the cylinder form of the approximating sets to the level set.
// An empty selection is reported through the `empty` flag.
inline EstimateReport level_set_pressure_estimate(const SftSystem& sft, const Potential& phi,
                                                  const Potential& psi, double alpha, double delta,
                                                  int n, std::uint64_t cap = kDefaultWordCap) {
    if (delta < 0.0) throw PreconditionError("delta must be nonnegative");
    if (n < std::max(phi.depth(), psi.depth()))
        throw PreconditionError("n must be at least the potential depth");
    detail::check_word_budget(sft, n, cap);
    const double width = delta + 1e-12;  // guards float ties at the window edge
    detail::LogSumExp lse;
    std::uint64_t count = 0;
    detail::enumerate_word_sums(sft, n, {&phi, &psi},
                                [&](std::span<const int> w, std::span<const double> s) {
                                    const double avg =
                                        detail::cyclic_weight(sft, phi, w, s[0]) / static_cast<double>(n);
                                    if (std::abs(avg - alpha) > width) return;
                                    lse.add(detail::cyclic_weight(sft, psi, w, s[1]));
                                    ++count;
                                });
    EstimateReport rep;
    rep.n = n;
    rep.delta = delta;
    rep.word_count = count;
    if (count == 0) {
        rep.empty = true;
        return rep;
    }
    rep.value = lse.value() / static_cast<double>(n);
    rep.value_lower = rep.value_upper = rep.value;
    rep.exact = true;
    return rep;
}

// Katok's spanning formula at cylinder scale: the minimal weighted cost
// of a set of n-cylinders carrying mu-measure at least 1 - gamma,
//
//     (1/n) log min { sum_{w in S} exp S_n psi(w) : mu(S) >= 1 - gamma }.
//
// Selection sorts words by cost per unit measure; the greedy prefix is
// optimal for the fractional relaxation and within one word of the
// integer optimum, so the report carries [value_lower, value_upper] and
// sets `exact` when the two meet.  `value` is the feasible upper bound.
inline EstimateReport katok_entropy_estimate(const SftSystem& sft, const MarkovMeasure& mu,
                                             const Potential& psi, double gamma, int n,
                                             std::uint64_t cap = kDefaultWordCap) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw PreconditionError("gamma must lie in (0,1)");
    if (mu.alphabet_size() != sft.alphabet_size())
        throw PreconditionError("measure alphabet does not match the system");
    if (n < psi.depth()) throw PreconditionError("n must be at least the potential depth");
    detail::check_word_budget(sft, n, cap);

    struct Item {
        double log_cost;
        double mass;
        double key;  // log_cost - log(mass)
    };
    std::vector<Item> items;
    detail::enumerate_word_sums(sft, n, {&psi}, [&](std::span<const int> w, std::span<const double> s) {
        const double mass = mu.cylinder_mass(w);
        if (mass <= 0.0) return;  // cannot help the coverage
        const double log_cost = detail::cyclic_weight(sft, psi, w, s[0]);
        items.push_back(Item{log_cost, mass, log_cost - std::log(mass)});
    });
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& a, const Item& b) { return a.key < b.key; });

    const double target = 1.0 - gamma;
    detail::LogSumExp chosen;
    double covered = 0.0;
    std::uint64_t count = 0;
    double frac = 1.0;
    detail::LogSumExp all_but_last;
    double last_log_cost = 0.0;
    for (const Item& it : items) {
        all_but_last = chosen;
        chosen.add(it.log_cost);
        ++count;
        last_log_cost = it.log_cost;
        if (covered + it.mass >= target) {
            frac = (target - covered) / it.mass;
            covered += it.mass;
            break;
        }
        covered += it.mass;
    }
    if (covered < target)
        throw ConvergenceFailureError("measure does not cover the target mass");  // unreachable

    EstimateReport rep;
    rep.n = n;
    rep.gamma = gamma;
    rep.word_count = count;
    rep.value_upper = chosen.value() / static_cast<double>(n);
    detail::LogSumExp fractional = all_but_last;
    if (frac > 0.0) fractional.add(last_log_cost + std::log(frac));
    rep.value_lower = fractional.value() / static_cast<double>(n);
    rep.value = rep.value_upper;
    rep.exact = frac >= 1.0 - 1e-12;
    return rep;
}

namespace detail {

// All simple cycles of the transition graph, canonicalised to start at
// their smallest node; each as the list of visited nodes.
inline std::vector<std::vector<int>> simple_cycles(const SftSystem& sft) {
    const int m = sft.alphabet_size();
    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<char> on_path(static_cast<std::size_t>(m), 0);
    const std::function<void(int, int)> rec = [&](int start, int v) {
        for (int u = start; u < m; ++u) {
            if (!sft.allowed(v, u)) continue;
            if (u == start) {
                cycles.push_back(path);
            } else if (!on_path[static_cast<std::size_t>(u)]) {
                on_path[static_cast<std::size_t>(u)] = 1;
                path.push_back(u);
                rec(start, u);
                path.pop_back();
                on_path[static_cast<std::size_t>(u)] = 0;
            }
        }
    };
    for (int s = 0; s < m; ++s) {
        path.assign(1, s);
        std::fill(on_path.begin(), on_path.end(), 0);
        on_path[static_cast<std::size_t>(s)] = 1;
        rec(s, s);
    }
    return cycles;
}

// Maximisation of h(x) + int psi over the polytope of shift-invariant
// edge frequencies x (x >= 0 on allowed edges, sum 1, node balance) with
// the linear constraint sum phi_e x_e = alpha.  The objective
//
//     f(x) = -sum_e x_e log(x_e / p_src(e)) + sum_e psi_e x_e
//
// is concave (conditional entropy is concave in the pair distribution),
// so projected gradient ascent from blended cycle starts reaches the
// global optimum.
struct EdgePolytope {
    int m = 0;
    std::vector<int> src, dst;          // edge endpoints
    std::vector<double> phi_e, psi_e;   // edge values
    std::vector<std::vector<double>> tangent_basis;  // orthonormal constraint rows

    double objective(const std::vector<double>& x) const {
        std::vector<double> p(static_cast<std::size_t>(m), 0.0);
        for (std::size_t e = 0; e < src.size(); ++e) p[static_cast<std::size_t>(src[e])] += x[e];
        double f = 0.0;
        for (std::size_t e = 0; e < src.size(); ++e) {
            if (x[e] > 0.0) f -= x[e] * std::log(x[e] / p[static_cast<std::size_t>(src[e])]);
            f += psi_e[e] * x[e];
        }
        return f;
    }

    std::vector<double> gradient(const std::vector<double>& x) const {
        std::vector<double> p(static_cast<std::size_t>(m), 0.0);
        for (std::size_t e = 0; e < src.size(); ++e) p[static_cast<std::size_t>(src[e])] += x[e];
        std::vector<double> g(src.size(), 0.0);
        for (std::size_t e = 0; e < src.size(); ++e) {
            const double xe = std::max(x[e], 1e-18);
            const double pi = std::max(p[static_cast<std::size_t>(src[e])], 1e-18);
            g[e] = std::min(std::log(pi / xe), 50.0) + psi_e[e];
        }
        return g;
    }

    void project_tangent(std::vector<double>& v) const {
        for (const std::vector<double>& q : tangent_basis) {
            double dot = 0.0;
            for (std::size_t e = 0; e < v.size(); ++e) dot += q[e] * v[e];
            for (std::size_t e = 0; e < v.size(); ++e) v[e] -= dot * q[e];
        }
    }
};

inline double ascend(const EdgePolytope& poly, std::vector<double> x) {
    double fx = poly.objective(x);
    double step = 0.25;
    int stagnant = 0;
    for (int iter = 0; iter < 20000 && stagnant < 60; ++iter) {
        std::vector<double> d = poly.gradient(x);
        poly.project_tangent(d);
        double dnorm = 0.0;
        for (double v : d) dnorm = std::max(dnorm, std::abs(v));
        if (dnorm < 1e-12 * (1.0 + std::abs(fx))) break;
        double t = std::min(step * 2.0, 1.0);
        bool accepted = false;
        while (t > 1e-18) {
            std::vector<double> y(x.size());
            bool ok = true;
            for (std::size_t e = 0; e < x.size(); ++e) {
                y[e] = x[e] + t * d[e];
                if (y[e] < 0.0) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                const double fy = poly.objective(y);
                if (fy > fx + 1e-16) {
                    x.swap(y);
                    fx = fy;
                    accepted = true;
                    step = t;
                    break;
                }
            }
            t *= 0.5;
        }
        stagnant = accepted ? 0 : stagnant + 1;
    }
    return fx;
}

}  // namespace detail

// Independent oracle for the constrained supremum: maximises
// h_mu + int psi dmu over Markov measures through their edge frequencies,
// seeded by a grid of cycle-measure blends (step 1/resolution) and locally
// refined by concave ascent.  Desk scale only.
inline double brute_force_constrained(const SftSystem& sft_in, const Potential& phi_in,
                                      const Potential& psi_in, double alpha, int resolution = 200) {
    if (resolution < 2) throw PreconditionError("resolution must be >= 2");
    const RecodedSystem rec = higher_block_recode(sft_in, {phi_in, psi_in});
    const SftSystem& sft = rec.sft;
    const Potential& phi = rec.potentials[0];
    const Potential& psi = rec.potentials[1];
    const int m = sft.alphabet_size();
    if (m > 8) throw OracleScaleExceededError("oracle limited to small systems");

    detail::EdgePolytope poly;
    poly.m = m;
    const std::vector<double> wphi = detail::edge_weights(sft, phi);
    const std::vector<double> wpsi = detail::edge_weights(sft, psi);
    std::vector<int> edge_id(static_cast<std::size_t>(m) * m, -1);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (sft.allowed(i, j)) {
                edge_id[static_cast<std::size_t>(i) * m + j] = static_cast<int>(poly.src.size());
                poly.src.push_back(i);
                poly.dst.push_back(j);
                poly.phi_e.push_back(wphi[static_cast<std::size_t>(i) * m + j]);
                poly.psi_e.push_back(wpsi[static_cast<std::size_t>(i) * m + j]);
            }
    const std::size_t ne = poly.src.size();

    // Cycle measures and the domain check.
    const std::vector<std::vector<int>> cycles = detail::simple_cycles(sft);
    std::vector<std::vector<double>> cycle_x;
    std::vector<double> cycle_mean;
    for (const std::vector<int>& c : cycles) {
        std::vector<double> x(ne, 0.0);
        const double w = 1.0 / static_cast<double>(c.size());
        double mean = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const int u = c[i], v = c[(i + 1) % c.size()];
            const int e = edge_id[static_cast<std::size_t>(u) * m + v];
            x[static_cast<std::size_t>(e)] += w;
            mean += w * poly.phi_e[static_cast<std::size_t>(e)];
        }
        cycle_x.push_back(std::move(x));
        cycle_mean.push_back(mean);
    }
    const double lo = *std::min_element(cycle_mean.begin(), cycle_mean.end());
    const double hi = *std::max_element(cycle_mean.begin(), cycle_mean.end());
    if (alpha < lo - 1e-9 || alpha > hi + 1e-9)
        throw AlphaOutOfDomainError("alpha outside the spectrum domain");
    const double alpha_c = std::clamp(alpha, lo, hi);

    // Orthonormal basis of the constraint rows: total mass, node balance
    // (one row dropped as dependent) and the phi constraint.
    std::vector<std::vector<double>> rows;
    rows.emplace_back(ne, 1.0);
    for (int i = 0; i + 1 < m; ++i) {
        std::vector<double> r(ne, 0.0);
        for (std::size_t e = 0; e < ne; ++e) {
            if (poly.src[e] == i) r[e] += 1.0;
            if (poly.dst[e] == i) r[e] -= 1.0;
        }
        rows.push_back(std::move(r));
    }
    rows.push_back(poly.phi_e);
    for (std::vector<double>& r : rows) {
        for (const std::vector<double>& q : poly.tangent_basis) {
            double dot = 0.0;
            for (std::size_t e = 0; e < ne; ++e) dot += q[e] * r[e];
            for (std::size_t e = 0; e < ne; ++e) r[e] -= dot * q[e];
        }
        double norm = 0.0;
        for (double v : r) norm += v * v;
        norm = std::sqrt(norm);
        if (norm < 1e-12) continue;
        for (double& v : r) v /= norm;
        poly.tangent_basis.push_back(std::move(r));
    }

    // Interior blending point (every edge of a mixing graph lies on a cycle).
    std::vector<double> center(ne, 0.0);
    for (const std::vector<double>& x : cycle_x)
        for (std::size_t e = 0; e < ne; ++e) center[e] += x[e];
    double cmass = std::accumulate(center.begin(), center.end(), 0.0);
    for (double& v : center) v /= cmass;
    double center_mean = 0.0;
    for (std::size_t e = 0; e < ne; ++e) center_mean += center[e] * poly.phi_e[e];

    const auto pair_blend = [&](std::size_t a, std::size_t b, double s) -> std::vector<double> {
        // (1-s)-weighted two-cycle blend mixed with the centre, solved so
        // the phi-integral equals alpha; empty when infeasible.
        const double ma = cycle_mean[a], mb = cycle_mean[b];
        const double base = s * center_mean;
        if (std::abs(mb - ma) < 1e-15) {
            if (std::abs((1.0 - s) * ma + base - alpha_c) > 1e-12) return {};
            std::vector<double> x(ne);
            for (std::size_t e = 0; e < ne; ++e)
                x[e] = (1.0 - s) * cycle_x[a][e] + s * center[e];
            return x;
        }
        const double t = (alpha_c - base - (1.0 - s) * ma) / ((1.0 - s) * (mb - ma));
        if (t < -1e-12 || t > 1.0 + 1e-12) return {};
        const double tc = std::clamp(t, 0.0, 1.0);
        std::vector<double> x(ne);
        for (std::size_t e = 0; e < ne; ++e)
            x[e] = (1.0 - s) * ((1.0 - tc) * cycle_x[a][e] + tc * cycle_x[b][e]) + s * center[e];
        return x;
    };

    double best = -std::numeric_limits<double>::infinity();
    // Grid stage over extreme-pair blends.
    for (std::size_t a = 0; a < cycle_x.size(); ++a)
        for (std::size_t b = 0; b < cycle_x.size(); ++b) {
            if (!(cycle_mean[a] <= alpha_c + 1e-12 && alpha_c <= cycle_mean[b] + 1e-12)) continue;
            for (int g = 0; g <= resolution; ++g) {
                const double s = static_cast<double>(g) / static_cast<double>(resolution) * 0.5;
                const std::vector<double> x = pair_blend(a, b, s);
                if (x.empty()) continue;
                best = std::max(best, poly.objective(x));
            }
        }
    // Refinement stage from a deterministic set of starts.
    for (std::size_t a = 0; a < cycle_x.size(); ++a)
        for (std::size_t b = 0; b < cycle_x.size(); ++b) {
            if (!(cycle_mean[a] <= alpha_c + 1e-12 && alpha_c <= cycle_mean[b] + 1e-12)) continue;
            for (const double s : {0.0, 0.05, 0.25}) {
                const std::vector<double> x = pair_blend(a, b, s);
                if (x.empty()) continue;
                best = std::max(best, detail::ascend(poly, x));
            }
        }
    if (best == -std::numeric_limits<double>::infinity())
        throw ConvergenceFailureError("no feasible starting measure found");
    return best;
}

}  // namespace birkhoff
