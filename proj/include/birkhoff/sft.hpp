#pragma once

// Symbolic core: mixing subshifts of finite type, locally constant
// potentials, Birkhoff sums and higher-block recoding.
//
// Conventions used throughout the library:
//   * A subshift is given by a 0/1 transition matrix T; T(i,j) = 1 iff
//     symbol j may follow symbol i.  Construction certifies primitivity
//     (some power of T is entrywise positive), which for a shift of
//     finite type is equivalent to topological mixing.
//   * A potential of depth k is a real table over admissible k-words;
//     the induced function on the shift reads the first k symbols, so
//     its variation vanishes below the cylinder scale and every
//     quantity in the library is exact at depth k.
//   * Cyclic ("wrap") Birkhoff sums take n windows with indices mod n
//     and equal the sum along the periodic orbit of the word; plain
//     sums take the n - k + 1 full windows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "birkhoff/errors.hpp"

namespace birkhoff {

inline constexpr std::uint64_t kDefaultWordCap = std::uint64_t{1} << 26;

class SftSystem {
public:
    // Builds the system and certifies mixing via boolean matrix powering.
    // Throws EmptyRowOrColumnError or NonPrimitiveError.
    explicit SftSystem(std::vector<std::vector<int>> transitions) {
        const std::size_t m = transitions.size();
        if (m == 0) throw EmptyRowOrColumnError("transition matrix is empty");
        alphabet_ = static_cast<int>(m);
        allowed_.assign(m * m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            if (transitions[i].size() != m)
                throw EmptyRowOrColumnError("transition matrix is not square");
            for (std::size_t j = 0; j < m; ++j) {
                const int t = transitions[i][j];
                if (t != 0 && t != 1)
                    throw EmptyRowOrColumnError("transition entries must be 0 or 1");
                allowed_[i * m + j] = static_cast<std::uint8_t>(t);
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            bool row = false, col = false;
            for (std::size_t j = 0; j < m; ++j) {
                row = row || allowed_[i * m + j];
                col = col || allowed_[j * m + i];
            }
            if (!row) throw EmptyRowOrColumnError("symbol " + std::to_string(i) + " has no successor");
            if (!col) throw EmptyRowOrColumnError("symbol " + std::to_string(i) + " has no predecessor");
        }
        primitivity_power_ = find_primitivity_power();
        if (primitivity_power_ == 0)
            throw NonPrimitiveError("transition matrix is not primitive (not topologically mixing)");
    }

    int alphabet_size() const { return alphabet_; }

    // Smallest n with T^n entrywise positive; certifies specification.
    int primitivity_power() const { return primitivity_power_; }

    bool allowed(int i, int j) const {
        return allowed_[static_cast<std::size_t>(i) * alphabet_ + j] != 0;
    }

    // True iff every adjacent pair of `w` is an allowed transition.
    bool admissible(std::span<const int> w) const {
        for (int s : w)
            if (s < 0 || s >= alphabet_) return false;
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (!allowed(w[i], w[i + 1])) return false;
        return true;
    }

    bool operator==(const SftSystem& other) const {
        return alphabet_ == other.alphabet_ && allowed_ == other.allowed_;
    }

private:
    // Boolean powering up to alphabet^2 (covers the Wielandt bound).
    int find_primitivity_power() const {
        const int m = alphabet_;
        std::vector<std::uint8_t> power(allowed_);
        const int cap = m * m;
        for (int n = 1; n <= cap; ++n) {
            bool all = true;
            for (std::uint8_t v : power)
                if (!v) { all = false; break; }
            if (all) return n;
            std::vector<std::uint8_t> next(static_cast<std::size_t>(m) * m, 0);
            for (int i = 0; i < m; ++i)
                for (int k = 0; k < m; ++k) {
                    if (!power[static_cast<std::size_t>(i) * m + k]) continue;
                    for (int j = 0; j < m; ++j)
                        if (allowed_[static_cast<std::size_t>(k) * m + j])
                            next[static_cast<std::size_t>(i) * m + j] = 1;
                }
            power.swap(next);
        }
        return 0;
    }

    int alphabet_ = 0;
    int primitivity_power_ = 0;
    std::vector<std::uint8_t> allowed_;
};

inline SftSystem build_sft(std::vector<std::vector<int>> transitions) {
    return SftSystem(std::move(transitions));
}

// A finite admissible word over the host alphabet.
struct Word {
    std::vector<int> symbols;

    std::size_t size() const { return symbols.size(); }
    std::span<const int> span() const { return symbols; }
    bool operator==(const Word&) const = default;
};

inline Word make_word(const SftSystem& sft, std::vector<int> symbols) {
    if (symbols.empty()) throw InadmissibleWordError("word is empty");
    if (!sft.admissible(symbols)) throw InadmissibleWordError("word violates a transition");
    return Word{std::move(symbols)};
}

namespace detail {

// Base-m encoding of fixed-length windows; index of w = sum w[i]*m^(k-1-i).
inline std::size_t window_index(std::span<const int> w, int alphabet) {
    std::size_t idx = 0;
    for (int s : w) idx = idx * static_cast<std::size_t>(alphabet) + static_cast<std::size_t>(s);
    return idx;
}

inline std::size_t table_size(int alphabet, int depth) {
    std::size_t n = 1;
    for (int i = 0; i < depth; ++i) {
        if (n > (std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(alphabet)))
            throw ResourceLimitError("potential table too large");
        n *= static_cast<std::size_t>(alphabet);
    }
    return n;
}

// Visits admissible words of length n in lexicographic order.
template <class Visitor>
void for_each_admissible_word(const SftSystem& sft, int n, Visitor&& visit) {
    const int m = sft.alphabet_size();
    std::vector<int> w(static_cast<std::size_t>(n), 0);
    int pos = 0;
    w[0] = -1;
    while (pos >= 0) {
        int s = w[pos] + 1;
        while (s < m && pos > 0 && !sft.allowed(w[pos - 1], s)) ++s;
        if (s >= m) {
            --pos;
            continue;
        }
        w[pos] = s;
        if (pos == n - 1) {
            visit(std::span<const int>(w));
        } else {
            ++pos;
            w[pos] = -1;
        }
    }
}

}  // namespace detail

// Locally constant potential of finite depth over admissible words.
class Potential {
public:
    Potential(const SftSystem& sft, int depth, std::vector<double> table)
        : depth_(depth), alphabet_(sft.alphabet_size()), table_(std::move(table)) {
        if (depth_ < 1) throw PreconditionError("potential depth must be >= 1");
        if (table_.size() != detail::table_size(alphabet_, depth_))
            throw PreconditionError("potential table has wrong size");
        validate_total(sft);
    }

    static Potential constant(const SftSystem& sft, double c) {
        return Potential(sft, 1, std::vector<double>(static_cast<std::size_t>(sft.alphabet_size()), c));
    }

    static Potential zero(const SftSystem& sft) { return constant(sft, 0.0); }

    static Potential indicator(const SftSystem& sft, int symbol) {
        if (symbol < 0 || symbol >= sft.alphabet_size())
            throw PreconditionError("indicator symbol out of range");
        std::vector<double> t(static_cast<std::size_t>(sft.alphabet_size()), 0.0);
        t[static_cast<std::size_t>(symbol)] = 1.0;
        return Potential(sft, 1, std::move(t));
    }

    // Builds from explicit (word, value) entries; must cover every
    // admissible depth-word exactly once.
    static Potential from_entries(const SftSystem& sft, int depth,
                                  const std::vector<std::pair<std::vector<int>, double>>& entries) {
        std::vector<double> table(detail::table_size(sft.alphabet_size(), depth),
                                  std::numeric_limits<double>::quiet_NaN());
        for (const auto& [word, value] : entries) {
            if (static_cast<int>(word.size()) != depth)
                throw PreconditionError("table word has wrong length");
            if (!sft.admissible(word))
                throw InadmissibleWordError("table word violates a transition");
            table[detail::window_index(word, sft.alphabet_size())] = value;
        }
        return Potential(sft, depth, std::move(table));
    }

    int depth() const { return depth_; }
    int alphabet_size() const { return alphabet_; }

    double value(std::span<const int> window) const {
        return table_[detail::window_index(window, alphabet_)];
    }

    double value_at(std::size_t index) const { return table_[index]; }

    // Table extremes over admissible windows.
    double min_value() const { return extreme(true); }
    double max_value() const { return extreme(false); }

    bool operator==(const Potential& other) const {
        if (depth_ != other.depth_ || alphabet_ != other.alphabet_) return false;
        for (std::size_t i = 0; i < table_.size(); ++i) {
            const bool a = std::isnan(table_[i]), b = std::isnan(other.table_[i]);
            if (a != b) return false;
            if (!a && table_[i] != other.table_[i]) return false;
        }
        return true;
    }

private:
    void validate_total(const SftSystem& sft) {
        detail::for_each_admissible_word(sft, depth_, [&](std::span<const int> w) {
            const double v = table_[detail::window_index(w, alphabet_)];
            if (std::isnan(v) || std::isinf(v))
                throw PreconditionError("potential table is not total and finite on admissible words");
        });
    }

    double extreme(bool minimum) const {
        double best = std::numeric_limits<double>::quiet_NaN();
        for (double v : table_) {
            if (std::isnan(v)) continue;
            if (std::isnan(best) || (minimum ? v < best : v > best)) best = v;
        }
        return best;
    }

    int depth_;
    int alphabet_;
    std::vector<double> table_;
};

// Lifts `pot` to a deeper table reading only its leading symbols; the
// induced function on the shift is unchanged.
inline Potential lift_to_depth(const SftSystem& sft, const Potential& pot, int depth) {
    if (depth < pot.depth()) throw PreconditionError("cannot lift to a shallower depth");
    if (depth == pot.depth()) return pot;
    std::vector<double> table(detail::table_size(sft.alphabet_size(), depth),
                              std::numeric_limits<double>::quiet_NaN());
    detail::for_each_admissible_word(sft, depth, [&](std::span<const int> w) {
        table[detail::window_index(w, sft.alphabet_size())] = pot.value(w.first(static_cast<std::size_t>(pot.depth())));
    });
    return Potential(sft, depth, std::move(table));
}

// Pointwise a*f + b*g at the common depth.
inline Potential linear_combination(const SftSystem& sft, double a, const Potential& f, double b,
                                    const Potential& g) {
    const int depth = std::max(f.depth(), g.depth());
    const Potential fl = lift_to_depth(sft, f, depth);
    const Potential gl = lift_to_depth(sft, g, depth);
    std::vector<double> table(detail::table_size(sft.alphabet_size(), depth),
                              std::numeric_limits<double>::quiet_NaN());
    detail::for_each_admissible_word(sft, depth, [&](std::span<const int> w) {
        table[detail::window_index(w, sft.alphabet_size())] = a * fl.value(w) + b * gl.value(w);
    });
    return Potential(sft, depth, std::move(table));
}

inline Potential scale(const SftSystem& sft, double a, const Potential& f) {
    return linear_combination(sft, a, f, 0.0, Potential::zero(sft));
}

// Pointwise product (used for fiber-constant suspension caps).
inline Potential pointwise_product(const SftSystem& sft, const Potential& f, const Potential& g) {
    const int depth = std::max(f.depth(), g.depth());
    const Potential fl = lift_to_depth(sft, f, depth);
    const Potential gl = lift_to_depth(sft, g, depth);
    std::vector<double> table(detail::table_size(sft.alphabet_size(), depth),
                              std::numeric_limits<double>::quiet_NaN());
    detail::for_each_admissible_word(sft, depth, [&](std::span<const int> w) {
        table[detail::window_index(w, sft.alphabet_size())] = fl.value(w) * gl.value(w);
    });
    return Potential(sft, depth, std::move(table));
}

// Shift-invariant Markov measure compatible with the host system.
class MarkovMeasure {
public:
    // Validates: stochastic rows sum to 1 (1e-12), support inside the
    // transition matrix, stationarity (1e-12), probability normalisation.
    MarkovMeasure(const SftSystem& sft, std::vector<double> stochastic, std::vector<double> stationary)
        : alphabet_(sft.alphabet_size()), stochastic_(std::move(stochastic)), stationary_(std::move(stationary)) {
        const std::size_t m = static_cast<std::size_t>(alphabet_);
        if (stochastic_.size() != m * m || stationary_.size() != m)
            throw PreconditionError("Markov measure has wrong dimensions");
        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double p = stochastic_[i * m + j];
                if (p < 0.0) throw ConfigValidationError("stochastic entry is negative");
                if (p > 0.0 && !sft.allowed(static_cast<int>(i), static_cast<int>(j)))
                    throw ConfigValidationError("stochastic entry off the transition support");
                row += p;
            }
            if (std::abs(row - 1.0) > 1e-12)
                throw ConfigValidationError("stochastic row does not sum to 1");
            if (stationary_[i] < 0.0) throw ConfigValidationError("stationary entry is negative");
            total += stationary_[i];
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw ConfigValidationError("stationary vector does not sum to 1");
        for (std::size_t j = 0; j < m; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) acc += stationary_[i] * stochastic_[i * m + j];
            if (std::abs(acc - stationary_[j]) > 1e-12)
                throw ConfigValidationError("vector is not stationary for the stochastic matrix");
        }
        entropy_ = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const double p = stochastic_[i * m + j];
                if (p > 0.0 && stationary_[i] > 0.0) entropy_ -= stationary_[i] * p * std::log(p);
            }
        if (entropy_ < 0.0) entropy_ = 0.0;
    }

    // Computes the stationary vector of a stochastic matrix supported on
    // the transitions by deterministic fixed-point iteration.
    static MarkovMeasure from_stochastic(const SftSystem& sft, std::vector<double> stochastic) {
        const std::size_t m = static_cast<std::size_t>(sft.alphabet_size());
        std::vector<double> pi(m, 1.0 / static_cast<double>(m));
        std::vector<double> next(m, 0.0);
        for (long iter = 0; iter < 200000; ++iter) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) next[j] += pi[i] * stochastic[i * m + j];
            double diff = 0.0, total = 0.0;
            for (std::size_t j = 0; j < m; ++j) total += next[j];
            for (std::size_t j = 0; j < m; ++j) next[j] /= total;
            for (std::size_t j = 0; j < m; ++j) diff = std::max(diff, std::abs(next[j] - pi[j]));
            pi.swap(next);
            if (diff < 1e-15) break;
        }
        return MarkovMeasure(sft, std::move(stochastic), std::move(pi));
    }

    int alphabet_size() const { return alphabet_; }
    double entropy() const { return entropy_; }
    double stationary(int i) const { return stationary_[static_cast<std::size_t>(i)]; }
    double transition(int i, int j) const {
        return stochastic_[static_cast<std::size_t>(i) * alphabet_ + j];
    }
    const std::vector<double>& stochastic_matrix() const { return stochastic_; }
    const std::vector<double>& stationary_vector() const { return stationary_; }

    // Cylinder mass of an admissible word.
    double cylinder_mass(std::span<const int> w) const {
        double p = stationary_[static_cast<std::size_t>(w[0])];
        for (std::size_t i = 0; i + 1 < w.size(); ++i) p *= transition(w[i], w[i + 1]);
        return p;
    }

    // Integral of a locally constant potential of any depth.
    double integral(const SftSystem& sft, const Potential& pot) const {
        double acc = 0.0;
        detail::for_each_admissible_word(sft, pot.depth(), [&](std::span<const int> w) {
            acc += cylinder_mass(w) * pot.value(w);
        });
        return acc;
    }

private:
    int alphabet_;
    std::vector<double> stochastic_;
    std::vector<double> stationary_;
    double entropy_ = 0.0;
};

// Exact count of admissible n-words via integer transfer-matrix powering,
// saturating at the cap.
inline std::uint64_t count_admissible_words(const SftSystem& sft, int n, std::uint64_t cap) {
    const int m = sft.alphabet_size();
    std::vector<std::uint64_t> v(static_cast<std::size_t>(m), 1);
    for (int step = 1; step < n; ++step) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(m), 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (sft.allowed(i, j)) {
                    next[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(j)];
                    if (next[static_cast<std::size_t>(i)] > cap) next[static_cast<std::size_t>(i)] = cap + 1;
                }
        v.swap(next);
    }
    std::uint64_t total = 0;
    for (std::uint64_t x : v) {
        total += x;
        if (total > cap) return cap + 1;
    }
    return total;
}

// All admissible words of length n in lexicographic order.
// Throws ResourceLimitError when alphabet^n exceeds the cap.
inline std::vector<Word> admissible_words(const SftSystem& sft, int n,
                                          std::uint64_t cap = kDefaultWordCap) {
    if (n < 1) throw PreconditionError("word length must be >= 1");
    const double bound = static_cast<double>(n) * std::log(static_cast<double>(sft.alphabet_size()));
    if (bound > std::log(static_cast<double>(cap)) + 1e-12)
        throw ResourceLimitError("alphabet^n exceeds the word cap");
    std::vector<Word> words;
    detail::for_each_admissible_word(sft, n, [&](std::span<const int> w) {
        words.push_back(Word{std::vector<int>(w.begin(), w.end())});
    });
    return words;
}

// Birkhoff sum of `pot` along `word`.
//   wrap = false : sum over the n - depth + 1 full windows.
//   wrap = true  : sum over n cyclic windows; equals S_n on the periodic
//                  orbit of the word and requires the cyclic closure to
//                  be admissible.
inline double birkhoff_sum(const SftSystem& sft, const Potential& pot, const Word& word, bool wrap) {
    const int n = static_cast<int>(word.size());
    const int k = pot.depth();
    if (!wrap) {
        if (n < k) throw WordTooShortError("word shorter than potential depth");
        double acc = 0.0;
        for (int i = 0; i + k <= n; ++i)
            acc += pot.value(std::span<const int>(word.symbols).subspan(static_cast<std::size_t>(i),
                                                                        static_cast<std::size_t>(k)));
        return acc;
    }
    double acc = 0.0;
    std::vector<int> window(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < k; ++t) window[static_cast<std::size_t>(t)] = word.symbols[static_cast<std::size_t>((i + t) % n)];
        if (!sft.admissible(window))
            throw InadmissibleWordError("cyclic closure of the word is not admissible");
        acc += pot.value(window);
    }
    return acc;
}

// True iff the word together with its wrap-around transition is admissible.
inline bool cyclically_admissible(const SftSystem& sft, std::span<const int> w) {
    if (!sft.admissible(w)) return false;
    return sft.allowed(w[w.size() - 1], w[0]);
}

struct RecodedSystem {
    SftSystem sft;
    std::vector<Potential> potentials;
    // block_words[s] is the (k-1)-word of the original alphabet that the
    // recoded symbol s stands for; k is the recoding depth.
    std::vector<std::vector<int>> block_words;
};

// Conjugates the system so every potential has depth <= 2.  The new
// alphabet consists of the admissible (k-1)-words where k is the maximal
// input depth; pressure and all measure integrals are preserved.
inline RecodedSystem higher_block_recode(const SftSystem& sft, const std::vector<Potential>& potentials,
                                         std::uint64_t alphabet_cap = 4096) {
    int k = 1;
    for (const Potential& p : potentials) {
        if (p.alphabet_size() != sft.alphabet_size())
            throw PreconditionError("potential alphabet does not match the system");
        k = std::max(k, p.depth());
    }
    if (k <= 2) {
        std::vector<std::vector<int>> blocks;
        for (int s = 0; s < sft.alphabet_size(); ++s) blocks.push_back({s});
        return RecodedSystem{sft, potentials, std::move(blocks)};
    }

    const int block_len = k - 1;
    if (count_admissible_words(sft, block_len, alphabet_cap) > alphabet_cap)
        throw ResourceLimitError("recoded alphabet exceeds the cap");
    std::vector<std::vector<int>> blocks;
    detail::for_each_admissible_word(sft, block_len, [&](std::span<const int> w) {
        blocks.emplace_back(w.begin(), w.end());
    });
    const int big = static_cast<int>(blocks.size());

    // (a_0..a_{k-2}) -> (a_1..a_{k-1}) iff the k-word a_0..a_{k-1} is
    // admissible; overlap determines the target uniquely per appended symbol.
    std::map<std::vector<int>, int> block_id;
    for (int s = 0; s < big; ++s) block_id[blocks[static_cast<std::size_t>(s)]] = s;
    std::vector<std::vector<int>> transitions(static_cast<std::size_t>(big),
                                              std::vector<int>(static_cast<std::size_t>(big), 0));
    for (int a = 0; a < big; ++a) {
        const std::vector<int>& w = blocks[static_cast<std::size_t>(a)];
        for (int c = 0; c < sft.alphabet_size(); ++c) {
            if (!sft.allowed(w.back(), c)) continue;
            std::vector<int> next(w.begin() + 1, w.end());
            next.push_back(c);
            const auto it = block_id.find(next);
            if (it != block_id.end()) transitions[static_cast<std::size_t>(a)][static_cast<std::size_t>(it->second)] = 1;
        }
    }
    SftSystem recoded(std::move(transitions));

    std::vector<Potential> recoded_pots;
    for (const Potential& p : potentials) {
        if (p.depth() == 1) {
            std::vector<double> table(static_cast<std::size_t>(big));
            for (int s = 0; s < big; ++s)
                table[static_cast<std::size_t>(s)] = p.value(std::span<const int>(blocks[static_cast<std::size_t>(s)]).first(1));
            recoded_pots.emplace_back(recoded, 1, std::move(table));
        } else {
            // depth d >= 2 becomes depth 2: a pair of overlapping blocks
            // spans k original symbols; read the leading d of them.
            std::vector<double> table(static_cast<std::size_t>(big) * static_cast<std::size_t>(big),
                                      std::numeric_limits<double>::quiet_NaN());
            for (int a = 0; a < big; ++a)
                for (int b = 0; b < big; ++b) {
                    if (!recoded.allowed(a, b)) continue;
                    std::vector<int> full(blocks[static_cast<std::size_t>(a)]);
                    full.push_back(blocks[static_cast<std::size_t>(b)].back());
                    table[static_cast<std::size_t>(a) * static_cast<std::size_t>(big) + static_cast<std::size_t>(b)] =
                        p.value(std::span<const int>(full).first(static_cast<std::size_t>(p.depth())));
                }
            recoded_pots.emplace_back(recoded, 2, std::move(table));
        }
    }
    return RecodedSystem{std::move(recoded), std::move(recoded_pots), std::move(blocks)};
}

}  // namespace birkhoff
