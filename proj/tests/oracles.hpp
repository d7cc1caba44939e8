#pragma once

// Brute-force reference implementations used only by the test suites. They
// follow the textbook definitions literally and never touch the suffix
// automaton.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "zmlab/core.hpp"
#include "zmlab/error.hpp"
#include "zmlab/sources.hpp"

namespace zmlab::oracle {

using Word = std::vector<Symbol>;

/// Code of the zmlab::Error thrown by fn, Ok when nothing is thrown.
template <class F>
ErrorCode code_of(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Ok;
}

inline Word word(const Seq& s) {
    return Word(s.symbols().begin(), s.symbols().end());
}

/// Least 1-based r with x_r^{r+l-1} == y_1^l, scanning every start.
inline std::optional<std::size_t> waiting_time(const Word& y, const Word& x, std::size_t ell) {
    if (ell > x.size())
        return std::nullopt;
    for (std::size_t r = 0; r + ell <= x.size(); ++r) {
        bool match = true;
        for (std::size_t k = 0; k < ell && match; ++k)
            match = x[r + k] == y[k];
        if (match)
            return r + 1;
    }
    return std::nullopt;
}

inline bool occurs(const Word& w, const Word& x, std::size_t n) {
    const Word ref(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    return waiting_time(w, ref, w.size()).has_value() || w.empty();
}

/// sup{l : W_l(y, x) <= N - l + 1} over l <= |y|, without the clamp (0 when
/// the set is empty).
inline std::size_t raw_match_length(const Word& y, const Word& x, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t ell = 1; ell <= y.size(); ++ell) {
        const auto w = waiting_time(y, x, ell);
        if (w && *w + ell <= n + 1)
            best = ell;
    }
    return best;
}

/// Lambda_N(y, x) = max{1, sup{l : W_l(y, x) <= N - l + 1}}.
inline std::size_t match_length(const Word& y, const Word& x, std::size_t n) {
    return std::max<std::size_t>(1, raw_match_length(y, x, n));
}

struct Parse {
    std::vector<std::size_t> boundaries;
    bool truncated_last = false;
};

/// Word i+1 = y_{L+1}^{min(N, L + Lambda_N(T^L y, x) + 1)}, with T^L y the
/// whole remaining suffix of y (not cut at N).
inline Parse parse_mzm(const Word& y, const Word& x, std::size_t n) {
    Parse p;
    std::size_t begin = 0;
    while (begin < n) {
        const Word shifted(y.begin() + static_cast<std::ptrdiff_t>(begin), y.end());
        const std::size_t end = std::min(n, begin + match_length(shifted, x, n) + 1);
        p.truncated_last = begin + match_length(shifted, x, n) + 1 > n;
        p.boundaries.push_back(end);
        begin = end;
    }
    return p;
}

/// Longest prefix of the remainder that occurs in x_1^N, length 1 fallback.
inline Parse parse_zm(const Word& y, const Word& x, std::size_t n) {
    Parse p;
    std::size_t begin = 0;
    while (begin < n) {
        const Word rest(y.begin() + static_cast<std::ptrdiff_t>(begin),
                        y.begin() + static_cast<std::ptrdiff_t>(n));
        std::size_t len = 0;
        for (std::size_t ell = rest.size(); ell >= 1; --ell) {
            if (occurs(Word(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(ell)), x, n)) {
                len = ell;
                break;
            }
        }
        p.truncated_last = len == rest.size();
        p.boundaries.push_back(begin + std::max<std::size_t>(1, len));
        begin = p.boundaries.back();
    }
    return p;
}

/// Sum over hidden paths for the countable chain with exact pi (summed far
/// past any truncation). Symbol 0 <-> state 0.
inline double countable_probability(const Gamma& gamma, const Word& a, std::size_t cutoff = 400) {
    double z = 0.0;
    for (std::size_t s = 0; s < cutoff; ++s)
        z += std::exp(-gamma(s));
    auto pi = [&](std::size_t s) { return std::exp(-gamma(s)) / z; };
    auto up = [&](std::size_t s) { return std::exp(gamma(s) - gamma(s + 1)); };
    auto path_prob = [&](std::size_t s1) {
        if ((a[0] == 0) != (s1 == 0))
            return 0.0;
        double p = pi(s1);
        std::size_t s = s1;
        for (std::size_t i = 1; i < a.size(); ++i) {
            if (a[i] == 0) {
                p *= 1.0 - up(s);
                s = 0;
            } else {
                p *= up(s);
                s += 1;
            }
        }
        return p;
    };
    if (a[0] == 0)
        return path_prob(0);
    double total = 0.0;
    for (std::size_t s1 = 1; s1 < cutoff; ++s1)
        total += path_prob(s1);
    return total;
}

/// All words of length n over an alphabet of size k.
inline std::vector<Word> all_words(std::size_t k, std::size_t n) {
    std::vector<Word> out;
    Word w(n, 0);
    for (;;) {
        out.push_back(w);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++w[i] < k)
                break;
            w[i] = 0;
            if (i == 0)
                return out;
        }
        if (n == 0)
            return out;
    }
}

inline Word random_word(std::mt19937_64& rng, std::size_t k, std::size_t n) {
    std::uniform_int_distribution<int> d(0, static_cast<int>(k) - 1);
    Word w(n);
    for (auto& s : w)
        s = static_cast<Symbol>(d(rng));
    return w;
}

inline Matrix random_stochastic(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                double floor = 0.05) {
    std::uniform_real_distribution<double> d(floor, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = d(rng);
        m.row(r) /= m.row(r).sum();
    }
    return m;
}

} // namespace zmlab::oracle
