#pragma once

// Direct Birkhoff averages over finite prefixes of the one-sided words,
// used as an independent check on the exact engine.

#include "rscorr/query.hpp"
#include "rscorr/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rscorr {

struct EmpiricalEstimate {
    double value = 0.0;
    std::int64_t N = 0;
    std::int64_t max_index_touched = 0;
};

/// RS signs w_0 .. w_{len-1} computed from the digit-block formula.
inline SignWord rs_sign_prefix(std::size_t len) {
    SignWord w(len);
    for (std::size_t i = 0; i < len; ++i) w[i] = static_cast<std::int8_t>(rs_letter(i));
    return w;
}

namespace detail {

inline void check_window(std::span<const std::int64_t> positions, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("window N must be at least 1");
    for (auto p : positions)
        if (p < 0) throw std::invalid_argument("oracle positions must be non-negative");
}

inline std::int64_t max_position(std::span<const std::int64_t> positions) {
    return positions.empty() ? 0 : *std::max_element(positions.begin(), positions.end());
}

// Runs body(lo, hi) over [0, N) in `jobs` contiguous chunks and returns the
// per-chunk results in chunk order.
template <class T, class Body>
std::vector<T> run_chunks(std::int64_t N, unsigned jobs, Body body) {
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::min<std::int64_t>(N, 256))));
    std::vector<T> parts(jobs);
    if (jobs == 1) {
        parts[0] = body(0, N);
        return parts;
    }
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (unsigned c = 0; c < jobs; ++c) {
        const std::int64_t lo = N * c / jobs, hi = N * (c + 1) / jobs;
        threads.emplace_back([&parts, &body, c, lo, hi] { parts[c] = body(lo, hi); });
    }
    for (auto& t : threads) t.join();
    return parts;
}

}  // namespace detail

/// (1/N) sum_{i<N} [(-1)^i] prod_p w_{i+p} over a caller-supplied sign word,
/// which must cover index N - 1 + max(positions). The numerator is an exact
/// integer sum, so the result does not depend on `jobs`.
inline EmpiricalEstimate empirical_correlation(Kind kind, std::span<const std::int64_t> positions, std::int64_t N,
                                               const SignWord& word, unsigned jobs = 1) {
    detail::check_window(positions, N);
    const std::int64_t top = N - 1 + detail::max_position(positions);
    if (static_cast<std::int64_t>(word.size()) <= top) throw std::invalid_argument("sign word too short for window");
    const std::vector<std::int64_t> pos(positions.begin(), positions.end());
    const auto parts = detail::run_chunks<std::int64_t>(N, jobs, [&](std::int64_t lo, std::int64_t hi) {
        std::int64_t sum = 0;
        for (std::int64_t i = lo; i < hi; ++i) {
            int v = (kind == Kind::theta && (i & 1)) ? -1 : 1;
            for (auto p : pos) v *= word[static_cast<std::size_t>(i + p)];
            sum += v;
        }
        return sum;
    });
    std::int64_t total = 0;
    for (auto s : parts) total += s;
    return {static_cast<double>(total) / static_cast<double>(N), N, top};
}

inline EmpiricalEstimate empirical_correlation(Kind kind, std::span<const std::int64_t> positions, std::int64_t N,
                                               unsigned jobs = 1) {
    detail::check_window(positions, N);
    const auto word = rs_sign_prefix(static_cast<std::size_t>(N + detail::max_position(positions)));
    return empirical_correlation(kind, positions, N, word, jobs);
}

/// Average of prod_p f(w_{i+p}) with f(+1) = f_plus, f(-1) = f_minus. Counts
/// of windows by number of +1 letters are exact; weights enter only at the end.
inline EmpiricalEstimate empirical_weighted(double f_plus, double f_minus, std::span<const std::int64_t> positions,
                                            std::int64_t N, unsigned jobs = 1) {
    detail::check_window(positions, N);
    const auto word = rs_sign_prefix(static_cast<std::size_t>(N + detail::max_position(positions)));
    const std::size_t n = positions.size();
    const std::vector<std::int64_t> pos(positions.begin(), positions.end());
    const auto parts =
        detail::run_chunks<std::vector<std::int64_t>>(N, jobs, [&](std::int64_t lo, std::int64_t hi) {
            std::vector<std::int64_t> hist(n + 1, 0);
            for (std::int64_t i = lo; i < hi; ++i) {
                std::size_t plus = 0;
                for (auto p : pos) plus += word[static_cast<std::size_t>(i + p)] > 0 ? 1 : 0;
                ++hist[plus];
            }
            return hist;
        });
    std::vector<std::int64_t> hist(n + 1, 0);
    for (const auto& h : parts)
        for (std::size_t c = 0; c <= n; ++c) hist[c] += h[c];
    double value = 0.0;
    for (std::size_t c = 0; c <= n; ++c) {
        if (hist[c] == 0) continue;
        value += static_cast<double>(hist[c]) * std::pow(f_plus, static_cast<double>(c)) *
                 std::pow(f_minus, static_cast<double>(n - c));
    }
    return {value / static_cast<double>(N), N, N - 1 + detail::max_position(positions)};
}

/// (1/N) sum_{i<N} [(-1)^i] v_i v_{i+k} over the induced two-letter word.
inline EmpiricalEstimate empirical_induced(std::int64_t k, bool signed_average, std::int64_t N) {
    if (k < 0) throw std::invalid_argument("induced lag must be non-negative");
    if (N < 1) throw std::invalid_argument("window N must be at least 1");
    const auto v = induced_word(static_cast<std::size_t>(N + k));
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < N; ++i) {
        int t = v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i + k)];
        if (signed_average && (i & 1)) t = -t;
        sum += t;
    }
    return {static_cast<double>(sum) / static_cast<double>(N), N, N - 1 + k};
}

}  // namespace rscorr
