#pragma once

// Families of 4-point offsets on which eta^{(4)} / theta^{(4)} are known in
// closed form, the induced-word autocorrelation, cube averages and a
// brute-force level-set scanner.

#include "rscorr/dyadic.hpp"
#include "rscorr/engine.hpp"
#include "rscorr/query.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace rscorr {

/// Each family is 2^m * (a, c + u, c + v) with core c = 2^e (2l+1):
///   Cn  (1, c, c+1),   e = n
///   V1a (1, c, c+2),   V1b (1, c-1, c+1),   e = n
///   V2a (2, c, c+1),   V2b (2, c+1, c+2),   e = n
///   V3a (2, c+1, c+3), V3b (2, c-1, c+1),   e = n + 2
enum class LevelSetFamily { Cn, V1a, V1b, V2a, V2b, V3a, V3b };

inline constexpr std::array<LevelSetFamily, 7> all_families = {
    LevelSetFamily::Cn,  LevelSetFamily::V1a, LevelSetFamily::V1b, LevelSetFamily::V2a,
    LevelSetFamily::V2b, LevelSetFamily::V3a, LevelSetFamily::V3b,
};

constexpr std::string_view family_name(LevelSetFamily f) noexcept {
    switch (f) {
        case LevelSetFamily::Cn: return "Cn";
        case LevelSetFamily::V1a: return "V1a";
        case LevelSetFamily::V1b: return "V1b";
        case LevelSetFamily::V2a: return "V2a";
        case LevelSetFamily::V2b: return "V2b";
        case LevelSetFamily::V3a: return "V3a";
        case LevelSetFamily::V3b: return "V3b";
    }
    return "?";
}

inline LevelSetFamily parse_family(std::string_view s) {
    for (auto f : all_families)
        if (family_name(f) == s) return f;
    throw std::invalid_argument("unknown level-set family: " + std::string(s));
}

/// Smallest n for which the family is defined.
constexpr int family_min_n(LevelSetFamily f) noexcept {
    return (f == LevelSetFamily::Cn || f == LevelSetFamily::V3a || f == LevelSetFamily::V3b) ? 0 : 1;
}

using Triple = std::array<std::int64_t, 3>;

inline Triple family_point(LevelSetFamily f, int m, int n, std::int64_t l) {
    if (m < 0 || m > 40 || n < family_min_n(f) || n > 40) throw std::domain_error("family parameters out of range");
    const int e = (f == LevelSetFamily::V3a || f == LevelSetFamily::V3b) ? n + 2 : n;
    const std::int64_t c = (std::int64_t{1} << e) * (2 * l + 1);
    Triple t{};
    switch (f) {
        case LevelSetFamily::Cn: t = {1, c, c + 1}; break;
        case LevelSetFamily::V1a: t = {1, c, c + 2}; break;
        case LevelSetFamily::V1b: t = {1, c - 1, c + 1}; break;
        case LevelSetFamily::V2a: t = {2, c, c + 1}; break;
        case LevelSetFamily::V2b: t = {2, c + 1, c + 2}; break;
        case LevelSetFamily::V3a: t = {2, c + 1, c + 3}; break;
        case LevelSetFamily::V3b: t = {2, c - 1, c + 1}; break;
    }
    for (auto& x : t) x *= std::int64_t{1} << m;
    return t;
}

namespace detail {

inline Dyadic three_over(int n) { return Dyadic::normalize(3, n); }

// Shared shape of the V1/V2 tables: eta at m = 0 by n (0, q, -3/2^n for n >= 3),
// theta at m in {0,1} by n (0, p, r * 3/2^n), zero beyond.
inline Dyadic starting_vector_value(Kind kind, int m, int n, int eta_quarter_sign, int theta_quarter_sign,
                                    int theta_tail_sign) {
    if (kind == Kind::eta) {
        if (m >= 1 || n == 1) return Dyadic(0);
        if (n == 2) return Dyadic(eta_quarter_sign).halved(2);
        return -Dyadic(eta_quarter_sign) * three_over(n);
    }
    if (m >= 2 || n == 1) return Dyadic(0);
    if (n == 2) return Dyadic(theta_quarter_sign).halved(2);
    return Dyadic(theta_tail_sign) * three_over(n);
}

}  // namespace detail

/// Printed closed-form value on the family member with parameters (m, n, l).
/// The value does not depend on l.
inline Dyadic closed_form(LevelSetFamily f, Kind kind, int m, int n, std::int64_t /*l*/) {
    if (m < 0 || n < family_min_n(f)) throw std::domain_error("family parameters out of range");
    const int alt = (m & 1) ? -1 : 1;  // (-1)^m
    switch (f) {
        case LevelSetFamily::Cn:
            if (n == 0) {
                if (kind == Kind::theta) return Dyadic(0);
                if (m != 0) throw std::domain_error("eta on (1, 2l+1, 2l+2) is only stated for m = 0");
                return Dyadic(0);
            }
            if (kind == Kind::eta) return Dyadic(1) - detail::three_over(n);
            if (m != 0) return Dyadic(0);
            return detail::three_over(n) - Dyadic(n == 1 ? 1 : 0);
        case LevelSetFamily::V1a: return detail::starting_vector_value(kind, m, n, 1, -alt, alt);
        case LevelSetFamily::V1b: return detail::starting_vector_value(kind, m, n, -1, alt, -alt);
        case LevelSetFamily::V2a: return detail::starting_vector_value(kind, m, n, 1, -1, 1);
        case LevelSetFamily::V2b: return detail::starting_vector_value(kind, m, n, -1, -alt, alt);
        case LevelSetFamily::V3a:
        case LevelSetFamily::V3b: {
            const Dyadic v = Dyadic::normalize(-1, 1) + Dyadic::normalize(3, n + 2);
            if (kind == Kind::theta && m != 0) return Dyadic(0);
            return v;
        }
    }
    throw std::domain_error("unknown family");
}

inline Dyadic engine_value(Kind kind, const Triple& t, Evaluator& ev = default_evaluator()) {
    return ev.correlation(CorrelationQuery::from_offsets(kind, {t[0], t[1], t[2]}));
}

/// True iff {0, m1, m2, m3} splits into two pairs of equal positions, i.e.
/// the point is a permuted and translated image of (0, t, t).
inline bool pairs_up(const Triple& t) {
    std::array<std::int64_t, 4> p{0, t[0], t[1], t[2]};
    std::sort(p.begin(), p.end());
    return p[0] == p[1] && p[2] == p[3];
}

/// Whether eta^{(4)} equals 1 at the point.
inline bool level_set_1_check(const Triple& t, Evaluator& ev = default_evaluator()) {
    return engine_value(Kind::eta, t, ev) == Dyadic(1);
}

/// Autocorrelation of the induced two-letter word from its renormalisation
/// system: eta2(4k) = (2 + (-1)^k (1 + eta2(k))) / 4, eta2(4k+2) = -1/2,
/// eta2(4k+1) = eta2(4k+3) = 0, eta2(0) = 1.
inline Dyadic eta2_induced(std::int64_t k) {
    if (k < 0) throw std::invalid_argument("eta2_induced needs k >= 0");
    if (k == 0) return Dyadic(1);
    switch (k & 3) {
        case 2: return Dyadic::normalize(-1, 1);
        case 0: {
            const std::int64_t q = k >> 2;
            const Dyadic inner = Dyadic(1) + eta2_induced(q);
            return (Dyadic(2) + ((q & 1) ? -inner : inner)).halved(2);
        }
        default: return Dyadic(0);
    }
}

struct AverageReport {
    std::int64_t N = 0;
    Rational sigma;      // mean of |eta^{(4)}| over the cube [0, N-1]^3
    Rational theta_sum;  // mean of |theta^{(4)}|
    Rational sigma2;     // mean of eta^{(4)}^2
};

/// Exact cube averages, visiting sorted triples once with their multiplicity.
inline AverageReport averages(std::int64_t N, Evaluator& ev = default_evaluator(), unsigned jobs = 1) {
    if (N < 1) throw std::invalid_argument("averages need N >= 1");
    struct Partial {
        Dyadic abs_eta, abs_theta, sq_eta;
    };
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(N)));
    std::vector<Partial> parts(jobs);
    auto work = [&](unsigned c) {
        Partial p;
        for (std::int64_t a = c; a < N; a += jobs)
            for (std::int64_t b = a; b < N; ++b)
                for (std::int64_t d = b; d < N; ++d) {
                    const int mult = (a == b && b == d) ? 1 : (a == b || b == d) ? 3 : 6;
                    const Dyadic e = engine_value(Kind::eta, {a, b, d}, ev);
                    const Dyadic t = engine_value(Kind::theta, {a, b, d}, ev);
                    p.abs_eta += Dyadic(mult) * e.abs();
                    p.abs_theta += Dyadic(mult) * t.abs();
                    p.sq_eta += Dyadic(mult) * e * e;
                }
        parts[c] = p;
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned c = 0; c < jobs; ++c) threads.emplace_back(work, c);
        for (auto& t : threads) t.join();
    }
    Partial total;
    for (const auto& p : parts) {
        total.abs_eta += p.abs_eta;
        total.abs_theta += p.abs_theta;
        total.sq_eta += p.sq_eta;
    }
    const Rational cube = Rational(N) * N * N;
    return {N, total.abs_eta.to_rational() / cube, total.abs_theta.to_rational() / cube,
            total.sq_eta.to_rational() / cube};
}

/// All sorted triples 0 <= m1 <= m2 <= m3 <= box with eta^{(4)} equal to target.
inline std::vector<Triple> scan_level_set(const Dyadic& target, std::int64_t box, Evaluator& ev = default_evaluator(),
                                          unsigned jobs = 1) {
    if (box < 0 || box > 128) throw std::invalid_argument("scan box must lie in 0..128");
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(box + 1)));
    std::vector<std::vector<Triple>> parts(jobs);
    auto work = [&](unsigned c) {
        for (std::int64_t a = c; a <= box; a += jobs)
            for (std::int64_t b = a; b <= box; ++b)
                for (std::int64_t d = b; d <= box; ++d)
                    if (engine_value(Kind::eta, {a, b, d}, ev) == target) parts[c].push_back({a, b, d});
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned c = 0; c < jobs; ++c) threads.emplace_back(work, c);
        for (auto& t : threads) t.join();
    }
    std::vector<Triple> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rscorr
