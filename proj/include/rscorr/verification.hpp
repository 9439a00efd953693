#pragma once

// Verification suites shared by the CLI `verify` command and the acceptance
// runner. Each suite returns a CheckResult; tolerances and runtime budgets
// are fixed below.

#include "rscorr/appendix.hpp"
#include "rscorr/engine.hpp"
#include "rscorr/level_sets.hpp"
#include "rscorr/matrix.hpp"
#include "rscorr/oracle.hpp"
#include "rscorr/self_consistent.hpp"
#include "rscorr/sequences.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace rscorr {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;  // 0: no runtime bound
};

namespace limits {
inline constexpr double autocorrelation_budget = 1.0;
inline constexpr double odd_vanishing_budget = 5.0;
inline constexpr double families_budget = 30.0;
inline constexpr double oracle_budget = 60.0;
inline constexpr double averages_budget = 120.0;

inline constexpr std::int64_t oracle_window = std::int64_t{1} << 22;
inline constexpr std::size_t oracle_batch = 50;
inline constexpr std::int64_t oracle_max_offset = 64;
inline constexpr double oracle_tolerance_floor = 1.0 / 2048.0;  // 2^-11 = N^{-1/2}
inline constexpr double oracle_tolerance_ceiling = 1e-2;
inline constexpr double oracle_fail_factor = 3.0;
inline constexpr std::uint64_t oracle_holdout_seed = 0x5EEDC0DEULL;
}  // namespace limits

inline constexpr std::uint64_t default_seed = 20240917ULL;

namespace detail {

template <class F>
CheckResult timed(std::string name, double budget, F body) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r = body();
    r.name = std::move(name);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.budget_seconds = budget;
    if (budget > 0 && r.seconds >= budget) {
        r.passed = false;
        r.detail += "; over runtime budget";
    }
    return r;
}

inline std::vector<std::int64_t> random_offsets(std::mt19937_64& rng, std::size_t count, std::int64_t lo,
                                                std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> d(lo, hi);
    std::vector<std::int64_t> out(count);
    for (auto& x : out) x = d(rng);
    return out;
}

}  // namespace detail

/// eta^{(2)}(m) = delta_{m,0} for |m| <= 256.
inline CheckResult check_autocorrelation(Evaluator& ev) {
    return detail::timed("autocorrelation", limits::autocorrelation_budget, [&] {
        std::size_t bad = 0;
        for (std::int64_t m = -256; m <= 256; ++m)
            if (ev.eta({m}) != Dyadic(m == 0 ? 1 : 0)) ++bad;
        return CheckResult{{}, bad == 0, std::to_string(513 - bad) + "/513 exact"};
    });
}

/// Three-point values vanish on [-32,32]^2 and five-point ones on random points.
inline CheckResult check_odd_vanishing(Evaluator& ev, std::uint64_t seed = default_seed) {
    return detail::timed("odd-point vanishing", limits::odd_vanishing_budget, [&] {
        std::size_t checked = 0, bad = 0;
        for (std::int64_t a = -32; a <= 32; ++a)
            for (std::int64_t b = -32; b <= 32; ++b) {
                checked += 2;
                if (!ev.eta({a, b}).is_zero()) ++bad;
                if (!ev.theta({a, b}).is_zero()) ++bad;
            }
        std::mt19937_64 rng(seed);
        for (int i = 0; i < 200; ++i) {
            const auto off = detail::random_offsets(rng, 4, 0, 1000);
            ++checked;
            if (!ev.correlation(CorrelationQuery::from_offsets(Kind::eta, off)).is_zero()) ++bad;
        }
        return CheckResult{{}, bad == 0, std::to_string(checked) + " values, " + std::to_string(bad) + " nonzero"};
    });
}

/// Engine values on {0,1}^{n-1} for n = 2..6 against the closed hypercube rule.
inline CheckResult check_hypercube(Evaluator& ev) {
    return detail::timed("hypercube values", 0, [&] {
        std::size_t checked = 0, bad = 0;
        for (std::size_t n = 2; n <= 6; ++n)
            for (std::uint32_t bits = 0; bits < (1U << (n - 1)); ++bits) {
                std::vector<std::int64_t> off(n - 1);
                std::size_t ones = 0;
                for (std::size_t k = 0; k + 1 < n; ++k) ones += (off[k] = (bits >> k) & 1U);
                const bool one = n % 2 == 0 && ones % 2 == 0;
                checked += 2;
                if (ev.correlation(CorrelationQuery::from_offsets(Kind::eta, off)) != Dyadic(one ? 1 : 0)) ++bad;
                if (!ev.correlation(CorrelationQuery::from_offsets(Kind::theta, off)).is_zero()) ++bad;
            }
        return CheckResult{{}, bad == 0, std::to_string(checked) + " values, " + std::to_string(bad) + " mismatches"};
    });
}

/// The linear system on hypercube queries reproduces the same table.
inline CheckResult check_self_consistent(Evaluator& ev) {
    return detail::timed("self-consistent solver", 0, [&] {
        std::ostringstream os;
        bool ok = true;
        for (std::size_t n = 2; n <= 4; ++n) {
            std::size_t bad = 0;
            bool all_zero = true;
            const auto table = solve_self_consistent(n);
            for (const auto& [q, v] : table) {
                if (v != 0) all_zero = false;
                if (ev.correlation(q).to_rational() != v) ++bad;
            }
            if (n == 3 && !all_zero) ++bad;
            ok = ok && bad == 0 && !table.empty();
            os << "n=" << n << ": " << table.size() << " unknowns, " << bad << " mismatches; ";
        }
        return CheckResult{{}, ok, os.str()};
    });
}

/// Derived renormalisation equations against the 60 stored printed equations.
inline CheckResult check_appendix() {
    return detail::timed("appendix equations", 0, [] {
        const auto rep = verify_appendix_tables();
        std::string detail = std::to_string(rep.checked) + " equations, " + std::to_string(rep.mismatches.size()) +
                             " mismatches";
        for (const auto& m : rep.mismatches) detail += "; differs: " + std::string(m.fixture.substr(0, m.fixture.find('=')));
        return CheckResult{{}, rep.ok() && rep.checked == 60, detail};
    });
}

/// Printed closed forms against the engine over m <= 4, n <= 8, |l| <= 16.
inline CheckResult check_level_set_families(Evaluator& ev) {
    return detail::timed("level-set families", limits::families_budget, [&] {
        std::size_t checked = 0, bad = 0;
        std::map<std::string, std::size_t> classes;
        for (auto f : all_families)
            for (int m = 0; m <= 4; ++m)
                for (int n = family_min_n(f); n <= 8; ++n)
                    for (std::int64_t l = -16; l <= 16; ++l)
                        for (auto kind : {Kind::eta, Kind::theta}) {
                            Dyadic expected;
                            try {
                                expected = closed_form(f, kind, m, n, l);
                            } catch (const std::domain_error&) {
                                continue;
                            }
                            ++checked;
                            if (engine_value(kind, family_point(f, m, n, l), ev) != expected) {
                                ++bad;
                                ++classes[std::string(family_name(f)) + " " + std::string(kind_name(kind)) +
                                          " m=" + std::to_string(m)];
                            }
                        }
        std::string detail = std::to_string(checked) + " comparisons, " + std::to_string(bad) + " mismatches";
        for (const auto& [c, k] : classes) detail += "; " + c + " x" + std::to_string(k);
        return CheckResult{{}, bad == 0, detail};
    });
}

/// eta^{(4)}(1,k,k+1) equals the induced autocorrelation for k <= 1024.
inline CheckResult check_coincidence(Evaluator& ev) {
    return detail::timed("induced coincidence", 0, [&] {
        std::size_t bad = 0;
        for (std::int64_t k = 0; k <= 1024; ++k)
            if (ev.eta({1, k, k + 1}) != eta2_induced(k)) ++bad;
        return CheckResult{{}, bad == 0, "1025 lags, " + std::to_string(bad) + " mismatches"};
    });
}

/// Shift identities, closed form of J^k and the block-matrix anchor check.
inline CheckResult check_matrices(Evaluator& ev, std::uint64_t seed = default_seed) {
    return detail::timed("matrix formalism", 0, [&] {
        std::ostringstream os;
        bool ok = true;
        const auto s1 = shift_matrices(1, 7);
        const IntMatrix8 zero{};
        const bool shifts = power(s1.S, 4) == identity8() && power(s1.R, 8) == zero && power(s1.L, 2) == zero;
        ok = ok && shifts;
        os << "shift identities " << (shifts ? "hold" : "FAIL");

        std::size_t j_bad = 0;
        const auto& blocks = building_blocks();
        for (const auto* family : {&blocks.M, &blocks.N})
            for (const auto& x : *family)
                for (unsigned k = 1; k <= 7; ++k)
                    if (j_transform(x, k) != j_transform_closed(x, k)) ++j_bad;
        ok = ok && j_bad == 0;
        os << "; J^k closed form " << 56 - j_bad << "/56";

        const auto report_line = [&](const ConventionReport& rep) {
            const auto w = rep.winner();
            os << "; n=" << rep.n << " winner " << (w ? std::string(anchor_name(*w)) : std::string("none"));
            for (const auto& c : rep.candidates)
                os << " [" << anchor_name(c.anchor) << ": " << c.checked << " rows, " << c.value_mismatches
                   << " value / " << c.structure_mismatches << " structure mismatches]";
            return w;
        };

        std::vector<std::vector<std::int64_t>> pts2;
        for (std::int64_t m = 0; m <= 32; ++m) pts2.push_back({m});
        std::vector<std::vector<int>> res2;
        for (int r = 0; r < 8; ++r) res2.push_back({r});
        const auto w2 = report_line(verify_block_convention(2, pts2, res2, ev));

        std::vector<std::vector<std::int64_t>> pts3;
        for (std::int64_t a = 0; a <= 8; ++a)
            for (std::int64_t b = 0; b <= 8; ++b) pts3.push_back({a, b});
        std::vector<std::vector<int>> res3;
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) res3.push_back({a, b});
        const auto w3 = report_line(verify_block_convention(3, pts3, res3, ev));

        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::int64_t> dm(0, 8);
        std::uniform_int_distribution<int> dr(0, 7);
        ConventionReport rep4;
        rep4.n = 4;
        rep4.candidates = {{Anchor::m}, {Anchor::two_m}};
        for (int i = 0; i < 20; ++i) {
            const std::vector<std::int64_t> m{dm(rng), dm(rng), dm(rng)};
            const std::vector<int> r{dr(rng), dr(rng), dr(rng)};
            const auto one = verify_block_convention(4, {m}, {r}, ev);
            for (std::size_t c = 0; c < 2; ++c) {
                rep4.candidates[c].checked += one.candidates[c].checked;
                rep4.candidates[c].value_mismatches += one.candidates[c].value_mismatches;
                rep4.candidates[c].structure_mismatches += one.candidates[c].structure_mismatches;
            }
        }
        const auto w4 = report_line(rep4);
        ok = ok && w2 && w3 && w4 && *w2 == *w3 && *w3 == *w4;
        return CheckResult{{}, ok, os.str()};
    });
}

struct OracleQuery {
    Kind kind;
    std::vector<std::int64_t> offsets;  // 0 < m1 < m2 < m3
};

inline std::vector<OracleQuery> random_canonical_queries(std::uint64_t seed, std::size_t count,
                                                         std::int64_t max_offset) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> d(1, max_offset);
    std::vector<OracleQuery> out;
    while (out.size() < count) {
        std::vector<std::int64_t> off{d(rng), d(rng), d(rng)};
        std::sort(off.begin(), off.end());
        if (off[0] == off[1] || off[1] == off[2]) continue;
        out.push_back({(rng() & 1) ? Kind::theta : Kind::eta, off});
    }
    return out;
}

/// Empirical averages at N = 2^22 against exact values, with the tolerance
/// taken from a held-out batch (floor 2^-11).
inline CheckResult check_oracle_agreement(Evaluator& ev, std::uint64_t seed = default_seed, unsigned jobs = 1) {
    return detail::timed("oracle agreement", limits::oracle_budget, [&] {
        const std::int64_t N = limits::oracle_window;
        const SignWord word = rs_sign_prefix(static_cast<std::size_t>(N + limits::oracle_max_offset));
        const auto max_dev = [&](const std::vector<OracleQuery>& batch) {
            double worst = 0.0;
            for (const auto& q : batch) {
                const auto full = CorrelationQuery::from_offsets(q.kind, q.offsets);
                const auto est = empirical_correlation(q.kind, full.positions, N, word, jobs);
                worst = std::max(worst, std::abs(est.value - ev.correlation(full).to_double()));
            }
            return worst;
        };
        const std::uint64_t test_seed = seed == limits::oracle_holdout_seed ? seed + 1 : seed;
        const double held = max_dev(random_canonical_queries(limits::oracle_holdout_seed, limits::oracle_batch,
                                                             limits::oracle_max_offset));
        const double tol = std::max(held, limits::oracle_tolerance_floor);
        const double test =
            max_dev(random_canonical_queries(test_seed, limits::oracle_batch, limits::oracle_max_offset));
        std::ostringstream os;
        os << "held-out max dev " << held << ", tolerance " << tol << ", test max dev " << test << " (limit "
           << limits::oracle_fail_factor * tol << ")";
        const bool ok = tol <= limits::oracle_tolerance_ceiling && test <= limits::oracle_fail_factor * tol;
        return CheckResult{{}, ok, os.str()};
    });
}

/// Exact cube averages for N in {1,2,4,16,64}; Sigma(1) = 1 and the sum
/// Sigma + Theta decreases from N to 4N.
inline CheckResult check_averages(Evaluator& ev, unsigned jobs = 1) {
    return detail::timed("cube averages", limits::averages_budget, [&] {
        std::map<std::int64_t, AverageReport> reps;
        for (std::int64_t N : {1, 2, 4, 16, 64}) reps[N] = averages(N, ev, jobs);
        std::ostringstream os;
        bool ok = reps[1].sigma == 1;
        os << "Sigma(1) = " << to_string(reps[1].sigma);
        for (std::int64_t N : {4, 16}) {
            const Rational a = reps[N].sigma + reps[N].theta_sum;
            const Rational b = reps[4 * N].sigma + reps[4 * N].theta_sum;
            ok = ok && b < a;
            os << "; (S+T)(" << 4 * N << ")/(S+T)(" << N << ") = " << to_double(b / a);
        }
        os << " vs 15/16 = 0.9375";
        return CheckResult{{}, ok, os.str()};
    });
}

/// Three routes each for the RS and induced words on 4^7 letters, plus the
/// letter recursion below 2^20.
inline CheckResult check_sequences() {
    return detail::timed("sequence cross-checks", 0, [] {
        const std::size_t len = std::size_t{1} << 14;
        const auto a = rs_binary_word(len), b = rs_binary_word_nonlocal(len), c = rs_sign_prefix(len);
        const auto x = induced_word(len), y = induced_word_via_chi(len), z = induced_word_nonlocal(len);
        const bool rs_ok = a == b && b == c;
        const bool induced_ok = x == y && y == z;
        std::size_t bad = 0;
        for (std::uint64_t n = 0; n < (std::uint64_t{1} << 20); ++n) {
            const std::uint64_t m = n >> 2, l = n & 3;
            const int expect = l < 2 ? rs_letter(m) : (((m + l) & 1) ? -1 : 1) * rs_letter(m);
            if (rs_letter(n) != expect) ++bad;
        }
        std::string detail = std::string("RS routes ") + (rs_ok ? "agree" : "DIFFER") + ", induced routes " +
                             (induced_ok ? "agree" : "DIFFER") + ", letter recursion " + std::to_string(bad) +
                             " failures";
        return CheckResult{{}, rs_ok && induced_ok && bad == 0, detail};
    });
}

/// Randomized permutation, translation, cancellation and range checks.
inline CheckResult check_symmetry(Evaluator& ev, std::uint64_t seed = default_seed, std::size_t count = 500) {
    return detail::timed("symmetry properties", 0, [&] {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> dn(2, 6);
        std::uniform_int_distribution<std::int64_t> dt(-100, 100);
        std::size_t bad = 0;
        for (std::size_t i = 0; i < count; ++i) {
            const Kind kind = (rng() & 1) ? Kind::theta : Kind::eta;
            const auto q = CorrelationQuery::from_offsets(kind, detail::random_offsets(rng, dn(rng) - 1, -100, 100));
            const Dyadic v = ev.correlation(q);
            if (v.abs() > Dyadic(1)) ++bad;

            auto perm = q;
            std::shuffle(perm.positions.begin(), perm.positions.end(), rng);
            if (ev.correlation(perm) != v) ++bad;

            const std::int64_t t = dt(rng);
            auto moved = q;
            for (auto& p : moved.positions) p += t;
            const Dyadic expect = (kind == Kind::theta && (t & 1)) ? -v : v;
            if (ev.correlation(moved) != expect) ++bad;

            auto doubled = q;
            const std::int64_t x = dt(rng);
            std::uniform_int_distribution<std::size_t> at(0, doubled.positions.size());
            doubled.positions.insert(doubled.positions.begin() + static_cast<std::ptrdiff_t>(at(rng)), x);
            doubled.positions.insert(doubled.positions.begin() + static_cast<std::ptrdiff_t>(at(rng)), x);
            if (ev.correlation(doubled) != v) ++bad;
        }
        return CheckResult{{}, bad == 0,
                           std::to_string(count) + " queries, " + std::to_string(bad) + " property violations"};
    });
}

/// The twelve acceptance checks in order, each with a fresh evaluator.
inline std::vector<std::function<CheckResult()>> acceptance_suite(std::uint64_t seed = default_seed,
                                                                  unsigned jobs = 1) {
    return {
        [] { Evaluator ev; return check_autocorrelation(ev); },
        [seed] { Evaluator ev; return check_odd_vanishing(ev, seed); },
        [] { Evaluator ev; return check_hypercube(ev); },
        [] { Evaluator ev; return check_self_consistent(ev); },
        [] { return check_appendix(); },
        [] { Evaluator ev; return check_level_set_families(ev); },
        [] { Evaluator ev; return check_coincidence(ev); },
        [seed] { Evaluator ev; return check_matrices(ev, seed); },
        [seed, jobs] { Evaluator ev; return check_oracle_agreement(ev, seed, jobs); },
        [jobs] { Evaluator ev; return check_averages(ev, jobs); },
        [] { return check_sequences(); },
        [seed] { Evaluator ev; return check_symmetry(ev, seed); },
    };
}

}  // namespace rscorr
