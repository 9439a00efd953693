#pragma once

// Test-only helpers: seeded generators and an exact reference evaluator that
// works from the letter recursion directly, sharing no code with the engine.

#include "rscorr/rscorr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace testsupport {

using rscorr::Rational;

inline constexpr std::uint64_t kSeed = 0xC0FFEE1234ULL;

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline std::vector<std::int64_t> offsets(std::mt19937_64& rng, std::size_t count, std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> v(count);
    for (auto& x : v) x = uniform(rng, lo, hi);
    return v;
}

inline rscorr::Dyadic random_dyadic(std::mt19937_64& rng) {
    return rscorr::Dyadic::normalize(uniform(rng, -1000, 1000), uniform(rng, 0, 12));
}

// Reference values: w_{4j+l} = w_j for l < 2 and (-1)^{j+l} w_j otherwise.
// Splitting i = 4m + s and substituting gives a sum of four averages over m;
// an odd number of flipped letters leaves a (-1)^m behind, i.e. a signed
// average. On positions {0} and {0,1} the split maps the set to itself, so
// those four seeds are read off a long window and rounded to quarters.
class ReferenceOracle {
public:
    ReferenceOracle() {
        const std::int64_t N = std::int64_t{1} << 20;
        for (bool theta : {false, true})
            for (std::vector<std::int64_t> p : {std::vector<std::int64_t>{0}, std::vector<std::int64_t>{0, 1}}) {
                const auto est =
                    rscorr::empirical_correlation(theta ? rscorr::Kind::theta : rscorr::Kind::eta, p, N);
                seeds_[{theta, p}] = Rational(static_cast<long long>(std::lround(est.value * 4)), 4);
            }
    }

    Rational value(bool theta, std::vector<std::int64_t> pos) {
        std::sort(pos.begin(), pos.end());
        std::vector<std::int64_t> kept;
        for (std::size_t i = 0; i < pos.size();) {
            if (i + 1 < pos.size() && pos[i] == pos[i + 1]) {
                i += 2;
            } else {
                kept.push_back(pos[i]);
                ++i;
            }
        }
        if (kept.empty()) return theta ? Rational(0) : Rational(1);
        const std::int64_t shift = kept.front();
        for (auto& p : kept) p -= shift;
        const int sign = (theta && (shift & 1)) ? -1 : 1;
        if (kept.back() <= 1) return sign * seeds_.at({theta, kept});

        const auto key = std::make_pair(theta, kept);
        if (auto it = memo_.find(key); it != memo_.end()) return sign * it->second;
        Rational sum = 0;
        for (std::int64_t s = 0; s < 4; ++s) {
            int coefficient = (theta && (s & 1)) ? -1 : 1;
            int flips = 0;
            std::vector<std::int64_t> next;
            for (auto p : kept) {
                const std::int64_t q = (s + p) / 4, l = (s + p) % 4;
                next.push_back(q);
                if (l >= 2) {
                    ++flips;
                    if ((q + l) & 1) coefficient = -coefficient;
                }
            }
            sum += coefficient * value(flips % 2 == 1, next);
        }
        const Rational v = sum / 4;
        memo_.emplace(key, v);
        return sign * v;
    }

    Rational value(const rscorr::CorrelationQuery& q) { return value(q.kind == rscorr::Kind::theta, q.positions); }

private:
    std::map<std::pair<bool, std::vector<std::int64_t>>, Rational> seeds_;
    std::map<std::pair<bool, std::vector<std::int64_t>>, Rational> memo_;
};

inline ReferenceOracle& reference() {
    static ReferenceOracle r;
    return r;
}

}  // namespace testsupport
