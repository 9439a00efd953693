#pragma once

// Exact evaluation of eta^{(n)} and theta^{(n)} for the balanced
// Rudin-Shapiro word at arbitrary integer arguments.

#include "rscorr/dyadic.hpp"
#include "rscorr/query.hpp"
#include "rscorr/renorm.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace rscorr {

/// Values on the hypercube {0,1}^{n-1}, r = number of unit offsets:
/// eta is 1 iff n and r are both even, theta vanishes.
constexpr int hypercube_value(Kind kind, std::size_t points, std::size_t ones) noexcept {
    if (kind == Kind::theta) return 0;
    return (points % 2 == 0 && ones % 2 == 0) ? 1 : 0;
}

/// Memoized evaluator. Memo access is guarded so one evaluator can be
/// shared across threads; concurrent misses on one key may compute it twice.
class Evaluator {
public:
    Dyadic correlation(const CorrelationQuery& q) {
        auto c = canonicalize(q);
        if (auto* r = std::get_if<Resolved>(&c)) return r->value;
        auto& canon = std::get<Canonical>(c);
        Dyadic v = evaluate_canonical(canon.query);
        return canon.sign < 0 ? -v : v;
    }

    Dyadic eta(std::initializer_list<std::int64_t> offsets) {
        return correlation(CorrelationQuery::from_offsets(Kind::eta, offsets));
    }
    Dyadic theta(std::initializer_list<std::int64_t> offsets) {
        return correlation(CorrelationQuery::from_offsets(Kind::theta, offsets));
    }

    std::size_t memo_size() const {
        std::shared_lock lock(mutex_);
        return memo_.size();
    }

    void clear() {
        std::unique_lock lock(mutex_);
        memo_.clear();
        equations_.clear();
    }

private:
    struct KeyHash {
        std::size_t operator()(const CorrelationQuery& q) const noexcept {
            std::size_t h = static_cast<std::size_t>(q.kind) * 0x9E3779B97F4A7C15ULL;
            for (auto p : q.positions) h = (h ^ static_cast<std::size_t>(p)) * 0x100000001B3ULL + (h >> 29);
            return h;
        }
    };

    // q is canonical: sorted, distinct, minimum 0, at least two points
    Dyadic evaluate_canonical(const CorrelationQuery& q) {
        const auto& p = q.positions;
        if (p.back() <= 1) return Dyadic(hypercube_value(q.kind, p.size(), p.size() - 1));

        {
            std::shared_lock lock(mutex_);
            if (auto it = memo_.find(q); it != memo_.end()) return it->second;
        }

        std::vector<std::uint8_t> residues;
        std::vector<std::int64_t> quotients;
        split_offsets(std::span(p).subspan(1), residues, quotients);
        const RenormEquation eq = equation(q.kind, residues);

        Dyadic sum;
        for (const auto& term : instantiate(eq, quotients)) {
            const Dyadic v = correlation(term.target);
            sum += term.sign < 0 ? -v : v;
        }
        Dyadic value = sum.halved(2);

        std::unique_lock lock(mutex_);
        memo_.emplace(q, value);
        return value;
    }

    RenormEquation equation(Kind kind, const std::vector<std::uint8_t>& residues) {
        std::pair<Kind, std::vector<std::uint8_t>> key{kind, residues};
        {
            std::shared_lock lock(mutex_);
            if (auto it = equations_.find(key); it != equations_.end()) return it->second;
        }
        RenormEquation eq = derive_renorm_equation(kind, residues);
        std::unique_lock lock(mutex_);
        equations_.emplace(std::move(key), eq);
        return eq;
    }

    mutable std::shared_mutex mutex_;
    std::unordered_map<CorrelationQuery, Dyadic, KeyHash> memo_;
    std::map<std::pair<Kind, std::vector<std::uint8_t>>, RenormEquation> equations_;
};

inline Evaluator& default_evaluator() {
    static Evaluator ev;
    return ev;
}

inline Dyadic correlation(const CorrelationQuery& q) { return default_evaluator().correlation(q); }

/// f-weighted correlation over positions {0, offsets...}. Writing
/// f(x) = E + h x with E = (f(1)+f(-1))/2, h = (f(1)-f(-1))/2 and expanding
/// the product gives sum over subsets S of E^{n-|S|} h^{|S|} eta(S).
inline Rational weighted_correlation(Evaluator& ev, std::span<const std::int64_t> offsets, const Rational& f_plus,
                                     const Rational& f_minus) {
    std::vector<std::int64_t> positions{0};
    positions.insert(positions.end(), offsets.begin(), offsets.end());
    const std::size_t n = positions.size();
    if (n > 24) throw std::invalid_argument("weighted correlation supports at most 24 points");
    const Rational mean = (f_plus + f_minus) / 2;
    const Rational half_diff = (f_plus - f_minus) / 2;

    std::vector<Rational> mean_pow(n + 1, Rational(1)), diff_pow(n + 1, Rational(1));
    for (std::size_t i = 1; i <= n; ++i) {
        mean_pow[i] = mean_pow[i - 1] * mean;
        diff_pow[i] = diff_pow[i - 1] * half_diff;
    }

    Rational total = 0;
    CorrelationQuery sub{Kind::eta, {}};
    for (std::uint32_t subset = 0; subset < (1U << n); ++subset) {
        const auto size = static_cast<std::size_t>(std::popcount(subset));
        if (diff_pow[size].is_zero() || mean_pow[n - size].is_zero()) continue;
        sub.positions.clear();
        for (std::size_t i = 0; i < n; ++i)
            if ((subset >> i) & 1U) sub.positions.push_back(positions[i]);
        const Dyadic v = ev.correlation(sub);
        if (v.is_zero()) continue;
        total += mean_pow[n - size] * diff_pow[size] * v.to_rational();
    }
    return total;
}

inline Rational weighted_correlation(std::span<const std::int64_t> offsets, const Rational& f_plus,
                                     const Rational& f_minus) {
    return weighted_correlation(default_evaluator(), offsets, f_plus, f_minus);
}

}  // namespace rscorr
