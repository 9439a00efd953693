#pragma once

#include "rscorr/dyadic.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rscorr {

/// eta: plain Birkhoff average of the product; theta: same with (-1)^i.
enum class Kind : std::uint8_t { eta, theta };

constexpr std::string_view kind_name(Kind k) noexcept { return k == Kind::eta ? "eta" : "theta"; }

inline Kind parse_kind(std::string_view s) {
    if (s == "eta") return Kind::eta;
    if (s == "theta") return Kind::theta;
    throw std::invalid_argument("unknown correlation kind: " + std::string(s));
}

/// A correlation over the full point set <0, m_1, ..., m_{n-1}>, so that
/// positions.size() is the number of points n.
struct CorrelationQuery {
    Kind kind = Kind::eta;
    std::vector<std::int64_t> positions;

    /// Query for eta^{(n)}(m_1, ..., m_{n-1}) / theta^{(n)}(...).
    static CorrelationQuery from_offsets(Kind kind, std::span<const std::int64_t> offsets) {
        CorrelationQuery q{kind, {0}};
        q.positions.insert(q.positions.end(), offsets.begin(), offsets.end());
        return q;
    }
    static CorrelationQuery from_offsets(Kind kind, std::initializer_list<std::int64_t> offsets) {
        return from_offsets(kind, std::span<const std::int64_t>(offsets.begin(), offsets.size()));
    }

    std::size_t points() const noexcept { return positions.size(); }

    std::string to_string() const {
        std::string s(kind_name(kind));
        s += "<";
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(positions[i]);
        }
        return s + ">";
    }

    friend bool operator==(const CorrelationQuery&, const CorrelationQuery&) = default;
    friend auto operator<=>(const CorrelationQuery&, const CorrelationQuery&) = default;
};

/// Sorted, distinct positions with minimum 0 and at least two points. The
/// value of the original query is sign * value(query).
struct Canonical {
    CorrelationQuery query;
    int sign = 1;
};

/// The query collapsed to a known constant.
struct Resolved {
    Dyadic value;
};

using CanonicalResult = std::variant<Canonical, Resolved>;

constexpr int parity_sign(std::int64_t v) noexcept { return (v & 1) != 0 ? -1 : 1; }

/// Reduces a query by permutation invariance, pairwise cancellation of
/// repeated positions and translation to minimum 0 (theta picks up
/// (-1)^shift). Zero- and one-point results are resolved directly: an empty
/// product averages to 1 for eta and 0 for theta, a single letter to 0.
inline CanonicalResult canonicalize(CorrelationQuery q) {
    auto& p = q.positions;
    std::sort(p.begin(), p.end());

    std::vector<std::int64_t> kept;
    kept.reserve(p.size());
    for (std::size_t i = 0; i < p.size();) {
        if (i + 1 < p.size() && p[i] == p[i + 1]) {
            i += 2;
        } else {
            kept.push_back(p[i]);
            ++i;
        }
    }
    p = std::move(kept);

    if (p.empty()) return Resolved{q.kind == Kind::eta ? Dyadic(1) : Dyadic(0)};
    if (p.size() == 1) return Resolved{Dyadic(0)};

    const std::int64_t shift = p.front();
    for (auto& x : p) x -= shift;
    const int sign = q.kind == Kind::theta ? parity_sign(shift) : 1;
    return Canonical{std::move(q), sign};
}

}  // namespace rscorr
