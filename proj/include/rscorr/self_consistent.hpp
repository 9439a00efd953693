#pragma once

// The finite part of the renormalisation system: equations whose arguments
// all lie in {0,1}. It closes on itself and, with eta^{(2)}(0) = 1, pins
// down every hypercube value.

#include "rscorr/dyadic.hpp"
#include "rscorr/linear_solve.hpp"
#include "rscorr/query.hpp"
#include "rscorr/renorm.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace rscorr {

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Unknown: kind, point count and number of points at position 1 (the rest
// sit at 0). Position multisets {1,...,1} are translated onto {0,...,0}.
struct HypercubeUnknown {
    Kind kind;
    std::size_t points;
    std::size_t ones;
    auto operator<=>(const HypercubeUnknown&) const = default;
};

inline CorrelationQuery hypercube_query(const HypercubeUnknown& u) {
    CorrelationQuery q{u.kind, std::vector<std::int64_t>(u.points, 0)};
    for (std::size_t i = u.points - u.ones; i < u.points; ++i) q.positions[i] = 1;
    return q;
}

// Maps a multiset over {0,1} to its unknown and the translation sign.
inline std::pair<HypercubeUnknown, int> classify_hypercube(Kind kind, std::size_t points, std::size_t ones) {
    if (ones == points) return {{kind, points, 0}, kind == Kind::theta ? -1 : 1};
    return {{kind, points, ones}, 1};
}

}  // namespace detail

/// Solves the self-consistent system for n points together with the
/// systems for n-2, n-4, ... (down to 2 or 3 points), linked by
/// pairwise cancellation. Returns every unknown as canonical-form query
/// (positions multiset over {0,1}, not reduced) mapped to its value.
inline std::map<CorrelationQuery, Rational> solve_self_consistent(std::size_t n) {
    if (n < 2) throw std::invalid_argument("self-consistent system needs n >= 2");

    std::vector<detail::HypercubeUnknown> unknowns;
    std::map<detail::HypercubeUnknown, std::size_t> index;
    for (std::size_t pts = (n % 2 == 0 ? 2 : 3); pts <= n; pts += 2)
        for (Kind kind : {Kind::eta, Kind::theta})
            for (std::size_t ones = 0; ones < pts; ++ones) {
                index[{kind, pts, ones}] = unknowns.size();
                unknowns.push_back({kind, pts, ones});
            }

    const std::size_t cols = unknowns.size();
    RationalMatrix system(0, cols);

    // renormalisation equations with all quotients 0
    for (const auto& u : unknowns) {
        std::vector<Rational> row(cols);
        row[index.at(u)] += 1;
        const CorrelationQuery q = detail::hypercube_query(u);
        std::vector<std::uint8_t> residues(q.positions.begin() + 1, q.positions.end());
        const RenormEquation eq = derive_renorm_equation(u.kind, residues);
        const std::vector<std::int64_t> zeros(residues.size(), 0);
        for (const auto& term : instantiate(eq, zeros)) {
            std::size_t ones = 0;
            for (auto p : term.target.positions) ones += static_cast<std::size_t>(p);
            const auto [target, sign] = detail::classify_hypercube(term.target.kind, u.points, ones);
            row[index.at(target)] -= Rational(term.sign * sign, 4);
        }
        system.append_row(row);
    }

    // cancellation links to the next smaller point count
    for (const auto& u : unknowns) {
        if (u.points < 4) continue;
        std::vector<Rational> row(cols);
        row[index.at(u)] += 1;
        const std::size_t zeros = u.points - u.ones;
        const auto [target, sign] = zeros >= 2 ? detail::classify_hypercube(u.kind, u.points - 2, u.ones)
                                               : detail::classify_hypercube(u.kind, u.points - 2, u.ones - 2);
        row[index.at(target)] -= sign;
        system.append_row(row);
    }

    const std::size_t free_dims = nullity(system);
    const bool even = n % 2 == 0;
    if (free_dims > 1 || (!even && free_dims > 0))
        throw SingularSystemError("self-consistent system has a solution space of dimension " +
                                  std::to_string(free_dims));

    std::vector<Rational> rhs(system.rows(), Rational(0));
    if (even) {
        // eta^{(2)}(0) = 1, read off directly from the definition
        std::vector<Rational> norm(cols);
        norm[index.at({Kind::eta, 2, 0})] = 1;
        system.append_row(norm);
        rhs.push_back(1);
    }
    const auto solution = solve_unique(system, rhs);
    if (!solution) throw SingularSystemError("self-consistent system is inconsistent with the normalization");

    std::map<CorrelationQuery, Rational> table;
    for (std::size_t i = 0; i < cols; ++i) table.emplace(detail::hypercube_query(unknowns[i]), (*solution)[i]);
    return table;
}

}  // namespace rscorr
