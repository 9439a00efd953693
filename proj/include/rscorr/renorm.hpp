#pragma once

// Symbolic renormalisation equations. Splitting the averaging index as
// i = 4j + s and applying w_{4m+l} = w_m (l in {0,1}), (-1)^{m+l} w_m
// (l in {2,3}) expresses any correlation at offsets 4m_k + r_k through
// correlations at offsets m_k or m_k + 1.

#include "rscorr/query.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rscorr {

/// One branch s of the split sum:
///   sign * (-1)^{sum of m_k over parity_mask} * target(m_1 + carries[0], ...).
struct RenormTerm {
    int sign = 1;
    std::uint64_t parity_mask = 0;  // bit k-1 stands for m_k
    Kind target = Kind::eta;
    std::vector<std::uint8_t> carries;  // one per offset slot, each 0 or 1
};

/// LHS(4m_1 + r_1, ..., 4m_{n-1} + r_{n-1}) = 1/4 * sum of terms[s], s = 0..3.
struct RenormEquation {
    Kind lhs = Kind::eta;
    std::vector<std::uint8_t> residues;
    std::array<RenormTerm, 4> terms;
};

inline RenormEquation derive_renorm_equation(Kind lhs, std::span<const std::uint8_t> residues) {
    if (residues.size() > 63) throw std::invalid_argument("too many offset slots");
    RenormEquation eq;
    eq.lhs = lhs;
    eq.residues.assign(residues.begin(), residues.end());
    for (unsigned s = 0; s < 4; ++s) {
        RenormTerm t;
        t.carries.resize(residues.size());
        int flips = 0;
        // base point: residue s, carry 0, quotient 0
        if (s >= 2) {
            ++flips;
            t.sign *= parity_sign(s);
        }
        for (std::size_t k = 0; k < residues.size(); ++k) {
            if (residues[k] > 3) throw std::invalid_argument("residue outside 0..3");
            const unsigned v = s + residues[k];
            const unsigned carry = v / 4, letter = v % 4;
            t.carries[k] = static_cast<std::uint8_t>(carry);
            if (letter >= 2) {
                ++flips;
                t.sign *= parity_sign(carry + letter);
                t.parity_mask ^= std::uint64_t{1} << k;
            }
        }
        // an odd number of (-1)^j factors turns the average into a signed one
        t.target = (flips & 1) != 0 ? Kind::theta : Kind::eta;
        if (lhs == Kind::theta) t.sign *= parity_sign(s);
        eq.terms[s] = std::move(t);
    }
    return eq;
}

/// Equation with like terms combined: for each target (kind, carries) a
/// polynomial in the parity characters (-1)^{m_k}, integer coefficients over 4.
struct CollectedEquation {
    using Target = std::pair<Kind, std::vector<std::uint8_t>>;
    using Polynomial = std::map<std::uint64_t, int>;

    Kind lhs = Kind::eta;
    std::vector<std::uint8_t> residues;
    std::map<Target, Polynomial> terms;

    void add(const Target& target, std::uint64_t mask, int coefficient) {
        auto& poly = terms[target];
        if ((poly[mask] += coefficient) == 0) poly.erase(mask);
        if (poly.empty()) terms.erase(target);
    }

    friend bool operator==(const CollectedEquation&, const CollectedEquation&) = default;

    std::string to_string() const;
};

inline CollectedEquation collect(const RenormEquation& eq) {
    CollectedEquation out;
    out.lhs = eq.lhs;
    out.residues = eq.residues;
    for (const auto& t : eq.terms) out.add({t.target, t.carries}, t.parity_mask, t.sign);
    return out;
}

namespace detail {

inline std::string parity_label(std::uint64_t mask) {
    std::string s;
    for (unsigned k = 0; k < 64; ++k) {
        if (!((mask >> k) & 1U)) continue;
        if (!s.empty()) s += "+";
        s += "m" + std::to_string(k + 1);
    }
    return s;
}

}  // namespace detail

inline std::string CollectedEquation::to_string() const {
    std::string s(kind_name(lhs));
    s += "(";
    for (std::size_t k = 0; k < residues.size(); ++k) {
        if (k) s += ",";
        s += "4m" + std::to_string(k + 1) + "+" + std::to_string(residues[k]);
    }
    s += ") = 1/4 [";
    bool first = true;
    for (const auto& [target, poly] : terms) {
        s += first ? " " : " + ";
        first = false;
        s += "(";
        bool first_mono = true;
        for (const auto& [mask, c] : poly) {
            if (!first_mono) s += c < 0 ? " - " : " + ";
            else if (c < 0) s += "-";
            first_mono = false;
            const int a = c < 0 ? -c : c;
            if (mask == 0) {
                s += std::to_string(a);
            } else {
                if (a != 1) s += std::to_string(a);
                s += "(-1)^(" + detail::parity_label(mask) + ")";
            }
        }
        s += ")";
        s += kind_name(target.first);
        s += "(";
        for (std::size_t k = 0; k < target.second.size(); ++k) {
            if (k) s += ",";
            s += "m" + std::to_string(k + 1);
            if (target.second[k]) s += "+1";
        }
        s += ")";
    }
    return s + " ]";
}

/// A renormalisation term evaluated at concrete quotients: sign * kind<positions>.
struct ConcreteTerm {
    int sign = 1;
    CorrelationQuery target;
};

/// Instantiates `eq` at quotients m_k (one per offset slot).
inline std::array<ConcreteTerm, 4> instantiate(const RenormEquation& eq, std::span<const std::int64_t> quotients) {
    if (quotients.size() != eq.residues.size()) throw std::invalid_argument("quotient count mismatch");
    std::array<ConcreteTerm, 4> out;
    for (std::size_t s = 0; s < 4; ++s) {
        const RenormTerm& t = eq.terms[s];
        ConcreteTerm c;
        c.sign = t.sign;
        c.target.kind = t.target;
        c.target.positions.reserve(quotients.size() + 1);
        c.target.positions.push_back(0);
        for (std::size_t k = 0; k < quotients.size(); ++k) {
            if ((t.parity_mask >> k) & 1U) c.sign *= parity_sign(quotients[k]);
            c.target.positions.push_back(quotients[k] + t.carries[k]);
        }
        out[s] = std::move(c);
    }
    return out;
}

/// Floor division and residue for non-negative offsets.
inline void split_offsets(std::span<const std::int64_t> offsets, std::vector<std::uint8_t>& residues,
                          std::vector<std::int64_t>& quotients) {
    residues.resize(offsets.size());
    quotients.resize(offsets.size());
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        if (offsets[k] < 0) throw std::invalid_argument("renormalisation needs non-negative offsets");
        residues[k] = static_cast<std::uint8_t>(offsets[k] & 3);
        quotients[k] = offsets[k] >> 2;
    }
}

}  // namespace rscorr
