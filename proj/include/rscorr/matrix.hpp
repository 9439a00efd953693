#pragma once

// Matrix form of the renormalisation equations: the eight printed 8x8
// building blocks, the row-shift transform J, and the Kronecker assembly of
// B_(r) acting on stacked (eta, theta) vectors for 2, 3 and 4 points.

#include "rscorr/dyadic.hpp"
#include "rscorr/engine.hpp"
#include "rscorr/query.hpp"
#include "rscorr/renorm.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rscorr {

using IntMatrix8 = std::array<std::array<int, 8>, 8>;

inline IntMatrix8 operator*(const IntMatrix8& a, const IntMatrix8& b) {
    IntMatrix8 c{};
    for (int i = 0; i < 8; ++i)
        for (int k = 0; k < 8; ++k)
            if (a[i][k] != 0)
                for (int j = 0; j < 8; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline IntMatrix8 operator+(const IntMatrix8& a, const IntMatrix8& b) {
    IntMatrix8 c{};
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline IntMatrix8 identity8() {
    IntMatrix8 id{};
    for (int i = 0; i < 8; ++i) id[i][i] = 1;
    return id;
}

inline IntMatrix8 power(const IntMatrix8& x, unsigned k) {
    IntMatrix8 r = identity8();
    for (unsigned i = 0; i < k; ++i) r = r * x;
    return r;
}

inline int matrix_rank(const IntMatrix8& x) {
    std::array<std::array<Rational, 8>, 8> a;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) a[i][j] = x[i][j];
    int rank = 0;
    for (int col = 0; col < 8 && rank < 8; ++col) {
        int pivot = -1;
        for (int r = rank; r < 8; ++r)
            if (!a[r][col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[pivot], a[rank]);
        for (int r = 0; r < 8; ++r) {
            if (r == rank || a[r][col].is_zero()) continue;
            const Rational f = a[r][col] / a[rank][col];
            for (int j = col; j < 8; ++j) a[r][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

/// Building-block index: kind M or N and a pair (i,j) in {0,1}^2.
enum class BlockFamily { M, N };

struct BuildingBlocks {
    std::array<IntMatrix8, 4> M;  // index 2i+j
    std::array<IntMatrix8, 4> N;

    const IntMatrix8& get(BlockFamily f, unsigned i, unsigned j) const {
        if (i > 1 || j > 1) throw std::out_of_range("building block index");
        return f == BlockFamily::M ? M[2 * i + j] : N[2 * i + j];
    }
};

namespace detail {

// Entries listed as (row, col, value), 0-based; every other entry is zero.
struct Entry {
    int row, col, value;
};

inline IntMatrix8 from_entries(std::initializer_list<Entry> entries) {
    IntMatrix8 m{};
    for (const auto& e : entries) m[e.row][e.col] = e.value;
    return m;
}

}  // namespace detail

inline const BuildingBlocks& building_blocks() {
    using detail::from_entries;
    static const BuildingBlocks blocks{
        {
            from_entries({{1, 0, -1}, {2, 0, 2}, {3, 0, -1}, {5, 1, 1}, {6, 1, -2}, {7, 1, 1}}),  // M00
            from_entries({{1, 0, 1}, {3, 1, -1}, {5, 1, 1}, {7, 2, -1}}),                         // M01
            from_entries({{1, 0, 1}, {3, 0, -1}, {5, 1, -1}, {7, 1, 1}}),                         // M10
            from_entries({{0, 0, 2}, {1, 0, 1}, {3, 1, 1}, {4, 1, 2}, {5, 1, 1}, {7, 2, 1}}),     // M11
        },
        {
            from_entries({{0, 0, 2}, {1, 0, -1}, {3, 1, 1}, {4, 1, -2}, {5, 1, 1}, {7, 2, -1}}),  // N00
            from_entries({{1, 1, -1}, {3, 1, 1}, {5, 2, -1}, {7, 2, 1}}),                         // N01
            from_entries({{1, 0, -1}, {3, 1, -1}, {5, 1, 1}, {7, 2, 1}}),                         // N10
            from_entries({{1, 1, 1}, {2, 1, 2}, {3, 1, 1}, {5, 2, 1}, {6, 2, 2}, {7, 2, 1}}),     // N11
        },
    };
    return blocks;
}

/// Position-weighted checksum over the eight blocks in the order
/// M00, M01, M10, M11, N00, N01, N10, N11.
inline std::int64_t building_blocks_checksum() {
    const auto& b = building_blocks();
    std::int64_t sum = 0, w = 1;
    for (const auto* family : {&b.M, &b.N})
        for (const auto& m : *family)
            for (const auto& row : m)
                for (int v : row) {
                    sum += w * v;
                    w = w % 1009 + 1;
                }
    return sum;
}

struct ShiftMatrices {
    IntMatrix8 R;
    IntMatrix8 L;
    IntMatrix8 S;
};

/// R_m has (R_m)_{i,j} = 1 iff j = i + m, L_n has 1 iff i = j + n, and S is
/// the permutation matrix of (1 3 5 7)(2 4 6 8) with s_{ij} = 1 iff j = pi(i).
inline ShiftMatrices shift_matrices(int m, int n) {
    if (m < 1 || m > 7 || n < 1 || n > 7) throw std::out_of_range("shift index must lie in 1..7");
    ShiftMatrices out{};
    for (int i = 0; i < 8; ++i) {
        if (i + m < 8) out.R[i][i + m] = 1;
        if (i - n >= 0) out.L[i][i - n] = 1;
        out.S[i][(i + 2) % 8] = 1;
    }
    return out;
}

/// J applied k times by iteration, J(X) = R_1 X + L_7 X S.
inline IntMatrix8 j_transform(const IntMatrix8& x, unsigned k) {
    const auto sh = shift_matrices(1, 7);
    IntMatrix8 y = x;
    for (unsigned i = 0; i < k; ++i) y = sh.R * y + sh.L * y * sh.S;
    return y;
}

/// J^k(X) = R_k X + L_{8-k} X S for 1 <= k <= 7, the identity for k = 0.
inline IntMatrix8 j_transform_closed(const IntMatrix8& x, unsigned k) {
    if (k == 0) return x;
    if (k > 7) throw std::out_of_range("closed form of J^k needs k <= 7");
    const auto sh = shift_matrices(static_cast<int>(k), static_cast<int>(8 - k));
    return sh.R * x + sh.L * x * sh.S;
}

/// Dense square matrix numerators / 2^denominator_exponent.
class BlockMatrix {
public:
    BlockMatrix(std::size_t dim, int denominator_exponent)
        : dim_(dim), den_exp_(denominator_exponent), data_(dim * dim, 0) {}

    std::size_t dim() const noexcept { return dim_; }
    int denominator_exponent() const noexcept { return den_exp_; }
    std::int64_t numerator(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    std::int64_t& numerator(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    Dyadic entry(std::size_t i, std::size_t j) const { return Dyadic(numerator(i, j)).halved(den_exp_); }

    /// Nonzero (column, numerator) pairs of one row.
    std::vector<std::pair<std::size_t, std::int64_t>> row(std::size_t i) const {
        std::vector<std::pair<std::size_t, std::int64_t>> out;
        for (std::size_t j = 0; j < dim_; ++j)
            if (const auto v = numerator(i, j); v != 0) out.emplace_back(j, v);
        return out;
    }

    std::vector<Dyadic> apply(const std::vector<Dyadic>& v) const {
        if (v.size() != dim_) throw std::invalid_argument("vector size does not match matrix");
        std::vector<Dyadic> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            Dyadic acc;
            for (std::size_t j = 0; j < dim_; ++j)
                if (const auto a = numerator(i, j); a != 0 && !v[j].is_zero()) acc += Dyadic(a) * v[j];
            out[i] = acc.halved(den_exp_);
        }
        return out;
    }

    friend bool operator==(const BlockMatrix&, const BlockMatrix&) = default;

private:
    std::size_t dim_;
    int den_exp_;
    std::vector<std::int64_t> data_;
};

namespace detail {

// Dense integer matrix used during assembly.
struct IntMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::int64_t> a;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
    std::int64_t& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline IntMatrix from8(const IntMatrix8& x) {
    IntMatrix m(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) m(i, j) = x[i][j];
    return m;
}

inline IntMatrix kron(const IntMatrix& x, const IntMatrix& y) {
    IntMatrix k(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            const auto v = x(i, j);
            if (v == 0) continue;
            for (std::size_t p = 0; p < y.rows; ++p)
                for (std::size_t q = 0; q < y.cols; ++q) k(i * y.rows + p, j * y.cols + q) = v * y(p, q);
        }
    return k;
}

inline void accumulate(IntMatrix& into, const IntMatrix& x) {
    for (std::size_t i = 0; i < x.a.size(); ++i) into.a[i] += x.a[i];
}

// Klein four-group acting on {0,1}^2 by componentwise flips.
inline std::pair<unsigned, unsigned> act(unsigned g, unsigned i, unsigned j) { return {i ^ (g >> 1), j ^ (g & 1)}; }

constexpr unsigned tau = 3;

// [[X_{g(0,0)}, X_{g(0,1)}], [X_{g(1,0)}, X_{g(1,1)}]] with J^k on every block.
inline IntMatrix outer_block(BlockFamily f, unsigned g, unsigned k) {
    IntMatrix out(16, 16);
    for (unsigned bi = 0; bi < 2; ++bi)
        for (unsigned bj = 0; bj < 2; ++bj) {
            const auto [i, j] = act(g, bi, bj);
            const IntMatrix8 x = j_transform(building_blocks().get(f, i, j), k);
            for (std::size_t p = 0; p < 8; ++p)
                for (std::size_t q = 0; q < 8; ++q) out(bi * 8 + p, bj * 8 + q) = x[p][q];
        }
    return out;
}

inline IntMatrix inner_block(BlockFamily f, unsigned i, unsigned j, unsigned k) {
    return from8(j_transform(building_blocks().get(f, i, j), k));
}

}  // namespace detail

/// Assembles B_(r) for n = 2, 3, 4 points from the printed block formulas.
/// Row/column index: kind * 8^{n-1} + sum_k i_k 8^{n-2-k}.
inline BlockMatrix build_block_matrix(int n, const std::vector<int>& r) {
    using namespace detail;
    if (n < 2 || n > 4) throw std::invalid_argument("block matrices are available for n = 2, 3, 4");
    if (r.size() != static_cast<std::size_t>(n - 1)) throw std::invalid_argument("residue vector needs n-1 entries");
    for (int x : r)
        if (x < 0 || x > 7) throw std::invalid_argument("residues must lie in 0..7");
    const auto k = [&](std::size_t i) { return static_cast<unsigned>(r[i]); };

    std::size_t dim = 2;
    for (int i = 1; i < n; ++i) dim *= 8;
    IntMatrix total(dim, dim);

    if (n == 2) {
        accumulate(total, outer_block(BlockFamily::N, 0, k(0)));
        accumulate(total, outer_block(BlockFamily::M, tau, k(0)));
    } else if (n == 3) {
        for (unsigned g = 0; g < 4; ++g) {
            const auto [ni, nj] = act(g ^ tau, 0, 0);
            const auto [mi, mj] = act(g, 0, 0);
            accumulate(total, kron(outer_block(BlockFamily::N, g, k(0)), inner_block(BlockFamily::N, ni, nj, k(1))));
            accumulate(total, kron(outer_block(BlockFamily::M, g, k(0)), inner_block(BlockFamily::M, mi, mj, k(1))));
        }
    } else {
        for (unsigned g = 0; g < 4; ++g)
            for (unsigned i = 0; i < 2; ++i)
                for (unsigned j = 0; j < 2; ++j) {
                    const auto [gi, gj] = act(g, i, j);
                    const auto [ti, tj] = act(tau, i, j);
                    accumulate(total, kron(kron(outer_block(BlockFamily::N, g, k(0)), inner_block(BlockFamily::N, gi, gj, k(1))),
                                           inner_block(BlockFamily::N, i, j, k(2))));
                    accumulate(total, kron(kron(outer_block(BlockFamily::M, g, k(0)), inner_block(BlockFamily::M, gi, gj, k(1))),
                                           inner_block(BlockFamily::M, ti, tj, k(2))));
                }
    }

    BlockMatrix out(dim, n);  // prefactors 1/4, 1/8, 1/16
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out.numerator(i, j) = total(i, j);
    return out;
}

using Mod4Matrix = std::array<std::array<Dyadic, 8>, 8>;

/// The printed 8x8 relation between (eta, theta)(4m + 0..3) and
/// (eta, theta)(m + 0..3) with (-1)^m replaced by +1 (parity 0) or -1.
inline Mod4Matrix build_mod4_matrix(int parity) {
    if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
    const int p = parity == 0 ? 1 : -1;
    const std::array<std::array<int, 8>, 8> four = {{
        {2 + 2 * p, 0, 0, 0, 0, 0, 0, 0},
        {1 - p, 0, 0, 0, p, -1, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0},
        {0, 1 + p, 0, 0, -p, 1, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0},
        {1 - p, 0, 0, 0, -p, 1, 0, 0},
        {0, 0, 0, 0, 2 * p, 2, 0, 0},
        {0, 1 + p, 0, 0, -p, 1, 0, 0},
    }};
    Mod4Matrix m;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) m[i][j] = Dyadic(four[i][j]).halved(2);
    return m;
}

/// Where the right-hand vector of eta(8m + r) = B_(r) v starts.
enum class Anchor { m, two_m };

constexpr std::string_view anchor_name(Anchor a) noexcept { return a == Anchor::m ? "m" : "2m"; }

struct ConventionResult {
    Anchor anchor;
    std::size_t checked = 0;
    std::size_t value_mismatches = 0;
    std::size_t structure_mismatches = 0;
    bool holds() const noexcept { return checked > 0 && value_mismatches == 0 && structure_mismatches == 0; }
};

struct ConventionReport {
    int n = 0;
    std::vector<ConventionResult> candidates;

    /// The unique candidate that holds, if exactly one does.
    std::optional<Anchor> winner() const {
        std::optional<Anchor> w;
        for (const auto& c : candidates) {
            if (!c.holds()) continue;
            if (w) return std::nullopt;
            w = c.anchor;
        }
        return w;
    }
};

namespace detail {

// Correlation of the stacked vector entry `index` at base offsets `base`.
inline CorrelationQuery stacked_query(std::size_t index, const std::vector<std::int64_t>& base) {
    const std::size_t slots = base.size();
    std::size_t block = 1;
    for (std::size_t k = 0; k < slots; ++k) block *= 8;
    CorrelationQuery q{index >= block ? Kind::theta : Kind::eta, {0}};
    std::size_t rest = index % block;
    std::vector<std::int64_t> digits(slots);
    for (std::size_t k = slots; k-- > 0;) {
        digits[k] = static_cast<std::int64_t>(rest % 8);
        rest /= 8;
    }
    for (std::size_t k = 0; k < slots; ++k) q.positions.push_back(base[k] + digits[k]);
    return q;
}

// Row predicted by the renormalisation equation for entry `index` of the
// left vector at 8m + r, expressed against a right vector anchored at
// `anchor`. Returns false if a needed entry falls outside the vector.
inline bool derived_row(std::size_t index, const std::vector<std::int64_t>& lhs_base,
                        const std::vector<std::int64_t>& anchor, int den_exp,
                        std::map<std::size_t, std::int64_t>& row) {
    const CorrelationQuery lhs = stacked_query(index, lhs_base);
    const std::span<const std::int64_t> offsets(lhs.positions.data() + 1, lhs.positions.size() - 1);
    std::vector<std::uint8_t> residues;
    std::vector<std::int64_t> quotients;
    split_offsets(offsets, residues, quotients);
    const auto eq = derive_renorm_equation(lhs.kind, residues);
    const std::int64_t scale = std::int64_t{1} << (den_exp - 2);
    row.clear();
    std::size_t block = 1;
    for (std::size_t k = 0; k < anchor.size(); ++k) block *= 8;
    for (const auto& term : instantiate(eq, quotients)) {
        std::size_t col = term.target.kind == Kind::theta ? block : 0;
        std::size_t weight = block / 8;
        for (std::size_t k = 0; k < anchor.size(); ++k, weight /= 8) {
            const std::int64_t d = term.target.positions[k + 1] - anchor[k];
            if (d < 0 || d > 7) return false;
            col += static_cast<std::size_t>(d) * weight;
        }
        if ((row[col] += term.sign * scale) == 0) row.erase(col);
    }
    return true;
}

}  // namespace detail

/// Checks both anchor conventions for B_(r) against the engine (values) and
/// against rows instantiated from the generic renormalisation equation
/// (structure), for every residue vector r and every base point in `points`.
inline ConventionReport verify_block_convention(int n, const std::vector<std::vector<std::int64_t>>& points,
                                                const std::vector<std::vector<int>>& residues,
                                                Evaluator& ev = default_evaluator()) {
    ConventionReport report;
    report.n = n;
    report.candidates = {{Anchor::m}, {Anchor::two_m}};
    for (const auto& r : residues) {
        const BlockMatrix b = build_block_matrix(n, r);
        for (const auto& m : points) {
            if (m.size() != r.size()) throw std::invalid_argument("base point and residue vector differ in length");
            std::vector<std::int64_t> lhs_base(m.size());
            for (std::size_t k = 0; k < m.size(); ++k) lhs_base[k] = 8 * m[k] + r[k];
            std::vector<Dyadic> lhs(b.dim());
            for (std::size_t i = 0; i < b.dim(); ++i) lhs[i] = ev.correlation(detail::stacked_query(i, lhs_base));

            for (auto& cand : report.candidates) {
                std::vector<std::int64_t> anchor(m);
                if (cand.anchor == Anchor::two_m)
                    for (auto& x : anchor) x *= 2;
                std::vector<Dyadic> v(b.dim());
                for (std::size_t i = 0; i < b.dim(); ++i) v[i] = ev.correlation(detail::stacked_query(i, anchor));
                const auto rhs = b.apply(v);
                std::map<std::size_t, std::int64_t> expected;
                for (std::size_t i = 0; i < b.dim(); ++i) {
                    ++cand.checked;
                    if (rhs[i] != lhs[i]) ++cand.value_mismatches;
                    const bool in_range = detail::derived_row(i, lhs_base, anchor, b.denominator_exponent(), expected);
                    const auto actual = b.row(i);
                    bool same = in_range && actual.size() == expected.size();
                    if (same) {
                        auto it = expected.begin();
                        for (const auto& [col, val] : actual) {
                            if (it->first != col || it->second != val) {
                                same = false;
                                break;
                            }
                            ++it;
                        }
                    }
                    if (!same) ++cand.structure_mismatches;
                }
            }
        }
    }
    return report;
}

}  // namespace rscorr
