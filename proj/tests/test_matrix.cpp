#include "support.hpp"

#include <gtest/gtest.h>

#include <set>
#include <tuple>

using namespace rscorr;

TEST(Blocks, ChecksumIsFrozen) { EXPECT_EQ(building_blocks_checksum(), 5600); }

TEST(Blocks, Examples) {
    const auto& b = building_blocks();
    EXPECT_EQ(b.get(BlockFamily::M, 1, 1)[0][0], 2);
    EXPECT_EQ(b.get(BlockFamily::N, 0, 0)[1][0], -1);
    EXPECT_THROW(b.get(BlockFamily::M, 2, 0), std::out_of_range);
}

TEST(Blocks, StructuralShape) {
    const auto& b = building_blocks();
    for (const auto* family : {&b.M, &b.N})
        for (const auto& m : *family)
            for (int i = 0; i < 8; ++i) {
                for (int j = 3; j < 8; ++j) EXPECT_EQ(m[i][j], 0);
                for (int j = 0; j < 3; ++j) EXPECT_LE(std::abs(m[i][j]), 2);
            }
}

TEST(Shifts, Identities) {
    const auto s = shift_matrices(1, 7);
    EXPECT_EQ(power(s.S, 4), identity8());
    EXPECT_NE(power(s.S, 2), identity8());
    EXPECT_EQ(power(s.R, 8), IntMatrix8{});
    EXPECT_NE(power(s.R, 7), IntMatrix8{});
    EXPECT_EQ(power(s.L, 2), IntMatrix8{});
    EXPECT_EQ(matrix_rank(s.R), 7);
    EXPECT_EQ(matrix_rank(s.L), 1);
    EXPECT_THROW(shift_matrices(0, 1), std::out_of_range);
    EXPECT_THROW(shift_matrices(1, 8), std::out_of_range);
}

TEST(Shifts, ClosedFormOfJ) {
    const auto& b = building_blocks();
    for (const auto* family : {&b.M, &b.N})
        for (const auto& x : *family) {
            EXPECT_EQ(j_transform_closed(x, 0), x);
            EXPECT_EQ(j_transform(x, 0), x);
            for (unsigned k = 1; k <= 7; ++k) EXPECT_EQ(j_transform(x, k), j_transform_closed(x, k)) << k;
        }
    // linear, so the closed form also holds on sums of blocks
    const IntMatrix8 mix = b.M[0] + b.N[3] + b.M[2];
    for (unsigned k = 1; k <= 7; ++k) EXPECT_EQ(j_transform(mix, k), j_transform_closed(mix, k));
    EXPECT_THROW(j_transform_closed(b.M[0], 8), std::out_of_range);
}

TEST(Shifts, JMovesRowsUp) {
    const auto& n00 = building_blocks().get(BlockFamily::N, 0, 0);
    EXPECT_EQ(j_transform(n00, 1)[0], n00[1]);
}

TEST(BlockMatrix, TwoPointRows) {
    const BlockMatrix b = build_block_matrix(2, {0});
    ASSERT_EQ(b.dim(), 16U);
    const auto row1 = b.row(1);
    ASSERT_EQ(row1.size(), 2U);
    EXPECT_EQ(row1[0].first, 8U);
    EXPECT_EQ(b.entry(1, 8), Dyadic::normalize(1, 2));
    EXPECT_EQ(row1[1].first, 9U);
    EXPECT_EQ(b.entry(1, 9), Dyadic::normalize(-1, 2));
    EXPECT_TRUE(b.row(4).empty());
}

TEST(BlockMatrix, Dimensions) {
    EXPECT_EQ(build_block_matrix(3, {0, 0}).dim(), 128U);
    EXPECT_EQ(build_block_matrix(4, {0, 0, 0}).dim(), 1024U);
    EXPECT_THROW(build_block_matrix(5, {0, 0, 0, 0}), std::invalid_argument);
    EXPECT_THROW(build_block_matrix(2, {8}), std::invalid_argument);
    EXPECT_THROW(build_block_matrix(3, {1}), std::invalid_argument);
}

TEST(BlockMatrix, AnchorTwoPoint) {
    std::vector<std::vector<std::int64_t>> pts;
    for (std::int64_t m = 0; m <= 32; ++m) pts.push_back({m});
    std::vector<std::vector<int>> res;
    for (int r = 0; r < 8; ++r) res.push_back({r});
    const auto rep = verify_block_convention(2, pts, res);
    ASSERT_TRUE(rep.winner().has_value());
    EXPECT_EQ(*rep.winner(), Anchor::two_m);
    for (const auto& c : rep.candidates) EXPECT_EQ(c.checked, 33U * 8U * 16U);
}

TEST(BlockMatrix, AnchorThreePointSingleBase) {
    std::vector<std::vector<int>> res;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) res.push_back({a, b});
    const auto rep = verify_block_convention(3, {{1, 2}}, res);
    ASSERT_TRUE(rep.winner().has_value());
    EXPECT_EQ(*rep.winner(), Anchor::two_m);
    EXPECT_GT(rep.candidates[0].structure_mismatches + rep.candidates[0].value_mismatches, 0U);
}

TEST(BlockMatrix, AnchorFourPointSample) {
    const auto rep = verify_block_convention(4, {{1, 3, 2}, {0, 0, 5}}, {{3, 6, 1}});
    ASSERT_TRUE(rep.winner().has_value());
    EXPECT_EQ(*rep.winner(), Anchor::two_m);
    EXPECT_THROW(verify_block_convention(4, {{1, 2}}, {{0, 0, 0}}), std::invalid_argument);
}

TEST(Mod4Matrix, Examples) {
    EXPECT_EQ(build_mod4_matrix(0)[0][0], Dyadic(1));
    EXPECT_TRUE(build_mod4_matrix(1)[0][0].is_zero());
    for (int p : {0, 1})
        for (int j = 0; j < 8; ++j) EXPECT_TRUE(build_mod4_matrix(p)[4][j].is_zero());
    EXPECT_THROW(build_mod4_matrix(2), std::invalid_argument);
}

TEST(Mod4Matrix, ReproducesEngine) {
    Evaluator ev;
    for (std::int64_t m = 0; m <= 64; ++m) {
        const auto mat = build_mod4_matrix(static_cast<int>(m & 1));
        std::array<Dyadic, 8> v, lhs;
        for (int i = 0; i < 4; ++i) {
            v[i] = ev.eta({m + i});
            v[4 + i] = ev.theta({m + i});
            lhs[i] = ev.eta({4 * m + i});
            lhs[4 + i] = ev.theta({4 * m + i});
        }
        for (int i = 0; i < 8; ++i) {
            Dyadic acc;
            for (int j = 0; j < 8; ++j) acc += mat[i][j] * v[j];
            EXPECT_EQ(acc, lhs[i]) << "m=" << m << " row " << i;
        }
    }
}

// Rebuild every entry from the two-point renormalisation equations; the
// stored matrix differs in one place only: row theta(4m+3), column eta(m+1),
// for even m, where the stored sign is opposite.
TEST(Mod4Matrix, SingleEntryDiffersFromDerivation) {
    std::set<std::tuple<int, int, int>> diffs;
    for (int parity : {0, 1}) {
        const auto stored = build_mod4_matrix(parity);
        for (int row = 0; row < 8; ++row) {
            const Kind kind = row < 4 ? Kind::eta : Kind::theta;
            const auto eq = collect(derive_renorm_equation(kind, std::vector<std::uint8_t>{static_cast<std::uint8_t>(row % 4)}));
            std::array<int, 8> derived{};
            for (const auto& [target, poly] : eq.terms) {
                const int col = (target.first == Kind::theta ? 4 : 0) + target.second[0];
                for (const auto& [mask, c] : poly) derived[col] += (mask && parity) ? -c : c;
            }
            for (int col = 0; col < 8; ++col)
                if (stored[row][col] != Dyadic(derived[col]).halved(2)) diffs.insert({parity, row, col});
        }
    }
    EXPECT_EQ(diffs, (std::set<std::tuple<int, int, int>>{{0, 7, 1}}));
    EXPECT_EQ(build_mod4_matrix(0)[7][1], Dyadic::normalize(1, 1));
}
