#include "support.hpp"

#include <gtest/gtest.h>

using namespace rscorr;
using testsupport::reference;

namespace {

Dyadic q(std::int64_t p, std::int64_t k) { return Dyadic::normalize(p, k); }

const Canonical& as_canonical(const CanonicalResult& r) { return std::get<Canonical>(r); }

}  // namespace

TEST(Canonicalize, Examples) {
    const auto a = canonicalize({Kind::eta, {0, 7, 3}});
    EXPECT_EQ(as_canonical(a).query.positions, (std::vector<std::int64_t>{0, 3, 7}));
    EXPECT_EQ(as_canonical(a).sign, 1);

    const auto b = canonicalize({Kind::theta, {0, -2, 5}});
    EXPECT_EQ(as_canonical(b).query.positions, (std::vector<std::int64_t>{0, 2, 7}));
    EXPECT_EQ(as_canonical(b).sign, 1);

    const auto c = canonicalize({Kind::eta, {0, 4, 4, 9}});
    EXPECT_EQ(as_canonical(c).query.positions, (std::vector<std::int64_t>{0, 9}));
    EXPECT_EQ(as_canonical(c).query.kind, Kind::eta);

    const auto d = canonicalize({Kind::theta, {0, -3, 5}});
    EXPECT_EQ(as_canonical(d).query.positions, (std::vector<std::int64_t>{0, 3, 8}));
    EXPECT_EQ(as_canonical(d).sign, -1);
}

TEST(Canonicalize, TerminalCases) {
    EXPECT_EQ(std::get<Resolved>(canonicalize({Kind::eta, {}})).value, Dyadic(1));
    EXPECT_EQ(std::get<Resolved>(canonicalize({Kind::theta, {}})).value, Dyadic(0));
    EXPECT_EQ(std::get<Resolved>(canonicalize({Kind::eta, {5}})).value, Dyadic(0));
    EXPECT_EQ(std::get<Resolved>(canonicalize({Kind::theta, {3}})).value, Dyadic(0));
    EXPECT_EQ(std::get<Resolved>(canonicalize({Kind::eta, {0, 0}})).value, Dyadic(1));
    EXPECT_EQ(std::get<Resolved>(canonicalize({Kind::eta, {2, 5, 5, 2}})).value, Dyadic(1));
}

TEST(Renorm, WorkedThreePointEquation) {
    // eta(4m1+2, 4m2+3) = 1/4 [ -(-1)^{m1+m2} eta(m1,m2) - (-1)^{m1} theta(m1,m2+1)
    //                           + theta(m1+1,m2+1) + (-1)^{m2} eta(m1+1,m2+1) ]
    const std::vector<std::uint8_t> r{2, 3};
    const auto got = collect(derive_renorm_equation(Kind::eta, r));
    CollectedEquation want;
    want.lhs = Kind::eta;
    want.residues = r;
    want.add({Kind::eta, {0, 0}}, 0b11, -1);
    want.add({Kind::theta, {0, 1}}, 0b01, -1);
    want.add({Kind::theta, {1, 1}}, 0, 1);
    want.add({Kind::eta, {1, 1}}, 0b10, 1);
    EXPECT_EQ(got, want) << got.to_string();
}

TEST(Renorm, AllResiduesZeroFourPoint) {
    // eta(4m1,4m2,4m3) = 1/2 (1 + (-1)^M) eta(m1,m2,m3): 2/4 + 2/4 (-1)^{m1+m2+m3}
    const auto got = collect(derive_renorm_equation(Kind::eta, std::vector<std::uint8_t>{0, 0, 0}));
    CollectedEquation want;
    want.lhs = Kind::eta;
    want.residues = {0, 0, 0};
    want.add({Kind::eta, {0, 0, 0}}, 0, 2);
    want.add({Kind::eta, {0, 0, 0}}, 0b111, 2);
    EXPECT_EQ(got, want) << got.to_string();
}

TEST(Renorm, ThetaAtMultipleOfFourCollectsToZero) {
    const auto got = collect(derive_renorm_equation(Kind::theta, std::vector<std::uint8_t>{0}));
    EXPECT_TRUE(got.terms.empty()) << got.to_string();
}

TEST(Renorm, OneTermPerBranchWithBinaryCarries) {
    std::mt19937_64 rng(testsupport::kSeed);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::uint8_t> r(static_cast<std::size_t>(testsupport::uniform(rng, 1, 6)));
        for (auto& x : r) x = static_cast<std::uint8_t>(testsupport::uniform(rng, 0, 3));
        const auto eq = derive_renorm_equation((rng() & 1) ? Kind::theta : Kind::eta, r);
        ASSERT_EQ(eq.terms.size(), 4U);
        for (const auto& t : eq.terms) {
            ASSERT_EQ(t.carries.size(), r.size());
            for (auto c : t.carries) EXPECT_LE(c, 1);
            EXPECT_TRUE(t.sign == 1 || t.sign == -1);
        }
    }
    EXPECT_THROW(derive_renorm_equation(Kind::eta, std::vector<std::uint8_t>{4}), std::invalid_argument);
}

TEST(Renorm, SplitOffsetsRejectsNegatives) {
    std::vector<std::uint8_t> r;
    std::vector<std::int64_t> qt;
    const std::vector<std::int64_t> off{5, -1};
    EXPECT_THROW(split_offsets(off, r, qt), std::invalid_argument);
    split_offsets(std::vector<std::int64_t>{9, 3}, r, qt);
    EXPECT_EQ(r, (std::vector<std::uint8_t>{1, 3}));
    EXPECT_EQ(qt, (std::vector<std::int64_t>{2, 0}));
}

TEST(Renorm, RecursionShrinksPositions) {
    std::mt19937_64 rng(testsupport::kSeed + 3);
    for (int i = 0; i < 300; ++i) {
        auto off = testsupport::offsets(rng, static_cast<std::size_t>(testsupport::uniform(rng, 1, 5)), 0, 500);
        const auto c = canonicalize(CorrelationQuery::from_offsets(Kind::eta, off));
        if (!std::holds_alternative<Canonical>(c)) continue;
        const auto& pos = std::get<Canonical>(c).query.positions;
        const std::int64_t P = pos.back();
        if (P < 2) continue;
        std::vector<std::uint8_t> r;
        std::vector<std::int64_t> qt;
        split_offsets(std::span(pos).subspan(1), r, qt);
        for (const auto& t : instantiate(derive_renorm_equation(Kind::eta, r), qt))
            for (auto p : t.target.positions) EXPECT_LE(p, P / 4 + 1);
    }
}

TEST(Engine, Examples) {
    Evaluator ev;
    EXPECT_EQ(ev.eta({0}), Dyadic(1));
    EXPECT_EQ(ev.eta({1, 2, 3}), q(-1, 1));
    EXPECT_EQ(ev.eta({1, 4, 5}), q(1, 2));
    EXPECT_EQ(ev.eta({5, 13}), Dyadic(0));
    EXPECT_EQ(ev.eta({1, 8, 9}), q(5, 3));
    EXPECT_EQ(ev.eta({1, 16, 17}), q(13, 4));
}

// The closed-form theta table states +1/2 here; the reference recursion and
// long-window averages both give -1/2.
TEST(Engine, ThetaOneTwoThree) {
    Evaluator ev;
    EXPECT_EQ(ev.theta({1, 2, 3}), q(-1, 1));
    EXPECT_EQ(reference().value(true, {0, 1, 2, 3}), Rational(-1, 2));
    const std::vector<std::int64_t> pos{0, 1, 2, 3};
    EXPECT_NEAR(empirical_correlation(Kind::theta, pos, std::int64_t{1} << 20).value, -0.5, 1e-2);
}

TEST(Engine, ReferenceSeedsAreTheExpectedBaseValues) {
    auto& ref = reference();
    EXPECT_EQ(ref.value(false, {0, 1}), 0);
    EXPECT_EQ(ref.value(true, {0, 1}), 0);
    EXPECT_EQ(ref.value(false, {0}), 0);
    EXPECT_EQ(ref.value(true, {0}), 0);
}

TEST(EngineProperty, MatchesReferenceOracle) {
    std::mt19937_64 rng(testsupport::kSeed + 4);
    Evaluator ev;
    for (int i = 0; i < 500; ++i) {
        const Kind kind = (rng() & 1) ? Kind::theta : Kind::eta;
        const auto n = static_cast<std::size_t>(testsupport::uniform(rng, 1, 6));
        const auto query = CorrelationQuery::from_offsets(kind, testsupport::offsets(rng, n - 1, -100, 100));
        ASSERT_EQ(ev.correlation(query).to_rational(), reference().value(query)) << query.to_string();
    }
}

TEST(EngineProperty, SymmetriesAndBounds) {
    std::mt19937_64 rng(testsupport::kSeed + 5);
    Evaluator ev;
    for (int i = 0; i < 500; ++i) {
        const Kind kind = (rng() & 1) ? Kind::theta : Kind::eta;
        const auto n = static_cast<std::size_t>(testsupport::uniform(rng, 2, 6));
        const auto query = CorrelationQuery::from_offsets(kind, testsupport::offsets(rng, n - 1, -100, 100));
        const Dyadic v = ev.correlation(query);
        EXPECT_LE(v.abs(), Dyadic(1));

        auto perm = query;
        std::shuffle(perm.positions.begin(), perm.positions.end(), rng);
        EXPECT_EQ(ev.correlation(perm), v);

        const std::int64_t t = testsupport::uniform(rng, -100, 100);
        auto moved = query;
        for (auto& p : moved.positions) p += t;
        EXPECT_EQ(ev.correlation(moved), (kind == Kind::theta && (t & 1)) ? -v : v);

        auto doubled = query;
        const std::int64_t x = testsupport::uniform(rng, -100, 100);
        doubled.positions.push_back(x);
        doubled.positions.insert(doubled.positions.begin(), x);
        EXPECT_EQ(ev.correlation(doubled), v);
    }
}

TEST(EngineProperty, OddPointCountsVanish) {
    std::mt19937_64 rng(testsupport::kSeed + 6);
    Evaluator ev;
    for (int i = 0; i < 300; ++i) {
        const auto n = static_cast<std::size_t>(2 * testsupport::uniform(rng, 1, 3) + 1);
        const Kind kind = (rng() & 1) ? Kind::theta : Kind::eta;
        EXPECT_TRUE(ev.correlation(CorrelationQuery::from_offsets(kind, testsupport::offsets(rng, n - 1, 0, 200))).is_zero());
    }
}

TEST(Engine, AutocorrelationIsDelta) {
    Evaluator ev;
    for (std::int64_t m = -256; m <= 256; ++m) EXPECT_EQ(ev.eta({m}), Dyadic(m == 0 ? 1 : 0)) << m;
}

TEST(Engine, HypercubeValuesTakeTwoLevels) {
    Evaluator ev;
    const Dyadic at0 = ev.eta({0}), at1 = ev.eta({1});
    for (std::size_t n = 2; n <= 8; ++n)
        for (std::uint32_t bits = 0; bits < (1U << (n - 1)); ++bits) {
            std::vector<std::int64_t> off(n - 1);
            std::size_t ones = 0;
            for (std::size_t k = 0; k + 1 < n; ++k) ones += (off[k] = (bits >> k) & 1U);
            const Dyadic v = ev.correlation(CorrelationQuery::from_offsets(Kind::eta, off));
            if (n % 2) EXPECT_TRUE(v.is_zero());
            else EXPECT_EQ(v, ones % 2 == 0 ? at0 : at1);
            EXPECT_TRUE(ev.correlation(CorrelationQuery::from_offsets(Kind::theta, off)).is_zero());
        }
}

TEST(Engine, MemoIsSharedAcrossThreads) {
    Evaluator shared;
    std::vector<std::thread> threads;
    std::vector<Dyadic> out(4);
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&, t] { out[static_cast<std::size_t>(t)] = shared.eta({17, 40, 63}); });
    for (auto& th : threads) th.join();
    Evaluator fresh;
    for (const auto& v : out) EXPECT_EQ(v, fresh.eta({17, 40, 63}));
    EXPECT_GT(shared.memo_size(), 0U);
    shared.clear();
    EXPECT_EQ(shared.memo_size(), 0U);
}

TEST(SelfConsistent, TwoPoints) {
    const auto t = solve_self_consistent(2);
    EXPECT_EQ(t.at({Kind::eta, {0, 0}}), 1);
    EXPECT_EQ(t.at({Kind::eta, {0, 1}}), 0);
    EXPECT_EQ(t.at({Kind::theta, {0, 0}}), 0);
    EXPECT_EQ(t.at({Kind::theta, {0, 1}}), 0);
    EXPECT_EQ(t.size(), 4U);
}

TEST(SelfConsistent, ThreePointsOnlyTrivial) {
    const auto t = solve_self_consistent(3);
    EXPECT_EQ(t.size(), 6U);
    for (const auto& [query, v] : t) EXPECT_EQ(v, 0) << query.to_string();
}

TEST(SelfConsistent, AgreesWithHypercubeRule) {
    for (std::size_t n : {4U, 5U, 6U}) {
        const auto t = solve_self_consistent(n);
        for (const auto& [query, v] : t) {
            std::size_t ones = 0;
            for (auto p : query.positions) ones += static_cast<std::size_t>(p);
            EXPECT_EQ(v, hypercube_value(query.kind, query.points(), ones)) << query.to_string();
        }
    }
    EXPECT_THROW(solve_self_consistent(1), std::invalid_argument);
}

TEST(Weighted, Examples) {
    const std::vector<std::int64_t> one_two_three{1, 2, 3}, zero{0}, two{5, 9};
    EXPECT_EQ(weighted_correlation(one_two_three, 1, -1), Rational(-1, 2));
    EXPECT_EQ(weighted_correlation(zero, 1, 0), Rational(1, 2));
    EXPECT_EQ(weighted_correlation(two, Rational(2, 3), Rational(2, 3)), Rational(8, 27));
}

TEST(Weighted, AgreesWithEmpirical) {
    std::mt19937_64 rng(testsupport::kSeed + 7);
    for (int i = 0; i < 10; ++i) {
        const auto off = testsupport::offsets(rng, 3, 0, 20);
        const Rational fp(testsupport::uniform(rng, -4, 4), 2), fm(testsupport::uniform(rng, -4, 4), 3);
        std::vector<std::int64_t> pos{0};
        pos.insert(pos.end(), off.begin(), off.end());
        const double emp = empirical_weighted(to_double(fp), to_double(fm), pos, std::int64_t{1} << 20).value;
        EXPECT_NEAR(to_double(weighted_correlation(off, fp, fm)), emp, 2e-2);
    }
}
