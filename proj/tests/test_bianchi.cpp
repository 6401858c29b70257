#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "quatcong/bianchi.hpp"

using namespace quatcong;

TEST(ClassNumber, Examples)
{
    EXPECT_EQ(class_number(-1), 1u);
    EXPECT_EQ(class_number(-5), 2u);
    EXPECT_EQ(class_number(-7), 1u);
    EXPECT_EQ(class_number(-163), 1u);
    EXPECT_EQ(class_number(-14), 4u);
    EXPECT_THROW(class_number(3), ConfigError);
    EXPECT_THROW(class_number(-4), ConfigError);
}

TEST(ClassNumber, MatchesDirichletFormula)
{
    for (std::int64_t d = -1; d >= -400; --d) {
        if (!detail::is_squarefree(d)) continue;
        std::int64_t disc = oracle_ref::fundamental_disc(d);
        ASSERT_EQ(static_cast<std::int64_t>(class_number(d)), oracle_ref::class_number_dirichlet(disc)) << d;
    }
}

TEST(BianchiField, UnitOrder)
{
    EXPECT_EQ(BianchiField(-1).unit_order(), 4u);
    EXPECT_EQ(BianchiField(-3).unit_order(), 6u);
    for (std::int64_t d : {-2, -5, -7, -11, -15}) EXPECT_EQ(BianchiField(d).unit_order(), 2u);
    EXPECT_NEAR(static_cast<double>(BianchiField(-1).zeta2().value), 1.50670300992, 1e-10);
}

TEST(BianchiIndex, Examples)
{
    EXPECT_EQ(bianchi_index(BianchiField(-1).ideal(3)), 720);
    EXPECT_EQ(bianchi_index(BianchiField(-5).ideal(3)), 576);
    EXPECT_EQ(bianchi_index(BianchiField(-3).ideal(4)), 3840);
    EXPECT_EQ(bianchi_index(BianchiField(-7).ideal(1)), 1);
}

TEST(BianchiIndex, MatchesBruteForceForSplitAndInert)
{
    // Split p: O_E / p = F_p x F_p; inert p: F_{p^2}.
    BianchiField e(-7);
    for (std::int64_t p : {2, 11}) {
        auto s = oracle_ref::sl2_count(p);
        EXPECT_EQ(bianchi_index(e.ideal(static_cast<std::uint64_t>(p))), Integer(static_cast<unsigned long>(s * s)));
    }
    for (std::int64_t p : {3, 5}) {
        EXPECT_EQ(bianchi_index(e.ideal(static_cast<std::uint64_t>(p))),
                  Integer(static_cast<unsigned long>(oracle_ref::sl2_count_fp2(p))));
    }
}

TEST(BianchiIndex, MultiplicativeOverCoprimeIdeals)
{
    for (std::int64_t d : {-1, -2, -5, -7, -15}) {
        BianchiField e(d);
        for (std::uint64_t m : {2, 3, 4, 9}) {
            for (std::uint64_t n : {5, 7, 11, 25}) {
                EXPECT_EQ(bianchi_index(e.ideal(m * n)), bianchi_index(e.ideal(m)) * bianchi_index(e.ideal(n)));
            }
        }
    }
}

TEST(CuspNumber, Examples)
{
    EXPECT_EQ(cusp_number(BianchiField(-1), BianchiField(-1).ideal(3)).value, 20);
    EXPECT_EQ(cusp_number(BianchiField(-5), BianchiField(-5).ideal(3)).value, 64);
    EXPECT_EQ(cusp_number(BianchiField(-3), BianchiField(-3).ideal(4)).value, 40);
    BianchiField e(-7);
    EXPECT_THROW(cusp_number(e, e.ideal(2)), ConfigError);
    auto forced = cusp_number(e, e.parse_ideal("2.1^2"), true);
    EXPECT_FALSE(forced.verified);
}

TEST(CuspNumber, PositiveIntegerAndAboveBettiBound)
{
    std::mt19937_64 rng(8);
    const std::vector<std::int64_t> radicands{-1, -2, -3, -5, -6, -7, -11, -14, -15, -19, -23, -43, -47, -163};
    for (int i = 0; i < 100; ++i) {
        BianchiField e(radicands[rng() % radicands.size()]);
        std::uint64_t m = 3 + rng() % 60;
        auto a = e.ideal(m);
        auto c = cusp_number(e, a);
        ASSERT_GT(c.value, 0);
        auto b = bianchi_betti_bound(e, a);
        ASSERT_LE(b.bound, c.value.get_d() + b.tol) << e.radicand() << " " << m;
    }
}

TEST(BianchiBettiBound, Examples)
{
    BianchiField gi(-1);
    auto b = bianchi_betti_bound(gi, gi.ideal(3));
    EXPECT_NEAR(b.bound, 0.25 * std::pow(1.50670300992, -1.0 / 3) * std::pow(720.0, 2.0 / 3), 1e-8);
    EXPECT_NEAR(b.bound, 17.51, 0.01);
    EXPECT_LE(b.bound, 20);
    EXPECT_LT(b.tol, 1e-8);
    BianchiField e5(-5);
    EXPECT_LE(bianchi_betti_bound(e5, e5.ideal(3)).bound, 64);
}

TEST(BianchiLefschetz, Examples)
{
    EXPECT_EQ(bianchi_lefschetz(-7, 3), -4);
    EXPECT_EQ(bianchi_lefschetz(-7, 9), -108);
    EXPECT_EQ(bianchi_lefschetz(5, 4), -8);
    EXPECT_THROW(bianchi_lefschetz(-1, 9), ConfigError);
    EXPECT_THROW(bianchi_lefschetz(-7, 2), ConfigError);
}

TEST(AsymptoticTable, Examples)
{
    BianchiField e(-7);
    auto rows = asymptotic_table(e, 2, 5);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].index, 1);
    for (unsigned k = 1; k <= 5; ++k) {
        EXPECT_EQ(Rational(rows[k].index), Rational(ipow(Integer(2), 3 * k)) * Rational(3, 4));
    }
    for (const auto& r : rows) EXPECT_NEAR(r.ratio, rows[0].ratio, 1e-9);
    EXPECT_THROW(asymptotic_table(e, 3, 5), ConfigError);
    EXPECT_THROW(asymptotic_table(e, 2, 9), ConfigError);
}
