#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "quatcong/bianchi.hpp"
#include "quatcong/lefschetz.hpp"

using namespace quatcong;

using testgen::random_configs;

TEST(H1Size, Examples)
{
    auto q = BaseField::rationals();
    auto a9 = FactoredIdeal::from_integer(q, 9);
    ExtensionSpec e7(q, {-7, 0});
    EXPECT_EQ(h1_size(e7, QuaternionSpec::from_hilbert(-1, -1), a9), (H1Size{4, true}));
    EXPECT_EQ(h1_size(e7, QuaternionSpec::matrix_algebra(q), a9), (H1Size{2, true}));
    ExtensionSpec ei(q, {-1, 0});
    for (std::uint64_t m : {3, 9, 15}) {
        auto h = h1_size(ei, QuaternionSpec::from_hilbert(-1, -1), FactoredIdeal::from_integer(q, m));
        EXPECT_EQ(h.value, 2);
        EXPECT_FALSE(h.exact);
    }
    EXPECT_THROW(h1_size(e7, QuaternionSpec::matrix_algebra(q), FactoredIdeal()), ConfigError);
}

TEST(EulerCharacteristic, Examples)
{
    auto q = BaseField::rationals();
    ExtensionSpec e7(q, {-7, 0});
    auto a9 = FactoredIdeal::from_integer(q, 9);
    EXPECT_EQ(euler_char_component(QuaternionSpec::from_hilbert(-1, -1), e7, a9), 27);
    EXPECT_EQ(euler_char_component(QuaternionSpec::matrix_algebra(q), e7, a9), -54);
    // Index 1: (-1/2)^r zeta_F(-1) Delta.
    EXPECT_EQ(euler_char_component(QuaternionSpec::from_hilbert(-1, -1), Integer(1)), Rational(1, 24));
}

TEST(LefschetzNumber, Examples)
{
    auto q = BaseField::rationals();
    ExtensionSpec e7(q, {-7, 0});
    auto rep = lefschetz_number(e7, QuaternionSpec::from_hilbert(-1, -1), FactoredIdeal::from_integer(q, 9));
    EXPECT_EQ(rep.mode, LefschetzReport::Mode::exact);
    EXPECT_EQ(rep.value, std::optional<Rational>(108));
    EXPECT_EQ(rep.magnitude_bound, 108);
    EXPECT_EQ(rep.sign, 1);
    EXPECT_EQ(rep.h1_size, 4);
    EXPECT_EQ(rep.euler_characteristic, 27);
    EXPECT_TRUE(rep.torsion_verified);
    EXPECT_EQ(rep.components.c, 1);
    EXPECT_EQ(rep.components.rho, 1u);

    auto second = lefschetz_number(e7, QuaternionSpec::from_hilbert(-1, 3), FactoredIdeal::from_integer(q, 5));
    EXPECT_EQ(second.value, std::optional<Rational>(-40));
    EXPECT_EQ(second.sign, -1);
    EXPECT_EQ(second.components.s, 1);
    EXPECT_EQ(second.components.delta, 2);
    EXPECT_EQ(second.components.index_k0, 120);
    EXPECT_FALSE(second.torsion_verified);  // (5) is prime: unverified, still evaluated

    auto real = lefschetz_number(ExtensionSpec(q, {5, 0}), QuaternionSpec::matrix_algebra(q),
                                 FactoredIdeal::from_integer(q, 4));
    EXPECT_EQ(real.value, std::optional<Rational>(-8));
}

TEST(LefschetzNumber, LowerBoundWhenRamifiedOverTwo)
{
    auto q = BaseField::rationals();
    auto rep = lefschetz_number(ExtensionSpec(q, {-1, 0}), QuaternionSpec::from_hilbert(-1, 3),
                                FactoredIdeal::from_integer(q, 9));
    EXPECT_EQ(rep.mode, LefschetzReport::Mode::lower_bound);
    EXPECT_FALSE(rep.value.has_value());
    EXPECT_FALSE(rep.components.h1_factor_known);
    EXPECT_GT(rep.magnitude_bound, 0);
}

TEST(LefschetzNumber, RealQuadraticBaseOverTwoIsLowerBound)
{
    auto f5 = BaseField::real_quadratic(5);
    auto rep = lefschetz_number(ExtensionSpec(f5, {-1, 0}), QuaternionSpec::matrix_algebra(f5),
                                FactoredIdeal::from_integer(f5, 3));
    EXPECT_EQ(rep.mode, LefschetzReport::Mode::lower_bound);
    EXPECT_EQ(rep.magnitude_bound, 24);
}

TEST(LefschetzNumber, RejectsMissingStrongApproximation)
{
    auto q = BaseField::rationals();
    EXPECT_THROW(lefschetz_number(ExtensionSpec(q, {5, 0}), QuaternionSpec::from_hilbert(-1, -1),
                                  FactoredIdeal::from_integer(q, 9)),
                 ConfigError);
}

TEST(LefschetzNumber, DualFormulaAgreement)
{
    for (const auto& c : random_configs(50, 99)) {
        auto rep = lefschetz_number(c.ext, c.d0, c.a0);
        long double exact = to_long_double(rep.magnitude_bound) * rep.sign;
        ASSERT_LT(std::fabs(rep.numeric_check - exact) / std::fabs(exact), 1e-6L) << c.a0.to_string();
    }
}

TEST(LefschetzNumber, ParitySignAndFactorization)
{
    int exact_seen = 0;
    for (const auto& c : random_configs(120, 5)) {
        auto rep = lefschetz_number(c.ext, c.d0, c.a0);
        if (rep.mode != LefschetzReport::Mode::exact) continue;
        ++exact_seen;
        ASSERT_TRUE(rep.value.has_value());
        const Rational& v = *rep.value;
        ASSERT_EQ(v, Rational(rep.h1_size) * rep.euler_characteristic);
        ASSERT_EQ(abs(v), rep.magnitude_bound);
        ASSERT_EQ(v > 0 ? 1 : -1, rep.components.s % 2 == 0 ? 1 : -1);
        if (rep.torsion_verified) {
            ASSERT_TRUE(is_integer(v));
            ASSERT_EQ(v.get_num() % 2, 0) << v.get_str();
        }
    }
    EXPECT_GT(exact_seen, 20);
}

TEST(LefschetzNumber, AgreesWithBianchiClosedForm)
{
    auto q = BaseField::rationals();
    std::mt19937_64 rng(3);
    const std::vector<std::int64_t> radicands{-3, -7, -11, -15, -19, -23, -31, -35, 5, 13, 17, 21, 29, 33};
    for (int i = 0; i < 20; ++i) {
        std::int64_t d = radicands[rng() % radicands.size()];
        std::uint64_t m = 3 + rng() % 48;
        auto rep = lefschetz_number(ExtensionSpec(q, {d, 0}), QuaternionSpec::matrix_algebra(q),
                                    FactoredIdeal::from_integer(q, m));
        ASSERT_EQ(rep.mode, LefschetzReport::Mode::exact);
        ASSERT_EQ(*rep.value, bianchi_lefschetz(d, m)) << d << " " << m;
    }
}

TEST(BettiBound, Examples)
{
    auto q = BaseField::rationals();
    ExtensionSpec e7(q, {-7, 0});
    auto hs = validate_hyperbolic(q, e7, QuaternionSpec::from_hilbert(-1, -1));
    EXPECT_EQ(betti_lower_bound(hs, FactoredIdeal::from_integer(q, 9)).value, 53);
    EXPECT_EQ(betti_lower_bound(hs, FactoredIdeal::from_integer(q, 6)).value, 23);
    auto hs2 = validate_hyperbolic(q, e7, QuaternionSpec::from_hilbert(-1, 3));
    auto b = betti_lower_bound(hs2, FactoredIdeal::from_integer(q, 5));
    EXPECT_EQ(b.value, 21);
    EXPECT_FALSE(b.torsion_verified);
    EXPECT_NEAR(b.numeric_check, 21.0, 1e-9);
}

TEST(BettiBound, HalfMagnitudePlusSign)
{
    auto q = BaseField::rationals();
    auto f5 = BaseField::real_quadratic(5);
    struct S {
        BaseField f;
        ExtensionSpec e;
        QuaternionSpec d0;
    };
    std::vector<S> settings{
        {q, ExtensionSpec(q, {-7, 0}), QuaternionSpec::from_hilbert(-1, -1)},
        {q, ExtensionSpec(q, {-7, 0}), QuaternionSpec::from_hilbert(-1, 3)},
        {q, ExtensionSpec(q, {-15, 0}), QuaternionSpec::from_hilbert(-1, 3)},
        {f5, ExtensionSpec(f5, {2, 1}), QuaternionSpec::from_ramification(f5, {}, {0, 1})},
    };
    for (const auto& s : settings) {
        auto hs = validate_hyperbolic(s.f, s.e, s.d0);
        for (std::uint64_t m : {9, 15, 21, 25, 33, 45}) {
            auto a0 = FactoredIdeal::from_integer(s.f, m);
            auto rep = lefschetz_number(s.e, s.d0, a0);
            Rational sign = hs.place_counts.s % 2 == 0 ? -1 : 1;
            EXPECT_EQ(betti_lower_bound(hs, a0).value, rep.magnitude_bound / 2 + sign) << m;
        }
    }
}

TEST(GrowthTable, CompactExample)
{
    auto q = BaseField::rationals();
    auto hs = validate_hyperbolic(q, ExtensionSpec(q, {-7, 0}), QuaternionSpec::from_hilbert(-1, -1));
    std::vector<FactoredIdeal> seq;
    for (std::uint64_t m : {9, 36, 180, 900}) seq.push_back(FactoredIdeal::from_integer(q, m));
    auto t = growth_table(hs, seq);
    ASSERT_EQ(t.rows.size(), 4u);
    double mn = t.rows.front().ratio;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        EXPECT_GE(r.ratio, r.guaranteed);
        EXPECT_NEAR(r.ratio, static_cast<double>(to_long_double(r.betti_bound)) / std::sqrt(static_cast<double>(to_long_double(Rational(r.index)))), 1e-12);
        if (i > 0) {
            EXPECT_GT(r.index, t.rows[i - 1].index);
        }
        mn = std::min(mn, r.ratio);
    }
    EXPECT_EQ(t.kappa, mn);
    EXPECT_GT(t.kappa, 0);
    EXPECT_EQ(t.rows.front().index, 524880);
    EXPECT_EQ(t.rows.front().betti_bound, 53);
}

TEST(GrowthTable, SingleRowAndErrors)
{
    auto q = BaseField::rationals();
    auto hs = validate_hyperbolic(q, ExtensionSpec(q, {-7, 0}), QuaternionSpec::from_hilbert(-1, -1));
    auto one = growth_table(hs, {FactoredIdeal::from_integer(q, 9)});
    EXPECT_EQ(one.kappa, one.rows.front().ratio);
    EXPECT_THROW(growth_table(hs, {}), ConfigError);
    EXPECT_THROW(growth_table(hs, {FactoredIdeal::from_integer(q, 9), FactoredIdeal::from_integer(q, 15)}), ConfigError);
    EXPECT_THROW(growth_table(hs, {FactoredIdeal::from_integer(q, 9), FactoredIdeal::from_integer(q, 9)}), ConfigError);
    EXPECT_THROW(growth_table(hs, {FactoredIdeal::from_integer(q, 3)}), ConfigError);
}
