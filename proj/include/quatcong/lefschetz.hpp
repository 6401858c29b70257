#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "quatcong/congruence.hpp"
#include "quatcong/error.hpp"
#include "quatcong/fields.hpp"
#include "quatcong/numtheory.hpp"
#include "quatcong/quatalg.hpp"

namespace quatcong {

namespace detail {

inline Rational signed_unit(int exponent) { return (exponent % 2 == 0) ? 1 : -1; }

inline Rational pow2(int k) { return k >= 0 ? Rational(ipow(2, static_cast<unsigned long>(k))) : make_rational(1, ipow(2, static_cast<unsigned long>(-k))); }

inline long double relative_gap(long double a, long double b)
{
    long double scale = std::max({std::fabs(a), std::fabs(b), 1e-300L});
    return std::fabs(a - b) / scale;
}

/// zeta_F(2) |disc_F|^{3/2} pi^{-2d}: the transcendental factor shared by the
/// numeric forms of the Euler characteristic and Lefschetz formulas.
inline long double zeta2_disc_factor(const BaseField& field)
{
    auto z = zeta2_numeric(field);
    long double disc = static_cast<long double>(field.discriminant());
    return z.value * std::pow(disc, 1.5L) * std::pow(pi_ld, -2.0L * field.degree());
}

inline bool unramified_over_2_or_unknown(const ExtensionSpec& ext)
{
    try {
        return unramified_over_2(ext);
    } catch (const UnsupportedError&) {
        return false;
    }
}

}  // namespace detail

struct H1Size {
    Integer value;
    /// False when E/F ramifies over 2 (or that cannot be decided): the
    /// unknown 2-adic factor is taken as 1 and value is a lower bound.
    bool exact = false;
    bool operator==(const H1Size&) const = default;
};

/// Number of classes 2^{c + rho(a0)} |H^1(sigma, K(a0, 2))|.
inline H1Size h1_size(const ExtensionSpec& ext, const QuaternionSpec& d0, const FactoredIdeal& a0)
{
    require(!a0.is_unit(), "h1_size needs a proper ideal");
    auto pc = counts(d0, ext);
    unsigned exp = static_cast<unsigned>(pc.c) + rho(ext, a0);
    return {ipow(2, exp), detail::unramified_over_2_or_unknown(ext)};
}

/// Euler characteristic of one fixed-point component,
/// (-1/2)^r zeta_F(-1) [K0:K0(a0)] Delta(D0). The transcendental form
/// (-2)^s (4 pi^2)^{-d} zeta_F(2) |disc|^{3/2} [..] Delta is checked to 1e-9.
inline Rational euler_char_component(const QuaternionSpec& d0, const Integer& index_k0)
{
    const BaseField& field = d0.base();
    const int r = d0.r(), s = d0.s(), d = field.degree();
    Rational chi = rpow(make_rational(-1, 2), r) * zeta_minus1(field) * index_k0 * delta(d0);
    long double numeric = std::pow(-2.0L, s) * std::pow(4.0L, -d) * detail::zeta2_disc_factor(field) *
                          to_long_double(Rational(index_k0 * delta(d0)));
    ensure(detail::relative_gap(numeric, to_long_double(chi)) < 1e-9L,
           "Euler characteristic: zeta(-1) and zeta(2) forms disagree");
    return chi;
}

inline Rational euler_char_component(const QuaternionSpec& d0, const ExtensionSpec& ext, const FactoredIdeal& a0)
{
    return euler_char_component(d0, indices(d0, ext, a0).index_k0);
}

struct LefschetzComponents {
    int d = 1;
    int s = 0;
    int r = 0;
    int c = 0;
    unsigned rho = 0;
    Integer delta = 1;
    Integer index_k0 = 1;
    bool h1_factor_known = false;
    bool operator==(const LefschetzComponents&) const = default;
};

struct LefschetzReport {
    enum class Mode { exact, lower_bound };
    Mode mode = Mode::lower_bound;
    int sign = 1;
    /// Present in exact mode.
    std::optional<Rational> value;
    Rational magnitude_bound;
    LefschetzComponents components;
    Integer h1_size;
    Rational euler_characteristic;
    bool torsion_verified = false;
    /// Transcendental (zeta_F(2)) form of the signed magnitude bound; a
    /// cross-check field, not a headline number.
    double numeric_check = 0;
    double numeric_tol = 1e-6;

    bool operator==(const LefschetzReport&) const = default;
};

inline const char* to_string(LefschetzReport::Mode m)
{
    return m == LefschetzReport::Mode::exact ? "exact" : "lower_bound";
}

/// Signed closed form (-1)^{s+d} 2^{c+rho-r} zeta_F(-1) Delta [K0:K0(a0)];
/// its absolute value is the lower bound for |L| in general.
inline Rational lefschetz_closed_form(const LefschetzComponents& k, const BaseField& field)
{
    return detail::signed_unit(k.s + k.d) * detail::pow2(k.c + static_cast<int>(k.rho) - k.r) *
           zeta_minus1(field) * k.delta * k.index_k0;
}

inline LefschetzReport lefschetz_number(const ExtensionSpec& ext, const QuaternionSpec& d0, const FactoredIdeal& a0)
{
    require(d0.base() == ext.base(), "algebra and extension over different base fields");
    require(!a0.is_unit(), "the Lefschetz number needs a proper ideal");
    if (!has_strong_approximation(d0, ext)) {
        throw ConfigError("strong approximation fails: no archimedean place of E splits D");
    }
    const BaseField& field = ext.base();
    auto pc = counts(d0, ext);
    auto idx = indices(d0, ext, a0);

    LefschetzReport rep;
    auto& k = rep.components;
    k.d = field.degree();
    k.s = pc.s;
    k.r = pc.r;
    k.c = pc.c;
    k.rho = rho(ext, a0);
    k.delta = delta(d0);
    k.index_k0 = idx.index_k0;
    auto h1 = h1_size(ext, d0, a0);
    k.h1_factor_known = h1.exact;
    rep.h1_size = h1.value;
    rep.torsion_verified = torsion_free_sufficient(a0);
    rep.sign = (k.s % 2 == 0) ? 1 : -1;
    rep.euler_characteristic = euler_char_component(d0, idx.index_k0);

    Rational closed = lefschetz_closed_form(k, field);
    rep.magnitude_bound = abs(closed);
    ensure((closed > 0) == (rep.sign > 0), "closed form sign differs from (-1)^s");

    rep.numeric_check = static_cast<long double>(rep.sign) *
                        std::pow(2.0L, k.c + static_cast<int>(k.rho) - k.r - k.d) *
                        detail::zeta2_disc_factor(field) * to_long_double(Rational(k.delta * k.index_k0));
    ensure(detail::relative_gap(rep.numeric_check, to_long_double(closed)) < rep.numeric_tol,
           "Lefschetz number: zeta(-1) and zeta(2) forms disagree");

    if (h1.exact) {
        rep.mode = LefschetzReport::Mode::exact;
        Rational value = Rational(h1.value) * rep.euler_characteristic;
        ensure(value == closed, "Lefschetz number: |H^1| * chi differs from the closed form");
        if (rep.torsion_verified) {
            ensure(is_integer(value) && value.get_num() % 2 == 0, "Lefschetz number is not an even integer");
        }
        rep.value = value;
    } else {
        rep.mode = LefschetzReport::Mode::lower_bound;
    }
    return rep;
}

struct BettiBound {
    Rational value;
    bool torsion_verified = false;
    /// 2^rho (2 pi)^{-2d} zeta_F(2) |disc|^{3/2} Delta [K0:K0(a0)] + (-1)^{s+1}.
    double numeric_check = 0;
    bool operator==(const BettiBound&) const = default;
};

/// Lower bound for dim H^1(Gamma(a0), C) in a compact hyperbolic setting.
inline BettiBound betti_lower_bound(const HyperbolicSetting& hs, const FactoredIdeal& a0)
{
    require(!a0.is_unit(), "the Betti bound needs a proper ideal");
    require(hs.division, "the Betti bound needs D to be a division algebra");
    require(hs.extension.signature() == 1, "the Betti bound needs exactly one complex place");
    const BaseField& field = hs.field;
    const int d = field.degree(), s = hs.place_counts.s;
    const unsigned rh = rho(hs.extension, a0);
    auto idx = indices(hs.algebra, hs.extension, a0);
    const Integer dl = delta(hs.algebra);

    BettiBound b;
    Rational main = detail::pow2(static_cast<int>(rh) - d) * detail::signed_unit(d) * zeta_minus1(field) * dl *
                    idx.index_k0;
    b.value = main + detail::signed_unit(s + 1);
    b.torsion_verified = torsion_free_sufficient(a0);
    long double numeric_main = std::pow(2.0L, static_cast<int>(rh)) * std::pow(2.0L, -2.0L * d) *
                               detail::zeta2_disc_factor(field) * to_long_double(Rational(dl * idx.index_k0));
    ensure(detail::relative_gap(numeric_main, to_long_double(main)) < 1e-9L,
           "Betti bound: zeta(-1) and zeta(2) forms disagree");
    b.numeric_check = numeric_main + ((s + 1) % 2 == 0 ? 1.0L : -1.0L);
    return b;
}

struct GrowthRow {
    FactoredIdeal ideal;
    /// [Gamma(1) : Gamma(a)]
    Integer index;
    Rational betti_bound;
    /// betti_bound / index^{1/2}
    double ratio = 0;
    /// 2^rho (2 pi)^{-2d} |disc|^{3/2} Delta - 1 / index^{1/2}
    double guaranteed = 0;
    bool operator==(const GrowthRow&) const = default;
};

struct GrowthTable {
    std::vector<GrowthRow> rows;
    double kappa = 0;
    bool operator==(const GrowthTable&) const = default;
};

/// 2^rho (2 pi)^{-2d} |disc_F|^{3/2} Delta(D0).
inline long double growth_constant(const HyperbolicSetting& hs, const FactoredIdeal& a0)
{
    const int d = hs.field.degree();
    return std::pow(2.0L, static_cast<int>(rho(hs.extension, a0))) * std::pow(2.0L * pi_ld, -2.0L * d) *
           std::pow(static_cast<long double>(hs.field.discriminant()), 1.5L) *
           to_long_double(Rational(delta(hs.algebra)));
}

inline GrowthTable growth_table(const HyperbolicSetting& hs, const std::vector<FactoredIdeal>& ideals)
{
    require(!ideals.empty(), "growth table needs at least one ideal");
    GrowthTable t;
    t.kappa = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ideals.size(); ++i) {
        const auto& a = ideals[i];
        if (i > 0) {
            require(ideals[i - 1].divides(a) && !(ideals[i - 1] == a),
                    "ideal sequence is not strictly decreasing at " + a.to_string());
        }
        require(torsion_free_sufficient(a),
                "torsion-freeness of Gamma(" + a.to_string() + ") is not guaranteed by the sufficient condition");
        GrowthRow row;
        row.ideal = a;
        row.index = indices(hs.algebra, hs.extension, a).index_k;
        row.betti_bound = betti_lower_bound(hs, a).value;
        long double root = std::sqrt(to_long_double(row.index));
        row.ratio = to_long_double(row.betti_bound) / root;
        row.guaranteed = growth_constant(hs, a) - 1.0L / root;
        ensure(row.ratio >= row.guaranteed - 1e-12L, "growth row below the guaranteed constant at " + a.to_string());
        t.kappa = std::min(t.kappa, row.ratio);
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace quatcong
