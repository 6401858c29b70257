#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "quatcong/error.hpp"
#include "quatcong/fields.hpp"
#include "quatcong/numtheory.hpp"

namespace quatcong {

/// Ideal of O_E for imaginary quadratic E, stored in factored form.
using IdealOfE = FactoredIdeal;

/// Reduced forms (a, b, c) with b^2 - 4ac = disc < 0, |b| <= a <= c and
/// b >= 0 whenever |b| = a or a = c.
inline std::uint64_t count_reduced_forms(std::int64_t disc)
{
    require(disc < 0 && (mod(disc, 4) == 0 || mod(disc, 4) == 1), "not a negative discriminant");
    std::uint64_t h = 0;
    for (std::int64_t a = 1; 3 * a * a <= -disc; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            std::int64_t num = b * b - disc;
            if (num % (4 * a) != 0) continue;
            std::int64_t c = num / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            ++h;
        }
    }
    return h;
}

inline std::uint64_t class_number(std::int64_t radicand)
{
    require(radicand < 0 && detail::is_squarefree(radicand), "radicand must be squarefree and negative");
    return count_reduced_forms(detail::fundamental_discriminant(radicand));
}

class BianchiField {
public:
    explicit BianchiField(std::int64_t radicand, long double zeta_tolerance = 1e-10L)
        : radicand_(radicand)
    {
        require(radicand < 0 && detail::is_squarefree(radicand), "Bianchi radicand must be squarefree and negative");
        disc_ = detail::fundamental_discriminant(radicand);
        h_ = count_reduced_forms(disc_);
        units_ = radicand == -1 ? 4 : (radicand == -3 ? 6 : 2);
        zeta2_ = zeta2_of_discriminant(disc_, zeta_tolerance);
    }

    std::int64_t radicand() const { return radicand_; }
    std::int64_t discriminant() const { return disc_; }
    std::uint64_t class_number() const { return h_; }
    unsigned unit_order() const { return units_; }
    const BoundedReal& zeta2() const { return zeta2_; }

    std::vector<PrimeOfF> primes_above(std::uint64_t p) const { return primes_above_discriminant(disc_, p); }
    IdealOfE ideal(std::uint64_t m) const { return FactoredIdeal::from_integer(disc_, m); }
    IdealOfE parse_ideal(const std::string& text) const
    {
        return FactoredIdeal::parse(disc_, text, "Q(sqrt(" + std::to_string(radicand_) + "))");
    }

private:
    std::int64_t radicand_;
    std::int64_t disc_ = 0;
    std::uint64_t h_ = 0;
    unsigned units_ = 2;
    BoundedReal zeta2_;
};

/// [Gamma(1) : Gamma(a)] = |SL_2(O_E / a)| = N(a)^3 prod_{p | a} (1 - N(p)^-2).
inline Integer bianchi_index(const IdealOfE& a)
{
    Integer idx = 1;
    for (const auto& [q, k] : a.entries()) {
        Integer n = static_cast<unsigned long>(q.norm);
        idx *= ipow(n, 3 * k - 2) * (n * n - 1);
    }
    return idx;
}

struct CuspCount {
    Integer value;
    /// False when the norm-9 torsion-freeness threshold was overridden.
    bool verified = true;
    bool operator==(const CuspCount&) const = default;
};

/// h_E |mu_E|^-1 N(a)^-1 [Gamma(1):Gamma(a)].
inline CuspCount cusp_number(const BianchiField& field, const IdealOfE& a, bool override_torsion = false)
{
    require(!a.is_unit(), "cusp count needs a proper ideal");
    const bool large = a.norm() >= 9;
    require(large || override_torsion, "ideal of norm < 9: Gamma(a) may have torsion (pass the override flag)");
    Rational h = make_rational(Integer(static_cast<unsigned long>(field.class_number())) * bianchi_index(a),
                               Integer(static_cast<unsigned long>(field.unit_order())) * a.norm());
    ensure(is_integer(h), "cusp count " + h.get_str() + " is not an integer");
    return {h.get_num(), large};
}

struct BianchiBettiBound {
    /// h_E |mu_E|^-1 zeta_E(2)^{-1/3} [Gamma(1):Gamma(a)]^{2/3}
    double bound = 0;
    double tol = 0;
    Integer cusps;
    bool verified = true;
    bool operator==(const BianchiBettiBound&) const = default;
};

inline BianchiBettiBound bianchi_betti_bound(const BianchiField& field, const IdealOfE& a,
                                             bool override_torsion = false)
{
    auto cusps = cusp_number(field, a, override_torsion);
    const long double pre = static_cast<long double>(field.class_number()) / field.unit_order();
    const long double z = field.zeta2().value;
    const long double idx = to_long_double(bianchi_index(a));
    BianchiBettiBound b;
    b.bound = pre * std::pow(z, -1.0L / 3) * std::pow(idx, 2.0L / 3);
    // d/dz of z^{-1/3} is bounded by (1/3) z^{-4/3} < 1/3 on z > 1.
    b.tol = pre * std::pow(idx, 2.0L / 3) * field.zeta2().tol / 3 + b.bound * 1e-15L;
    b.cusps = cusps.value;
    b.verified = cusps.verified;
    return b;
}

/// Lefschetz number of the Galois involution on Gamma(m) in SL_2(O_E),
/// E = Q(sqrt(d)), d = 1 mod 4: -2^{rho(m)} m^3 / 12 prod_{p | m} (1 - p^-2),
/// rho(m) counting primes dividing d but not m.
inline Rational bianchi_lefschetz(std::int64_t radicand, std::uint64_t m)
{
    require(radicand != 1 && detail::is_squarefree(radicand), "radicand must be squarefree and != 1");
    require(mod(radicand, 4) == 1, "radicand must be 1 mod 4 (E/Q unramified over 2)");
    require(m >= 3, "level m must be >= 3");
    auto mf = factor_integer(m);
    auto divides_m = [&](std::uint64_t p) { return m % p == 0; };
    unsigned rh = 0;
    for (const auto& pp : factor_integer(static_cast<std::uint64_t>(radicand < 0 ? -radicand : radicand)).factors) {
        if (!divides_m(pp.prime)) ++rh;
    }
    Rational value = -Rational(ipow(2, rh)) * Rational(ipow(Integer(static_cast<unsigned long>(m)), 3)) / 12;
    for (const auto& pp : mf.factors) {
        value *= 1 - make_rational(1, Integer(static_cast<unsigned long>(pp.prime * pp.prime)));
    }
    ensure(is_integer(value) && value < 0 && value.get_num() % 2 == 0,
           "Bianchi Lefschetz number is not a negative even integer");
    return value;
}

struct AsymptoticRow {
    unsigned k = 0;
    Integer index;
    double bound = 0;
    /// bound / index^{2/3}
    double ratio = 0;
    bool operator==(const AsymptoticRow&) const = default;
};

/// Gamma(P^k) for a prime P of E above a rational prime p split in E.
inline std::vector<AsymptoticRow> asymptotic_table(const BianchiField& field, std::uint64_t p, unsigned k_max)
{
    require(k_max <= 8, "k_max must be <= 8");
    auto above = field.primes_above(p);
    require(above.size() == 2, std::to_string(p) + " does not split in E");
    const long double constant = static_cast<long double>(field.class_number()) / field.unit_order() *
                                 std::pow(field.zeta2().value, -1.0L / 3);
    std::vector<AsymptoticRow> rows;
    for (unsigned k = 0; k <= k_max; ++k) {
        IdealOfE a;
        a.multiply(above.front(), k);
        AsymptoticRow row;
        row.k = k;
        row.index = bianchi_index(a);
        if (k > 0) {
            Integer pk = ipow(Integer(static_cast<unsigned long>(p)), 3 * k);
            ensure(Rational(row.index) == Rational(pk) * (1 - make_rational(1, Integer(static_cast<unsigned long>(p * p)))),
                   "index of Gamma(P^k) differs from p^{3k}(1 - p^-2)");
        }
        long double idx23 = std::pow(to_long_double(row.index), 2.0L / 3);
        row.bound = constant * idx23;
        row.ratio = row.bound / idx23;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace quatcong
