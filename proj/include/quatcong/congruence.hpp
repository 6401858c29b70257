#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "quatcong/error.hpp"
#include "quatcong/fields.hpp"
#include "quatcong/numtheory.hpp"
#include "quatcong/quatalg.hpp"

namespace quatcong {

struct LocalProfile {
    PrimeOfF prime;
    unsigned exponent = 1;
    bool d0_ramified = false;
    std::optional<SplittingInE> splitting;

    bool operator==(const LocalProfile&) const = default;
};

namespace detail {

inline void require_prime_power(std::uint64_t n)
{
    require(n >= 2, "residue field size must be a prime power >= 2");
    auto f = factor_integer(n);
    require(f.factors.size() == 1, "residue field size " + std::to_string(n) + " is not a prime power");
}

inline Integer big(std::uint64_t n) { return Integer(static_cast<unsigned long>(n)); }

}  // namespace detail

/// |G_0(o/p^e)|: SL_2 when D0 splits at p, the norm-one units of the maximal
/// order when D0 ramifies there.
inline Integer order_g0(std::uint64_t norm, unsigned e, bool d0_ramified)
{
    detail::require_prime_power(norm);
    require(e >= 1, "exponent must be >= 1");
    const Integer n = detail::big(norm);
    if (!d0_ramified) return ipow(n, 3 * e - 2) * (n * n - 1);
    return ipow(n, 3 * e - 1) * (n + 1);
}

/// |G(o/p^e)| for G = SL_1 of Lambda_0 (x) o_E.
inline Integer order_g(std::uint64_t norm, unsigned e, SplittingInE splitting, bool d0_ramified)
{
    detail::require_prime_power(norm);
    require(e >= 1, "exponent must be >= 1");
    const Integer n = detail::big(norm);
    switch (splitting) {
    case SplittingInE::split: {
        Integer g0 = order_g0(norm, e, d0_ramified);
        return g0 * g0;
    }
    case SplittingInE::inert:
        if (!d0_ramified) return ipow(n, 6 * e - 4) * (ipow(n, 4) - 1);
        return ipow(n, 6 * e - 2) * (n * n - 1);
    case SplittingInE::ramified:
        if (!d0_ramified) return ipow(n, 6 * e - 2) * (n * n - 1);
        return ipow(n, 6 * e - 1) * (n + 1);
    }
    throw ConsistencyError("unreachable splitting case");
}

/// Q(v, a0)^2 from the local case table (independent of the order formulas).
inline Rational q_squared(const LocalProfile& profile)
{
    require(profile.splitting.has_value(), "q_squared needs the splitting of the prime in E");
    const Rational inv = make_rational(1, detail::big(profile.prime.norm));
    switch (*profile.splitting) {
    case SplittingInE::split:
        return 1;
    case SplittingInE::inert:
        if (!profile.d0_ramified) return (1 - inv * inv) / (1 + inv * inv);
        return (1 + inv) / (1 - inv);
    case SplittingInE::ramified:
        if (!profile.d0_ramified) return 1 - inv * inv;
        return 1 + inv;
    }
    throw ConsistencyError("unreachable splitting case");
}

struct PrimeIndexData {
    LocalProfile profile;
    Integer order_g0;
    Integer order_g;
    Rational q_squared;
    bool operator==(const PrimeIndexData&) const = default;
};

struct IndexReport {
    Integer index_k0 = 1;
    /// Also the index [Gamma(1) : Gamma(a0)] by strong approximation.
    Integer index_k = 1;
    std::vector<PrimeIndexData> per_prime;
    Rational ratio_squared = 1;
    bool operator==(const IndexReport&) const = default;
};

inline std::vector<LocalProfile> local_profiles(const QuaternionSpec& d0, const ExtensionSpec& ext,
                                                const FactoredIdeal& a0)
{
    std::vector<LocalProfile> out;
    for (const auto& [q, k] : a0.entries()) {
        out.push_back({q, k, d0.ramified_at(q), ext.splitting(q)});
    }
    return out;
}

inline IndexReport indices(const QuaternionSpec& d0, const ExtensionSpec& ext, const FactoredIdeal& a0)
{
    require(d0.base() == ext.base(), "algebra and extension over different base fields");
    IndexReport rep;
    Rational q_product = 1;
    for (auto& profile : local_profiles(d0, ext, a0)) {
        PrimeIndexData d{profile, order_g0(profile.prime.norm, profile.exponent, profile.d0_ramified),
                         order_g(profile.prime.norm, profile.exponent, *profile.splitting, profile.d0_ramified),
                         q_squared(profile)};
        rep.index_k0 *= d.order_g0;
        rep.index_k *= d.order_g;
        q_product *= d.q_squared;
        ensure(make_rational(d.order_g0 * d.order_g0, d.order_g) == d.q_squared,
               "local order formulas disagree with the Q^2 table at " + profile.prime.label());
        rep.per_prime.push_back(std::move(d));
    }
    rep.ratio_squared = make_rational(rep.index_k0 * rep.index_k0, rep.index_k);
    ensure(rep.ratio_squared == q_product, "index ratio differs from the product of local Q^2");
    return rep;
}

struct ClassifyRow {
    PrimeOfF prime;
    unsigned exponent = 1;
    SplittingInE splitting = SplittingInE::split;
    bool d0_ramified = false;
    Rational q_squared;
    bool operator==(const ClassifyRow&) const = default;
};

/// Local case data for every prime dividing a0.
inline std::vector<ClassifyRow> classify(const QuaternionSpec& d0, const ExtensionSpec& ext, const FactoredIdeal& a0)
{
    std::vector<ClassifyRow> rows;
    for (const auto& profile : local_profiles(d0, ext, a0)) {
        rows.push_back({profile.prime, profile.exponent, *profile.splitting, profile.d0_ramified, q_squared(profile)});
    }
    return rows;
}

struct RatioCheck {
    long double ratio = 0;
    long double bound = 0;
    /// Every prime of a0 is split in E or ramified in D0, so the bound is 1.
    bool bound_is_one = false;
    bool holds = false;
};

/// [K0:K0(a0)] / sqrt([K:K(a0)]) against zeta_F(2)^-1 (or 1 in the
/// split-or-D0-ramified case).
inline RatioCheck ratio_bound_check(const QuaternionSpec& d0, const ExtensionSpec& ext, const FactoredIdeal& a0,
                                    long double tolerance = 1e-12L)
{
    auto rep = indices(d0, ext, a0);
    RatioCheck rc;
    rc.ratio = std::sqrt(to_long_double(rep.ratio_squared));
    rc.bound_is_one = true;
    for (const auto& pp : rep.per_prime) {
        if (!(pp.profile.splitting == SplittingInE::split || pp.profile.d0_ramified)) rc.bound_is_one = false;
    }
    if (rc.bound_is_one) {
        rc.bound = 1;
        rc.holds = rep.ratio_squared >= 1;
    } else {
        auto z = zeta2_numeric(ext.base(), tolerance);
        rc.bound = 1 / z.value;
        rc.holds = rc.ratio >= rc.bound - tolerance;
    }
    return rc;
}

/// Sufficient condition for Gamma(a0) to be torsion-free: a0 meets Z in
/// neither (1) nor a prime ideal. False means "not verified", not "has torsion".
inline bool torsion_free_sufficient(const FactoredIdeal& a0)
{
    Integer g = a0.intersect_z();
    if (g == 1) return false;
    return mpz_probab_prime_p(g.get_mpz_t(), 30) == 0;
}

}  // namespace quatcong
