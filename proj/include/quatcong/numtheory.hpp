#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "quatcong/base_field.hpp"
#include "quatcong/error.hpp"

namespace quatcong {

using Integer = mpz_class;
/// Exact rational in lowest terms with positive denominator.
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den = 1)
{
    require(den != 0, "zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Integer ipow(const Integer& base, unsigned long exp)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Rational rpow(const Rational& base, long exp)
{
    if (exp < 0) {
        require(base != 0, "negative power of zero");
        return rpow(1 / base, -exp);
    }
    return make_rational(ipow(base.get_num(), static_cast<unsigned long>(exp)),
                         ipow(base.get_den(), static_cast<unsigned long>(exp)));
}

inline long double to_long_double(const Rational& q)
{
    // Double head plus double tail of a 160-bit float: ~106 significant bits.
    mpf_class f(q, 160);
    double head = f.get_d();
    mpf_class rest = f - head;
    double tail = rest.get_d();
    return static_cast<long double>(head) + static_cast<long double>(tail);
}

inline long double to_long_double(const Integer& z)
{
    return to_long_double(Rational(z));
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline std::string to_string(const Integer& z) { return z.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// Factorization

struct PrimePower {
    std::uint64_t prime = 0;
    unsigned exponent = 0;
    bool operator==(const PrimePower&) const = default;
};

/// Factors in strictly increasing prime order.
struct PrimeFactorization {
    std::vector<PrimePower> factors;

    Integer product() const
    {
        Integer r = 1;
        for (const auto& f : factors) r *= ipow(Integer(static_cast<unsigned long>(f.prime)), f.exponent);
        return r;
    }

    bool operator==(const PrimeFactorization&) const = default;
};

inline bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull}) {
        if (n % q == 0) return n == q;
    }
    for (std::uint64_t q = 7; q * q <= n; q += 2) {
        if (n % q == 0) return false;
    }
    return true;
}

inline PrimeFactorization factor_integer(std::uint64_t n)
{
    require(n >= 1, "factor_integer: n must be >= 1");
    PrimeFactorization out;
    auto take = [&](std::uint64_t q) {
        unsigned e = 0;
        while (n % q == 0) {
            n /= q;
            ++e;
        }
        if (e) out.factors.push_back({q, e});
    };
    take(2);
    for (std::uint64_t q = 3; q * q <= n; q += 2) take(q);
    if (n > 1) out.factors.push_back({n, 1});
    return out;
}

inline std::uint64_t divisor_sum(std::uint64_t n)
{
    require(n >= 1, "divisor_sum: n must be >= 1");
    std::uint64_t s = 1;
    for (const auto& [q, e] : factor_integer(n).factors) {
        std::uint64_t term = 1, pw = 1;
        for (unsigned i = 0; i < e; ++i) {
            pw *= q;
            term += pw;
        }
        s *= term;
    }
    return s;
}

/// Largest k with q^k | n (n != 0).
inline unsigned valuation(std::int64_t n, std::int64_t q)
{
    unsigned k = 0;
    if (n == 0) return 0;
    while (n % q == 0) {
        n /= q;
        ++k;
    }
    return k;
}

inline std::int64_t squarefree_part(std::int64_t n)
{
    require(n != 0, "squarefree_part of zero");
    std::int64_t sign = n < 0 ? -1 : 1;
    auto f = factor_integer(static_cast<std::uint64_t>(n < 0 ? -n : n));
    std::int64_t r = 1;
    for (const auto& pp : f.factors) {
        if (pp.exponent % 2) r *= static_cast<std::int64_t>(pp.prime);
    }
    return sign * r;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m)
{
    auto r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m)
{
    return static_cast<std::int64_t>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

inline std::int64_t powmod(std::int64_t a, std::uint64_t e, std::int64_t m)
{
    std::int64_t r = 1 % m;
    a = mod(a, m);
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Kronecker symbol (a|n) including the 2-adic and sign conventions.
inline int kronecker_symbol(std::int64_t a, std::int64_t n)
{
    static constexpr int tab8[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a % 2 == 0) && (n % 2 == 0)) return 0;
    int k = 1;
    int v = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++v;
    }
    if (v % 2) k = tab8[a & 7];
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // n odd positive: Jacobi symbol, depends only on a mod n.
    std::int64_t b = n;
    a = mod(a, b);
    while (a != 0) {
        v = 0;
        while (a % 2 == 0) {
            a /= 2;
            ++v;
        }
        if (v % 2) k *= tab8[b & 7];
        if (a & b & 2) k = -k;
        std::int64_t r = a;
        a = b % r;
        b = r;
    }
    return b == 1 ? k : 0;
}

inline int legendre(std::int64_t a, std::int64_t p) { return kronecker_symbol(a, p); }

/// Square root of a quadratic residue modulo an odd prime (Tonelli-Shanks);
/// returns the least non-negative root.
inline std::int64_t sqrt_mod_prime(std::int64_t a, std::int64_t p)
{
    a = mod(a, p);
    if (a == 0) return 0;
    require(legendre(a, p) == 1, "sqrt_mod_prime: not a residue");
    std::int64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    std::int64_t z = 2;
    while (legendre(z, p) != -1) ++z;
    std::int64_t m = s;
    std::int64_t c = powmod(z, static_cast<std::uint64_t>(q), p);
    std::int64_t t = powmod(a, static_cast<std::uint64_t>(q), p);
    std::int64_t r = powmod(a, static_cast<std::uint64_t>((q + 1) / 2), p);
    while (t != 1) {
        std::int64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        std::int64_t b = c;
        for (std::int64_t j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return std::min(r, p - r);
}

// ---------------------------------------------------------------------------
// Zeta values

/// Exact zeta_F(-1). Uses Siegel's divisor-sum formula for real quadratic F.
inline Rational zeta_minus1(const BaseField& field)
{
    if (field.is_rational()) return make_rational(-1, 12);
    const std::int64_t disc = field.discriminant();
    std::uint64_t sum = 0;
    for (std::int64_t b = -disc; b <= disc; ++b) {
        if (b * b >= disc) continue;
        if (mod(b - disc, 2) != 0) continue;
        sum += divisor_sum(static_cast<std::uint64_t>((disc - b * b) / 4));
    }
    return make_rational(Integer(static_cast<unsigned long>(sum)), 60);
}

inline constexpr long double pi_ld = std::numbers::pi_v<long double>;
inline constexpr long double zeta2_rational_field = pi_ld * pi_ld / 6.0L;

/// Numeric value with an a-priori error bound.
struct BoundedReal {
    long double value = 0;
    long double tol = 0;
};

/// zeta(2) of the quadratic field of fundamental discriminant `disc`
/// (disc = 1 means Q): zeta(2) * L(2, chi_disc). The character series is
/// truncated at N with the Abel-summation tail bound 2B/(N+1)^2, B the
/// maximal partial character sum over one period.
inline BoundedReal zeta2_of_discriminant(std::int64_t disc, long double tolerance)
{
    // Accept 1e-12 given as a double.
    require(tolerance >= 0.999999L * 1e-12L, "zeta2 tolerance must be >= 1e-12");
    if (disc == 1) return {zeta2_rational_field, 0};
    const std::int64_t period = disc < 0 ? -disc : disc;
    std::vector<int> chi(static_cast<std::size_t>(period));
    long partial = 0, bound = 0;
    for (std::int64_t n = 0; n < period; ++n) {
        chi[static_cast<std::size_t>(n)] = kronecker_symbol(disc, n);
    }
    for (std::int64_t n = 1; n <= period; ++n) {
        partial += chi[static_cast<std::size_t>(n % period)];
        bound = std::max(bound, partial < 0 ? -partial : partial);
    }
    // Truncation error of zeta(2) * tail kept at half the budget; summation
    // error of long double Kahan summation is far below the rest.
    const long double budget = tolerance / 2;
    const long double need = std::sqrt(2.0L * bound * zeta2_rational_field / budget);
    const auto terms = static_cast<std::int64_t>(std::ceil(need));
    long double sum = 0, comp = 0;
    for (std::int64_t n = 1; n <= terms; ++n) {
        int c = chi[static_cast<std::size_t>(n % period)];
        if (c == 0) continue;
        long double nn = static_cast<long double>(n);
        long double y = c / (nn * nn) - comp;
        long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    long double tail = 2.0L * bound / ((terms + 1.0L) * (terms + 1.0L));
    return {zeta2_rational_field * sum, zeta2_rational_field * tail + 1e-16L};
}

inline BoundedReal zeta2_numeric(const BaseField& field, long double tolerance = 1e-12L)
{
    return zeta2_of_discriminant(field.discriminant(), tolerance);
}

}  // namespace quatcong
