#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "quatcong/base_field.hpp"
#include "quatcong/error.hpp"
#include "quatcong/numtheory.hpp"

namespace quatcong {

/// Which prime above a rational prime p is meant. For p split in F,
/// first_root is the prime at which sqrt(radicand) reduces to the least
/// non-negative root of x^2 = radicand mod p (for p = 2: the 2-adic root
/// congruent to 1 mod 4).
enum class Selector { only, first_root, second_root };

struct PrimeOfF {
    std::uint64_t p = 0;
    int residue_degree = 1;
    int ramification = 1;
    Selector selector = Selector::only;
    std::uint64_t norm = 0;

    auto operator<=>(const PrimeOfF& o) const
    {
        return std::tie(p, selector) <=> std::tie(o.p, o.selector);
    }
    bool operator==(const PrimeOfF& o) const { return p == o.p && selector == o.selector; }

    std::string label() const
    {
        std::string s = std::to_string(p);
        if (selector == Selector::first_root) s += ".1";
        if (selector == Selector::second_root) s += ".2";
        return s;
    }
};

enum class SplittingInE { split, inert, ramified };

inline const char* to_string(SplittingInE s)
{
    switch (s) {
    case SplittingInE::split: return "split";
    case SplittingInE::inert: return "inert";
    case SplittingInE::ramified: return "ramified";
    }
    return "?";
}

/// Primes above p in the quadratic field of fundamental discriminant `disc`
/// (disc = 1 means Q itself).
inline std::vector<PrimeOfF> primes_above_discriminant(std::int64_t disc, std::uint64_t p)
{
    require(is_prime(p), "primes_above: " + std::to_string(p) + " is not prime");
    if (disc == 1) return {{p, 1, 1, Selector::only, p}};
    switch (kronecker_symbol(disc, static_cast<std::int64_t>(p))) {
    case 1:
        return {{p, 1, 1, Selector::first_root, p}, {p, 1, 1, Selector::second_root, p}};
    case -1:
        return {{p, 2, 1, Selector::only, p * p}};
    default:
        return {{p, 1, 2, Selector::only, p}};
    }
}

inline std::vector<PrimeOfF> primes_above(const BaseField& field, std::uint64_t p)
{
    return primes_above_discriminant(field.discriminant(), p);
}

// ---------------------------------------------------------------------------
// Ideals of O_F in factored form

class FactoredIdeal {
public:
    FactoredIdeal() = default;

    /// The ideal generated by the rational integer m >= 1.
    static FactoredIdeal from_integer(const BaseField& field, std::uint64_t m)
    {
        return from_integer(field.discriminant(), m);
    }

    /// Same, in the quadratic field of the given fundamental discriminant.
    static FactoredIdeal from_integer(std::int64_t disc, std::uint64_t m)
    {
        require(m >= 1, "ideal generator must be >= 1");
        FactoredIdeal out;
        for (const auto& [p, k] : factor_integer(m).factors) {
            for (const auto& prime : primes_above_discriminant(disc, p)) {
                out.multiply(prime, prime.ramification == 2 ? 2 * k : k);
            }
        }
        return out;
    }

    /// Parses "p^e" factors joined by "*", split primes suffixed ".1"/".2".
    /// "1" (or the empty string) is the unit ideal.
    static FactoredIdeal parse(const BaseField& field, const std::string& text)
    {
        return parse(field.discriminant(), text, field.to_string());
    }

    static FactoredIdeal parse(std::int64_t disc, const std::string& text, const std::string& field_name)
    {
        FactoredIdeal out;
        std::string t;
        for (char ch : text) {
            if (ch != ' ') t.push_back(ch);
        }
        if (t.empty() || t == "1") return out;
        std::stringstream ss(t);
        std::string tok;
        while (std::getline(ss, tok, '*')) {
            require(!tok.empty(), "empty factor in ideal '" + text + "'");
            unsigned exponent = 1;
            if (auto caret = tok.find('^'); caret != std::string::npos) {
                exponent = static_cast<unsigned>(parse_uint(tok.substr(caret + 1), text));
                tok = tok.substr(0, caret);
            }
            Selector sel = Selector::only;
            if (auto dot = tok.find('.'); dot != std::string::npos) {
                auto suffix = tok.substr(dot + 1);
                require(suffix == "1" || suffix == "2", "bad prime selector in '" + text + "'");
                sel = suffix == "1" ? Selector::first_root : Selector::second_root;
                tok = tok.substr(0, dot);
            }
            std::uint64_t p = parse_uint(tok, text);
            require(exponent >= 1, "ideal exponents must be >= 1");
            auto above = primes_above_discriminant(disc, p);
            auto it = std::find_if(above.begin(), above.end(),
                                   [&](const PrimeOfF& q) { return q.selector == sel; });
            require(it != above.end(), "prime '" + tok + (sel == Selector::only ? "" : (sel == Selector::first_root ? ".1" : ".2")) +
                                           "' does not match the splitting of " + std::to_string(p) + " in " + field_name);
            out.multiply(*it, exponent);
        }
        return out;
    }

    void multiply(const PrimeOfF& prime, unsigned exponent)
    {
        if (exponent == 0) return;
        auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const auto& e) { return e.first == prime; });
        if (it != entries_.end()) {
            it->second += exponent;
        } else {
            entries_.emplace_back(prime, exponent);
            std::sort(entries_.begin(), entries_.end());
        }
    }

    FactoredIdeal operator*(const FactoredIdeal& o) const
    {
        FactoredIdeal r = *this;
        for (const auto& [q, k] : o.entries_) r.multiply(q, k);
        return r;
    }

    const std::vector<std::pair<PrimeOfF, unsigned>>& entries() const { return entries_; }
    bool is_unit() const { return entries_.empty(); }

    unsigned exponent_of(const PrimeOfF& q) const
    {
        for (const auto& [prime, k] : entries_) {
            if (prime == q) return k;
        }
        return 0;
    }

    bool divides(const FactoredIdeal& other) const
    {
        return std::all_of(entries_.begin(), entries_.end(),
                           [&](const auto& e) { return e.second <= other.exponent_of(e.first); });
    }

    Integer norm() const
    {
        Integer n = 1;
        for (const auto& [q, k] : entries_) n *= ipow(Integer(static_cast<unsigned long>(q.norm)), k);
        return n;
    }

    /// Positive generator of the ideal's intersection with Z.
    Integer intersect_z() const
    {
        Integer g = 1;
        std::map<std::uint64_t, unsigned> exps;
        for (const auto& [q, k] : entries_) {
            unsigned need = q.ramification == 2 ? (k + 1) / 2 : k;
            exps[q.p] = std::max(exps[q.p], need);
        }
        for (const auto& [p, k] : exps) g *= ipow(Integer(static_cast<unsigned long>(p)), k);
        return g;
    }

    std::string to_string() const
    {
        if (entries_.empty()) return "1";
        std::string s;
        for (const auto& [q, k] : entries_) {
            if (!s.empty()) s += "*";
            s += q.label();
            if (k != 1) s += "^" + std::to_string(k);
        }
        return s;
    }

    bool operator==(const FactoredIdeal&) const = default;

private:
    static std::uint64_t parse_uint(const std::string& s, const std::string& ctx)
    {
        require(!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }),
                "malformed ideal '" + ctx + "'");
        return std::stoull(s);
    }

    std::vector<std::pair<PrimeOfF, unsigned>> entries_;
};

// ---------------------------------------------------------------------------
// The quadratic extension E = F(sqrt(theta))

/// Element u + v*sqrt(radicand) of O_F (v = 0 over Q).
struct FieldElement {
    std::int64_t u = 0;
    std::int64_t v = 0;
    bool operator==(const FieldElement&) const = default;
};

namespace detail {

inline bool is_square_integer(const Integer& n)
{
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// Sign of u + v*sqrt(r) for r > 1 squarefree.
inline int sign_of(std::int64_t u, std::int64_t v, std::int64_t r)
{
    auto sgn = [](std::int64_t x) { return (x > 0) - (x < 0); };
    if (v == 0) return sgn(u);
    if (u == 0 || sgn(u) == sgn(v)) return sgn(u == 0 ? v : u);
    Integer uu = Integer(static_cast<long>(u)) * u;
    Integer vv = Integer(static_cast<long>(v)) * v * r;
    return uu > vv ? sgn(u) : sgn(v);
}

/// Lift the root t of x^2 = r mod p (p odd, p not dividing r) to mod p^k.
inline Integer hensel_sqrt(std::int64_t r, std::int64_t t, std::int64_t p, unsigned k)
{
    Integer s = t;
    Integer modulus = p;
    for (unsigned level = 1; level < k; ++level) {
        modulus *= p;
        // s <- s - (s^2 - r) / (2s)  mod p^(level+1)
        Integer f = s * s - r;
        Integer inv;
        Integer two_s = 2 * s;
        mpz_invert(inv.get_mpz_t(), two_s.get_mpz_t(), modulus.get_mpz_t());
        s = s - f * inv;
        mpz_mod(s.get_mpz_t(), s.get_mpz_t(), modulus.get_mpz_t());
    }
    return s;
}

inline unsigned valuation(Integer n, unsigned long p)
{
    unsigned k = 0;
    if (n == 0) return 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        n /= p;
        ++k;
    }
    return k;
}

}  // namespace detail

class ExtensionSpec {
public:
    ExtensionSpec(BaseField base, FieldElement theta) : base_(base), theta_(theta)
    {
        require(base_.is_rational() ? theta_.v == 0 : true, "theta over Q must be a rational integer");
        require(!(theta_.u == 0 && theta_.v == 0), "theta must be nonzero");
        require(!is_square_in_base(), "theta is a square in the base field");
        for (int place = 0; place < base_.degree(); ++place) {
            if (sign_at(place) < 0) ++signature_;
        }
        compute_odd_ramification();
    }

    const BaseField& base() const { return base_; }
    const FieldElement& theta() const { return theta_; }
    /// Number of complex places of E.
    int signature() const { return signature_; }
    /// Primes of F not over 2 that ramify in E.
    const std::vector<PrimeOfF>& ramified_odd_primes() const { return ramified_odd_; }

    /// Sign of theta under the real place `place` (place 1 sends sqrt(r) to -sqrt(r)).
    int sign_at(int place) const
    {
        return detail::sign_of(theta_.u, place == 0 ? theta_.v : -theta_.v, base_.radicand());
    }
    /// E is complex above the given real place of F.
    bool complex_above(int place) const { return sign_at(place) < 0; }

    Integer theta_norm() const
    {
        Integer u = static_cast<long>(theta_.u), v = static_cast<long>(theta_.v);
        if (base_.is_rational()) return u;
        return u * u - v * v * base_.radicand();
    }

    SplittingInE splitting(const PrimeOfF& prime) const
    {
        if (prime.p == 2) return splitting_over_two(prime);
        return splitting_odd(prime);
    }

    bool operator==(const ExtensionSpec& o) const { return base_ == o.base_ && theta_ == o.theta_; }

private:
    bool is_square_in_base() const
    {
        if (base_.is_rational()) return detail::is_square_integer(Integer(static_cast<long>(theta_.u)));
        // theta = (a + b sqrt r)^2 forces N(theta) = n^2 and a^2 = (u +- n) / 2.
        Integer n2 = theta_norm();
        if (!detail::is_square_integer(n2)) return false;
        const Integer n = sqrt(n2);
        const Integer u = static_cast<long>(theta_.u), v = static_cast<long>(theta_.v);
        const long r = static_cast<long>(base_.radicand());
        // a = 0: theta = r b^2.
        if (v == 0 && u % r == 0 && detail::is_square_integer(Integer(u / r))) return true;
        for (const Integer& twice_a2 : {Integer(u + n), Integer(u - n)}) {
            // a^2 = twice_a2 / 2 is a rational square iff 2 * twice_a2 is a square.
            if (!detail::is_square_integer(2 * twice_a2)) continue;
            Rational a = make_rational(sqrt(Integer(2 * twice_a2)), 2);
            if (a == 0) continue;
            Rational b = Rational(v) / (2 * a);
            if (a * a + r * b * b == Rational(u)) return true;
        }
        return false;
    }

    void compute_odd_ramification()
    {
        Integer n = abs(theta_norm());
        require(n.fits_ulong_p(), "theta norm too large");
        for (const auto& [p, k] : factor_integer(n.get_ui()).factors) {
            if (p == 2) continue;
            for (const auto& prime : primes_above(base_, p)) {
                if (splitting_odd(prime) == SplittingInE::ramified) ramified_odd_.push_back(prime);
            }
        }
    }

    SplittingInE classify_unit_class(unsigned val, std::int64_t unit_residue, std::int64_t p) const
    {
        if (val % 2) return SplittingInE::ramified;
        return legendre(unit_residue, p) == 1 ? SplittingInE::split : SplittingInE::inert;
    }

    SplittingInE splitting_odd(const PrimeOfF& prime) const
    {
        const auto p = static_cast<std::int64_t>(prime.p);
        const auto u = theta_.u, v = theta_.v;
        if (base_.is_rational()) {
            unsigned k = valuation(u, p);
            std::int64_t unit = u;
            for (unsigned i = 0; i < k; ++i) unit /= p;
            return classify_unit_class(k, unit, p);
        }
        const std::int64_t r = base_.radicand();
        if (prime.residue_degree == 2) {
            unsigned ku = u == 0 ? 1000 : valuation(u, p);
            unsigned kv = v == 0 ? 1000 : valuation(v, p);
            unsigned k = std::min(ku, kv);
            std::int64_t uu = u, vv = v;
            for (unsigned i = 0; i < k; ++i) {
                uu /= p;
                vv /= p;
            }
            if (k % 2) return SplittingInE::ramified;
            // Squares of F_{p^2}^x are exactly the elements with square norm.
            std::int64_t nm = mod(mulmod(uu, uu, p) - mulmod(r, mulmod(vv, vv, p), p), p);
            return legendre(nm, p) == 1 ? SplittingInE::split : SplittingInE::inert;
        }
        if (prime.ramification == 2) {
            // Uniformizer sqrt(r); v(u) is even, v(v sqrt r) is odd.
            unsigned vu = u == 0 ? 1000 : 2 * valuation(u, p);
            unsigned vv = v == 0 ? 1000 : 2 * valuation(v, p) + 1;
            if (vv < vu) return SplittingInE::ramified;
            unsigned a = vu / 2;
            std::int64_t unit = u;
            for (unsigned i = 0; i < a; ++i) unit /= p;
            std::int64_t cof = r / p;
            std::int64_t residue = mulmod(unit, powmod(cof, a, p), p);
            return legendre(residue, p) == 1 ? SplittingInE::split : SplittingInE::inert;
        }
        // p splits in F: embed into Z_p via the canonical square root.
        std::int64_t t = sqrt_mod_prime(r, p);
        if (prime.selector == Selector::second_root) t = p - t;
        Integer nm = abs(theta_norm());
        unsigned bound = detail::valuation(nm, static_cast<unsigned long>(p)) + 2;
        Integer pk = ipow(Integer(static_cast<long>(p)), bound);
        Integer s = detail::hensel_sqrt(r, t, p, bound);
        Integer w = Integer(static_cast<long>(u)) + Integer(static_cast<long>(v)) * s;
        mpz_mod(w.get_mpz_t(), w.get_mpz_t(), pk.get_mpz_t());
        unsigned k = detail::valuation(w, static_cast<unsigned long>(p));
        for (unsigned i = 0; i < k; ++i) w /= p;
        Integer res = w % p;
        return classify_unit_class(k, static_cast<std::int64_t>(res.get_si()), p);
    }

    SplittingInE splitting_over_two(const PrimeOfF& prime) const
    {
        if (base_.is_rational()) {
            std::int64_t t = squarefree_part(theta_.u);
            switch (mod(t, 8)) {
            case 1: return SplittingInE::split;
            case 5: return SplittingInE::inert;
            default: return SplittingInE::ramified;
            }
        }
        if (theta_norm() % 2 == 0) {
            throw UnsupportedError("splitting over 2 for real quadratic " + base_.to_string() +
                                   " requires theta of odd norm");
        }
        const std::int64_t r = base_.radicand();
        const std::int64_t u = theta_.u, v = theta_.v;
        if (prime.residue_degree == 1 && prime.ramification == 1) {
            // 2 splits in F (r = 1 mod 8): 2-adic root s = 1 mod 4, s mod 8.
            std::int64_t s = -1;
            for (std::int64_t c = 1; c < 32; c += 4) {
                if (mod(c * c - r, 32) == 0) {
                    s = c;
                    break;
                }
            }
            ensure(s > 0, "no 2-adic square root of the radicand");
            if (prime.selector == Selector::second_root) s = -s;
            switch (mod(u + v * s, 8)) {
            case 1: return SplittingInE::split;
            case 5: return SplittingInE::inert;
            default: return SplittingInE::ramified;
            }
        }
        // Single prime over 2: decide squares mod 8 and mod 4 by enumeration
        // in the basis (1, w) of O_F.
        const bool half = mod(r, 4) == 1;
        // w^2 = c0 + c1 w
        const std::int64_t c0 = half ? (r - 1) / 4 : r;
        const std::int64_t c1 = half ? 1 : 0;
        const std::int64_t t0 = half ? u - v : u;
        const std::int64_t t1 = half ? 2 * v : v;
        auto is_square_mod = [&](std::int64_t m) {
            for (std::int64_t a = 0; a < m; ++a) {
                for (std::int64_t b = 0; b < m; ++b) {
                    // (a + b w)^2 = a^2 + b^2 c0 + (2ab + b^2 c1) w
                    if (mod(a * a + b * b * c0 - t0, m) == 0 && mod(2 * a * b + b * b * c1 - t1, m) == 0) return true;
                }
            }
            return false;
        };
        if (is_square_mod(8)) return SplittingInE::split;
        if (is_square_mod(4)) return SplittingInE::inert;
        return SplittingInE::ramified;
    }

    BaseField base_;
    FieldElement theta_;
    int signature_ = 0;
    std::vector<PrimeOfF> ramified_odd_;
};

inline SplittingInE splitting_in_e(const ExtensionSpec& ext, const PrimeOfF& prime)
{
    return ext.splitting(prime);
}

/// Primes of F ramified in E, coprime to 2, not dividing a0.
inline unsigned rho(const ExtensionSpec& ext, const FactoredIdeal& a0)
{
    unsigned n = 0;
    for (const auto& q : ext.ramified_odd_primes()) {
        if (a0.exponent_of(q) == 0) ++n;
    }
    return n;
}

inline bool unramified_over_2(const ExtensionSpec& ext)
{
    for (const auto& q : primes_above(ext.base(), 2)) {
        if (ext.splitting(q) == SplittingInE::ramified) return false;
    }
    return true;
}

}  // namespace quatcong
