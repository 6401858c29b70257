#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "quatcong/error.hpp"
#include "quatcong/numtheory.hpp"

namespace quatcong::oracle {

/// Shape of O_E / p^e O_E over Z/p^e. `trivial` is Z/p^e itself and is used
/// for the groups G_0.
enum class ExtType { trivial, split_pair, unramified, ramified };
enum class D0Type { matrix, division };

inline const char* to_string(ExtType t)
{
    switch (t) {
    case ExtType::trivial: return "trivial";
    case ExtType::split_pair: return "split_pair";
    case ExtType::unramified: return "unramified";
    case ExtType::ramified: return "ramified";
    }
    return "?";
}

inline const char* to_string(D0Type t) { return t == D0Type::matrix ? "matrix" : "division"; }

/// Least (c1, c0) in lexicographic order with x^2 + c1 x + c0 irreducible mod p.
inline std::pair<int, int> least_irreducible_quadratic(int p)
{
    for (int c1 = 0; c1 < p; ++c1) {
        for (int c0 = 0; c0 < p; ++c0) {
            bool has_root = false;
            for (int x = 0; x < p && !has_root; ++x) has_root = (x * x + c1 * x + c0) % p == 0;
            if (!has_root) return {c1, c0};
        }
    }
    throw ConsistencyError("no irreducible quadratic mod " + std::to_string(p));
}

/// O_E / p^e as pairs (x, y) of residues mod p^e. Elements are addressed by
/// the index x + m*y (m = p^e) and all operations are table lookups.
///   split_pair: componentwise, sigma swaps the components
///   unramified: x + y*zeta, zeta a root of the least irreducible quadratic,
///               sigma the Frobenius lift zeta -> -c1 - zeta
///   ramified:   x + y*pi, pi^2 = u*p, sigma(pi) = -pi
class LocalRing {
public:
    using Elem = std::uint16_t;

    LocalRing(int p, int e, ExtType type, int ramified_unit = 1)
        : p_(p), e_(e), type_(type), unit_(ramified_unit)
    {
        require(is_prime(static_cast<std::uint64_t>(p)), "oracle prime must be prime");
        require(e >= 1 && e <= 3, "oracle level must be in [1, 3]");
        m_ = 1;
        for (int i = 0; i < e; ++i) m_ *= p;
        require(m_ * m_ <= 65535, "residue ring too large for the oracle");
        require(ramified_unit % p != 0, "ramified unit must be prime to p");
        if (type_ == ExtType::unramified) std::tie(c1_, c0_) = least_irreducible_quadratic(p);
        build_tables();
    }

    int p() const { return p_; }
    int level() const { return e_; }
    int modulus() const { return m_; }
    ExtType type() const { return type_; }
    int ramified_unit() const { return unit_; }

    std::size_t size() const { return elements_.size(); }
    /// All elements (for `trivial`, only the y = 0 ones).
    const std::vector<Elem>& elements() const { return elements_; }

    Elem zero() const { return 0; }
    Elem one() const { return one_; }
    Elem make(int x, int y) const { return static_cast<Elem>(mod(x, m_) + m_ * mod(y, m_)); }
    std::pair<int, int> coords(Elem a) const { return {a % m_, a / m_}; }

    Elem add(Elem a, Elem b) const { return add_[a * n_ + b]; }
    Elem sub(Elem a, Elem b) const { return add_[a * n_ + neg_[b]]; }
    Elem neg(Elem a) const { return neg_[a]; }
    Elem mul(Elem a, Elem b) const { return mul_[a * n_ + b]; }
    Elem scale(int k, Elem a) const
    {
        auto [x, y] = coords(a);
        return make(k * x, k * y);
    }
    Elem sigma(Elem a) const { return sigma_[a]; }
    bool is_unit(Elem a) const { return unit_mask_[a]; }
    /// Multiplicative inverse of a unit.
    Elem inverse(Elem a) const { return inv_[a]; }

    /// Fixed ring of sigma is the residues mod p^e (embedded as (x, x) in the split case).
    Elem scalar(int k) const { return type_ == ExtType::split_pair ? make(k, k) : make(k, 0); }

private:
    Elem raw_mul(int x1, int y1, int x2, int y2) const
    {
        switch (type_) {
        case ExtType::trivial: return make(x1 * x2, 0);
        case ExtType::split_pair: return make(x1 * x2, y1 * y2);
        case ExtType::unramified:
            return make(x1 * x2 - c0_ * y1 * y2, x1 * y2 + x2 * y1 - c1_ * y1 * y2);
        case ExtType::ramified:
            return make(x1 * x2 + unit_ * p_ * y1 * y2, x1 * y2 + x2 * y1);
        }
        return 0;
    }

    void build_tables()
    {
        n_ = static_cast<std::size_t>(m_) * m_;
        add_.assign(n_ * n_, 0);
        mul_.assign(n_ * n_, 0);
        neg_.assign(n_, 0);
        sigma_.assign(n_, 0);
        inv_.assign(n_, 0);
        unit_mask_.assign(n_, false);
        for (std::size_t a = 0; a < n_; ++a) {
            auto [x1, y1] = coords(static_cast<Elem>(a));
            neg_[a] = make(-x1, -y1);
            switch (type_) {
            case ExtType::trivial: sigma_[a] = static_cast<Elem>(a); break;
            case ExtType::split_pair: sigma_[a] = make(y1, x1); break;
            case ExtType::unramified: sigma_[a] = make(x1 - c1_ * y1, -y1); break;
            case ExtType::ramified: sigma_[a] = make(x1, -y1); break;
            }
            for (std::size_t b = 0; b < n_; ++b) {
                auto [x2, y2] = coords(static_cast<Elem>(b));
                add_[a * n_ + b] = make(x1 + x2, y1 + y2);
                mul_[a * n_ + b] = raw_mul(x1, y1, x2, y2);
            }
        }
        one_ = make(1, 0);
        if (type_ == ExtType::split_pair) one_ = make(1, 1);
        for (std::size_t a = 0; a < n_; ++a) {
            auto [x, y] = coords(static_cast<Elem>(a));
            if (type_ == ExtType::trivial && y != 0) continue;
            elements_.push_back(static_cast<Elem>(a));
            (void)x;
        }
        for (Elem a : elements_) {
            for (Elem b : elements_) {
                if (mul(a, b) == one_) {
                    unit_mask_[a] = true;
                    inv_[a] = b;
                    break;
                }
            }
        }
    }

    int p_, e_;
    ExtType type_;
    int unit_;
    int m_ = 1;
    int c1_ = 0, c0_ = 0;
    std::size_t n_ = 0;
    Elem one_ = 0;
    std::vector<Elem> add_, mul_, neg_, sigma_, inv_;
    std::vector<bool> unit_mask_;
    std::vector<Elem> elements_;
};

/// Lambda_0 (x) O_E / p^e as four coordinates over the local ring.
///   matrix:   [[q0, q1], [q2, q3]], reduced norm the determinant
///   division: a + b*omega with a = q0 + q1*zeta_W, b = q2 + q3*zeta_W in
///             W (x) O_E, omega^2 = p, omega*x = bar(x)*omega, reduced norm
///             N(a) - p*N(b) with N the norm of W over Z_p.
class QuaternionRing {
public:
    using Elem = LocalRing::Elem;
    using Quat = std::array<Elem, 4>;

    QuaternionRing(LocalRing base, D0Type type) : base_(std::move(base)), type_(type)
    {
        std::tie(w1_, w0_) = least_irreducible_quadratic(base_.p());
    }

    const LocalRing& base() const { return base_; }
    D0Type type() const { return type_; }

    /// Number of elements of the ring.
    std::uint64_t cardinality() const
    {
        std::uint64_t b = base_.size();
        return b * b * b * b;
    }

    Quat one() const
    {
        return type_ == D0Type::matrix ? Quat{base_.one(), 0, 0, base_.one()} : Quat{base_.one(), 0, 0, 0};
    }
    Quat minus_one() const
    {
        Quat o = one();
        for (auto& c : o) c = base_.neg(c);
        return o;
    }

    Quat mul(const Quat& x, const Quat& y) const
    {
        const auto& B = base_;
        if (type_ == D0Type::matrix) {
            return {B.add(B.mul(x[0], y[0]), B.mul(x[1], y[2])), B.add(B.mul(x[0], y[1]), B.mul(x[1], y[3])),
                    B.add(B.mul(x[2], y[0]), B.mul(x[3], y[2])), B.add(B.mul(x[2], y[1]), B.mul(x[3], y[3]))};
        }
        // (a + b w)(c + d w) = (ac + p b bar(d)) + (ad + b bar(c)) w
        WElem a{x[0], x[1]}, b{x[2], x[3]}, c{y[0], y[1]}, d{y[2], y[3]};
        WElem first = wadd(wmul(a, c), wscale(base_.p(), wmul(b, wbar(d))));
        WElem second = wadd(wmul(a, d), wmul(b, wbar(c)));
        return {first[0], first[1], second[0], second[1]};
    }

    Elem reduced_norm(const Quat& x) const
    {
        const auto& B = base_;
        if (type_ == D0Type::matrix) return B.sub(B.mul(x[0], x[3]), B.mul(x[1], x[2]));
        return B.sub(wnorm({x[0], x[1]}), B.scale(base_.p(), wnorm({x[2], x[3]})));
    }

    /// Canonical involution; equals the inverse on norm-one elements.
    Quat conjugate(const Quat& x) const
    {
        const auto& B = base_;
        if (type_ == D0Type::matrix) return {x[3], B.neg(x[1]), B.neg(x[2]), x[0]};
        WElem a = wbar({x[0], x[1]});
        return {a[0], a[1], B.neg(x[2]), B.neg(x[3])};
    }

    Quat sigma(const Quat& x) const
    {
        return {base_.sigma(x[0]), base_.sigma(x[1]), base_.sigma(x[2]), base_.sigma(x[3])};
    }

    Quat add(const Quat& x, const Quat& y) const
    {
        return {base_.add(x[0], y[0]), base_.add(x[1], y[1]), base_.add(x[2], y[2]), base_.add(x[3], y[3])};
    }

    /// Serialization key; its order is the fixed order used for class representatives.
    std::uint64_t key(const Quat& x) const
    {
        const std::uint64_t n = static_cast<std::uint64_t>(base_.modulus()) * base_.modulus();
        return ((static_cast<std::uint64_t>(x[0]) * n + x[1]) * n + x[2]) * n + x[3];
    }

    Quat from_key(std::uint64_t k) const
    {
        const std::uint64_t n = static_cast<std::uint64_t>(base_.modulus()) * base_.modulus();
        Quat q{};
        for (int i = 3; i >= 0; --i) {
            q[static_cast<std::size_t>(i)] = static_cast<Elem>(k % n);
            k /= n;
        }
        return q;
    }

private:
    using WElem = std::array<Elem, 2>;  // w0 + w1 * zeta_W

    WElem wadd(const WElem& a, const WElem& b) const { return {base_.add(a[0], b[0]), base_.add(a[1], b[1])}; }
    WElem wscale(int k, const WElem& a) const { return {base_.scale(k, a[0]), base_.scale(k, a[1])}; }
    WElem wmul(const WElem& a, const WElem& b) const
    {
        const auto& B = base_;
        Elem hi = B.mul(a[1], b[1]);
        return {B.sub(B.mul(a[0], b[0]), B.scale(w0_, hi)),
                B.sub(B.add(B.mul(a[0], b[1]), B.mul(a[1], b[0])), B.scale(w1_, hi))};
    }
    WElem wbar(const WElem& a) const { return {base_.sub(a[0], base_.scale(w1_, a[1])), base_.neg(a[1])}; }
    /// a * bar(a) = a0^2 - c1 a0 a1 + c0 a1^2
    Elem wnorm(const WElem& a) const
    {
        const auto& B = base_;
        return B.add(B.sub(B.mul(a[0], a[0]), B.scale(w1_, B.mul(a[0], a[1]))), B.scale(w0_, B.mul(a[1], a[1])));
    }

    LocalRing base_;
    D0Type type_;
    int w1_ = 0, w0_ = 0;
};

}  // namespace quatcong::oracle
