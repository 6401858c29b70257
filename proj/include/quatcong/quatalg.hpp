#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quatcong/error.hpp"
#include "quatcong/fields.hpp"
#include "quatcong/numtheory.hpp"

namespace quatcong {

/// Local Hilbert symbol (a, b)_p over Q_p; p = 0 denotes the real place.
inline int hilbert_symbol(std::int64_t a, std::int64_t b, std::uint64_t p)
{
    require(a != 0 && b != 0, "hilbert_symbol: arguments must be nonzero");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    const auto q = static_cast<std::int64_t>(p);
    unsigned alpha = valuation(a, q), beta = valuation(b, q);
    std::int64_t u = a, v = b;
    for (unsigned i = 0; i < alpha; ++i) u /= q;
    for (unsigned i = 0; i < beta; ++i) v /= q;
    if (p != 2) {
        int s = ((alpha * beta) % 2 == 1 && mod(q, 4) == 3) ? -1 : 1;
        if (beta % 2) s *= legendre(u, q);
        if (alpha % 2) s *= legendre(v, q);
        return s;
    }
    auto eps = [](std::int64_t x) { return mod((mod(x, 4) - 1) / 2, 2); };
    auto omega = [](std::int64_t x) {
        std::int64_t m = mod(x, 8);
        return mod((m * m - 1) / 8, 2);
    };
    std::int64_t e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    return mod(e, 2) ? -1 : 1;
}

/// Quaternion algebra D0 over F, given by its ramification data.
class QuaternionSpec {
public:
    /// (a, b)_Q; ramification read off the local Hilbert symbols at p | 2ab
    /// and at infinity.
    static QuaternionSpec from_hilbert(std::int64_t a, std::int64_t b)
    {
        require(a != 0 && b != 0, "Hilbert pair entries must be nonzero");
        QuaternionSpec q(BaseField::rationals());
        q.hilbert_ = std::make_pair(a, b);
        auto abs64 = [](std::int64_t x) { return static_cast<std::uint64_t>(x < 0 ? -x : x); };
        std::vector<std::uint64_t> candidates{2};
        for (auto n : {abs64(a), abs64(b)}) {
            for (const auto& pp : factor_integer(n).factors) candidates.push_back(pp.prime);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (auto p : candidates) {
            if (hilbert_symbol(a, b, p) == -1) q.ram_f_.push_back(primes_above(q.base_, p).front());
        }
        if (hilbert_symbol(a, b, 0) == -1) q.ram_inf_.push_back(0);
        // Product formula: the number of ramified places is even.
        ensure((q.ram_f_.size() + q.ram_inf_.size()) % 2 == 0,
               "Hilbert reciprocity violated for (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        return q;
    }

    /// Explicit ramification: finite primes of F and real places (0 or 1;
    /// place 1 sends sqrt(r) to -sqrt(r)).
    static QuaternionSpec from_ramification(const BaseField& field, std::vector<PrimeOfF> finite,
                                            std::vector<int> real_places)
    {
        QuaternionSpec q(field);
        std::sort(finite.begin(), finite.end());
        require(std::adjacent_find(finite.begin(), finite.end()) == finite.end(), "duplicate ramified prime");
        std::sort(real_places.begin(), real_places.end());
        require(std::adjacent_find(real_places.begin(), real_places.end()) == real_places.end(),
                "duplicate ramified real place");
        for (int v : real_places) require(v >= 0 && v < field.degree(), "real place index out of range");
        require((finite.size() + real_places.size()) % 2 == 0,
                "a quaternion algebra ramifies at an even number of places");
        q.ram_f_ = std::move(finite);
        q.ram_inf_ = std::move(real_places);
        return q;
    }

    static QuaternionSpec matrix_algebra(const BaseField& field) { return from_ramification(field, {}, {}); }

    const BaseField& base() const { return base_; }
    const std::vector<PrimeOfF>& ram_f() const { return ram_f_; }
    const std::vector<int>& ram_inf() const { return ram_inf_; }
    const std::optional<std::pair<std::int64_t, std::int64_t>>& hilbert_pair() const { return hilbert_; }

    bool ramified_at(const PrimeOfF& prime) const
    {
        return std::find(ram_f_.begin(), ram_f_.end(), prime) != ram_f_.end();
    }
    bool ramified_at_real(int place) const
    {
        return std::find(ram_inf_.begin(), ram_inf_.end(), place) != ram_inf_.end();
    }
    bool is_division() const { return !ram_f_.empty() || !ram_inf_.empty(); }

    /// Real places of F ramified in D0.
    int r() const { return static_cast<int>(ram_inf_.size()); }
    /// Real places of F splitting D0.
    int s() const { return base_.degree() - r(); }

    bool operator==(const QuaternionSpec& o) const
    {
        return base_ == o.base_ && ram_f_ == o.ram_f_ && ram_inf_ == o.ram_inf_;
    }

private:
    explicit QuaternionSpec(BaseField f) : base_(f) {}

    BaseField base_;
    std::optional<std::pair<std::int64_t, std::int64_t>> hilbert_;
    std::vector<PrimeOfF> ram_f_;
    std::vector<int> ram_inf_;
};

/// Product of N(p) - 1 over the finite primes ramified in D0.
inline Integer delta(const QuaternionSpec& d0)
{
    Integer d = 1;
    for (const auto& q : d0.ram_f()) d *= static_cast<unsigned long>(q.norm - 1);
    return d;
}

struct PlaceCounts {
    int s = 0;
    int r = 0;
    /// Real places ramified in D0 lying under a complex place of E.
    int c = 0;
    bool operator==(const PlaceCounts&) const = default;
};

inline PlaceCounts counts(const QuaternionSpec& d0, const ExtensionSpec& ext)
{
    require(d0.base() == ext.base(), "algebra and extension over different base fields");
    PlaceCounts pc{d0.s(), d0.r(), 0};
    for (int v : d0.ram_inf()) {
        if (ext.complex_above(v)) ++pc.c;
    }
    return pc;
}

struct PlaceOfE {
    enum class Kind { finite, real };
    Kind kind = Kind::finite;
    PrimeOfF below{};  // finite places
    int real_place = 0;  // real places
    int index = 1;  // which of the two places above a split place

    std::string label() const
    {
        std::string base = kind == Kind::real ? "inf" + std::to_string(real_place + 1) : below.label();
        return base + "/" + std::to_string(index);
    }
    bool operator==(const PlaceOfE&) const = default;
};

struct RamificationOfD {
    std::vector<PlaceOfE> places;
    bool division = false;
};

/// Ram(D0 (x) E): a place of E above v in Ram(D0) is ramified exactly when
/// v splits in E, since a quadratic field extension splits D0 locally.
inline RamificationOfD ram_of_d(const QuaternionSpec& d0, const ExtensionSpec& ext)
{
    require(d0.base() == ext.base(), "algebra and extension over different base fields");
    RamificationOfD out;
    for (const auto& q : d0.ram_f()) {
        if (ext.splitting(q) == SplittingInE::split) {
            for (int i = 1; i <= 2; ++i) out.places.push_back({PlaceOfE::Kind::finite, q, 0, i});
        }
    }
    for (int v : d0.ram_inf()) {
        if (!ext.complex_above(v)) {
            for (int i = 1; i <= 2; ++i) out.places.push_back({PlaceOfE::Kind::real, {}, v, i});
        }
    }
    out.division = !out.places.empty();
    return out;
}

/// Some archimedean place of E splits D, i.e. SL_1(D) is non-compact at infinity.
inline bool has_strong_approximation(const QuaternionSpec& d0, const ExtensionSpec& ext)
{
    for (int v = 0; v < ext.base().degree(); ++v) {
        if (ext.complex_above(v) || !d0.ramified_at_real(v)) return true;
    }
    return false;
}

struct HyperbolicSetting {
    BaseField field;
    ExtensionSpec extension;
    QuaternionSpec algebra;
    PlaceCounts place_counts;
    bool division = false;
    bool strong_approximation = false;
    /// Empty when undecidable (2-adic data over a real quadratic base).
    std::optional<bool> unramified_over_2;
};

/// Conditions for a compact arithmetic hyperbolic 3-manifold; returns one
/// message per violated condition.
inline std::vector<std::string> hyperbolic_violations(const ExtensionSpec& ext, const QuaternionSpec& d0,
                                                      bool require_division = true)
{
    std::vector<std::string> bad;
    if (d0.base() != ext.base()) {
        bad.push_back("algebra and extension over different base fields");
        return bad;
    }
    if (ext.signature() != 1) {
        bad.push_back("wrong signature: E has " + std::to_string(ext.signature()) +
                      " complex places, exactly one is required");
    }
    for (int v = 0; v < ext.base().degree(); ++v) {
        if (!ext.complex_above(v) && !d0.ramified_at_real(v)) {
            bad.push_back("missing real ramification: D0 splits at real place inf" + std::to_string(v + 1) +
                          " under which E is real");
        }
    }
    if (require_division) {
        if (!ram_of_d(d0, ext).division) bad.push_back("D is not a division algebra (Ram(D) is empty)");
    }
    return bad;
}

inline HyperbolicSetting validate_hyperbolic(const BaseField& field, const ExtensionSpec& ext,
                                             const QuaternionSpec& d0, bool require_division = true)
{
    require(ext.base() == field && d0.base() == field, "components over different base fields");
    auto bad = hyperbolic_violations(ext, d0, require_division);
    if (!bad.empty()) {
        std::string msg = "invalid hyperbolic setting:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw ConfigError(msg);
    }
    HyperbolicSetting hs{field, ext, d0, counts(d0, ext), ram_of_d(d0, ext).division,
                         has_strong_approximation(d0, ext), std::nullopt};
    try {
        hs.unramified_over_2 = quatcong::unramified_over_2(ext);
    } catch (const UnsupportedError&) {
        hs.unramified_over_2.reset();
    }
    ensure(hs.place_counts.c == 1 - hs.place_counts.s, "c = 1 - s must hold in a hyperbolic setting");
    return hs;
}

}  // namespace quatcong
