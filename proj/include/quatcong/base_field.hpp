#pragma once

#include <cstdint>
#include <string>

#include "quatcong/error.hpp"

namespace quatcong {

namespace detail {

inline bool is_squarefree(std::int64_t n)
{
    if (n < 0) n = -n;
    if (n == 0) return false;
    for (std::int64_t q = 2; q * q <= n; ++q) {
        if (n % (q * q) == 0) return false;
    }
    return true;
}

inline std::int64_t fundamental_discriminant(std::int64_t radicand)
{
    auto m4 = ((radicand % 4) + 4) % 4;
    return m4 == 1 ? radicand : 4 * radicand;
}

}  // namespace detail

/// Totally real base field: Q or Q(sqrt(radicand)) with radicand > 1 squarefree.
class BaseField {
public:
    enum class Kind { rationals, real_quadratic };

    static BaseField rationals() { return BaseField(Kind::rationals, 1); }

    static BaseField real_quadratic(std::int64_t radicand)
    {
        require(radicand > 1, "real quadratic radicand must be > 1");
        require(detail::is_squarefree(radicand), "radicand must be squarefree");
        return BaseField(Kind::real_quadratic, radicand);
    }

    Kind kind() const { return kind_; }
    bool is_rational() const { return kind_ == Kind::rationals; }
    std::int64_t radicand() const { return radicand_; }
    int degree() const { return is_rational() ? 1 : 2; }
    std::int64_t discriminant() const
    {
        return is_rational() ? 1 : detail::fundamental_discriminant(radicand_);
    }

    std::string to_string() const
    {
        return is_rational() ? "Q" : "Q(sqrt(" + std::to_string(radicand_) + "))";
    }

    bool operator==(const BaseField&) const = default;

private:
    BaseField(Kind k, std::int64_t r) : kind_(k), radicand_(r) {}

    Kind kind_;
    std::int64_t radicand_;
};

}  // namespace quatcong
