#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quatcong/bianchi.hpp"
#include "quatcong/congruence.hpp"
#include "quatcong/fields.hpp"
#include "quatcong/lefschetz.hpp"
#include "quatcong/numtheory.hpp"
#include "quatcong/oracle/cohomology.hpp"

// Integers are written as decimal strings and rationals as {"num", "den"}
// so that no headline number passes through floating point.
namespace nlohmann {

template <>
struct adl_serializer<mpz_class> {
    static void to_json(json& j, const mpz_class& n) { j = n.get_str(); }
    static void from_json(const json& j, mpz_class& n)
    {
        if (j.is_number_integer()) {
            n = mpz_class(std::to_string(j.get<long long>()));
            return;
        }
        if (!j.is_string() || n.set_str(j.get<std::string>(), 10) != 0) {
            throw quatcong::ConfigError("expected an integer string, got " + j.dump());
        }
    }
};

template <>
struct adl_serializer<mpq_class> {
    static void to_json(json& j, const mpq_class& q)
    {
        j = json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
    }
    static void from_json(const json& j, mpq_class& q)
    {
        if (!j.is_object() || !j.contains("num") || !j.contains("den")) {
            throw quatcong::ConfigError("expected {\"num\", \"den\"}, got " + j.dump());
        }
        q = quatcong::make_rational(j.at("num").get<mpz_class>(), j.at("den").get<mpz_class>());
    }
};

}  // namespace nlohmann

namespace quatcong {

using json = nlohmann::json;

namespace io {

/// Absolute accuracy attached to floating cross-check fields with no
/// sharper bound of their own.
inline constexpr double derived_real_tol = 1e-12;

inline json real(double value, double tol) { return json{{"value", value}, {"tol", tol}}; }

inline double real_value(const json& j) { return j.is_object() ? j.at("value").get<double>() : j.get<double>(); }

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v)
{
    j[key] = v ? json(*v) : json(nullptr);
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& v)
{
    if (j.contains(key) && !j.at(key).is_null()) {
        v = j.at(key).get<T>();
    } else {
        v.reset();
    }
}

inline std::string csv_cell(const Rational& q) { return q.get_str(); }
inline std::string csv_cell(const Integer& n) { return n.get_str(); }
inline std::string csv_cell(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace io

NLOHMANN_JSON_SERIALIZE_ENUM(Selector, {{Selector::only, "only"},
                                        {Selector::first_root, "first_root"},
                                        {Selector::second_root, "second_root"}})

NLOHMANN_JSON_SERIALIZE_ENUM(SplittingInE, {{SplittingInE::split, "split"},
                                            {SplittingInE::inert, "inert"},
                                            {SplittingInE::ramified, "ramified"}})

inline void to_json(json& j, const PrimeOfF& q)
{
    j = json{{"label", q.label()},         {"p", q.p},
             {"residue_degree", q.residue_degree}, {"ramification", q.ramification},
             {"selector", q.selector},     {"norm", q.norm}};
}

inline void from_json(const json& j, PrimeOfF& q)
{
    j.at("p").get_to(q.p);
    j.at("residue_degree").get_to(q.residue_degree);
    j.at("ramification").get_to(q.ramification);
    j.at("selector").get_to(q.selector);
    j.at("norm").get_to(q.norm);
}

inline void to_json(json& j, const FactoredIdeal& a)
{
    json factors = json::array();
    for (const auto& [q, k] : a.entries()) factors.push_back({{"prime", q}, {"exponent", k}});
    j = json{{"ideal", a.to_string()}, {"norm", a.norm()}, {"factors", factors}};
}

inline void from_json(const json& j, FactoredIdeal& a)
{
    a = FactoredIdeal();
    for (const auto& f : j.at("factors")) a.multiply(f.at("prime").get<PrimeOfF>(), f.at("exponent").get<unsigned>());
}

inline void to_json(json& j, const LocalProfile& p)
{
    j = json{{"prime", p.prime}, {"exponent", p.exponent}, {"d0_ramified", p.d0_ramified}};
    io::put_optional(j, "splitting", p.splitting);
}

inline void from_json(const json& j, LocalProfile& p)
{
    j.at("prime").get_to(p.prime);
    j.at("exponent").get_to(p.exponent);
    j.at("d0_ramified").get_to(p.d0_ramified);
    io::get_optional(j, "splitting", p.splitting);
}

inline void to_json(json& j, const PrimeIndexData& d)
{
    j = json{{"profile", d.profile}, {"order_g0", d.order_g0}, {"order_g", d.order_g}, {"q_squared", d.q_squared}};
}

inline void from_json(const json& j, PrimeIndexData& d)
{
    j.at("profile").get_to(d.profile);
    j.at("order_g0").get_to(d.order_g0);
    j.at("order_g").get_to(d.order_g);
    j.at("q_squared").get_to(d.q_squared);
}

inline void to_json(json& j, const IndexReport& r)
{
    j = json{{"index_k0", r.index_k0},
             {"index_k", r.index_k},
             {"per_prime", r.per_prime},
             {"ratio_squared", r.ratio_squared}};
}

inline void from_json(const json& j, IndexReport& r)
{
    j.at("index_k0").get_to(r.index_k0);
    j.at("index_k").get_to(r.index_k);
    j.at("per_prime").get_to(r.per_prime);
    j.at("ratio_squared").get_to(r.ratio_squared);
}

inline void to_json(json& j, const ClassifyRow& r)
{
    j = json{{"prime", r.prime},         {"exponent", r.exponent},   {"splitting", r.splitting},
             {"d0_ramified", r.d0_ramified}, {"q_squared", r.q_squared}};
}

inline void from_json(const json& j, ClassifyRow& r)
{
    j.at("prime").get_to(r.prime);
    j.at("exponent").get_to(r.exponent);
    j.at("splitting").get_to(r.splitting);
    j.at("d0_ramified").get_to(r.d0_ramified);
    j.at("q_squared").get_to(r.q_squared);
}

inline void to_json(json& j, const RatioCheck& r)
{
    j = json{{"ratio", io::real(r.ratio, io::derived_real_tol)},
             {"bound", io::real(r.bound, io::derived_real_tol)},
             {"bound_is_one", r.bound_is_one},
             {"holds", r.holds}};
}

inline void from_json(const json& j, RatioCheck& r)
{
    r.ratio = io::real_value(j.at("ratio"));
    r.bound = io::real_value(j.at("bound"));
    j.at("bound_is_one").get_to(r.bound_is_one);
    j.at("holds").get_to(r.holds);
}

NLOHMANN_JSON_SERIALIZE_ENUM(LefschetzReport::Mode, {{LefschetzReport::Mode::exact, "exact"},
                                                     {LefschetzReport::Mode::lower_bound, "lower_bound"}})

inline void to_json(json& j, const LefschetzComponents& k)
{
    j = json{{"d", k.d},         {"s", k.s},         {"r", k.r},
             {"c", k.c},         {"rho", k.rho},     {"delta", k.delta},
             {"index_k0", k.index_k0}, {"h1_factor_known", k.h1_factor_known}};
}

inline void from_json(const json& j, LefschetzComponents& k)
{
    j.at("d").get_to(k.d);
    j.at("s").get_to(k.s);
    j.at("r").get_to(k.r);
    j.at("c").get_to(k.c);
    j.at("rho").get_to(k.rho);
    j.at("delta").get_to(k.delta);
    j.at("index_k0").get_to(k.index_k0);
    j.at("h1_factor_known").get_to(k.h1_factor_known);
}

inline void to_json(json& j, const LefschetzReport& r)
{
    j = json{{"mode", r.mode},
             {"sign", r.sign},
             {"magnitude_bound", r.magnitude_bound},
             {"components", r.components},
             {"h1_size", r.h1_size},
             {"euler_characteristic", r.euler_characteristic},
             {"torsion_verified", r.torsion_verified},
             {"numeric_check", io::real(r.numeric_check, r.numeric_tol)}};
    io::put_optional(j, "value", r.value);
}

inline void from_json(const json& j, LefschetzReport& r)
{
    j.at("mode").get_to(r.mode);
    j.at("sign").get_to(r.sign);
    j.at("magnitude_bound").get_to(r.magnitude_bound);
    j.at("components").get_to(r.components);
    j.at("h1_size").get_to(r.h1_size);
    j.at("euler_characteristic").get_to(r.euler_characteristic);
    j.at("torsion_verified").get_to(r.torsion_verified);
    r.numeric_check = j.at("numeric_check").at("value").get<double>();
    r.numeric_tol = j.at("numeric_check").at("tol").get<double>();
    io::get_optional(j, "value", r.value);
}

inline void to_json(json& j, const BettiBound& b)
{
    j = json{{"value", b.value},
             {"torsion_verified", b.torsion_verified},
             {"numeric_check", io::real(b.numeric_check, 1e-9 * std::max(1.0, std::fabs(b.numeric_check)))}};
}

inline void from_json(const json& j, BettiBound& b)
{
    j.at("value").get_to(b.value);
    j.at("torsion_verified").get_to(b.torsion_verified);
    b.numeric_check = io::real_value(j.at("numeric_check"));
}

inline void to_json(json& j, const GrowthRow& r)
{
    j = json{{"ideal", r.ideal},
             {"index", r.index},
             {"betti_bound", r.betti_bound},
             {"ratio", io::real(r.ratio, io::derived_real_tol)},
             {"guaranteed", io::real(r.guaranteed, io::derived_real_tol)}};
}

inline void from_json(const json& j, GrowthRow& r)
{
    j.at("ideal").get_to(r.ideal);
    j.at("index").get_to(r.index);
    j.at("betti_bound").get_to(r.betti_bound);
    r.ratio = io::real_value(j.at("ratio"));
    r.guaranteed = io::real_value(j.at("guaranteed"));
}

inline void to_json(json& j, const GrowthTable& t)
{
    j = json{{"rows", t.rows}, {"kappa", io::real(t.kappa, io::derived_real_tol)}};
}

inline void from_json(const json& j, GrowthTable& t)
{
    j.at("rows").get_to(t.rows);
    t.kappa = io::real_value(j.at("kappa"));
}

inline std::string growth_csv(const GrowthTable& t)
{
    std::string out = "ideal,index,betti_bound,ratio\n";
    for (const auto& r : t.rows) {
        out += r.ideal.to_string() + "," + io::csv_cell(r.index) + "," + io::csv_cell(r.betti_bound) + "," +
               io::csv_cell(r.ratio) + "\n";
    }
    return out;
}

inline void to_json(json& j, const CuspCount& c) { j = json{{"value", c.value}, {"verified", c.verified}}; }

inline void from_json(const json& j, CuspCount& c)
{
    j.at("value").get_to(c.value);
    j.at("verified").get_to(c.verified);
}

inline void to_json(json& j, const BianchiBettiBound& b)
{
    j = json{{"bound", io::real(b.bound, b.tol)}, {"cusps", b.cusps}, {"verified", b.verified}};
}

inline void from_json(const json& j, BianchiBettiBound& b)
{
    b.bound = j.at("bound").at("value").get<double>();
    b.tol = j.at("bound").at("tol").get<double>();
    j.at("cusps").get_to(b.cusps);
    j.at("verified").get_to(b.verified);
}

inline void to_json(json& j, const AsymptoticRow& r)
{
    j = json{{"k", r.k},
             {"index", r.index},
             {"bound", io::real(r.bound, io::derived_real_tol * std::max(1.0, r.bound))},
             {"ratio", io::real(r.ratio, io::derived_real_tol)}};
}

inline void from_json(const json& j, AsymptoticRow& r)
{
    j.at("k").get_to(r.k);
    j.at("index").get_to(r.index);
    r.bound = io::real_value(j.at("bound"));
    r.ratio = io::real_value(j.at("ratio"));
}

inline std::string asymptotic_csv(const std::vector<AsymptoticRow>& rows)
{
    std::string out = "k,index,bound,ratio\n";
    for (const auto& r : rows) {
        out += std::to_string(r.k) + "," + io::csv_cell(r.index) + "," + io::csv_cell(r.bound) + "," +
               io::csv_cell(r.ratio) + "\n";
    }
    return out;
}

namespace oracle {

NLOHMANN_JSON_SERIALIZE_ENUM(ExtType, {{ExtType::trivial, "trivial"},
                                       {ExtType::split_pair, "split_pair"},
                                       {ExtType::unramified, "unramified"},
                                       {ExtType::ramified, "ramified"}})

NLOHMANN_JSON_SERIALIZE_ENUM(D0Type, {{D0Type::matrix, "matrix"}, {D0Type::division, "division"}})

inline void to_json(json& j, const ProfileRow& r)
{
    j = json{{"p", r.p},
             {"e", r.e},
             {"ext_type", r.ext_type},
             {"d0_type", r.d0_type},
             {"ramified_unit", r.ramified_unit},
             {"order_g0", r.order_g0},
             {"group_order", r.group_order},
             {"cocycle_count", r.cocycle_count},
             {"class_count", r.class_count},
             {"q_squared", r.q_squared},
             {"minus_one_nontrivial", r.minus_one_nontrivial},
             {"match", r.match}};
    io::put_optional(j, "expected_g0", r.expected_g0);
    io::put_optional(j, "expected_g", r.expected_g);
    io::put_optional(j, "expected_q_squared", r.expected_q_squared);
    io::put_optional(j, "expected_classes", r.expected_classes);
}

inline void from_json(const json& j, ProfileRow& r)
{
    j.at("p").get_to(r.p);
    j.at("e").get_to(r.e);
    j.at("ext_type").get_to(r.ext_type);
    j.at("d0_type").get_to(r.d0_type);
    j.at("ramified_unit").get_to(r.ramified_unit);
    j.at("order_g0").get_to(r.order_g0);
    j.at("group_order").get_to(r.group_order);
    j.at("cocycle_count").get_to(r.cocycle_count);
    j.at("class_count").get_to(r.class_count);
    j.at("q_squared").get_to(r.q_squared);
    j.at("minus_one_nontrivial").get_to(r.minus_one_nontrivial);
    j.at("match").get_to(r.match);
    io::get_optional(j, "expected_g0", r.expected_g0);
    io::get_optional(j, "expected_g", r.expected_g);
    io::get_optional(j, "expected_q_squared", r.expected_q_squared);
    io::get_optional(j, "expected_classes", r.expected_classes);
}

inline void to_json(json& j, const AppendixReport& r)
{
    j = json{{"p", r.p}, {"e", r.e}, {"rows", r.rows}, {"all_match", r.all_match}};
}

inline void from_json(const json& j, AppendixReport& r)
{
    j.at("p").get_to(r.p);
    j.at("e").get_to(r.e);
    j.at("rows").get_to(r.rows);
    j.at("all_match").get_to(r.all_match);
}

inline std::string profiles_csv(const std::vector<ProfileRow>& rows)
{
    std::string out = "p,e,ext_type,d0_type,group_order,cocycle_count,class_count\n";
    for (const auto& r : rows) {
        out += std::to_string(r.p) + "," + std::to_string(r.e) + "," + to_string(r.ext_type) + "," +
               to_string(r.d0_type) + "," + std::to_string(r.group_order) + "," + std::to_string(r.cocycle_count) +
               "," + std::to_string(r.class_count) + "\n";
    }
    return out;
}

}  // namespace oracle

}  // namespace quatcong
