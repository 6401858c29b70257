#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quatcong/io.hpp"
#include "quatcong/quatalg.hpp"

namespace quatcong::app {

// ---------------------------------------------------------------------------
// RunConfig: one JSON document, validated before anything is computed.

struct BianchiOptions {
    std::int64_t radicand = 0;
    std::optional<IdealOfE> ideal;
    std::optional<std::uint64_t> m;
    bool override_torsion = false;
    std::optional<std::uint64_t> asymptotic_p;
    unsigned k_max = 5;
};

struct OracleConfig {
    enum class Mode { verify, explore_p2 };
    Mode mode = Mode::verify;
    int p = 3;
    int e = 1;
    int unit = 1;
    std::uint64_t guard = 10'000'000;
    oracle::ScanMode scan = oracle::ScanMode::automatic;
};

struct RunConfig {
    std::optional<BaseField> field;
    std::optional<ExtensionSpec> extension;
    std::optional<QuaternionSpec> algebra;
    std::optional<FactoredIdeal> ideal;
    std::vector<FactoredIdeal> ideals;
    std::optional<double> tolerance;
    std::optional<BianchiOptions> bianchi;
    std::optional<OracleConfig> oracle;
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    require(j.is_object(), where + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        require(allowed.count(key) > 0, "unknown key '" + key + "' in " + where);
    }
}

inline std::int64_t as_int(const json& j, const std::string& what)
{
    require(j.is_number_integer(), what + " must be an integer");
    return j.get<std::int64_t>();
}

inline std::uint64_t as_uint(const json& j, const std::string& what)
{
    std::int64_t v = as_int(j, what);
    require(v >= 0, what + " must be non-negative");
    return static_cast<std::uint64_t>(v);
}

inline BaseField parse_field(const json& j)
{
    if (j.is_string()) {
        require(j.get<std::string>() == "Q", "field must be \"Q\" or {\"sqrt\": D}");
        return BaseField::rationals();
    }
    reject_unknown(j, {"sqrt"}, "field");
    require(j.contains("sqrt"), "field object needs \"sqrt\"");
    return BaseField::real_quadratic(as_int(j.at("sqrt"), "field.sqrt"));
}

inline ExtensionSpec parse_extension(const json& j, const BaseField& f)
{
    reject_unknown(j, {"theta"}, "extension");
    require(j.contains("theta"), "extension needs \"theta\"");
    const json& t = j.at("theta");
    if (t.is_array()) {
        require(t.size() == 2, "extension.theta as an array must be [u, v]");
        return ExtensionSpec(f, {as_int(t[0], "theta[0]"), as_int(t[1], "theta[1]")});
    }
    return ExtensionSpec(f, {as_int(t, "extension.theta"), 0});
}

inline FactoredIdeal parse_ideal(const json& j, std::int64_t disc, const std::string& field_name)
{
    if (j.is_number_integer()) {
        std::int64_t m = j.get<std::int64_t>();
        require(m >= 1, "ideal generator must be >= 1");
        return FactoredIdeal::from_integer(disc, static_cast<std::uint64_t>(m));
    }
    require(j.is_string(), "ideal must be an integer or a factorization string");
    return FactoredIdeal::parse(disc, j.get<std::string>(), field_name);
}

/// "inf", "inf1", "inf2" name real places; anything else is a prime label.
inline QuaternionSpec parse_algebra(const json& j, const BaseField& f)
{
    if (j.is_string()) {
        require(j.get<std::string>() == "matrix", "algebra must be \"matrix\", {\"hilbert\"} or {\"ramified\"}");
        return QuaternionSpec::matrix_algebra(f);
    }
    reject_unknown(j, {"hilbert", "ramified"}, "algebra");
    require(j.contains("hilbert") != j.contains("ramified"), "algebra needs exactly one of hilbert / ramified");
    if (j.contains("hilbert")) {
        require(f.is_rational(), "Hilbert pairs are supported over Q only; use \"ramified\"");
        const json& h = j.at("hilbert");
        require(h.is_array() && h.size() == 2, "algebra.hilbert must be [a, b]");
        return QuaternionSpec::from_hilbert(as_int(h[0], "hilbert[0]"), as_int(h[1], "hilbert[1]"));
    }
    const json& r = j.at("ramified");
    require(r.is_array(), "algebra.ramified must be a list");
    std::vector<PrimeOfF> finite;
    std::vector<int> real;
    for (const auto& place : r) {
        std::string s = place.is_number_integer() ? std::to_string(place.get<std::int64_t>()) : place.get<std::string>();
        if (s == "inf" || s == "inf1") {
            real.push_back(0);
        } else if (s == "inf2") {
            require(f.degree() == 2, "inf2 needs a real quadratic base field");
            real.push_back(1);
        } else {
            auto a = FactoredIdeal::parse(f, s);
            require(a.entries().size() == 1 && a.entries().front().second == 1,
                    "ramified place '" + s + "' is not a single prime");
            finite.push_back(a.entries().front().first);
        }
    }
    return QuaternionSpec::from_ramification(f, finite, real);
}

inline oracle::ScanMode parse_scan(const std::string& s)
{
    if (s == "automatic") return oracle::ScanMode::automatic;
    if (s == "full_scan") return oracle::ScanMode::full_scan;
    if (s == "row_wise") return oracle::ScanMode::row_wise;
    throw ConfigError("oracle.scan must be automatic, full_scan or row_wise");
}

}  // namespace detail

inline RunConfig parse_config(const json& j)
{
    detail::reject_unknown(j, {"field", "extension", "algebra", "ideal", "ideals", "tolerance", "bianchi", "oracle"},
                           "config");
    RunConfig c;
    if (j.contains("field")) c.field = detail::parse_field(j.at("field"));
    const BaseField f = c.field.value_or(BaseField::rationals());
    if (j.contains("extension")) c.extension = detail::parse_extension(j.at("extension"), f);
    if (j.contains("algebra")) c.algebra = detail::parse_algebra(j.at("algebra"), f);
    if (j.contains("ideal")) c.ideal = detail::parse_ideal(j.at("ideal"), f.discriminant(), f.to_string());
    if (j.contains("ideals")) {
        require(j.at("ideals").is_array(), "ideals must be a list");
        for (const auto& a : j.at("ideals")) c.ideals.push_back(detail::parse_ideal(a, f.discriminant(), f.to_string()));
    }
    if (j.contains("tolerance")) {
        require(j.at("tolerance").is_number() && j.at("tolerance").get<double>() > 0, "tolerance must be positive");
        c.tolerance = j.at("tolerance").get<double>();
    }
    if (j.contains("bianchi")) {
        const json& b = j.at("bianchi");
        detail::reject_unknown(b, {"radicand", "ideal", "m", "override_torsion", "asymptotic"}, "bianchi");
        require(b.contains("radicand"), "bianchi needs \"radicand\"");
        BianchiOptions o;
        o.radicand = detail::as_int(b.at("radicand"), "bianchi.radicand");
        if (b.contains("ideal")) {
            require(o.radicand < 0, "bianchi.ideal needs an imaginary quadratic radicand");
            require(quatcong::detail::is_squarefree(o.radicand), "bianchi.radicand must be squarefree");
            o.ideal = detail::parse_ideal(b.at("ideal"), quatcong::detail::fundamental_discriminant(o.radicand),
                                          "Q(sqrt(" + std::to_string(o.radicand) + "))");
        }
        if (b.contains("m")) o.m = detail::as_uint(b.at("m"), "bianchi.m");
        if (b.contains("override_torsion")) {
            require(b.at("override_torsion").is_boolean(), "bianchi.override_torsion must be a boolean");
            o.override_torsion = b.at("override_torsion").get<bool>();
        }
        if (b.contains("asymptotic")) {
            const json& a = b.at("asymptotic");
            detail::reject_unknown(a, {"p", "k_max"}, "bianchi.asymptotic");
            require(a.contains("p"), "bianchi.asymptotic needs \"p\"");
            o.asymptotic_p = detail::as_uint(a.at("p"), "bianchi.asymptotic.p");
            if (a.contains("k_max")) o.k_max = static_cast<unsigned>(detail::as_uint(a.at("k_max"), "k_max"));
        }
        c.bianchi = o;
    }
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        detail::reject_unknown(o, {"mode", "p", "e", "unit", "guard", "scan"}, "oracle");
        OracleConfig oc;
        if (o.contains("mode")) {
            std::string m = o.at("mode").get<std::string>();
            require(m == "verify" || m == "explore_p2", "oracle.mode must be verify or explore_p2");
            oc.mode = m == "verify" ? OracleConfig::Mode::verify : OracleConfig::Mode::explore_p2;
        }
        if (oc.mode == OracleConfig::Mode::explore_p2) oc.p = 2;
        if (o.contains("p")) oc.p = static_cast<int>(detail::as_int(o.at("p"), "oracle.p"));
        if (o.contains("e")) oc.e = static_cast<int>(detail::as_int(o.at("e"), "oracle.e"));
        if (o.contains("unit")) oc.unit = static_cast<int>(detail::as_int(o.at("unit"), "oracle.unit"));
        if (o.contains("guard")) {
            require(o.at("guard").is_number() && o.at("guard").get<double>() >= 1, "oracle.guard must be >= 1");
            oc.guard = static_cast<std::uint64_t>(o.at("guard").get<double>());
        }
        if (o.contains("scan")) oc.scan = detail::parse_scan(o.at("scan").get<std::string>());
        require(oc.p >= 2 && is_prime(static_cast<std::uint64_t>(oc.p)), "oracle.p must be prime");
        require(oc.e >= 1 && oc.e <= 2, "oracle.e must be 1 or 2");
        require(oc.mode != OracleConfig::Mode::explore_p2 || oc.p == 2, "explore_p2 runs at p = 2");
        c.oracle = oc;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Commands

struct CommandOptions {
    std::optional<double> tolerance;
    bool single_thread = false;
};

struct CommandOutput {
    json report;
    /// Tabular form, when the command produces a table.
    std::optional<std::string> csv;
    /// Non-zero when the computation finished but a consistency check failed.
    int exit_code = 0;
};

namespace detail {

struct Setting {
    const BaseField& field;
    const ExtensionSpec& extension;
    const QuaternionSpec& algebra;
};

inline Setting need_setting(const RunConfig& c)
{
    require(c.field.has_value(), "config needs \"field\"");
    require(c.extension.has_value(), "config needs \"extension\"");
    require(c.algebra.has_value(), "config needs \"algebra\"");
    return {*c.field, *c.extension, *c.algebra};
}

inline const FactoredIdeal& need_ideal(const RunConfig& c)
{
    require(c.ideal.has_value(), "config needs \"ideal\"");
    return *c.ideal;
}

inline json setting_json(const Setting& s)
{
    json ram = json::array();
    for (const auto& q : s.algebra.ram_f()) ram.push_back(q.label());
    for (int v : s.algebra.ram_inf()) ram.push_back("inf" + std::to_string(v + 1));
    return json{{"field", s.field.to_string()},
                {"theta", {s.extension.theta().u, s.extension.theta().v}},
                {"algebra_ramification", ram}};
}

}  // namespace detail

inline CommandOutput run_classify(const RunConfig& c)
{
    auto s = detail::need_setting(c);
    const auto& a = detail::need_ideal(c);
    auto rows = classify(s.algebra, s.extension, a);
    CommandOutput out;
    out.report = json{{"setting", detail::setting_json(s)}, {"ideal", a}, {"rows", rows}};
    std::string csv = "prime,norm,exponent,splitting,d0_ramified,q_squared\n";
    for (const auto& r : rows) {
        csv += r.prime.label() + "," + std::to_string(r.prime.norm) + "," + std::to_string(r.exponent) + "," +
               to_string(r.splitting) + "," + (r.d0_ramified ? "true" : "false") + "," + r.q_squared.get_str() + "\n";
    }
    out.csv = csv;
    return out;
}

inline CommandOutput run_index(const RunConfig& c, const CommandOptions& opt)
{
    auto s = detail::need_setting(c);
    const auto& a = detail::need_ideal(c);
    CommandOutput out;
    out.report = indices(s.algebra, s.extension, a);
    out.report["ratio_check"] =
        ratio_bound_check(s.algebra, s.extension, a, opt.tolerance.value_or(c.tolerance.value_or(1e-12)));
    out.report["torsion_verified"] = torsion_free_sufficient(a);
    out.report["setting"] = detail::setting_json(s);
    return out;
}

inline CommandOutput run_lefschetz(const RunConfig& c)
{
    auto s = detail::need_setting(c);
    CommandOutput out;
    out.report = lefschetz_number(s.extension, s.algebra, detail::need_ideal(c));
    out.report["setting"] = detail::setting_json(s);
    return out;
}

inline CommandOutput run_betti(const RunConfig& c)
{
    auto s = detail::need_setting(c);
    auto hs = validate_hyperbolic(s.field, s.extension, s.algebra);
    CommandOutput out;
    out.report = betti_lower_bound(hs, detail::need_ideal(c));
    out.report["setting"] = detail::setting_json(s);
    return out;
}

inline CommandOutput run_growth(const RunConfig& c)
{
    auto s = detail::need_setting(c);
    require(!c.ideals.empty(), "growth needs \"ideals\"");
    auto hs = validate_hyperbolic(s.field, s.extension, s.algebra);
    auto table = growth_table(hs, c.ideals);
    CommandOutput out;
    out.report = table;
    out.report["target_constant"] = io::real(growth_constant(hs, c.ideals.back()), io::derived_real_tol);
    out.report["setting"] = detail::setting_json(s);
    out.csv = growth_csv(table);
    return out;
}

struct BianchiReport {
    std::int64_t radicand = 0;
    std::int64_t discriminant = 0;
    std::uint64_t class_number = 0;
    unsigned unit_order = 0;
    std::optional<FactoredIdeal> ideal;
    std::optional<Integer> index;
    std::optional<BianchiBettiBound> betti;
    std::optional<std::uint64_t> m;
    std::optional<Rational> lefschetz;
    std::vector<AsymptoticRow> asymptotic;
    bool operator==(const BianchiReport&) const = default;
};

inline void to_json(json& j, const BianchiReport& r)
{
    j = json{{"radicand", r.radicand},
             {"discriminant", r.discriminant},
             {"class_number", r.class_number},
             {"unit_order", r.unit_order},
             {"asymptotic", r.asymptotic}};
    io::put_optional(j, "ideal", r.ideal);
    io::put_optional(j, "index", r.index);
    io::put_optional(j, "betti", r.betti);
    io::put_optional(j, "m", r.m);
    io::put_optional(j, "lefschetz", r.lefschetz);
}

inline void from_json(const json& j, BianchiReport& r)
{
    j.at("radicand").get_to(r.radicand);
    j.at("discriminant").get_to(r.discriminant);
    j.at("class_number").get_to(r.class_number);
    j.at("unit_order").get_to(r.unit_order);
    j.at("asymptotic").get_to(r.asymptotic);
    io::get_optional(j, "ideal", r.ideal);
    io::get_optional(j, "index", r.index);
    io::get_optional(j, "betti", r.betti);
    io::get_optional(j, "m", r.m);
    io::get_optional(j, "lefschetz", r.lefschetz);
}

inline BianchiReport bianchi_report(const BianchiOptions& o)
{
    BianchiReport r;
    r.radicand = o.radicand;
    r.m = o.m;
    if (o.m) r.lefschetz = bianchi_lefschetz(o.radicand, *o.m);
    if (o.radicand < 0) {
        BianchiField field(o.radicand);
        r.discriminant = field.discriminant();
        r.class_number = field.class_number();
        r.unit_order = field.unit_order();
        if (o.ideal) {
            r.ideal = *o.ideal;
            r.index = bianchi_index(*o.ideal);
            r.betti = bianchi_betti_bound(field, *o.ideal, o.override_torsion);
        }
        if (o.asymptotic_p) r.asymptotic = asymptotic_table(field, *o.asymptotic_p, o.k_max);
    } else {
        require(!o.ideal && !o.asymptotic_p, "cusp and Betti data need an imaginary quadratic radicand");
        require(o.m.has_value(), "a real quadratic radicand is only used with \"m\"");
        r.discriminant = quatcong::detail::fundamental_discriminant(o.radicand);
    }
    return r;
}

inline CommandOutput run_bianchi(const RunConfig& c)
{
    require(c.bianchi.has_value(), "config needs \"bianchi\"");
    auto r = bianchi_report(*c.bianchi);
    CommandOutput out;
    out.report = r;
    if (!r.asymptotic.empty()) out.csv = asymptotic_csv(r.asymptotic);
    return out;
}

inline CommandOutput run_oracle(const RunConfig& c, const CommandOptions& opt)
{
    OracleConfig oc = c.oracle.value_or(OracleConfig{});
    oracle::OracleOptions o;
    o.enumeration = {oc.scan, oc.guard, opt.single_thread ? 1u : oracle::default_workers()};
    o.ramified_unit = oc.unit;
    CommandOutput out;
    if (oc.mode == OracleConfig::Mode::verify) {
        auto rep = oracle::verify_appendix(oc.p, oc.e, o);
        out.report = rep;
        out.csv = oracle::profiles_csv(rep.rows);
        if (!rep.all_match) out.exit_code = ConsistencyError::exit_code;
    } else {
        auto rows = oracle::explore_p2(oc.e, o);
        out.report = json{{"p", 2}, {"e", oc.e}, {"rows", rows}};
        out.csv = oracle::profiles_csv(rows);
    }
    return out;
}

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"classify", "index", "lefschetz", "betti",
                                                "bianchi",  "oracle", "growth"};
    return names;
}

inline CommandOutput run_command(const std::string& name, const RunConfig& c, const CommandOptions& opt = {})
{
    if (name == "classify") return run_classify(c);
    if (name == "index") return run_index(c, opt);
    if (name == "lefschetz") return run_lefschetz(c);
    if (name == "betti") return run_betti(c);
    if (name == "growth") return run_growth(c);
    if (name == "bianchi") return run_bianchi(c);
    if (name == "oracle") return run_oracle(c, opt);
    throw ConfigError("unknown command '" + name + "'");
}

/// Maps the library's exception types to process exit codes; 1 for anything else.
template <class F>
int exit_code_of(F&& f, std::string& message)
{
    try {
        f();
        return 0;
    } catch (const ConfigError& e) {
        message = e.what();
        return ConfigError::exit_code;
    } catch (const UnsupportedError& e) {
        message = e.what();
        return UnsupportedError::exit_code;
    } catch (const GuardExceeded& e) {
        message = e.what();
        return GuardExceeded::exit_code;
    } catch (const ConsistencyError& e) {
        message = e.what();
        return ConsistencyError::exit_code;
    } catch (const json::exception& e) {
        message = std::string("malformed config: ") + e.what();
        return ConfigError::exit_code;
    }
}

}  // namespace quatcong::app
