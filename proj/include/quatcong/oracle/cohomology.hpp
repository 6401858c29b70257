#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "quatcong/congruence.hpp"
#include "quatcong/error.hpp"
#include "quatcong/oracle/rings.hpp"

namespace quatcong::oracle {

using Quat = QuaternionRing::Quat;

enum class ScanMode { automatic, full_scan, row_wise };

struct EnumerationOptions {
    ScanMode mode = ScanMode::automatic;
    /// Upper bound on the number of ring elements the search may touch.
    std::uint64_t guard = 10'000'000;
    unsigned workers = 1;
};

inline unsigned default_workers()
{
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

namespace detail {

inline void check_guard(const QuaternionRing& ring, std::uint64_t guard)
{
    if (ring.cardinality() > guard) {
        throw GuardExceeded("search space of " + std::to_string(ring.cardinality()) +
                            " ring elements exceeds the guard of " + std::to_string(guard));
    }
}

/// Runs body(lo, hi, out) over [0, n) split into `workers` contiguous slices
/// and concatenates the per-slice outputs in slice order.
template <class Body>
std::vector<Quat> parallel_collect(std::size_t n, unsigned workers, Body body)
{
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    std::vector<std::vector<Quat>> parts(workers);
    std::vector<std::thread> threads;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (workers == 1) {
            body(lo, hi, parts[w]);
        } else {
            threads.emplace_back([&, lo, hi, w] { body(lo, hi, parts[w]); });
        }
    }
    for (auto& t : threads) t.join();
    std::vector<Quat> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

}  // namespace detail

/// All elements of reduced norm 1, sorted by serialization key.
inline std::vector<Quat> enumerate_norm_one(const QuaternionRing& ring, const EnumerationOptions& opt = {})
{
    detail::check_guard(ring, opt.guard);
    const auto& B = ring.base();
    const auto& el = B.elements();
    const auto one = B.one();
    ScanMode mode = opt.mode;
    if (mode == ScanMode::automatic) mode = ring.type() == D0Type::matrix ? ScanMode::row_wise : ScanMode::full_scan;
    require(mode != ScanMode::row_wise || ring.type() == D0Type::matrix, "row-wise enumeration needs a matrix ring");

    std::vector<Quat> out;
    if (mode == ScanMode::full_scan) {
        out = detail::parallel_collect(el.size(), opt.workers, [&](std::size_t lo, std::size_t hi, std::vector<Quat>& acc) {
            for (std::size_t i = lo; i < hi; ++i)
                for (auto b : el)
                    for (auto c : el)
                        for (auto d : el) {
                            Quat q{el[i], b, c, d};
                            if (ring.reduced_norm(q) == one) acc.push_back(q);
                        }
        });
    } else {
        // ad - bc = 1: for a unit, d = a^-1 (1 + bc); otherwise scan d.
        out = detail::parallel_collect(el.size(), opt.workers, [&](std::size_t lo, std::size_t hi, std::vector<Quat>& acc) {
            for (std::size_t i = lo; i < hi; ++i) {
                const auto a = el[i];
                for (auto b : el)
                    for (auto c : el) {
                        auto rhs = B.add(one, B.mul(b, c));
                        if (B.is_unit(a)) {
                            acc.push_back({a, b, c, B.mul(B.inverse(a), rhs)});
                        } else {
                            for (auto d : el)
                                if (B.mul(a, d) == rhs) acc.push_back({a, b, c, d});
                        }
                    }
            }
        });
    }
    std::sort(out.begin(), out.end(), [&](const Quat& x, const Quat& y) { return ring.key(x) < ring.key(y); });
    return out;
}

/// Units of the ring (reduced norm a unit of the base), by full scan.
inline std::uint64_t count_units(const QuaternionRing& ring, std::uint64_t guard = 10'000'000)
{
    detail::check_guard(ring, guard);
    const auto& B = ring.base();
    std::uint64_t n = 0;
    for (auto a : B.elements())
        for (auto b : B.elements())
            for (auto c : B.elements())
                for (auto d : B.elements()) n += B.is_unit(ring.reduced_norm({a, b, c, d})) ? 1 : 0;
    return n;
}

/// b with b * sigma(b) = 1.
inline std::vector<Quat> cocycles(const QuaternionRing& ring, const std::vector<Quat>& group)
{
    std::vector<Quat> out;
    const Quat one = ring.one();
    for (const auto& b : group) {
        if (ring.mul(b, ring.sigma(b)) == one) out.push_back(b);
    }
    return out;
}

struct H1Result {
    std::uint64_t group_order = 0;
    std::uint64_t cocycle_count = 0;
    std::uint64_t class_count = 0;
    /// Least element (by serialization key) of each class, in increasing order.
    std::vector<Quat> representatives;
    /// Class sizes, aligned with representatives.
    std::vector<std::uint64_t> class_sizes;
    /// -1 is not equivalent to 1.
    bool contains_minus_one_nontrivially = false;
    bool operator==(const H1Result&) const = default;
};

struct ClassOptions {
    unsigned workers = 1;
    /// When set, group and cocycle lists are shuffled with this seed first.
    std::optional<std::uint64_t> shuffle_seed;
};

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // The smaller index becomes the root, so the final forest does not
    // depend on the order of unions.
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

}  // namespace detail

/// Partition of the cocycles under b -> c^-1 b sigma(c), c in the group.
inline H1Result h1_classes(const QuaternionRing& ring, std::vector<Quat> group, std::vector<Quat> cocycle_list,
                           const ClassOptions& opt = {})
{
    if (opt.shuffle_seed) {
        std::mt19937_64 rng(*opt.shuffle_seed);
        std::shuffle(group.begin(), group.end(), rng);
        std::shuffle(cocycle_list.begin(), cocycle_list.end(), rng);
    }
    // Index cocycles by key order, so union-find roots are least elements.
    std::sort(cocycle_list.begin(), cocycle_list.end(),
              [&](const Quat& x, const Quat& y) { return ring.key(x) < ring.key(y); });
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < cocycle_list.size(); ++i) index.emplace(ring.key(cocycle_list[i]), i);

    const std::size_t nz = cocycle_list.size();
    unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(std::max<std::size_t>(1, group.size()))));
    std::vector<detail::UnionFind> local(workers, detail::UnionFind(nz));
    auto work = [&](unsigned w, std::size_t lo, std::size_t hi) {
        auto& uf = local[w];
        for (std::size_t j = lo; j < hi; ++j) {
            const Quat cinv = ring.conjugate(group[j]);
            const Quat sc = ring.sigma(group[j]);
            for (std::size_t i = 0; i < nz; ++i) {
                auto it = index.find(ring.key(ring.mul(ring.mul(cinv, cocycle_list[i]), sc)));
                ensure(it != index.end(), "twisted conjugate of a cocycle is not a cocycle");
                uf.unite(i, it->second);
            }
        }
    };
    const std::size_t chunk = (group.size() + workers - 1) / workers;
    if (workers == 1) {
        work(0, 0, group.size());
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) {
            std::size_t lo = std::min(group.size(), w * chunk), hi = std::min(group.size(), lo + chunk);
            threads.emplace_back(work, w, lo, hi);
        }
        for (auto& t : threads) t.join();
    }
    detail::UnionFind merged(nz);
    for (auto& uf : local)
        for (std::size_t i = 0; i < nz; ++i) merged.unite(i, uf.find(i));

    H1Result res;
    res.group_order = group.size();
    res.cocycle_count = nz;
    std::vector<std::uint64_t> sizes(nz, 0);
    for (std::size_t i = 0; i < nz; ++i) ++sizes[merged.find(i)];
    for (std::size_t i = 0; i < nz; ++i) {
        if (merged.find(i) == i) {
            res.representatives.push_back(cocycle_list[i]);
            res.class_sizes.push_back(sizes[i]);
        }
    }
    res.class_count = res.representatives.size();
    auto one_it = index.find(ring.key(ring.one()));
    auto minus_it = index.find(ring.key(ring.minus_one()));
    ensure(one_it != index.end() && minus_it != index.end(), "1 and -1 must be cocycles");
    res.contains_minus_one_nontrivially = merged.find(one_it->second) != merged.find(minus_it->second);
    return res;
}

/// Exhaustive search for c with c^-1 b sigma(c) = target.
inline bool cohomologous(const QuaternionRing& ring, const std::vector<Quat>& group, const Quat& b, const Quat& target)
{
    for (const auto& c : group) {
        if (ring.mul(ring.mul(ring.conjugate(c), b), ring.sigma(c)) == target) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------

struct ProfileRow {
    int p = 0;
    int e = 1;
    ExtType ext_type = ExtType::split_pair;
    D0Type d0_type = D0Type::matrix;
    int ramified_unit = 1;
    std::uint64_t order_g0 = 0;
    std::uint64_t group_order = 0;
    std::uint64_t cocycle_count = 0;
    std::uint64_t class_count = 0;
    Rational q_squared;
    /// Closed forms; absent in exploration rows.
    std::optional<std::uint64_t> expected_g0;
    std::optional<std::uint64_t> expected_g;
    std::optional<Rational> expected_q_squared;
    /// Class count predicted by the local theory at this level, when known.
    std::optional<std::uint64_t> expected_classes;
    bool minus_one_nontrivial = false;
    bool match = true;
    bool operator==(const ProfileRow&) const = default;
};

struct AppendixReport {
    int p = 0;
    int e = 1;
    std::vector<ProfileRow> rows;
    bool all_match = true;
    bool operator==(const AppendixReport&) const = default;
};

inline SplittingInE splitting_of(ExtType t)
{
    switch (t) {
    case ExtType::split_pair: return SplittingInE::split;
    case ExtType::unramified: return SplittingInE::inert;
    case ExtType::ramified: return SplittingInE::ramified;
    case ExtType::trivial: break;
    }
    throw ConfigError("the trivial ring has no splitting type");
}

struct OracleOptions {
    EnumerationOptions enumeration;
    int ramified_unit = 1;
    bool with_h1 = true;
};

namespace detail {

inline ProfileRow run_profile(int p, int e, ExtType ext, D0Type d0, const OracleOptions& opt)
{
    QuaternionRing g0_ring(LocalRing(p, e, ExtType::trivial), d0);
    QuaternionRing ring(LocalRing(p, e, ext, opt.ramified_unit), d0);
    ProfileRow row;
    row.p = p;
    row.e = e;
    row.ext_type = ext;
    row.d0_type = d0;
    row.ramified_unit = opt.ramified_unit;
    auto g0 = enumerate_norm_one(g0_ring, opt.enumeration);
    auto g = enumerate_norm_one(ring, opt.enumeration);
    row.order_g0 = g0.size();
    row.group_order = g.size();
    row.q_squared = make_rational(Integer(static_cast<unsigned long>(row.order_g0)) * row.order_g0,
                                  Integer(static_cast<unsigned long>(row.group_order)));
    if (opt.with_h1) {
        auto z = cocycles(ring, g);
        auto h1 = h1_classes(ring, g, z, {opt.enumeration.workers, std::nullopt});
        row.cocycle_count = h1.cocycle_count;
        row.class_count = h1.class_count;
        row.minus_one_nontrivial = h1.contains_minus_one_nontrivially;
    }
    return row;
}

}  // namespace detail

/// Every (ext_type x d0_type) profile at (p, e), compared against the
/// closed forms of the congruence module.
inline AppendixReport verify_appendix(int p, int e, const OracleOptions& opt = {})
{
    AppendixReport rep{p, e, {}, true};
    const auto pu = static_cast<std::uint64_t>(p);
    for (ExtType ext : {ExtType::split_pair, ExtType::unramified, ExtType::ramified}) {
        for (D0Type d0 : {D0Type::matrix, D0Type::division}) {
            auto row = detail::run_profile(p, e, ext, d0, opt);
            const bool ram = d0 == D0Type::division;
            const auto split = splitting_of(ext);
            row.expected_g0 = order_g0(pu, static_cast<unsigned>(e), ram).get_ui();
            row.expected_g = order_g(pu, static_cast<unsigned>(e), split, ram).get_ui();
            PrimeOfF prime{pu, 1, 1, Selector::only, pu};
            row.expected_q_squared = q_squared({prime, static_cast<unsigned>(e), ram, split});
            if (ext != ExtType::ramified) row.expected_classes = 1;
            else if (p != 2 && e == 1) row.expected_classes = 2;
            row.match = row.order_g0 == *row.expected_g0 && row.group_order == *row.expected_g &&
                        row.q_squared == *row.expected_q_squared;
            if (opt.with_h1 && row.expected_classes) row.match = row.match && row.class_count == *row.expected_classes;
            rep.all_match = rep.all_match && row.match;
            rep.rows.push_back(std::move(row));
        }
    }
    return rep;
}

/// H^1 sizes over 2 at level e <= 2. Only the unramified matrix profile has
/// a predicted value (1 class), which is enforced.
inline std::vector<ProfileRow> explore_p2(int e, const OracleOptions& opt = {})
{
    require(e >= 1 && e <= 2, "explore_p2 supports e in {1, 2}");
    require(opt.ramified_unit % 2 == 1, "ramified unit must be odd");
    std::vector<ProfileRow> rows;
    for (ExtType ext : {ExtType::ramified, ExtType::unramified}) {
        for (D0Type d0 : {D0Type::matrix, D0Type::division}) {
            OracleOptions o = opt;
            o.with_h1 = true;
            auto row = detail::run_profile(2, e, ext, d0, o);
            if (ext == ExtType::unramified && d0 == D0Type::matrix) {
                row.expected_classes = 1;
                ensure(row.class_count == 1, "unramified matrix profile over 2 has " +
                                                 std::to_string(row.class_count) + " H^1 classes");
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace quatcong::oracle
