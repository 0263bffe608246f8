#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "malle/eisenstein.hpp"
#include "malle/int_util.hpp"
#include "malle/series.hpp"

// Exhaustive enumeration of cyclic cubic extensions L/K, K = Q(zeta_3), with
// bounded relative discriminant norm. Extensions correspond to cube-free
// Kummer pairs {alpha, alpha^2}; the relative discriminant is the square of
// the conductor, and |d_L| = 27 * N(d_{L/K}).

namespace malle {

// Conductor of a cyclic cubic extension of K: squarefree tame part away from
// lambda plus a wild exponent in {0,2,3,4}.
struct RelativeConductor {
    unsigned lambda_exp = 0;
    std::vector<EisInt> tame_primes;  // canonical, exponent 1 each
    u64 norm = 1;
};

enum class GaloisType { C6, S3_6, WREATH };

inline std::string galois_type_str(GaloisType t) {
    switch (t) {
        case GaloisType::C6: return "C6";
        case GaloisType::S3_6: return "S3_6";
        default: return "WREATH";
    }
}

struct TowerRecord {
    KummerClass cls;
    RelativeConductor conductor;
    u64 rel_disc_norm = 0;  // N(d_{L/K}) = N(conductor)^2
    u64 abs_disc = 0;       // |d_L| = 27 * rel_disc_norm
    GaloisType galois_type = GaloisType::WREATH;
};

// Wild conductor exponent: 4 when lambda divides the class; otherwise from
// the cube distance w of the lambda-coprime part (w>=3 unramified, w=2 -> 2,
// w=1 -> 3). Validated against the known discriminants of K(zeta_9) and the
// splitting fields of x^3-2, x^3-3.
inline unsigned lambda_conductor_exp(const KummerClass& c) {
    if (c.lambda_exp != 0) return 4;
    unsigned w = w_invariant_fast(c.tame_unit_residue_mod9());
    if (w >= 3) return 0;
    return w == 2 ? 2 : 3;
}

inline RelativeConductor conductor_of(const KummerClass& c) {
    RelativeConductor f;
    f.lambda_exp = lambda_conductor_exp(c);
    u64 norm = ipow_u64(3, f.lambda_exp);
    for (const auto& [p, e] : c.primes) {
        f.tame_primes.push_back(p);
        norm *= static_cast<u64>(p.norm());
    }
    f.norm = norm;
    return f;
}

// sigma = complex conjugation (w -> w^2) on classes: conjugate every prime,
// pick up w^(2a) from the unit and w^(2b) from sigma(lambda) = zeta6 * lambda.
inline KummerClass sigma_class(const KummerClass& c) {
    KummerClass s;
    s.unit_exp = (2 * c.unit_exp + 2 * c.lambda_exp) % 3;
    s.lambda_exp = c.lambda_exp;
    for (const auto& [p, e] : c.primes)
        s.primes.push_back({canonical_associate(p.conj()).first, e});
    std::sort(s.primes.begin(), s.primes.end(),
              [](const auto& a, const auto& b) { return eis_norm_less(a.first, b.first); });
    return s;
}

// L/Q is abelian (C6) iff sigma inverts the class (conjugation also inverts
// mu_3, so the Galois action on Gal(L/K) is trivial exactly then); sigma
// fixing the class gives the S3 sextic; anything else generates the wreath
// closure of degree 18.
inline GaloisType galois_type(const KummerClass& c) {
    KummerClass s = sigma_class(c);
    if (s == c.square()) return GaloisType::C6;
    if (s == c) return GaloisType::S3_6;
    return GaloisType::WREATH;
}

inline TowerRecord make_record(const KummerClass& c) {
    TowerRecord r;
    r.cls = c;
    r.conductor = conductor_of(c);
    r.rel_disc_norm = r.conductor.norm * r.conductor.norm;
    r.abs_disc = 27 * r.rel_disc_norm;
    r.galois_type = galois_type(c);
    return r;
}

// Canonical primes of norm <= bound: both primes above split p = 1 mod 3 and
// the primes above inert p = 2 mod 3 (norm p^2). Sorted by (norm, x, y).
inline std::vector<EisInt> eis_primes_up_to(u64 norm_bound) {
    std::vector<EisInt> out;
    for (u64 p : primes_up_to(norm_bound)) {
        if (p % 3 == 1) {
            EisInt pi = split_prime_above(static_cast<i64>(p));
            out.push_back(pi);
            out.push_back(canonical_associate(pi.conj()).first);
        } else if (p % 3 == 2 && p * p <= norm_bound) {
            out.push_back(canonical_associate(EisInt{static_cast<i64>(p), 0}).first);
        }
    }
    std::sort(out.begin(), out.end(), eis_norm_less);
    return out;
}

struct KummerEnumeration {
    u64 rel_disc_bound = 0;
    u64 conductor_norm_bound = 0;
    std::vector<TowerRecord> records;  // sorted by (rel_disc_norm, class encoding)
};

namespace detail {

// Emits all records whose tame radical is rooted at `first` (prime indices
// are strictly increasing along the radical).
inline void kummer_emit_for_radical(const std::vector<EisInt>& primes,
                                    std::vector<size_t>& radical, u64 radical_norm,
                                    u64 cond_bound, std::vector<TowerRecord>& out) {
    size_t t = radical.size();
    for (unsigned mask = 0; mask < (1u << t); ++mask)
        for (unsigned a = 0; a < 3; ++a)
            for (unsigned b = 0; b < 3; ++b) {
                if (t == 0 && a == 0 && b == 0) continue;
                KummerClass c;
                c.unit_exp = a;
                c.lambda_exp = b;
                for (size_t i = 0; i < t; ++i)
                    c.primes.push_back({primes[radical[i]], (mask >> i & 1) ? 2u : 1u});
                KummerClass sq = c.square();
                if (sq.encode() < c.encode()) continue;  // keep one member per pair
                unsigned fl = lambda_conductor_exp(c);
                u64 cn = radical_norm * ipow_u64(3, fl);
                if (cn > cond_bound) continue;
                out.push_back(make_record(c));
            }
}

inline void kummer_dfs(const std::vector<EisInt>& primes, const std::vector<u64>& norms,
                       size_t next, std::vector<size_t>& radical, u64 radical_norm,
                       u64 cond_bound, std::vector<TowerRecord>& out) {
    kummer_emit_for_radical(primes, radical, radical_norm, cond_bound, out);
    for (size_t i = next; i < primes.size(); ++i) {
        if (radical_norm > cond_bound / norms[i]) break;  // norms nondecreasing
        radical.push_back(i);
        kummer_dfs(primes, norms, i + 1, radical, radical_norm * norms[i], cond_bound, out);
        radical.pop_back();
    }
}

}  // namespace detail

inline void sort_records(std::vector<TowerRecord>& recs) {
    std::sort(recs.begin(), recs.end(), [](const TowerRecord& a, const TowerRecord& b) {
        if (a.rel_disc_norm != b.rel_disc_norm) return a.rel_disc_norm < b.rel_disc_norm;
        return a.cls.encode() < b.cls.encode();
    });
}

// One record per extension with N(d_{L/K}) <= X, i.e. conductor norm <=
// sqrt(X). Partitioned by the first prime of the tame radical; results are
// byte-identical for every job count.
inline KummerEnumeration kummer_enumerate(u64 X, unsigned jobs = 1) {
    if (X < 1) throw std::invalid_argument("kummer_enumerate: bound must be >= 1");
    KummerEnumeration E;
    E.rel_disc_bound = X;
    E.conductor_norm_bound = isqrt_u64(X);
    u64 Y = E.conductor_norm_bound;
    std::vector<EisInt> primes = eis_primes_up_to(Y);
    std::vector<u64> norms;
    for (const auto& p : primes) norms.push_back(static_cast<u64>(p.norm()));
    // partition 0 additionally owns the empty radical
    unsigned parts = jobs <= 1 ? 1 : std::min<size_t>(primes.size() + 1, jobs * 8);
    auto chunks = run_partitions<TowerRecord>(jobs, parts, [&](unsigned part) {
        std::vector<TowerRecord> out;
        std::vector<size_t> radical;
        if (part == 0) {
            detail::kummer_emit_for_radical(primes, radical, 1, Y, out);
        }
        for (size_t i = part; i < primes.size(); i += parts) {
            if (norms[i] > Y) break;
            radical.assign(1, i);
            detail::kummer_dfs(primes, norms, i + 1, radical, norms[i], Y, out);
        }
        return out;
    });
    for (auto& ch : chunks)
        E.records.insert(E.records.end(), std::make_move_iterator(ch.begin()),
                         std::make_move_iterator(ch.end()));
    sort_records(E.records);
    return E;
}

// Z(K, C3; .) on rel_disc_norm checkpoints; optionally restricted by type.
inline CountSeries kummer_count_series(const KummerEnumeration& E,
                                       const std::vector<u64>& checkpoints,
                                       std::optional<GaloisType> type = std::nullopt) {
    std::vector<u64> vals;
    for (const auto& r : E.records)
        if (!type || r.galois_type == *type) vals.push_back(r.rel_disc_norm);
    std::string label = "Z(K,C3)";
    if (type) label += "[" + galois_type_str(*type) + "]";
    return make_series(label, std::move(vals), checkpoints);
}

// The lower-bound series L(x) = Z(K, C3; x/27) on absolute-discriminant
// checkpoints.
inline CountSeries kummer_lower_bound_series(const KummerEnumeration& E,
                                             const std::vector<u64>& checkpoints,
                                             std::optional<GaloisType> type = std::nullopt) {
    std::vector<u64> vals;
    for (const auto& r : E.records)
        if (!type || r.galois_type == *type) vals.push_back(r.abs_disc);
    std::string label = type ? "L(x)[" + galois_type_str(*type) + "]" : "L(x)";
    return make_series(label, std::move(vals), checkpoints);
}

inline void write_tower_csv(std::ostream& os, const KummerEnumeration& E) {
    os << "rel_disc_norm,abs_disc,galois_type,class\n";
    for (const auto& r : E.records)
        os << r.rel_disc_norm << "," << r.abs_disc << "," << galois_type_str(r.galois_type)
           << "," << r.cls.encode() << "\n";
}

}  // namespace malle
