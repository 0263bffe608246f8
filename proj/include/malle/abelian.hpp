#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "malle/int_util.hpp"
#include "malle/series.hpp"

// Exact enumeration of quadratic fields, cyclic cubic fields over Q (by
// conductor) and C6 fields (as quadratic x cubic pairs via the
// conductor-discriminant formula).

namespace malle {

inline std::vector<bool> squarefree_table(u64 n) {
    std::vector<bool> sf(n + 1, true);
    if (n >= 0) sf[0] = false;
    for (u64 q = 2; q * q <= n; ++q)
        for (u64 j = q * q; j <= n; j += q * q) sf[j] = false;
    return sf;
}

// All fundamental discriminants with |d| <= x, both signs.
inline std::vector<i64> fundamental_discs(u64 x) {
    auto sf = squarefree_table(x);
    std::vector<i64> out;
    for (u64 m = 1; m <= x; ++m) {
        for (i64 sign : {+1, -1}) {
            i64 d = sign * static_cast<i64>(m);
            if (d == 1) continue;
            if (mod_floor(d, 4) == 1 && sf[m]) out.push_back(d);
            else if (mod_floor(d, 4) == 0) {
                i64 q = d / 4;
                i64 r = mod_floor(q, 4);
                u64 aq = static_cast<u64>(q < 0 ? -q : q);
                if ((r == 2 || r == 3) && sf[aq]) out.push_back(d);
            }
        }
    }
    return out;
}

inline CountSeries quadratic_series(u64 x, const std::vector<u64>& checkpoints) {
    std::vector<u64> vals;
    for (i64 d : fundamental_discs(x)) vals.push_back(static_cast<u64>(d < 0 ? -d : d));
    return make_series("Z(Q,C2)", std::move(vals), checkpoints);
}

inline CountSeries quadratic_series(u64 x) { return quadratic_series(x, pow10_checkpoints(x)); }

// Cyclic cubic conductor f = 9^delta * p_1...p_r, p_i distinct primes = 1 mod 3;
// t = r + delta; exactly 2^(t-1) fields share the conductor, each of
// discriminant f^2.
struct CyclicCubicConductor {
    u64 f = 0;
    unsigned t = 0;
    u64 field_count() const { return u64{1} << (t - 1); }
};

inline std::vector<CyclicCubicConductor> cyclic_cubic_conductors(u64 fmax) {
    std::vector<CyclicCubicConductor> out;
    if (fmax < 7) return out;
    auto spf = spf_table(fmax);
    for (u64 f = 7; f <= fmax; ++f) {
        u64 m = f;
        unsigned t = 0;
        bool ok = true;
        if (m % 3 == 0) {
            if (m % 9 != 0 || (m / 9) % 3 == 0) ok = false;
            else { m /= 9; ++t; }
        }
        while (ok && m > 1) {
            u64 p = spf[m];
            m /= p;
            if (m % p == 0 || p % 3 != 1) ok = false;
            else ++t;
        }
        if (ok && t >= 1) out.push_back({f, t});
    }
    return out;
}

// Z(Q, C3; x) = sum over conductors f with f^2 <= x of 2^(t-1).
inline CountSeries cyclic_cubic_series(u64 x, const std::vector<u64>& checkpoints) {
    u64 fmax = isqrt_u64(x);
    std::vector<u64> vals;
    for (const auto& c : cyclic_cubic_conductors(fmax)) {
        u64 disc = c.f * c.f;
        for (u64 i = 0; i < c.field_count(); ++i) vals.push_back(disc);
    }
    return make_series("Z(Q,C3)", std::move(vals), checkpoints);
}

inline CountSeries cyclic_cubic_series(u64 x) {
    return cyclic_cubic_series(x, pow10_checkpoints(x));
}

// One C6 field per (fundamental d2, cyclic cubic field of conductor f3):
// |disc| = |d2| * f3^2 * lcm(|d2|, f3)^2.
struct C6Field {
    i64 d2 = 0;
    u64 f3 = 0;
    u64 disc = 0;        // absolute discriminant
    u64 multiplicity = 0;  // number of cubic fields with conductor f3
};

inline u64 c6_disc(u64 ad2, u64 f3) {
    u64 l = std::lcm(ad2, f3);
    u128 v = (u128)ad2 * f3 * f3 * l * l;
    if (v > UINT64_MAX) return UINT64_MAX;
    return static_cast<u64>(v);
}

// All pairs with |disc| <= x; optional filter to a fixed quadratic subfield.
inline std::vector<C6Field> c6_fields(u64 x, i64 d2_filter = 0) {
    std::vector<C6Field> out;
    // |disc| >= 3 f3^4 and >= |d2| f3^4, so both loops are finite.
    u64 f3max = 7;
    while ((u128)3 * f3max * f3max * f3max * f3max <= x) ++f3max;
    auto conductors = cyclic_cubic_conductors(f3max);
    u64 d2max = x / (7ull * 7 * 7 * 7);
    std::vector<i64> d2s;
    if (d2_filter != 0) d2s.push_back(d2_filter);
    else d2s = fundamental_discs(d2max);
    for (i64 d2 : d2s) {
        u64 ad2 = static_cast<u64>(d2 < 0 ? -d2 : d2);
        for (const auto& c : conductors) {
            u64 disc = c6_disc(ad2, c.f);
            if (disc <= x) out.push_back({d2, c.f, disc, c.field_count()});
        }
    }
    std::sort(out.begin(), out.end(), [](const C6Field& a, const C6Field& b) {
        return std::tuple(a.disc, a.d2, a.f3) < std::tuple(b.disc, b.d2, b.f3);
    });
    return out;
}

inline CountSeries c6_series(u64 x, const std::vector<u64>& checkpoints, i64 d2_filter = 0) {
    std::vector<u64> vals;
    for (const auto& f : c6_fields(x, d2_filter))
        for (u64 i = 0; i < f.multiplicity; ++i) vals.push_back(f.disc);
    std::string label = d2_filter ? "Z(Q,C6|d2=" + std::to_string(d2_filter) + ")" : "Z(Q,C6)";
    return make_series(label, std::move(vals), checkpoints);
}

inline CountSeries c6_series(u64 x, i64 d2_filter = 0) {
    return c6_series(x, pow10_checkpoints(x), d2_filter);
}

}  // namespace malle
