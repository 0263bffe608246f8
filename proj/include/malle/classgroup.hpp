#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "malle/abelian.hpp"
#include "malle/int_util.hpp"
#include "malle/series.hpp"

// Class groups of imaginary quadratic fields via reduced positive definite
// binary quadratic forms; composition through ideal multiplication.

namespace malle {

struct QuadForm {
    i64 a = 0, b = 0, c = 0;  // a x^2 + b x y + c y^2, a > 0, b^2 - 4ac < 0

    bool operator==(const QuadForm&) const = default;
    auto key() const { return std::tuple(a, b, c); }
    i64 disc() const { return b * b - 4 * a * c; }
    bool is_reduced() const {
        i64 ab = b < 0 ? -b : b;
        if (!(ab <= a && a <= c)) return false;
        if ((ab == a || a == c) && b < 0) return false;
        return true;
    }
};

inline QuadForm principal_form(i64 d) {
    i64 b = mod_floor(d, 2);
    return {1, b, (b * b - d) / 4};
}

inline QuadForm reduce_form(QuadForm f) {
    for (;;) {
        // normalize: -a < b <= a
        if (f.b > f.a || f.b <= -f.a) {
            i64 r = mod_floor(f.a - f.b, 2 * f.a);  // b + 2ak in (-a, a]
            i64 bn = f.a - r;
            i64 k = (bn - f.b) / (2 * f.a);
            f.c += k * (f.b + f.a * k);
            f.b = bn;
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        return f;
    }
}

// All reduced forms of fundamental discriminant d < 0.
inline std::vector<QuadForm> reduced_forms(i64 d) {
    if (d >= 0 || !is_fundamental_disc(d)) throw std::invalid_argument("reduced_forms: d must be a negative fundamental discriminant");
    std::vector<QuadForm> out;
    for (i64 b = mod_floor(d, 2); 3 * b * b <= -d; b += 2) {
        i64 m4 = b * b - d;  // = 4ac
        if (m4 % 4 != 0) continue;
        i64 m = m4 / 4;
        for (i64 a = std::max<i64>(b, 1); a * a <= m; ++a) {
            if (m % a != 0) continue;
            i64 c = m / a;
            QuadForm f{a, b, c};
            if (f.is_reduced()) out.push_back(f);
            QuadForm g{a, -b, c};
            if (b != 0 && g.is_reduced()) out.push_back(g);
        }
    }
    std::sort(out.begin(), out.end(), [](const QuadForm& u, const QuadForm& v) { return u.key() < v.key(); });
    return out;
}

inline u64 class_number(i64 d) { return reduced_forms(d).size(); }

namespace detail {

// 2x2 HNF of a list of (u, v) rows: returns (e, (m, l)) with the lattice
// equal to Z*(e,0) + Z*(l, m); m | e and 0 <= l < e... we only need the shape
// Z*e1*(1,0)-style for ideal bases in the (1, sigma) coordinates.
struct IdealBasis {
    i64 g = 0;  // rational generator: g*Z + (l + m*sigma)*Z
    i64 l = 0;
    i64 m = 0;
};

inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) { x = a < 0 ? -1 : 1; y = 0; return a < 0 ? -a : a; }
    i64 x1, y1;
    i64 g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline IdealBasis hnf_rows(std::vector<std::pair<i128, i128>> rows) {
    // eliminate the sigma column: combine rows to gcd of the v coordinates
    i128 m = 0, l = 0;
    {
        i128 cl = 0, cm = 0;
        for (auto& [u, v] : rows) {
            if (v == 0) continue;
            if (cm == 0) { cm = v; cl = u; continue; }
            i64 x, y;
            i64 g = ext_gcd((i64)cm, (i64)v, x, y);
            cl = (i128)x * cl + (i128)y * u;
            cm = g;
        }
        if (cm < 0) { cm = -cm; cl = -cl; }
        m = cm;
        l = cl;
    }
    // rational column: gcd of u - (v/m)*l over all rows reduced
    i128 g = 0;
    for (auto& [u, v] : rows) {
        i128 k = m == 0 ? 0 : v / m;
        i128 red = u - k * l;
        g = std::gcd((i64)(g < 0 ? -g : g), (i64)(red < 0 ? -red : red));
    }
    IdealBasis B;
    B.g = (i64)g;
    B.m = (i64)m;
    B.l = B.g ? (i64)mod_floor((i64)l, B.g) : (i64)l;
    return B;
}

}  // namespace detail

// Gauss composition via ideal multiplication in the (1, sigma) basis,
// sigma = (d + sqrt(d))/2; result reduced.
inline QuadForm compose(const QuadForm& f1, const QuadForm& f2, i64 d) {
    // form (a,b,c) <-> ideal a Z + tau Z, tau = (b + sqrt(d))/2 = (b - d)/2 + sigma
    i64 t1 = (f1.b - d) / 2, t2 = (f2.b - d) / 2;
    // generators of I1*I2 in coordinates (1, sigma): sigma^2 = d(d-1)/4... use
    // sigma^2 = (d^2 - d)/4 + ... sigma satisfies sigma^2 = d*sigma - d(d-1)/4.
    // (u1 + v1 sigma)(u2 + v2 sigma) = u1u2 - v1v2*dd4 + (u1v2 + u2v1 + v1v2*d) sigma
    i128 dd4 = ((i128)d * d - d) / 4;
    auto mulc = [&](i128 u1, i128 v1, i128 u2, i128 v2) {
        return std::pair<i128, i128>{u1 * u2 - v1 * v2 * dd4, u1 * v2 + u2 * v1 + v1 * v2 * d};
    };
    std::vector<std::pair<i128, i128>> rows;
    rows.push_back(mulc(f1.a, 0, f2.a, 0));
    rows.push_back(mulc(f1.a, 0, t2, 1));
    rows.push_back(mulc(t1, 1, f2.a, 0));
    rows.push_back(mulc(t1, 1, t2, 1));
    auto B = detail::hnf_rows(std::move(rows));
    // primitive part: divide by content m; ideal = m*(A Z + (L + sigma) Z)
    if (B.m == 0 || B.g % B.m != 0 || B.l % B.m != 0)
        throw std::logic_error("compose: bad ideal basis");
    i64 A = B.g / B.m, L = B.l / B.m;
    i64 bb = 2 * L + d;
    // c from the discriminant
    i128 cc = ((i128)bb * bb - d) / (4 * (i128)A);
    QuadForm out{A, bb, (i64)cc};
    return reduce_form(out);
}

inline QuadForm form_pow(QuadForm f, u64 e, i64 d) {
    QuadForm r = principal_form(d), b = f;
    while (e) {
        if (e & 1) r = compose(r, b, d);
        b = compose(b, b, d);
        e >>= 1;
    }
    return r;
}

// #Cl(d)[3]: reduced forms whose cube is principal.
inline u64 three_torsion_count(i64 d) {
    auto forms = reduced_forms(d);
    QuadForm one = principal_form(d);
    QuadForm one_red = reduce_form(one);
    u64 n = 0;
    for (const auto& f : forms)
        if (form_pow(f, 3, d) == one_red) ++n;
    return n;
}

struct Cl3Row {
    i64 d = 0;
    u64 h = 0;
    u64 cl3 = 0;
};

// One row per fundamental d < 0 with |d| <= x, ordered by |d|.
inline std::vector<Cl3Row> cl3_table(u64 x, unsigned jobs = 1) {
    std::vector<i64> ds;
    for (i64 d : fundamental_discs(x))
        if (d < 0) ds.push_back(d);
    std::sort(ds.begin(), ds.end(), [](i64 u, i64 v) { return -u < -v; });
    unsigned parts = jobs <= 1 ? 1 : jobs * 8;
    auto chunks = run_partitions<Cl3Row>(jobs, parts, [&](unsigned part) {
        std::vector<Cl3Row> rows;
        for (size_t i = part; i < ds.size(); i += parts) {
            i64 d = ds[i];
            auto forms = reduced_forms(d);
            QuadForm one = reduce_form(principal_form(d));
            u64 cl3 = 0;
            for (const auto& f : forms)
                if (form_pow(f, 3, d) == one) ++cl3;
            rows.push_back({d, forms.size(), cl3});
        }
        return rows;
    });
    std::vector<Cl3Row> out;
    for (auto& ch : chunks) out.insert(out.end(), ch.begin(), ch.end());
    std::sort(out.begin(), out.end(), [](const Cl3Row& u, const Cl3Row& v) { return -u.d < -v.d; });
    return out;
}

struct AveragePoint {
    u64 x = 0;
    double mean_cl3 = 0;
};

// Running mean of #Cl[3] over fundamental d with 0 < -d <= x.
inline std::vector<AveragePoint> cl3_average_series(const std::vector<Cl3Row>& rows,
                                                    const std::vector<u64>& checkpoints) {
    std::vector<AveragePoint> out;
    size_t i = 0;
    u64 n = 0;
    u128 sum = 0;
    for (u64 x : checkpoints) {
        while (i < rows.size() && static_cast<u64>(-rows[i].d) <= x) {
            sum += rows[i].cl3;
            ++n;
            ++i;
        }
        out.push_back({x, n ? static_cast<double>((u64)sum) / static_cast<double>(n) : 0.0});
    }
    return out;
}

}  // namespace malle
