#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "malle/int_util.hpp"
#include "malle/series.hpp"

// Cubic fields via integral binary cubic forms: every cubic field corresponds
// to exactly one GL2(Z)-class of irreducible forms that is maximal at every
// prime, with the field discriminant equal to the form discriminant.

namespace malle {

struct BinaryCubicForm {
    i64 a = 0, b = 0, c = 0, d = 0;  // a x^3 + b x^2 y + c x y^2 + d y^3

    bool operator==(const BinaryCubicForm&) const = default;
    auto key() const { return std::tuple(a, b, c, d); }

    i128 disc() const {
        i128 A = a, B = b, C = c, D = d;
        return 18 * A * B * C * D + B * B * C * C - 4 * A * C * C * C - 4 * B * B * B * D -
               27 * A * A * D * D;
    }

    i128 eval(i64 x, i64 y) const {
        i128 X = x, Y = y;
        return a * X * X * X + b * X * X * Y + c * X * Y * Y + d * Y * Y * Y;
    }
};

struct Hessian {
    i64 P = 0, Q = 0, R = 0;  // (b^2-3ac, bc-9ad, c^2-3bd); disc = -3 disc(F)
};

inline Hessian hessian(const BinaryCubicForm& f) {
    return {f.b * f.b - 3 * f.a * f.c, f.b * f.c - 9 * f.a * f.d, f.c * f.c - 3 * f.b * f.d};
}

struct Mat2 {
    i64 p = 1, q = 0, r = 0, s = 1;  // columns (p,r), (q,s)
    i64 det() const { return p * s - q * r; }
};

// F(px+qy, rx+sy); the Hessian transforms equivariantly for det = +-1.
inline BinaryCubicForm transform(const BinaryCubicForm& f, const Mat2& m) {
    i64 p = m.p, q = m.q, r = m.r, s = m.s;
    BinaryCubicForm g;
    g.a = f.a * p * p * p + f.b * p * p * r + f.c * p * r * r + f.d * r * r * r;
    g.b = 3 * f.a * p * p * q + f.b * (p * p * s + 2 * p * q * r) + f.c * (2 * p * r * s + q * r * r) +
          3 * f.d * r * r * s;
    g.c = 3 * f.a * p * q * q + f.b * (q * q * r + 2 * p * q * s) + f.c * (p * s * s + 2 * q * r * s) +
          3 * f.d * r * s * s;
    g.d = f.a * q * q * q + f.b * q * q * s + f.c * q * s * s + f.d * s * s * s;
    return g;
}

// Unimodular matrices with entries in {-1,0,1}; any two Hessian-reduced forms
// in one orbit differ by one of these.
inline const std::vector<Mat2>& small_unimodular() {
    static const std::vector<Mat2> ms = [] {
        std::vector<Mat2> v;
        for (i64 p = -1; p <= 1; ++p)
            for (i64 q = -1; q <= 1; ++q)
                for (i64 r = -1; r <= 1; ++r)
                    for (i64 s = -1; s <= 1; ++s) {
                        Mat2 m{p, q, r, s};
                        if (m.det() == 1 || m.det() == -1) v.push_back(m);
                    }
        return v;
    }();
    return ms;
}

// ---- reduction: totally real case (disc > 0) ----

inline bool hessian_closed_reduced(const Hessian& h) {
    i64 aq = h.Q < 0 ? -h.Q : h.Q;
    return aq <= h.P && h.P <= h.R;
}

// Canonical representative: the lexicographically least form with positive
// leading coefficient among the small-unimodular images staying Hessian-reduced.
inline std::optional<BinaryCubicForm> real_canonical_among(const BinaryCubicForm& f) {
    std::optional<BinaryCubicForm> best;
    for (const Mat2& m : small_unimodular()) {
        BinaryCubicForm g = transform(f, m);
        if (g.a <= 0) continue;
        if (!hessian_closed_reduced(hessian(g))) continue;
        if (!best || g.key() < best->key()) best = g;
    }
    return best;
}

inline bool is_reduced_real(const BinaryCubicForm& f) {
    if (f.a <= 0 || !hessian_closed_reduced(hessian(f))) return false;
    auto best = real_canonical_among(f);
    return best && *best == f;
}

// ---- reduction: complex case (disc < 0) ----
//
// Exact form of Gauss reduction of the positive definite quadratic factor:
// with rho the real root and tau, nu the trace and norm of the complex root,
// the conditions nu >= 1, |tau| <= 1, tau > 0 translate into strict integer
// inequalities (equality would force a rational root).
inline bool is_reduced_complex(const BinaryCubicForm& f) {
    i64 a = f.a, b = f.b, c = f.c, d = f.d;
    if (a <= 0) return false;
    i128 i1 = (i128)d * d - (i128)b * d + (i128)a * c - (i128)a * a;       // nu > 1
    i128 i2 = (i128)(a + b) * (a + b) + (i128)c * (a + b) - (i128)a * d;   // tau < 1
    i128 i3 = (i128)(a - b) * (a - b) + (i128)c * (a - b) + (i128)a * d;   // tau > -1
    i128 i4 = (i128)a * d - (i128)b * c;                                   // tau > 0
    return i1 > 0 && i2 > 0 && i3 > 0 && i4 > 0;
}

inline bool is_reduced(const BinaryCubicForm& f) {
    i128 D = f.disc();
    if (D == 0) return false;
    return D > 0 ? is_reduced_real(f) : is_reduced_complex(f);
}

// Full reduction of an arbitrary irreducible form to the canonical
// representative of its GL2(Z)-class.
inline BinaryCubicForm canonicalize(BinaryCubicForm f) {
    i128 D = f.disc();
    if (D == 0) throw std::invalid_argument("canonicalize: degenerate form");
    if (D > 0) {
        // Gauss-reduce the Hessian, mapping the moves back to f.
        for (int guard = 0; guard < 4096; ++guard) {
            Hessian h = hessian(f);
            if (hessian_closed_reduced(h)) break;
            if (h.P > h.R) {
                f = transform(f, Mat2{0, -1, 1, 0});
                continue;
            }
            i64 aq = h.Q < 0 ? -h.Q : h.Q;
            if (aq > h.P) {
                // x -> x + k y with k = round(-Q / 2P)
                i64 k = static_cast<i64>(std::llround(-static_cast<double>(h.Q) /
                                                      (2.0 * static_cast<double>(h.P))));
                if (k == 0) k = h.Q > 0 ? -1 : 1;
                f = transform(f, Mat2{1, k, 0, 1});
                continue;
            }
        }
        auto best = real_canonical_among(f);
        if (!best) throw std::logic_error("canonicalize: no reduced image (real case)");
        return *best;
    }
    // complex case
    if (f.a < 0 || (f.a == 0 && f.d < 0)) f = BinaryCubicForm{-f.a, -f.b, -f.c, -f.d};
    for (int guard = 0; guard < 4096; ++guard) {
        if (f.a == 0) {  // move a nonzero value into the leading slot
            f = transform(f, Mat2{1, 0, 1, 1});
            if (f.a < 0) f = BinaryCubicForm{-f.a, -f.b, -f.c, -f.d};
            continue;
        }
        if (f.a < 0) { f = BinaryCubicForm{-f.a, -f.b, -f.c, -f.d}; continue; }
        i64 a = f.a, b = f.b, c = f.c, d = f.d;
        i128 i2 = (i128)(a + b) * (a + b) + (i128)c * (a + b) - (i128)a * d;
        if (i2 <= 0) { f = transform(f, Mat2{1, 1, 0, 1}); continue; }  // tau > 1: shift
        i128 i3 = (i128)(a - b) * (a - b) + (i128)c * (a - b) + (i128)a * d;
        if (i3 <= 0) { f = transform(f, Mat2{1, -1, 0, 1}); continue; }  // tau < -1
        i128 i1 = (i128)d * d - (i128)b * d + (i128)a * c - (i128)a * a;
        if (i1 <= 0) { f = transform(f, Mat2{0, -1, 1, 0}); continue; }  // nu < 1: invert
        i128 i4 = (i128)a * d - (i128)b * c;
        if (i4 <= 0) { f = transform(f, Mat2{1, 0, 0, -1}); continue; }  // mirror to tau > 0
        return f;
    }
    throw std::logic_error("canonicalize: reduction did not terminate");
}

// ---- irreducibility ----

// Integer roots of monic x^3 + b x^2 + c x + d by exact bisection on the
// monotone pieces.
inline bool monic_has_integer_root(i64 b, i64 c, i64 d) {
    auto eval = [&](i128 x) { return ((x + b) * x + c) * x + d; };
    i64 M = 2;
    for (i64 v : {b, c, d}) M = std::max(M, (v < 0 ? -v : v) + 2);
    std::vector<i64> cuts{-M, M};
    // critical points of the derivative 3x^2 + 2bx + c
    i128 disc = (i128)4 * b * b - 12 * (i128)c;
    if (disc >= 0) {
        u64 r = isqrt_u64(static_cast<u64>(disc));
        for (i64 s : {-1, +1}) {
            i64 x = static_cast<i64>((-2 * b + s * static_cast<i64>(r)) / 6);
            for (i64 dx = -2; dx <= 2; ++dx)
                if (x + dx > -M && x + dx < M) cuts.push_back(x + dx);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        i64 lo = cuts[i], hi = cuts[i + 1];
        i128 flo = eval(lo), fhi = eval(hi);
        if (flo == 0 || fhi == 0) return true;
        if ((flo > 0) == (fhi > 0)) continue;
        while (hi - lo > 1) {
            i64 mid = lo + (hi - lo) / 2;
            i128 fm = eval(mid);
            if (fm == 0) return true;
            if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
            else hi = mid;
        }
    }
    return false;
}

// Irreducible over Q iff no linear factor: a != 0 (and d != 0 after swap) and
// the associated monic cubic has no integer root.
inline bool is_irreducible(const BinaryCubicForm& f) {
    if (f.a == 0 || f.d == 0) return false;
    return !monic_has_integer_root(f.b, f.a * f.c, f.a * f.a * f.d);
}

// ---- maximality ----

inline i64 content(const BinaryCubicForm& f) {
    i64 g = 0;
    for (i64 v : {f.a, f.b, f.c, f.d}) g = std::gcd(g, v < 0 ? -v : v);
    return g;
}

// Davenport-Heilbronn style test: the form is maximal at p unless some
// multiple root of F mod p, moved to (0:1), leaves d' divisible by p^2.
inline bool is_maximal_dh(const BinaryCubicForm& f, i64 p) {
    if (content(f) % p == 0) return false;
    if (f.disc() % ((i128)p * p) != 0) return true;
    auto md = [&](i128 v) { return static_cast<i64>(((v % p) + p) % p); };
    for (i64 r = 0; r < p; ++r) {
        // F(r,1) and dF/dx(r,1) mod p
        i64 fr = md(((((i128)f.a * r + f.b) * r + f.c) * r + f.d));
        if (fr != 0) continue;
        i64 dfr = md(((i128)3 * f.a * r + 2 * f.b) * r + f.c);
        if (dfr != 0) continue;
        BinaryCubicForm g = transform(f, Mat2{1, r, 0, 1});  // root to (0:1)
        if (g.d % ((i128)p * p) == 0) return false;
    }
    if (md(f.a) == 0 && md(f.b) == 0) {  // multiple root at infinity
        BinaryCubicForm g = transform(f, Mat2{0, 1, 1, 0});
        if (g.d % ((i128)p * p) == 0) return false;
    }
    return true;
}

namespace detail {

// Cubic polynomials over F_p, dense coefficient vectors, low degree first.
using FpPoly = std::vector<i64>;

inline FpPoly fp_trim(FpPoly v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
}

inline FpPoly fp_mul(const FpPoly& u, const FpPoly& v, i64 p) {
    if (u.empty() || v.empty()) return {};
    FpPoly w(u.size() + v.size() - 1, 0);
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) w[i + j] = (w[i + j] + u[i] * v[j]) % p;
    return fp_trim(w);
}

// division by a monic divisor
inline std::pair<FpPoly, FpPoly> fp_divmod_monic(FpPoly u, const FpPoly& v, i64 p) {
    FpPoly q(u.size() > v.size() - 1 ? u.size() - v.size() + 1 : 0, 0);
    while (u.size() >= v.size() && !u.empty()) {
        i64 coef = u.back() % p;
        size_t shift = u.size() - v.size();
        q[shift] = coef;
        for (size_t i = 0; i < v.size(); ++i)
            u[shift + i] = ((u[shift + i] - coef * v[i]) % p + p) % p;
        u = fp_trim(std::move(u));
    }
    return {fp_trim(std::move(q)), std::move(u)};
}

inline FpPoly fp_monic(FpPoly u, i64 p) {
    u = fp_trim(std::move(u));
    if (u.empty()) return u;
    i64 inv = pow_mod(static_cast<u64>(((u.back() % p) + p) % p), static_cast<u64>(p - 2),
                      static_cast<u64>(p));
    for (auto& c : u) c = (c % p * inv) % p;
    return u;
}

inline FpPoly fp_gcd(FpPoly u, FpPoly v, i64 p) {
    u = fp_trim(std::move(u));
    v = fp_trim(std::move(v));
    while (!v.empty()) {
        FpPoly r = fp_divmod_monic(u, fp_monic(v, p), p).second;
        u = std::move(v);
        v = std::move(r);
    }
    return fp_monic(u, p);
}

// Factorization of a monic polynomial of degree <= 3 over F_p by root search;
// returns (irreducible factor, multiplicity) pairs.
inline std::vector<std::pair<FpPoly, unsigned>> fp_factor_cubic(FpPoly f, i64 p) {
    std::vector<std::pair<FpPoly, unsigned>> out;
    auto record = [&](const FpPoly& fac) {
        for (auto& [g, e] : out)
            if (g == fac) { ++e; return; }
        out.push_back({fac, 1});
    };
    f = fp_monic(std::move(f), p);
    for (i64 r = 0; r < p && f.size() > 1;) {
        i64 v = 0;
        for (size_t i = f.size(); i-- > 0;) v = (v * r + f[i]) % p;
        if (v % p == 0) {
            record(FpPoly{(p - r) % p, 1});  // x - r
            f = fp_divmod_monic(f, FpPoly{(p - r) % p, 1}, p).first;
        } else {
            ++r;
        }
    }
    if (f.size() > 1) record(f);  // rootless quadratic or cubic: irreducible
    return out;
}

}  // namespace detail

// Dedekind's criterion on a monic integer cubic at p.
inline bool dedekind_maximal_monic(i64 b, i64 c, i64 d, i64 p) {
    using detail::FpPoly;
    auto md = [&](i64 v) { return ((v % p) + p) % p; };
    FpPoly fb{md(d), md(c), md(b), 1};
    auto factors = detail::fp_factor_cubic(fb, p);
    FpPoly g1{1}, h1{1};
    for (const auto& [fac, e] : factors) {
        g1 = detail::fp_mul(g1, fac, p);
        for (unsigned i = 1; i < e; ++i) h1 = detail::fp_mul(h1, fac, p);
    }
    // integer lifts with coefficients in [0,p); T = (g1*h1 - f)/p
    auto lift_mul = [&](const FpPoly& u, const FpPoly& v) {
        std::vector<i128> w(u.size() + v.size() - 1, 0);
        for (size_t i = 0; i < u.size(); ++i)
            for (size_t j = 0; j < v.size(); ++j) w[i + j] += (i128)u[i] * v[j];
        return w;
    };
    auto prod = lift_mul(g1, h1);
    std::array<i128, 4> fcoef{d, c, b, 1};
    FpPoly T;
    for (size_t i = 0; i < 4; ++i) {
        i128 diff = (i < prod.size() ? prod[i] : 0) - fcoef[i];
        if (diff % p != 0) throw std::logic_error("dedekind: lift mismatch");
        T.push_back(md(static_cast<i64>((diff / p) % p)));
    }
    FpPoly g = detail::fp_gcd(detail::fp_gcd(T, g1, p), h1, p);
    return g.size() <= 1;
}

// Dedekind test for the cubic ring of a form: first move to a p-coprime
// leading coefficient (possible whenever p does not divide the content and
// p^2 divides the discriminant), then test the monic model x^3 + b x^2 +
// ac x + a^2 d of a*theta.
inline bool is_maximal_dedekind(const BinaryCubicForm& f, i64 p) {
    if (content(f) % p == 0) return false;
    BinaryCubicForm g = f;
    if (g.a % p == 0) {
        bool found = false;
        if (g.d % p != 0) { g = transform(g, Mat2{0, 1, 1, 0}); found = true; }
        for (i64 k = 1; !found && k < p; ++k)
            if (g.eval(1, k) % p != 0) { g = transform(g, Mat2{1, 0, k, 1}); found = true; }
        if (!found) throw std::invalid_argument("is_maximal_dedekind: no p-coprime leading coefficient");
    }
    return dedekind_maximal_monic(g.b, g.a * g.c, g.a * g.a * g.d, p);
}

// ---- enumeration ----

enum class DiscSign { POSITIVE, NEGATIVE, BOTH };

struct CubicField {
    BinaryCubicForm form;
    i64 disc = 0;
};

namespace detail {

inline bool form_maximal_everywhere(const BinaryCubicForm& f, i64 adisc,
                                    const std::vector<std::uint32_t>& spf) {
    i64 n = adisc;
    i64 last = 0;
    while (n > 1) {
        i64 p = spf[static_cast<size_t>(n)];
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (e >= 2 && p != last && !is_maximal_dh(f, p)) return false;
        last = p;
    }
    return true;
}

inline void emit_candidate(const BinaryCubicForm& f, i64 X, bool positive,
                           const std::vector<std::uint32_t>& spf, std::vector<CubicField>& out) {
    i128 D = f.disc();
    if (positive) {
        if (D <= 0 || D > X) return;
        if (!is_reduced_real(f)) return;
    } else {
        if (D >= 0 || -D > X) return;
        if (!is_reduced_complex(f)) return;
    }
    if (!is_irreducible(f)) return;
    i64 adisc = static_cast<i64>(D < 0 ? -D : D);
    if (!form_maximal_everywhere(f, adisc, spf)) return;
    out.push_back({f, static_cast<i64>(D)});
}

// Totally real forms with Hessian in the closed reduced domain satisfy
// a <= 2 X^{1/4} / 3^{3/2} (syzygy 4H^3 = G^2 + 27 disc F^2 at (1,0)),
// |b| <= sqrt(2P) + 3a/2 and 1 <= P <= sqrt(disc).
inline void enumerate_real_for_a(i64 a, i64 X, const std::vector<std::uint32_t>& spf,
                                 std::vector<CubicField>& out) {
    i64 Pmax = static_cast<i64>(isqrt_u64(static_cast<u64>(X)));
    i64 bmax = static_cast<i64>(isqrt_u64(static_cast<u64>(2 * Pmax))) + (3 * a + 1) / 2 + 1;
    for (i64 b = -bmax; b <= bmax; ++b) {
        // refined window: P >= ((|b| - 1.5a)^2) / 2 when |b| > 1.5a
        i64 ab = b < 0 ? -b : b;
        i64 Pmin = 1;
        if (2 * ab > 3 * a) {
            i64 num = 2 * ab - 3 * a;  // 2(|b| - 1.5a)
            Pmin = std::max<i64>(1, (num * num) / 8 - 1);
        }
        // c runs over P = b^2 - 3ac in [Pmin, Pmax]
        i64 clo = static_cast<i64>(std::floor((static_cast<double>(b) * b - Pmax) / (3.0 * a)));
        i64 chi = static_cast<i64>(std::ceil((static_cast<double>(b) * b - Pmin) / (3.0 * a)));
        for (i64 c = clo - 1; c <= chi + 1; ++c) {
            i64 P = b * b - 3 * a * c;
            if (P < 1 || P > Pmax) continue;
            // d window from |Q| <= P, Q = bc - 9ad
            i64 bc = b * c;
            i64 dlo = static_cast<i64>(std::floor((bc - P) / (9.0 * a)));
            i64 dhi = static_cast<i64>(std::ceil((bc + P) / (9.0 * a)));
            for (i64 d = dlo - 1; d <= dhi + 1; ++d) {
                i64 Q = bc - 9 * a * d;
                if (Q < -P || Q > P) continue;
                i64 R = c * c - 3 * b * d;
                if (R < P) continue;
                if ((i128)4 * P * R - (i128)Q * Q > (i128)3 * X + (i128)P * P) continue;
                emit_candidate(BinaryCubicForm{a, b, c, d}, X, true, spf, out);
            }
        }
    }
}

// Complex forms in the reduced domain satisfy a <= (16X/27)^{1/4},
// |b| <= 2a + (X/3)^{1/4}, nu <= (16X/(27 a^4))^{1/3}, |rho| <= 1 + (X/3)^{1/4}/a.
inline void enumerate_complex_for_a(i64 a, i64 X, const std::vector<std::uint32_t>& spf,
                                    std::vector<CubicField>& out) {
    double x4 = std::pow(static_cast<double>(X) / 3.0, 0.25);
    i64 bmax = 2 * a + static_cast<i64>(x4) + 2;
    double numax = std::cbrt(16.0 * static_cast<double>(X) /
                             (27.0 * std::pow(static_cast<double>(a), 4.0)));
    i64 clo = -(static_cast<i64>(x4) + 2);
    i64 chi = static_cast<i64>(static_cast<double>(a) * numax + static_cast<double>(a) + x4) + 2;
    for (i64 b = -bmax; b <= bmax; ++b) {
        for (i64 c = clo; c <= chi; ++c) {
            // linear windows: a d > bc, a d > -((a-b)^2 + c(a-b)), a d < (a+b)^2 + c(a+b)
            i128 up = (i128)(a + b) * (a + b) + (i128)c * (a + b);
            i128 lo1 = (i128)b * c;
            i128 lo2 = -((i128)(a - b) * (a - b) + (i128)c * (a - b));
            i128 lo = std::max(lo1, lo2);
            if (up <= lo + 1) continue;
            i64 dlo = static_cast<i64>(lo / a) - 2;
            i64 dhi = static_cast<i64>(up / a) + 2;
            // prune by |disc| <= X: -disc is a convex parabola in d
            double A2 = 27.0 * static_cast<double>(a) * a;
            double B2 = -(18.0 * a * b * c - 4.0 * std::pow(static_cast<double>(b), 3.0));
            double C2 = -(std::pow(static_cast<double>(b) * c, 2.0) -
                          4.0 * a * std::pow(static_cast<double>(c), 3.0));
            // roots of A2 d^2 + B2 d + C2 = X
            double discX = B2 * B2 - 4 * A2 * (C2 - static_cast<double>(X));
            if (discX < 0) continue;  // |disc| always above X
            double rootw = std::sqrt(discX) / (2 * A2);
            double mid = -B2 / (2 * A2);
            dlo = std::max<i64>(dlo, static_cast<i64>(std::floor(mid - rootw)) - 2);
            dhi = std::min<i64>(dhi, static_cast<i64>(std::ceil(mid + rootw)) + 2);
            // middle gap where -disc <= 0 (disc >= 0): skip [g1, g2]
            double disc0 = B2 * B2 - 4 * A2 * C2;
            i64 gap_lo = 1, gap_hi = 0;
            if (disc0 > 0) {
                double rw = std::sqrt(disc0) / (2 * A2);
                gap_lo = static_cast<i64>(std::floor(mid - rw)) + 2;
                gap_hi = static_cast<i64>(std::ceil(mid + rw)) - 2;
            }
            for (i64 d = dlo; d <= dhi; ++d) {
                if (d >= gap_lo && d <= gap_hi) { d = gap_hi; continue; }
                if ((i128)a * d <= lo || (i128)a * d >= up) continue;
                i128 i1 = (i128)d * d - (i128)b * d + (i128)a * c - (i128)a * a;
                if (i1 <= 0) continue;
                emit_candidate(BinaryCubicForm{a, b, c, d}, X, false, spf, out);
            }
        }
    }
}

}  // namespace detail

// All cubic fields with 0 < +-disc <= X, one reduced form each, sorted by
// (|disc|, form). Partitioned by leading coefficient; output is identical for
// every job count.
inline std::vector<CubicField> enumerate_fields(i64 X, DiscSign sign, unsigned jobs = 1,
                                                i64 budget = 30000000) {
    if (X < 1) throw std::invalid_argument("enumerate_fields: bound must be >= 1");
    if (X > budget) throw std::runtime_error("enumerate_fields: bound exceeds budget");
    auto spf = spf_table(static_cast<u64>(X));
    double X14 = std::pow(static_cast<double>(X), 0.25);
    i64 amax_real = static_cast<i64>(2.0 * X14 / std::pow(3.0, 1.5)) + 1;
    i64 amax_cplx = static_cast<i64>(std::pow(16.0 * static_cast<double>(X) / 27.0, 0.25)) + 1;
    i64 amax = std::max(amax_real, amax_cplx);
    bool do_pos = sign != DiscSign::NEGATIVE;
    bool do_neg = sign != DiscSign::POSITIVE;
    unsigned parts = jobs <= 1 ? 1 : std::min<i64>(amax, jobs * 4);
    auto chunks = run_partitions<CubicField>(jobs, parts, [&](unsigned part) {
        std::vector<CubicField> out;
        for (i64 a = 1 + part; a <= amax; a += parts) {
            if (do_pos && a <= amax_real) detail::enumerate_real_for_a(a, X, spf, out);
            if (do_neg && a <= amax_cplx) detail::enumerate_complex_for_a(a, X, spf, out);
        }
        return out;
    });
    std::vector<CubicField> out;
    for (auto& ch : chunks)
        out.insert(out.end(), ch.begin(), ch.end());
    std::sort(out.begin(), out.end(), [](const CubicField& u, const CubicField& v) {
        i64 au = u.disc < 0 ? -u.disc : u.disc, av = v.disc < 0 ? -v.disc : v.disc;
        return std::tuple(au, u.form.key()) < std::tuple(av, v.form.key());
    });
    return out;
}

inline CountSeries cubic_series(const std::vector<CubicField>& fields,
                                const std::vector<u64>& checkpoints, std::string label = "Z(Q,C3+S3)") {
    std::vector<u64> vals;
    for (const auto& f : fields) vals.push_back(static_cast<u64>(f.disc < 0 ? -f.disc : f.disc));
    return make_series(std::move(label), std::move(vals), checkpoints);
}

// Cubic fields whose Galois closure contains Q(sqrt(-3)): disc = -3 * square.
inline CountSeries resolvent_minus3_series(const std::vector<CubicField>& fields,
                                           const std::vector<u64>& checkpoints) {
    std::vector<u64> vals;
    for (const auto& f : fields) {
        if (f.disc >= 0) continue;
        u64 m = static_cast<u64>(-f.disc);
        if (m % 3 == 0 && is_square_u64(m / 3)) vals.push_back(m);
    }
    return make_series("Z(Q,S3(3)|res=-3)", std::move(vals), checkpoints);
}

// Z(Q, S3(6); x) <= Z(Q, S3(3); sqrt(x)): the sextic discriminant of an S3
// field is at least the square of the cubic one. Cyclic cubics (square disc)
// are excluded from the count.
inline CountSeries s36_upper_series(const std::vector<CubicField>& fields,
                                    const std::vector<u64>& checkpoints) {
    CountSeries s;
    s.label = "Z(Q,S3(6)) upper bound";
    s.xs = checkpoints;
    std::vector<u64> noncyclic;
    for (const auto& f : fields) {
        u64 m = static_cast<u64>(f.disc < 0 ? -f.disc : f.disc);
        if (f.disc < 0 || !is_square_u64(m)) noncyclic.push_back(m);
    }
    std::sort(noncyclic.begin(), noncyclic.end());
    for (u64 x : checkpoints) {
        u64 r = isqrt_u64(x);
        auto it = std::upper_bound(noncyclic.begin(), noncyclic.end(), r);
        s.counts.push_back(static_cast<u64>(it - noncyclic.begin()));
    }
    return s;
}

}  // namespace malle
