#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "malle/int_util.hpp"

// Arithmetic in Z[w], w^2 + w + 1 = 0: the ring of integers of Q(sqrt(-3)).
// Euclidean with 6 units; lambda = 1 - w is the ramified prime above 3.

namespace malle {

struct EisInt {
    i64 x = 0;  // value x + y*w
    i64 y = 0;

    bool operator==(const EisInt&) const = default;
    bool is_zero() const { return x == 0 && y == 0; }

    EisInt operator+(const EisInt& o) const { return {x + o.x, y + o.y}; }
    EisInt operator-(const EisInt& o) const { return {x - o.x, y - o.y}; }
    EisInt operator-() const { return {-x, -y}; }
    // (x1 + y1 w)(x2 + y2 w) with w^2 = -1 - w
    EisInt operator*(const EisInt& o) const {
        return {x * o.x - y * o.y, x * o.y + y * o.x - y * o.y};
    }

    EisInt conj() const { return {x - y, -y}; }  // w -> w^2 = -1-w
    i64 norm() const {
        i128 n = (i128)x * x - (i128)x * y + (i128)y * y;
        return static_cast<i64>(n);
    }
};

inline const EisInt eis_one{1, 0};
inline const EisInt eis_omega{0, 1};
inline const EisInt eis_lambda{1, -1};

// The six units, as powers of zeta6 = 1 + w: zeta6^k for k = 0..5.
inline const std::array<EisInt, 6>& eis_units() {
    static const std::array<EisInt, 6> u = [] {
        std::array<EisInt, 6> a;
        EisInt z{1, 0}, g{1, 1};
        for (int k = 0; k < 6; ++k) {
            a[k] = z;
            z = z * g;
        }
        return a;
    }();
    return u;
}

inline EisInt eis_pow(EisInt z, unsigned e) {
    EisInt r{1, 0};
    while (e--) r = r * z;
    return r;
}

// Exact division; nullopt if w does not divide z.
inline std::optional<EisInt> eis_div(const EisInt& z, const EisInt& w) {
    i64 n = w.norm();
    if (n == 0) return std::nullopt;
    EisInt t = z * w.conj();
    if (t.x % n != 0 || t.y % n != 0) return std::nullopt;
    return EisInt{t.x / n, t.y / n};
}

inline bool eis_divides(const EisInt& w, const EisInt& z) { return eis_div(z, w).has_value(); }

// lambda-adic valuation; equals the 3-adic valuation of the norm.
inline unsigned v_lambda(EisInt z) {
    if (z.is_zero()) throw std::invalid_argument("v_lambda(0)");
    unsigned v = 0;
    i64 n = z.norm();
    while (n % 3 == 0) { ++v; n /= 3; }
    return v;
}

inline bool eis_is_unit(const EisInt& z) { return z.norm() == 1; }

// The unique associate congruent to 1 mod 3 and the unit u with result = u*z.
inline std::pair<EisInt, EisInt> canonical_associate(const EisInt& z) {
    if (z.is_zero()) throw std::invalid_argument("canonical_associate(0)");
    if (v_lambda(z) > 0) throw std::invalid_argument("canonical_associate: argument divisible by lambda");
    for (const EisInt& u : eis_units()) {
        EisInt c = u * z;
        if (mod_floor(c.x, 3) == 1 && mod_floor(c.y, 3) == 0) return {c, u};
    }
    throw std::logic_error("canonical_associate: no associate is 1 mod 3");
}

inline bool eis_is_canonical(const EisInt& z) {
    return mod_floor(z.x, 3) == 1 && mod_floor(z.y, 3) == 0;
}

// Canonical prime of norm p for split p = 1 mod 3, by direct search for
// x^2 - xy + y^2 = p. Its conjugate is the other prime above p.
inline EisInt split_prime_above(i64 p) {
    for (i64 y = 0; (i128)3 * y * y <= (i128)4 * p; ++y) {
        i64 disc = 4 * p - 3 * y * y;
        u64 r;
        if (disc >= 0 && is_square_u64(static_cast<u64>(disc), &r)) {
            if ((y + static_cast<i64>(r)) % 2 == 0) {
                i64 x = (y + static_cast<i64>(r)) / 2;
                EisInt z{x, y};
                if (z.norm() == p) return canonical_associate(z).first;
            }
        }
    }
    throw std::logic_error("split_prime_above: no representation found");
}

inline std::string eis_str(const EisInt& z) {
    if (z.y == 0) return std::to_string(z.x);
    std::string s;
    if (z.x != 0) s = std::to_string(z.x) + (z.y > 0 ? "+" : "-");
    else if (z.y < 0) s = "-";
    i64 ay = z.y < 0 ? -z.y : z.y;
    if (ay != 1) s += std::to_string(ay) + "*w";
    else s += "w";
    return s;
}

// Parses the text form "x+y*w" / "x-y*w" / "x" / "y*w" / "w".
inline std::optional<EisInt> eis_parse(const std::string& in) {
    std::string s;
    for (char c : in)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) return std::nullopt;
    auto read_term = [&](size_t& i, i64& coef, bool& has_w) -> bool {
        i64 sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        std::string digits;
        while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
        has_w = false;
        if (i < s.size() && (s[i] == '*' || s[i] == 'w')) {
            if (s[i] == '*') ++i;
            if (i >= s.size() || s[i] != 'w') return false;
            ++i;
            has_w = true;
        }
        if (digits.empty() && !has_w) return false;
        coef = digits.empty() ? sign : sign * std::stoll(digits);
        return true;
    };
    EisInt z{0, 0};
    size_t i = 0;
    while (i < s.size()) {
        i64 coef;
        bool has_w;
        if (!read_term(i, coef, has_w)) return std::nullopt;
        (has_w ? z.y : z.x) += coef;
    }
    return z;
}

struct EisFactorization {
    unsigned unit_exp = 0;    // exponent of zeta6 = 1 + w, in 0..5
    unsigned lambda_exp = 0;  // exponent of lambda = 1 - w
    std::vector<std::pair<EisInt, unsigned>> primes;  // canonical, sorted by (norm, x, y)

    EisInt reassemble() const {
        EisInt z = eis_pow(EisInt{1, 1}, unit_exp);
        z = z * eis_pow(eis_lambda, lambda_exp);
        for (const auto& [p, e] : primes) z = z * eis_pow(p, e);
        return z;
    }
};

inline bool eis_norm_less(const EisInt& a, const EisInt& b) {
    return std::tuple(a.norm(), a.x, a.y) < std::tuple(b.norm(), b.x, b.y);
}

// Complete factorization into the canonical unit power, lambda power and
// canonical primes. Norm is factored by trial division (inputs here are small
// by construction; `bound` guards runaway arguments).
inline EisFactorization factor(EisInt z, i64 bound = 100000000) {
    if (z.is_zero()) throw std::invalid_argument("factor(0)");
    EisFactorization f;
    f.lambda_exp = 0;
    while (v_lambda(z) > 0) {
        z = *eis_div(z, eis_lambda);
        ++f.lambda_exp;
    }
    i64 n = z.norm();
    for (i64 p = 2; (i128)p * p <= n; ++p) {
        if (n % p != 0) continue;
        if (p > bound) throw std::runtime_error("factor: prime bound exceeded");
        if (p % 3 == 2) {
            unsigned e = 0;
            while (n % ((i128)p * p) == 0) { n /= p * p; ++e; }
            if (n % p == 0) throw std::logic_error("factor: odd inert valuation");
            EisInt q = canonical_associate(EisInt{p, 0}).first;
            for (unsigned i = 0; i < e; ++i) z = *eis_div(z, q);
            if (e) f.primes.push_back({q, e});
        } else {
            EisInt pi = split_prime_above(p);
            EisInt pibar = canonical_associate(pi.conj()).first;
            for (EisInt q : {pi, pibar}) {
                unsigned e = 0;
                while (auto d = eis_div(z, q)) { z = *d; ++e; }
                if (e) f.primes.push_back({q, e});
                while (e--) n /= p;
            }
        }
    }
    if (n > 1) {
        // leftover is a split prime norm: an inert factor would have been
        // caught at p <= sqrt(n)
        EisInt pi = split_prime_above(n);
        EisInt pibar = canonical_associate(pi.conj()).first;
        for (EisInt q : {pi, pibar}) {
            unsigned e = 0;
            while (auto d = eis_div(z, q)) { z = *d; ++e; }
            if (e) f.primes.push_back({q, e});
        }
    }
    if (!eis_is_unit(z)) throw std::logic_error("factor: nonunit remainder");
    std::sort(f.primes.begin(), f.primes.end(),
              [](const auto& a, const auto& b) { return eis_norm_less(a.first, b.first); });
    const auto& units = eis_units();
    for (unsigned k = 0; k < 6; ++k)
        if (units[k] == z) { f.unit_exp = k; return f; }
    throw std::logic_error("factor: unit not recognized");
}

// ---- residue ring Z[w]/9 and the local cube invariant at lambda ----

struct Mod9 {
    int x = 0, y = 0;  // representatives in [0,9)

    static Mod9 of(const EisInt& z) {
        return {static_cast<int>(mod_floor(z.x, 9)), static_cast<int>(mod_floor(z.y, 9))};
    }
    EisInt lift() const { return {x, y}; }
    bool operator==(const Mod9&) const = default;
    Mod9 operator*(const Mod9& o) const {
        i64 xx = (i64)x * o.x - (i64)y * o.y;
        i64 yy = (i64)x * o.y + (i64)y * o.x - (i64)y * o.y;
        return {static_cast<int>(mod_floor(xx, 9)), static_cast<int>(mod_floor(yy, 9))};
    }
    Mod9 operator-(const Mod9& o) const {
        return {static_cast<int>(mod_floor(x - o.x, 9)), static_cast<int>(mod_floor(y - o.y, 9))};
    }
    bool coprime_lambda() const { return mod_floor(lift().norm(), 3) != 0; }
};

// v_lambda capped at 4; well defined on Z[w]/9 because (9) = (lambda^4).
inline unsigned v_lambda_mod9(const Mod9& z) {
    if (z.x == 0 && z.y == 0) return 4;
    return std::min(4u, v_lambda(z.lift()));
}

inline const std::vector<Mod9>& units_mod9() {
    static const std::vector<Mod9> us = [] {
        std::vector<Mod9> v;
        for (int x = 0; x < 9; ++x)
            for (int y = 0; y < 9; ++y) {
                Mod9 z{x, y};
                if (z.coprime_lambda()) v.push_back(z);
            }
        return v;  // 54 elements
    }();
    return us;
}

// Cube distance of a lambda-coprime alpha at the wild prime: the largest
// m <= 4 with alpha = c^3 mod lambda^m for some unit c, computed over all 54
// unit cosets of (Z[w]/9)^*.
inline unsigned w_invariant_mod9(const Mod9& alpha) {
    if (!alpha.coprime_lambda()) throw std::invalid_argument("w_invariant: alpha divisible by lambda");
    unsigned best = 0;
    for (const Mod9& c : units_mod9()) {
        Mod9 c3 = c * c * c;
        best = std::max(best, v_lambda_mod9(alpha * c3 - Mod9{1, 0}));
        if (best == 4) break;
    }
    return best;
}

inline unsigned w_invariant(const EisInt& alpha) { return w_invariant_mod9(Mod9::of(alpha)); }

// Same value as w_invariant: the unit cubes mod 9 are exactly {1, -1}, so the
// maximum is attained at c^3 = 1 or c^3 = -1. Used on the enumeration hot
// path; equality with the 54-coset definition is unit-tested exhaustively.
inline unsigned w_invariant_fast(const Mod9& alpha) {
    unsigned a = v_lambda_mod9(alpha - Mod9{1, 0});
    unsigned b = v_lambda_mod9(alpha * Mod9{8, 0} - Mod9{1, 0});  // alpha*(-1) - 1
    return std::max(a, b);
}

// ---- cube classes in K*/(K*)^3 ----

// A nontrivial cube-free class: w^a * lambda^b * prod p_i^{e_i} with
// a, b in {0,1,2}, e_i in {1,2}, primes canonical and pairwise distinct.
// Stored as the canonical member of the pair {alpha, alpha^2}.
struct KummerClass {
    unsigned unit_exp = 0;    // exponent of w
    unsigned lambda_exp = 0;  // exponent of lambda
    std::vector<std::pair<EisInt, unsigned>> primes;  // sorted by (norm, x, y)

    bool operator==(const KummerClass&) const = default;

    bool trivial() const { return unit_exp == 0 && lambda_exp == 0 && primes.empty(); }

    KummerClass square() const {
        KummerClass s;
        s.unit_exp = (unit_exp * 2) % 3;
        s.lambda_exp = (lambda_exp * 2) % 3;
        s.primes = primes;
        for (auto& [p, e] : s.primes) e = (e * 2) % 3;  // 1 <-> 2
        return s;
    }

    // Deterministic encoding; also the sort key for pair canonicalization.
    std::string encode() const {
        std::string s = "w^" + std::to_string(unit_exp) + "*l^" + std::to_string(lambda_exp);
        for (const auto& [p, e] : primes)
            s += "*(" + eis_str(p) + ")^" + std::to_string(e);
        return s;
    }

    Mod9 tame_unit_residue_mod9() const {  // w^a * prod p_i^{e_i} mod 9
        Mod9 r{1, 0};
        Mod9 w = Mod9::of(eis_omega);
        for (unsigned i = 0; i < unit_exp; ++i) r = r * w;
        for (const auto& [p, e] : primes) {
            Mod9 pm = Mod9::of(p);
            for (unsigned i = 0; i < e; ++i) r = r * pm;
        }
        return r;
    }
};

inline KummerClass pair_canonical(const KummerClass& c) {
    KummerClass s = c.square();
    return s.encode() < c.encode() ? s : c;
}

// Cube-free part of a nonzero z as a canonical pair representative; throws if
// the class is trivial (z a cube times a unit cube).
inline KummerClass cubefree_part(const EisInt& z, i64 factor_bound = 100000000) {
    EisFactorization f = factor(z, factor_bound);
    KummerClass c;
    // zeta6^k = (-1)^k w^(2k); the sign is a cube and drops.
    c.unit_exp = (2 * f.unit_exp) % 3;
    c.lambda_exp = f.lambda_exp % 3;
    for (const auto& [p, e] : f.primes)
        if (e % 3) c.primes.push_back({p, e % 3});
    if (c.trivial()) throw std::invalid_argument("cubefree_part: class is trivial (perfect cube)");
    return pair_canonical(c);
}

}  // namespace malle
