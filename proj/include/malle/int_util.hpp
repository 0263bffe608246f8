#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace malle {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline u64 isqrt_u64(u64 n) {
    if (n == 0) return 0;
    u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r > n / r) --r;
    while ((r + 1) <= n / (r + 1)) ++r;
    return r;
}

inline bool is_square_u64(u64 n, u64* root = nullptr) {
    u64 r = isqrt_u64(n);
    if (root) *root = r;
    return r * r == n;
}

inline u64 ipow_u64(u64 base, unsigned e) {
    u64 r = 1;
    while (e--) r *= base;
    return r;
}

inline i64 mod_floor(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

inline u64 pow_mod(u64 b, u64 e, u64 m) {
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mul_mod(r, b, m);
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    return r;
}

// Kronecker symbol (a|n), extended to all integers.
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (n & 1) == 0) return 0;
    int v = 0;
    while ((n & 1) == 0) { n >>= 1; ++v; }
    int k = 1;
    if (v & 1) {
        i64 am = mod_floor(a, 8);
        if (am == 3 || am == 5) k = -1;  // (2|a) component
    }
    if (n < 0) {
        n = -n;
        if (a < 0) k = -k;
    }
    // now n odd and positive; standard Jacobi loop
    a = mod_floor(a, n);
    while (a != 0) {
        v = 0;
        while ((a & 1) == 0) { a >>= 1; ++v; }
        if (v & 1) {
            i64 nm = n & 7;
            if (nm == 3 || nm == 5) k = -k;
        }
        if ((a & 3) == 3 && (n & 3) == 3) k = -k;
        i64 t = n % a;
        n = a;
        a = t;
    }
    return n == 1 ? k : 0;
}

// Exact nonnegative rational with small components; used for a(G) = 1/ind(G).
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n, i64 d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    bool operator==(const Rational&) const = default;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline std::vector<u64> primes_up_to(u64 n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<u64> ps;
    for (u64 i = 2; i <= n; ++i) {
        if (!comp[i]) {
            ps.push_back(i);
            for (u64 j = i * i; j <= n; j += i) comp[j] = true;
        }
    }
    return ps;
}

// Smallest-prime-factor table; spf[n] = least prime dividing n (spf[1] = 1).
inline std::vector<std::uint32_t> spf_table(u64 n) {
    std::vector<std::uint32_t> spf(n + 1, 0);
    if (n >= 1) spf[1] = 1;
    for (u64 i = 2; i <= n; ++i) {
        if (spf[i] == 0) {
            for (u64 j = i; j <= n; j += i)
                if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);
        }
    }
    return spf;
}

// Parses a nonnegative integer bound, accepting scientific notation ("1e10",
// "2.5e6") as long as the value is exactly integral.
inline std::optional<u64> parse_bound(const std::string& s) {
    if (s.empty()) return std::nullopt;
    bool sci = s.find('e') != std::string::npos || s.find('E') != std::string::npos ||
               s.find('.') != std::string::npos;
    try {
        if (!sci) {
            size_t pos = 0;
            unsigned long long v = std::stoull(s, &pos);
            if (pos != s.size()) return std::nullopt;
            return static_cast<u64>(v);
        }
        size_t epos = s.find_first_of("eE");
        std::string mant = epos == std::string::npos ? s : s.substr(0, epos);
        long expo = epos == std::string::npos ? 0 : std::stol(s.substr(epos + 1));
        if (expo < 0 || expo > 18) return std::nullopt;
        size_t dot = mant.find('.');
        std::string digits = mant;
        long frac = 0;
        if (dot != std::string::npos) {
            frac = static_cast<long>(mant.size() - dot - 1);
            digits = mant.substr(0, dot) + mant.substr(dot + 1);
        }
        if (digits.empty() || frac > expo) return std::nullopt;
        u128 v = 0;
        for (char c : digits) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + static_cast<unsigned>(c - '0');
            if (v > (u128)1 << 100) return std::nullopt;
        }
        for (long i = 0; i < expo - frac; ++i) v *= 10;
        if (v > UINT64_MAX) return std::nullopt;
        return static_cast<u64>(v);
    } catch (...) {
        return std::nullopt;
    }
}

// Runs fn(part) for part = 0..n_parts-1 on up to n_jobs threads and returns
// the per-part results in part order, so merged output never depends on the
// worker count.
template <typename T, typename Fn>
std::vector<std::vector<T>> run_partitions(unsigned n_jobs, unsigned n_parts, Fn&& fn) {
    std::vector<std::vector<T>> out(n_parts);
    if (n_jobs <= 1 || n_parts <= 1) {
        for (unsigned p = 0; p < n_parts; ++p) out[p] = fn(p);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<unsigned> next(1, 0);
    std::mutex mtx;
    auto worker = [&]() {
        for (;;) {
            unsigned p;
            {
                std::lock_guard<std::mutex> lk(mtx);
                if (next[0] >= n_parts) return;
                p = next[0]++;
            }
            out[p] = fn(p);
        }
    };
    unsigned nt = std::min(n_jobs, n_parts);
    for (unsigned i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace malle
