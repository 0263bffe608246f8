#pragma once

#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "malle/int_util.hpp"
#include "malle/permgroup.hpp"

namespace malle {

// Image of the cyclotomic character of a number field k in (Z/e)^*, e the
// exponent of the group under consideration. This is the only datum of k the
// orbit count b(k,G) depends on.
struct CyclotomicSpec {
    u64 exponent_modulus = 1;
    std::set<u64> residues;  // subgroup of units mod e, contains 1
    std::string label;
};

inline std::set<u64> units_mod(u64 e) {
    std::set<u64> r;
    if (e <= 1) { r.insert(0); return r; }
    for (u64 t = 1; t < e; ++t)
        if (std::gcd(t, e) == 1) r.insert(t);
    return r;
}

inline CyclotomicSpec field_rationals(u64 e) {
    return {e, units_mod(e), "Q"};
}

// k = Q(zeta_d): residues t = 1 mod gcd(d, e).
inline CyclotomicSpec field_cyclotomic(u64 d, u64 e) {
    if (d == 0) throw std::invalid_argument("field_cyclotomic: d must be positive");
    u64 g = std::gcd(d, e);
    std::set<u64> r;
    for (u64 t : units_mod(e))
        if (t % g == 1 % g) r.insert(t);
    return {e, r, "Qzeta:" + std::to_string(d)};
}

inline bool is_fundamental_disc(i64 d) {
    if (d == 1 || d == 0) return false;
    auto squarefree = [](i64 n) {
        n = n < 0 ? -n : n;
        for (i64 p = 2; p * p <= n; ++p)
            if (n % (p * p) == 0) return false;
        return true;
    };
    if (mod_floor(d, 4) == 1) return squarefree(d);
    if (mod_floor(d, 4) == 0) {
        i64 m = d / 4;
        i64 r = mod_floor(m, 4);
        return (r == 2 || r == 3) && squarefree(m);
    }
    return false;
}

// k = Q(sqrt(D)), D fundamental: if Q(sqrt(D)) lies in Q(zeta_e), the kernel
// of the Kronecker character; otherwise the full unit group.
inline CyclotomicSpec field_quadratic(i64 D, u64 e) {
    if (!is_fundamental_disc(D)) throw std::invalid_argument("field_quadratic: D not a fundamental discriminant");
    u64 aD = static_cast<u64>(D < 0 ? -D : D);
    std::set<u64> r;
    if (e % aD == 0) {
        for (u64 t : units_mod(e))
            if (kronecker(D, static_cast<i64>(t)) == 1) r.insert(t);
    } else {
        r = units_mod(e);
    }
    return {e, r, "Qsqrt:" + std::to_string(D)};
}

inline CyclotomicSpec field_raw(u64 e, const std::vector<u64>& gens) {
    std::set<u64> r{1 % e};
    for (u64 g : gens)
        if (std::gcd(g % e, e) != 1) throw std::invalid_argument("field_raw: generator not coprime to modulus");
    std::vector<u64> frontier(r.begin(), r.end());
    while (!frontier.empty()) {
        std::vector<u64> next;
        for (u64 t : frontier)
            for (u64 g : gens) {
                u64 v = mul_mod(t, g % e, e);
                if (r.insert(v).second) next.push_back(v);
            }
        frontier = std::move(next);
    }
    std::string lab = "raw:" + std::to_string(e) + ":";
    for (size_t i = 0; i < gens.size(); ++i) lab += (i ? "," : "") + std::to_string(gens[i]);
    return {e, r, lab};
}

// ---- group constructors ----

// C_l wr C_m <= S_{l*m}: base C_l^m acting in m blocks of size l, top C_m
// permuting the blocks.
inline PermGroup wreath_cyclic(std::uint32_t l, std::uint32_t m, u64 order_cap = kDefaultOrderCap) {
    if (l < 2 || m < 2) throw std::invalid_argument("wreath_cyclic: both factors must be >= 2");
    std::uint32_t n = l * m;
    Permutation base = Permutation::identity(n);
    for (std::uint32_t r = 0; r < l; ++r) base.images[r] = (r + 1) % l;  // cycle on block 0
    Permutation top = Permutation::identity(n);
    for (std::uint32_t p = 0; p < n; ++p) top.images[p] = ((p / l + 1) % m) * l + p % l;
    return close_group(n, {base, top}, order_cap);
}

inline PermGroup cyclic_group(std::uint32_t n) {
    Permutation c = Permutation::identity(n);
    for (std::uint32_t p = 0; p < n; ++p) c.images[p] = (p + 1) % n;
    return close_group(n, {c});
}

inline PermGroup symmetric3() {
    return close_group(3, {parse_cycles("(1,2,3)", 3), parse_cycles("(1,2)", 3)});
}

// Cayley action of G on its own elements.
inline PermGroup regular_rep(const PermGroup& G, u64 order_cap = kDefaultOrderCap) {
    std::uint32_t n = static_cast<std::uint32_t>(G.order);
    std::vector<Permutation> gens;
    for (const auto& g : G.generators) {
        Permutation img = Permutation::identity(n);
        for (std::uint32_t i = 0; i < n; ++i)
            img.images[i] = static_cast<std::uint32_t>(G.element_index(g * G.elements[i]));
        gens.push_back(std::move(img));
    }
    return close_group(n, gens, order_cap);
}

// G1 x G2 acting on pairs (i, j) -> i*n2 + j.
inline PermGroup product_action(const PermGroup& G1, const PermGroup& G2,
                                u64 order_cap = kDefaultOrderCap) {
    std::uint32_t n1 = G1.degree, n2 = G2.degree, n = n1 * n2;
    std::vector<Permutation> gens;
    for (const auto& g : G1.generators) {
        Permutation img = Permutation::identity(n);
        for (std::uint32_t i = 0; i < n1; ++i)
            for (std::uint32_t j = 0; j < n2; ++j) img.images[i * n2 + j] = g(i) * n2 + j;
        gens.push_back(std::move(img));
    }
    for (const auto& h : G2.generators) {
        Permutation img = Permutation::identity(n);
        for (std::uint32_t i = 0; i < n1; ++i)
            for (std::uint32_t j = 0; j < n2; ++j) img.images[i * n2 + j] = i * n2 + h(j);
        gens.push_back(std::move(img));
    }
    return close_group(n, gens, order_cap);
}

// ---- the invariants ----

inline std::uint32_t ind_of_group(const PermGroup& G) {
    if (G.order <= 1) throw std::invalid_argument("ind: trivial group");
    std::uint32_t best = G.degree;
    for (const auto& g : G.elements)
        if (!(g == G.identity_elem())) best = std::min(best, index_of(g));
    return best;
}

inline Rational a_invariant(const PermGroup& G) { return Rational(1, ind_of_group(G)); }

struct MalleInvariants {
    std::uint32_t ind_G = 0;
    Rational a;
    unsigned b = 0;
    // one representative class per orbit of the Galois action on the
    // minimal-index classes
    std::vector<std::vector<ConjClass>> minimal_k_class_orbits;
    Rational prediction_a;
    unsigned prediction_log_exponent = 0;  // b - 1
};

// Orbits of H = k's residue subgroup acting by C -> C^t on the classes of
// minimal index; b(k,G) is the orbit count.
inline MalleInvariants malle_invariants(const CyclotomicSpec& k, const PermGroup& G) {
    u64 e = G.exponent();
    if (k.exponent_modulus != e)
        throw std::invalid_argument("malle_invariants: field spec modulus != group exponent");
    auto classes = conjugacy_classes(G);
    MalleInvariants inv;
    inv.ind_G = ind_of_group(G);
    inv.a = Rational(1, inv.ind_G);
    std::vector<size_t> minimal;
    for (size_t i = 0; i < classes.size(); ++i)
        if (classes[i].index == inv.ind_G && !(classes[i].representative == G.identity_elem()))
            minimal.push_back(i);
    std::vector<bool> used(classes.size(), false);
    for (size_t i : minimal) {
        if (used[i]) continue;
        std::vector<size_t> orbit{i};
        used[i] = true;
        for (size_t pos = 0; pos < orbit.size(); ++pos)
            for (u64 t : k.residues) {
                size_t j = power_class(G, classes, orbit[pos], t == 0 ? 1 : t);
                if (!used[j]) {
                    if (classes[j].index != inv.ind_G)
                        throw std::logic_error("power action left the minimal-index set");
                    used[j] = true;
                    orbit.push_back(j);
                }
            }
        std::vector<ConjClass> orb;
        for (size_t j : orbit) orb.push_back(classes[j]);
        std::sort(orb.begin(), orb.end(), [](const ConjClass& a, const ConjClass& b) {
            return a.representative.images < b.representative.images;
        });
        inv.minimal_k_class_orbits.push_back(std::move(orb));
    }
    inv.b = static_cast<unsigned>(inv.minimal_k_class_orbits.size());
    inv.prediction_a = inv.a;
    inv.prediction_log_exponent = inv.b - 1;
    return inv;
}

inline std::string prediction_formula(const MalleInvariants& inv) {
    std::string s = "c * x^(" + inv.a.str() + ")";
    if (inv.prediction_log_exponent > 0)
        s += " * log(x)^" + std::to_string(inv.prediction_log_exponent);
    return s + "   (constant c unknown)";
}

}  // namespace malle
