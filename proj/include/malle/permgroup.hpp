#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "malle/int_util.hpp"

namespace malle {

// Permutation of {0,...,n-1} stored as the image sequence.
struct Permutation {
    std::vector<std::uint32_t> images;

    explicit Permutation(std::vector<std::uint32_t> im = {}) : images(std::move(im)) {}
    static Permutation identity(std::uint32_t n) {
        std::vector<std::uint32_t> im(n);
        std::iota(im.begin(), im.end(), 0);
        return Permutation(std::move(im));
    }

    std::uint32_t degree() const { return static_cast<std::uint32_t>(images.size()); }
    std::uint32_t operator()(std::uint32_t p) const { return images[p]; }
    bool operator==(const Permutation&) const = default;
    bool operator<(const Permutation& o) const { return images < o.images; }

    bool is_valid() const {
        std::vector<bool> seen(images.size(), false);
        for (auto v : images) {
            if (v >= images.size() || seen[v]) return false;
            seen[v] = true;
        }
        return true;
    }

    // this after o: (a*b)(p) = a(b(p))
    Permutation operator*(const Permutation& o) const {
        std::vector<std::uint32_t> im(images.size());
        for (std::uint32_t p = 0; p < im.size(); ++p) im[p] = images[o.images[p]];
        return Permutation(std::move(im));
    }

    Permutation inverse() const {
        std::vector<std::uint32_t> im(images.size());
        for (std::uint32_t p = 0; p < im.size(); ++p) im[images[p]] = p;
        return Permutation(std::move(im));
    }

    std::vector<std::uint32_t> cycle_lengths() const {
        std::vector<bool> seen(images.size(), false);
        std::vector<std::uint32_t> lens;
        for (std::uint32_t p = 0; p < images.size(); ++p) {
            if (seen[p]) continue;
            std::uint32_t len = 0, q = p;
            while (!seen[q]) { seen[q] = true; q = images[q]; ++len; }
            lens.push_back(len);
        }
        return lens;
    }

    std::uint32_t cycle_count() const { return static_cast<std::uint32_t>(cycle_lengths().size()); }

    u64 order() const {
        u64 o = 1;
        for (auto len : cycle_lengths()) o = std::lcm<u64>(o, len);
        return o;
    }

    Permutation pow(u64 e) const {
        Permutation r = identity(degree()), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // One-line cycle notation, 1-based, fixed points omitted.
    std::string cycle_str() const {
        std::vector<bool> seen(images.size(), false);
        std::string s;
        for (std::uint32_t p = 0; p < images.size(); ++p) {
            if (seen[p] || images[p] == p) { seen[p] = true; continue; }
            s += "(";
            std::uint32_t q = p;
            bool first = true;
            while (!seen[q]) {
                seen[q] = true;
                if (!first) s += ",";
                s += std::to_string(q + 1);
                first = false;
                q = images[q];
            }
            s += ")";
        }
        return s.empty() ? "()" : s;
    }
};

// ind(g) = degree - number of cycles (fixed points count as cycles).
inline std::uint32_t index_of(const Permutation& p) { return p.degree() - p.cycle_count(); }

// Parses cycle notation like "(1,2,3)(4,5,6)", 1-based, whitespace-insensitive.
// Cycles are composed right to left, so overlapping cycles are allowed.
inline Permutation parse_cycles(const std::string& text, std::uint32_t degree) {
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    std::vector<std::vector<std::uint32_t>> cycles;
    size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '(') throw std::invalid_argument("cycle notation: expected '(' in " + text);
        ++i;
        std::vector<std::uint32_t> cyc;
        while (i < s.size() && s[i] != ')') {
            size_t j = i;
            while (j < s.size() && isdigit(static_cast<unsigned char>(s[j]))) ++j;
            if (j == i) throw std::invalid_argument("cycle notation: expected point in " + text);
            unsigned long v = std::stoul(s.substr(i, j - i));
            if (v == 0 || v > degree) throw std::invalid_argument("cycle notation: point out of range");
            cyc.push_back(static_cast<std::uint32_t>(v - 1));
            i = j;
            if (i < s.size() && s[i] == ',') ++i;
        }
        if (i >= s.size()) throw std::invalid_argument("cycle notation: unterminated cycle");
        ++i;  // ')'
        if (cyc.size() > 1) cycles.push_back(std::move(cyc));
    }
    Permutation p = Permutation::identity(degree);
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it) {
        Permutation c = Permutation::identity(degree);
        for (size_t k = 0; k < it->size(); ++k) {
            std::uint32_t from = (*it)[k], to = (*it)[(k + 1) % it->size()];
            if (c.images[from] != from) throw std::invalid_argument("cycle notation: repeated point in cycle");
            c.images[from] = to;
        }
        if (!c.is_valid()) throw std::invalid_argument("cycle notation: not a permutation");
        p = p * c;
    }
    return p;
}

inline std::uint32_t infer_degree(const std::string& text) {
    std::uint32_t deg = 0;
    size_t i = 0;
    while (i < text.size()) {
        if (isdigit(static_cast<unsigned char>(text[i]))) {
            size_t j = i;
            while (j < text.size() && isdigit(static_cast<unsigned char>(text[j]))) ++j;
            deg = std::max(deg, static_cast<std::uint32_t>(std::stoul(text.substr(i, j - i))));
            i = j;
        } else {
            ++i;
        }
    }
    return deg;
}

struct ConjClass {
    Permutation representative;  // lexicographically least member
    u64 size = 0;
    u64 element_order = 0;
    std::uint32_t index = 0;
};

// Transitive permutation group with cached full element list.
struct PermGroup {
    std::uint32_t degree = 0;
    std::vector<Permutation> generators;
    std::vector<Permutation> elements;  // sorted by image sequence
    u64 order = 0;

    const Permutation& identity_elem() const { return elements.front(); }

    u64 exponent() const {
        u64 e = 1;
        for (const auto& g : elements) e = std::lcm(e, g.order());
        return e;
    }

    size_t element_index(const Permutation& p) const {
        auto it = std::lower_bound(elements.begin(), elements.end(), p);
        if (it == elements.end() || !(*it == p)) throw std::invalid_argument("element not in group");
        return static_cast<size_t>(it - elements.begin());
    }
};

inline constexpr u64 kDefaultOrderCap = 1000000;

// Closes the generators, verifies transitivity and returns the group with a
// deterministic (sorted) element list.
inline PermGroup close_group(std::uint32_t degree, std::vector<Permutation> generators,
                             u64 order_cap = kDefaultOrderCap) {
    if (degree == 0) throw std::invalid_argument("close_group: degree must be positive");
    if (generators.empty()) throw std::invalid_argument("close_group: no generators");
    for (const auto& g : generators) {
        if (g.degree() != degree) throw std::invalid_argument("close_group: generator degree mismatch");
        if (!g.is_valid()) throw std::invalid_argument("close_group: generator is not a permutation");
    }
    std::map<std::vector<std::uint32_t>, bool> seen;
    std::vector<Permutation> frontier{Permutation::identity(degree)};
    seen[frontier[0].images] = true;
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& e : frontier)
            for (const auto& g : generators) {
                Permutation h = g * e;
                if (seen.emplace(h.images, true).second) {
                    if (seen.size() > order_cap)
                        throw std::runtime_error("close_group: order cap exceeded");
                    next.push_back(std::move(h));
                }
            }
        frontier = std::move(next);
    }
    PermGroup G;
    G.degree = degree;
    G.generators = std::move(generators);
    G.elements.reserve(seen.size());
    for (auto& [im, _] : seen) G.elements.emplace_back(im);
    G.order = G.elements.size();
    // transitivity: orbit of 0 under the generators
    std::vector<bool> orbit(degree, false);
    std::vector<std::uint32_t> stack{0};
    orbit[0] = true;
    std::uint32_t reached = 1;
    while (!stack.empty()) {
        std::uint32_t p = stack.back();
        stack.pop_back();
        for (const auto& g : G.generators) {
            std::uint32_t q = g(p);
            if (!orbit[q]) { orbit[q] = true; ++reached; stack.push_back(q); }
        }
    }
    if (reached != degree) throw std::invalid_argument("close_group: group is not transitive");
    return G;
}

// Conjugation orbits, sorted by (element_order, index, representative).
inline std::vector<ConjClass> conjugacy_classes(const PermGroup& G) {
    std::vector<int> cls(G.elements.size(), -1);
    std::vector<ConjClass> out;
    for (size_t i = 0; i < G.elements.size(); ++i) {
        if (cls[i] >= 0) continue;
        int id = static_cast<int>(out.size());
        std::vector<size_t> stack{i};
        cls[i] = id;
        std::vector<size_t> members{i};
        while (!stack.empty()) {
            size_t j = stack.back();
            stack.pop_back();
            for (const auto& g : G.generators) {
                Permutation c = g * G.elements[j] * g.inverse();
                size_t k = G.element_index(c);
                if (cls[k] < 0) { cls[k] = id; stack.push_back(k); members.push_back(k); }
            }
        }
        ConjClass C;
        size_t rep = *std::min_element(members.begin(), members.end());
        C.representative = G.elements[rep];
        C.size = members.size();
        C.element_order = C.representative.order();
        C.index = index_of(C.representative);
        out.push_back(std::move(C));
    }
    std::sort(out.begin(), out.end(), [](const ConjClass& a, const ConjClass& b) {
        return std::tuple(a.element_order, a.index, a.representative.images) <
               std::tuple(b.element_order, b.index, b.representative.images);
    });
    return out;
}

inline size_t class_of(const std::vector<ConjClass>& classes, const PermGroup& G,
                       const Permutation& p) {
    // class membership via the conjugation orbit of p
    std::map<std::vector<std::uint32_t>, bool> seen;
    std::vector<Permutation> stack{p};
    seen[p.images] = true;
    for (size_t i = 0; i < classes.size(); ++i)
        if (classes[i].representative == p) return i;
    while (!stack.empty()) {
        Permutation q = std::move(stack.back());
        stack.pop_back();
        for (const auto& g : G.generators) {
            Permutation c = g * q * g.inverse();
            if (seen.emplace(c.images, true).second) {
                for (size_t i = 0; i < classes.size(); ++i)
                    if (classes[i].representative == c) return i;
                stack.push_back(std::move(c));
            }
        }
    }
    throw std::invalid_argument("class_of: element not in any class");
}

// C -> C^t for t coprime to the group exponent.
inline size_t power_class(const PermGroup& G, const std::vector<ConjClass>& classes,
                          size_t class_idx, u64 t) {
    u64 e = G.exponent();
    if (std::gcd(t, e) != 1)
        throw std::invalid_argument("power_class: t not coprime to group exponent");
    Permutation q = classes.at(class_idx).representative.pow(t % e);
    return class_of(classes, G, q);
}

}  // namespace malle
