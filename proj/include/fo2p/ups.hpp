#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "fo2p/nat_inf.hpp"

namespace fo2p {

// Ultimately periodic subset of N_inf: finitely many naturals, finitely many
// linear sets <a>_p = {a + i*p : i >= 0} with p >= 1, and optionally inf.
// Period-0 linear sets are folded into `finites` on construction.
struct Ups {
    std::set<uint64_t> finites;
    std::set<std::pair<uint64_t, uint64_t>> periodics; // (offset, period >= 1)
    bool has_inf = false;

    Ups() = default;

    static Ups empty() { return Ups{}; }
    static Ups single(uint64_t n) { Ups s; s.finites.insert(n); return s; }
    static Ups infinity() { Ups s; s.has_inf = true; return s; }
    static Ups linear(uint64_t offset, uint64_t period) {
        Ups s;
        if (period == 0) s.finites.insert(offset);
        else s.periodics.insert({offset, period});
        return s;
    }
    // N_inf itself.
    static Ups all() { Ups s; s.periodics.insert({0, 1}); s.has_inf = true; return s; }
    // {1, 2, ...} u {inf}, the meaning of a bare "exists".
    static Ups at_least_one() { Ups s; s.periodics.insert({1, 1}); s.has_inf = true; return s; }

    bool is_empty() const { return finites.empty() && periodics.empty() && !has_inf; }

    bool member(NatInf n) const;
    // True iff {a + i*q : i >= 0} is a subset of this set (q >= 1).
    bool contains_linear(uint64_t a, uint64_t q) const;

    Ups complement() const;           // N_inf minus this
    Ups shift_down() const;           // S-1 = {i-1 : i in S, i >= 1} (+ inf if present)
    Ups union_with(const Ups& o) const;
    Ups with_zero() const;            // S u {0}
    // Same set with every periodic part rewritten to period p (p a multiple of
    // every period occurring here).
    Ups rewrite_period(uint64_t p) const;

    void normalize();                 // drop subsumed entries; membership unchanged

    // First value beyond all finite elements and offsets; membership of n >= bound()
    // depends only on n mod lcm of periods.
    uint64_t bound() const;

    std::string str() const;          // {3, 1+2k, inf}

    bool operator==(const Ups& o) const {
        return finites == o.finites && periodics == o.periodics && has_inf == o.has_inf;
    }
};

uint64_t lcm64(uint64_t a, uint64_t b);

} // namespace fo2p
