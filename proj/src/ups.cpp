#include "fo2p/ups.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fo2p {

uint64_t lcm64(uint64_t a, uint64_t b) {
    if (a == 0) return b;
    if (b == 0) return a;
    return a / std::gcd(a, b) * b;
}

bool Ups::member(NatInf n) const {
    if (n.is_inf()) return has_inf;
    uint64_t x = n.fin();
    if (finites.count(x)) return true;
    for (auto& [a, p] : periodics)
        if (x >= a && (x - a) % p == 0) return true;
    return false;
}

bool Ups::contains_linear(uint64_t a, uint64_t q) const {
    // {a + i*q} is eventually periodic in this set with period lcm of all
    // periods; checking up to bound() plus one full cycle decides it.
    uint64_t P = q;
    for (auto& [o, p] : periodics) { (void)o; P = lcm64(P, p); }
    uint64_t limit = bound() + P;
    for (uint64_t x = a; x <= limit; x += q)
        if (!member(NatInf(x))) return false;
    return true;
}

uint64_t Ups::bound() const {
    uint64_t b = 0;
    for (uint64_t f : finites) b = std::max(b, f + 1);
    for (auto& [a, p] : periodics) { (void)p; b = std::max(b, a); }
    return b;
}

Ups Ups::complement() const {
    uint64_t B = bound();
    uint64_t P = 1;
    for (auto& [a, p] : periodics) { (void)a; P = lcm64(P, p); }
    Ups out;
    for (uint64_t n = 0; n < B; n++)
        if (!member(NatInf(n))) out.finites.insert(n);
    for (uint64_t i = 0; i < P; i++)
        if (!member(NatInf(B + i))) out.periodics.insert({B + i, P});
    out.has_inf = !has_inf;
    out.normalize();
    return out;
}

Ups Ups::shift_down() const {
    Ups out;
    for (uint64_t f : finites)
        if (f >= 1) out.finites.insert(f - 1);
    for (auto& [a, p] : periodics) {
        if (a >= 1) out.periodics.insert({a - 1, p});
        else out.periodics.insert({p - 1, p}); // <0>_p minus its 0 element
    }
    out.has_inf = has_inf;
    out.normalize();
    return out;
}

Ups Ups::union_with(const Ups& o) const {
    Ups out = *this;
    out.finites.insert(o.finites.begin(), o.finites.end());
    out.periodics.insert(o.periodics.begin(), o.periodics.end());
    out.has_inf = has_inf || o.has_inf;
    out.normalize();
    return out;
}

Ups Ups::with_zero() const {
    Ups out = *this;
    out.finites.insert(0);
    out.normalize();
    return out;
}

Ups Ups::rewrite_period(uint64_t p) const {
    Ups out;
    out.finites = finites;
    out.has_inf = has_inf;
    for (auto& [a, q] : periodics) {
        for (uint64_t i = 0; i * q < p; i++) out.periodics.insert({a + i * q, p});
    }
    out.normalize();
    return out;
}

void Ups::normalize() {
    // Drop a periodic (a,p) subsumed by (b,p') with p' | p and b <= a, b = a mod p'.
    std::vector<std::pair<uint64_t, uint64_t>> keep;
    for (auto& pr : periodics) {
        bool subsumed = false;
        for (auto& other : periodics) {
            if (other == pr) continue;
            auto [a, p] = pr;
            auto [b, q] = other;
            if (p % q == 0 && b <= a && (a - b) % q == 0) {
                if (q < p || b < a) { subsumed = true; break; }
            }
        }
        if (!subsumed) keep.push_back(pr);
    }
    periodics = {keep.begin(), keep.end()};
    // Drop finites already covered by a periodic part.
    for (auto it = finites.begin(); it != finites.end();) {
        bool covered = false;
        for (auto& [a, p] : periodics)
            if (*it >= a && (*it - a) % p == 0) { covered = true; break; }
        it = covered ? finites.erase(it) : std::next(it);
    }
}

std::string Ups::str() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    auto sep = [&] { if (!first) os << ", "; first = false; };
    for (uint64_t f : finites) { sep(); os << f; }
    for (auto& [a, p] : periodics) { sep(); os << a << "+" << p << "k"; }
    if (has_inf) { sep(); os << "inf"; }
    os << "}";
    return os.str();
}

} // namespace fo2p
