#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <stdexcept>

namespace fo2p {

// Element of N_inf = N u {inf}. Addition saturates: a + inf = inf.
struct NatInf {
    static constexpr uint64_t kInf = std::numeric_limits<uint64_t>::max();
    uint64_t v = 0;

    NatInf() = default;
    NatInf(uint64_t x) : v(x) {}
    static NatInf inf() { return NatInf(kInf); }

    bool is_inf() const { return v == kInf; }
    uint64_t fin() const {
        if (is_inf()) throw std::logic_error("NatInf: finite value expected");
        return v;
    }

    friend NatInf operator+(NatInf a, NatInf b) {
        if (a.is_inf() || b.is_inf()) return inf();
        return NatInf(a.v + b.v);
    }
    NatInf& operator+=(NatInf b) { *this = *this + b; return *this; }
    friend bool operator==(NatInf a, NatInf b) { return a.v == b.v; }
    friend bool operator!=(NatInf a, NatInf b) { return a.v != b.v; }
    // a <= inf for every a; inf <= b only if b = inf.
    friend bool operator<=(NatInf a, NatInf b) { return b.is_inf() || (!a.is_inf() && a.v <= b.v); }
    friend bool operator<(NatInf a, NatInf b) { return a <= b && a != b; }

    std::string str() const { return is_inf() ? "inf" : std::to_string(v); }
};

// c * x with a natural scalar; 0 * inf = 0 (empty sum).
inline NatInf scale(uint64_t c, NatInf x) {
    if (c == 0) return NatInf(0);
    if (x.is_inf()) return NatInf::inf();
    return NatInf(c * x.v);
}

} // namespace fo2p
