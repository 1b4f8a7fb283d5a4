#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fo2p/nat_inf.hpp"
#include "fo2p/ups.hpp"

namespace fo2p {

// Raised when a configured resource cap would be exceeded; callers report it
// as a distinct outcome, never as unsatisfiability.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One element of N_{inf,+p}: a fixed natural, a residue class <a>_p, or inf.
// The ambient period p is carried by the surrounding matrix / table.
// Any is the unconstrained entry used for degree cells no conjunct touches;
// it admits every count.
struct CountValue {
    enum class Tag : uint8_t { Fixed, Periodic, Inf, Any };
    Tag tag = Tag::Fixed;
    uint64_t off = 0;

    static CountValue fixed(uint64_t a) { return {Tag::Fixed, a}; }
    static CountValue periodic(uint64_t a) { return {Tag::Periodic, a}; }
    static CountValue inf() { return {Tag::Inf, 0}; }
    static CountValue any() { return {Tag::Any, 0}; }

    bool is_fixed() const { return tag == Tag::Fixed; }
    // inf and any count as periodic for the simple-matrix classification.
    bool is_periodic_like() const { return tag != Tag::Fixed; }
    bool is_inf() const { return tag == Tag::Inf; }
    bool is_any() const { return tag == Tag::Any; }

    uint64_t offset() const { return (is_inf() || is_any()) ? 0 : off; }
    bool is_zero() const { return tag == Tag::Fixed && off == 0; }
    // chi: 0 iff the entry is the fixed 0.
    int chi() const { return is_zero() ? 0 : 1; }

    // Membership of a concrete count (period p).
    bool admits(NatInf n, uint64_t p) const {
        switch (tag) {
            case Tag::Fixed: return !n.is_inf() && n.fin() == off;
            case Tag::Periodic: return !n.is_inf() && n.fin() >= off && (n.fin() - off) % p == 0;
            case Tag::Inf: return n.is_inf();
            case Tag::Any: return true;
        }
        return false;
    }

    // Sum in N_{inf,+p}: inf absorbs, periodic + anything nonabsorbing is periodic.
    friend CountValue operator+(CountValue a, CountValue b) {
        if (a.is_any() || b.is_any()) throw std::logic_error("CountValue: sum over Any");
        if (a.is_inf() || b.is_inf()) return inf();
        CountValue r;
        r.tag = (a.tag == Tag::Periodic || b.tag == Tag::Periodic) ? Tag::Periodic : Tag::Fixed;
        r.off = a.off + b.off;
        return r;
    }

    // Whether this value, read as a subset of N_inf, lies inside S:
    // fixed a -> a in S; <a>_p -> a + i p in S for all i; inf -> inf in S.
    bool lies_in(const Ups& S, uint64_t p) const {
        switch (tag) {
            case Tag::Fixed: return S.member(NatInf(off));
            case Tag::Periodic: return S.contains_linear(off, p);
            case Tag::Inf: return S.member(NatInf::inf());
            case Tag::Any: return S.complement().is_empty();
        }
        return false;
    }

    std::string str() const {
        switch (tag) {
            case Tag::Fixed: return std::to_string(off);
            case Tag::Periodic: return "<" + std::to_string(off) + ">";
            case Tag::Inf: return "inf";
            case Tag::Any: return "*";
        }
        return "?";
    }

    bool operator==(const CountValue& o) const { return tag == o.tag && off == o.off; }
    auto operator<=>(const CountValue& o) const = default;
};

// Degree matrix over N_{inf,+p}, row-major.
struct DegreeMatrix {
    int rows = 0, cols = 0;
    uint64_t period = 1;
    std::vector<CountValue> e;

    DegreeMatrix() = default;
    DegreeMatrix(int r, int c, uint64_t p)
        : rows(r), cols(c), period(p), e(size_t(r) * c, CountValue::fixed(0)) {}

    CountValue& at(int i, int j) { return e[size_t(i) * cols + j]; }
    const CountValue& at(int i, int j) const { return e[size_t(i) * cols + j]; }

    DegreeMatrix drop_row(int i) const;
    DegreeMatrix drop_col(int j) const;
    std::vector<CountValue> col(int j) const;

    bool row_all_fixed(int i) const;
    bool row_all_periodic(int i) const;  // inf counts as periodic
    bool is_simple() const;              // every row homogeneous
    bool has_inf() const;

    // max over columns of the sum of offsets (offset of inf treated as 0 by
    // callers that pre-strip inf rows).
    uint64_t norm() const;

    std::string str() const;
    bool operator==(const DegreeMatrix& o) const = default;
};

// Parsed entry text: "a", "a+pk" (p must match the ambient period), "inf".
CountValue parse_entry(const std::string& text, uint64_t period);

} // namespace fo2p
