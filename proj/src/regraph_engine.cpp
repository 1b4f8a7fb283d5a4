#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "fo2p/regraph.hpp"

namespace fo2p {

namespace {

struct Budget {
    uint64_t left;
    void spend(uint64_t n = 1) {
        if (n > left) throw CapExceeded("regraph: step budget exceeded");
        left -= n;
    }
};

std::unordered_map<std::string, bool>& memo() {
    static std::unordered_map<std::string, bool> m;
    return m;
}

using Deg = std::vector<CountValue>;

struct Col {
    Deg deg;        // bipartite: t entries; digraph: 2t entries (in rows then out rows)
    NatInf size;
};

void sort_cols(std::vector<Col>& cs) {
    std::sort(cs.begin(), cs.end(), [](const Col& a, const Col& b) {
        if (a.deg != b.deg) return a.deg < b.deg;
        return a.size.v < b.size.v;
    });
}

// Drop empty columns, merge equal ones.
void normalize_cols(std::vector<Col>& cs) {
    std::map<Deg, NatInf> agg;
    for (auto& c : cs) {
        if (c.size == NatInf(0)) continue;
        auto [it, fresh] = agg.try_emplace(c.deg, c.size);
        if (!fresh) it->second += c.size;
    }
    cs.clear();
    for (auto& [d, s] : agg) cs.push_back({d, s});
}

std::string encode(char tag, int t, uint64_t p, bool complete,
                   const std::vector<Col>& L, const std::vector<Col>& R) {
    std::ostringstream os;
    os << tag << t << ':' << p << ':' << complete << '|';
    auto enc = [&](const std::vector<Col>& cs) {
        for (auto& c : cs) {
            for (auto& e : c.deg) os << int(e.tag) << '.' << e.off << ',';
            os << '=' << (c.size.is_inf() ? std::string("i") : std::to_string(c.size.fin())) << ';';
        }
        os << '/';
    };
    enc(L);
    enc(R);
    return os.str();
}

NatInf total(const std::vector<Col>& cs) {
    NatInf s(0);
    for (auto& c : cs) s += c.size;
    return s;
}

bool zero_admitting(const CountValue& e) { return e.admits(NatInf(0), 1); }

bool positive_capable(const CountValue& e) { return !e.is_zero(); }

// can a partner vertex carry at least one edge, given that its degree is
// bounded by the number of vertices on the other side?
bool capable_within(const CountValue& e, NatInf cap, uint64_t p) {
    if (cap == NatInf(0)) return false;
    switch (e.tag) {
        case CountValue::Tag::Fixed: return e.off >= 1 && NatInf(e.off) <= cap;
        case CountValue::Tag::Periodic: {
            uint64_t smallest = e.off >= 1 ? e.off : p;
            return NatInf(smallest) <= cap;
        }
        case CountValue::Tag::Inf: return cap.is_inf();
        case CountValue::Tag::Any: return true;
    }
    return false;
}

CountValue decrement(const CountValue& e, uint64_t p) {
    switch (e.tag) {
        case CountValue::Tag::Fixed: return CountValue::fixed(e.off - 1);
        case CountValue::Tag::Periodic:
            return CountValue::periodic(e.off >= 1 ? e.off - 1 : p - 1);
        case CountValue::Tag::Inf: return CountValue::inf();
        case CountValue::Tag::Any: return CountValue::any();
    }
    return e;
}

// --------------------------------------------------------------------------
// Row feasibility (edge counting, both sides, with infinities)

struct RowSide {
    bool must_inf = false, can_inf = false, slack_p = false, slack_1 = false;
    uint64_t base = 0;
};

RowSide row_side(const std::vector<Col>& cs, int row) {
    RowSide r;
    for (auto& c : cs) {
        const CountValue& e = c.deg[size_t(row)];
        if (e.is_inf()) {
            r.must_inf = true;
        } else if (e.is_any()) {
            r.slack_1 = true;
            if (c.size.is_inf()) r.can_inf = true;
        } else if (c.size.is_inf()) {
            if (e.offset() > 0) r.must_inf = true;
            else if (e.tag == CountValue::Tag::Periodic) { r.can_inf = true; r.slack_p = true; }
        } else {
            r.base += e.offset() * c.size.fin();
            if (e.tag == CountValue::Tag::Periodic) r.slack_p = true;
        }
    }
    r.can_inf = r.can_inf || r.must_inf;
    return r;
}

bool row_feasible(const RowSide& a, const RowSide& b, uint64_t p) {
    bool fin_ok = false;
    if (!a.must_inf && !b.must_inf) {
        // achievable finite counts: {base}, {base + kp}, or [base, inf) per side
        if (a.slack_1 && b.slack_1) fin_ok = true;
        else if (a.slack_1) fin_ok = b.slack_p || b.base >= a.base;
        else if (b.slack_1) fin_ok = a.slack_p || a.base >= b.base;
        else if (a.slack_p && b.slack_p) fin_ok = (a.base % p) == (b.base % p);
        else if (a.slack_p) fin_ok = b.base >= a.base && (b.base - a.base) % p == 0;
        else if (b.slack_p) fin_ok = a.base >= b.base && (a.base - b.base) % p == 0;
        else fin_ok = a.base == b.base;
    }
    return fin_ok || (a.can_inf && b.can_inf);
}

// inf entries need infinitely many capable partners on the other side; a
// partner's degree is capped by the size of the side holding the inf entry
bool inf_entry_conditions(const std::vector<Col>& side, const std::vector<Col>& other,
                          int t, uint64_t p) {
    NatInf cap = total(side);
    for (int i = 0; i < t; i++) {
        bool needed = false;
        for (auto& c : side)
            if (c.deg[size_t(i)].is_inf()) needed = true;
        if (!needed) continue;
        bool ok = false;
        for (auto& c : other)
            if (c.size.is_inf() && capable_within(c.deg[size_t(i)], cap, p)) ok = true;
        if (!ok) return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// Bipartite engine

struct BiInst {
    int t = 0;
    uint64_t p = 1;
    bool complete = false;
    std::vector<Col> L, R;
};

bool bi_core(BiInst inst, Budget& budget);

bool all_zero_admitting(const std::vector<Col>& cs) {
    for (auto& c : cs)
        for (auto& e : c.deg)
            if (!zero_admitting(e)) return false;
    return true;
}

struct Bigness {
    bool big = false;
    uint64_t delta0 = 0;
};

// Big-enough test for simple matrices (per paper thresholds; t==1 quadratic,
// otherwise quartic; all-fixed rows use the slightly-big-enough bound).
Bigness bigness(const BiInst& inst) {
    Bigness out;
    int t = inst.t;
    // the closed-form lemmas are only invoked on paper-shaped entries
    for (auto& c : inst.L)
        for (auto& e : c.deg)
            if (e.is_any()) return out;
    for (auto& c : inst.R)
        for (auto& e : c.deg)
            if (e.is_any()) return out;
    // classify rows; exclude rows with an inf entry (handled by side conditions)
    std::vector<bool> inf_row(size_t(t), false), per_row_l(size_t(t), false),
        per_row_r(size_t(t), false), fix_row_l(size_t(t), true), fix_row_r(size_t(t), true);
    for (int i = 0; i < t; i++) {
        for (auto& c : inst.L) {
            const CountValue& e = c.deg[size_t(i)];
            if (e.is_inf()) inf_row[size_t(i)] = true;
            if (!e.is_fixed()) { fix_row_l[size_t(i)] = false; per_row_l[size_t(i)] = true; }
        }
        for (auto& c : inst.R) {
            const CountValue& e = c.deg[size_t(i)];
            if (e.is_inf()) inf_row[size_t(i)] = true;
            if (!e.is_fixed()) { fix_row_r[size_t(i)] = false; per_row_r[size_t(i)] = true; }
        }
        // simple matrices required: mixed rows disqualify
        bool lmixed = per_row_l[size_t(i)] && !inst.L.empty() && !std::all_of(
            inst.L.begin(), inst.L.end(), [&](const Col& c) { return !c.deg[size_t(i)].is_fixed(); });
        bool rmixed = per_row_r[size_t(i)] && !inst.R.empty() && !std::all_of(
            inst.R.begin(), inst.R.end(), [&](const Col& c) { return !c.deg[size_t(i)].is_fixed(); });
        if (lmixed || rmixed) return out;
    }
    uint64_t delta = 0;
    bool any_periodic = false;
    auto scan = [&](const std::vector<Col>& cs) {
        for (auto& c : cs) {
            uint64_t colsum = 0;
            for (int i = 0; i < t; i++) {
                const CountValue& e = c.deg[size_t(i)];
                if (inf_row[size_t(i)] || e.is_inf()) continue;
                colsum += e.offset();
                if (e.tag == CountValue::Tag::Periodic) any_periodic = true;
            }
            delta = std::max(delta, colsum);
        }
    };
    scan(inst.L);
    scan(inst.R);
    for (auto& c : inst.L)
        for (auto& e : c.deg)
            if (!e.is_inf()) out.delta0 += e.offset();
    for (auto& c : inst.R)
        for (auto& e : c.deg)
            if (!e.is_inf()) out.delta0 += e.offset();
    if (any_periodic) delta = std::max(delta, inst.p);

    bool all_fixed = true;
    for (int i = 0; i < t; i++)
        if (!inf_row[size_t(i)] && (per_row_l[size_t(i)] || per_row_r[size_t(i)])) all_fixed = false;

    uint64_t d2 = delta * delta;
    uint64_t big_a = all_fixed ? 2 * d2 + 3
                               : (t == 1 ? 2 * d2 + 3 : 2 * d2 * d2 + 3);
    for (int i = 0; i < t; i++) {
        if (inf_row[size_t(i)]) continue;
        NatInf supL(0), supR(0);
        for (auto& c : inst.L)
            if (c.deg[size_t(i)].chi()) supL += c.size;
        for (auto& c : inst.R)
            if (c.deg[size_t(i)].chi()) supR += c.size;
        if (!(NatInf(big_a) <= supL + supR)) return out;
        if (!all_fixed) {
            if (!(NatInf(d2 + 1) <= supL) || !(NatInf(d2 + 1) <= supR)) return out;
        }
    }
    // infinity refinement: inhabited columns with an inf entry are large
    auto inf_cols_ok = [&](const std::vector<Col>& cs) {
        for (auto& c : cs) {
            bool has_inf = std::any_of(c.deg.begin(), c.deg.end(),
                                       [](const CountValue& e) { return e.is_inf(); });
            if (has_inf && !(NatInf(out.delta0) <= c.size)) return false;
        }
        return true;
    };
    if (!inf_cols_ok(inst.L) || !inf_cols_ok(inst.R)) return out;
    out.big = true;
    return out;
}

// Peel one vertex off L[j]: enumerate its color degrees and their
// distribution over the right columns; recurse on the residual instance.
// This is the concrete-argument form of the Phi^r recursion.
bool bi_peel(const BiInst& inst, size_t j, Budget& budget) {
    int t = inst.t;
    const Col& pc = inst.L[j];
    NatInf right_total = total(inst.R);
    uint64_t fin_right = 0;
    bool inf_right = false;
    for (auto& c : inst.R) {
        if (c.size.is_inf()) inf_right = true;
        else fin_right += c.size.fin();
    }
    // degree value candidates per color
    std::vector<std::vector<uint64_t>> choices;
    choices.resize(size_t(t));
    for (int i = 0; i < t; i++) {
        const CountValue& e = pc.deg[size_t(i)];
        if (e.is_inf()) return false; // peel caller avoids this; defensive
        uint64_t cap;
        if (right_total.is_inf()) {
            // beyond the finite part plus one period the extra edges land in
            // infinite columns; cap the enumeration there
            cap = fin_right + inst.p * uint64_t(t + 1) + e.offset();
        } else {
            cap = right_total.fin();
        }
        if (e.is_fixed()) {
            if (e.off <= cap) choices[size_t(i)].push_back(e.off);
        } else {
            for (uint64_t v = e.off; v <= cap; v += inst.p) choices[size_t(i)].push_back(v);
        }
        if (choices[size_t(i)].empty()) return false;
    }
    (void)inf_right;

    // residual left side
    std::vector<Col> baseL = inst.L;
    if (baseL[j].size.is_inf()) {
        // peeling from an infinite column leaves it infinite; callers peel
        // finite columns, defensive here
    } else {
        baseL[j].size = NatInf(baseL[j].size.fin() - 1);
    }

    std::vector<uint64_t> d(static_cast<size_t>(t), 0);
    // distribution: per right column j2, a vector k[i]; running remaining d
    std::function<bool(size_t)> over_degrees = [&](size_t i) -> bool {
        budget.spend();
        if (i == size_t(t)) {
            // distribute d over right columns
            std::vector<Col> newR;
            std::function<bool(size_t, std::vector<uint64_t>&)> distribute =
                [&](size_t j2, std::vector<uint64_t>& rem) -> bool {
                budget.spend();
                if (j2 == inst.R.size()) {
                    for (uint64_t r : rem)
                        if (r != 0) return false;
                    BiInst next{inst.t, inst.p, inst.complete, baseL, newR};
                    return bi_core(std::move(next), budget);
                }
                const Col& rc = inst.R[j2];
                // enumerate the color vector this column receives
                std::vector<uint64_t> k(size_t(t), 0);
                std::function<bool(size_t, NatInf)> pick = [&](size_t i2, NatInf used) -> bool {
                    budget.spend();
                    if (i2 == size_t(t)) {
                        NatInf rest;
                        if (rc.size.is_inf()) rest = NatInf::inf();
                        else rest = NatInf(rc.size.fin() - used.fin());
                        if (inst.complete && rest != NatInf(0)) return false;
                        size_t mark = newR.size();
                        for (int i3 = 0; i3 < t; i3++) {
                            if (k[size_t(i3)] == 0) continue;
                            Col g;
                            g.deg = rc.deg;
                            g.deg[size_t(i3)] = decrement(g.deg[size_t(i3)], inst.p);
                            g.size = NatInf(k[size_t(i3)]);
                            newR.push_back(std::move(g));
                        }
                        if (rest != NatInf(0)) newR.push_back({rc.deg, rest});
                        bool ok = false;
                        for (uint64_t i3 = 0; i3 < size_t(t); i3++) rem[i3] -= k[i3];
                        ok = distribute(j2 + 1, rem);
                        for (uint64_t i3 = 0; i3 < size_t(t); i3++) rem[i3] += k[i3];
                        newR.resize(mark);
                        return ok;
                    }
                    // k for color i2: 0..min(rem, capacity-left)
                    uint64_t capacity;
                    if (rc.size.is_inf()) capacity = rem[i2];
                    else capacity = rc.size.fin() - used.fin();
                    uint64_t hi = std::min(rem[i2], capacity);
                    for (uint64_t v = 0; v <= hi; v++) {
                        if (v > 0 && !positive_capable(rc.deg[i2])) break;
                        k[i2] = v;
                        if (pick(i2 + 1, used + NatInf(v))) return true;
                    }
                    k[i2] = 0;
                    return false;
                };
                return pick(0, NatInf(0));
            };
            std::vector<uint64_t> rem = d;
            return distribute(0, rem);
        }
        for (uint64_t v : choices[i]) {
            d[i] = v;
            if (over_degrees(i + 1)) return true;
        }
        return false;
    };
    return over_degrees(0);
}

bool bi_core(BiInst inst, Budget& budget) {
    budget.spend();
    normalize_cols(inst.L);
    normalize_cols(inst.R);
    sort_cols(inst.L);
    sort_cols(inst.R);

    if (inst.L.empty() && inst.R.empty()) return true;
    if (inst.L.empty()) return all_zero_admitting(inst.R);
    if (inst.R.empty()) return all_zero_admitting(inst.L);
    if (inst.t == 0) return !inst.complete; // no colors: edgeless, both sides inhabited

    std::string key = encode('B', inst.t, inst.p, inst.complete, inst.L, inst.R);
    auto it = memo().find(key);
    if (it != memo().end()) return it->second;
    bool res = false;
    auto done = [&](bool r) { memo()[key] = r; return r; };

    // necessary row handshakes + infinity partner conditions
    for (int i = 0; i < inst.t; i++)
        if (!row_feasible(row_side(inst.L, i), row_side(inst.R, i), inst.p)) return done(false);
    if (!inf_entry_conditions(inst.L, inst.R, inst.t, inst.p) ||
        !inf_entry_conditions(inst.R, inst.L, inst.t, inst.p))
        return done(false);

    // row with an empty left support: no color-i edges can leave the left
    // side, so inhabited right columns must admit 0 there; then the color
    // disappears (and symmetrically).
    for (int side = 0; side < 2; side++) {
        auto& S = side == 0 ? inst.L : inst.R;
        auto& O = side == 0 ? inst.R : inst.L;
        for (int i = 0; i < inst.t; i++) {
            bool empty_support = true;
            for (auto& c : S)
                if (c.deg[size_t(i)].chi()) empty_support = false;
            if (!empty_support) continue;
            for (auto& c : O)
                if (!zero_admitting(c.deg[size_t(i)])) return done(false);
            BiInst next{inst.t - 1, inst.p, inst.complete, inst.L, inst.R};
            for (auto& c : next.L) c.deg.erase(c.deg.begin() + i);
            for (auto& c : next.R) c.deg.erase(c.deg.begin() + i);
            return done(bi_core(std::move(next), budget));
        }
    }

    if (!inst.complete) {
        Bigness big = bigness(inst);
        if (big.big) return done(true); // row handshakes already verified
    }

    // all inhabited columns infinite: the iterative constructions close the gap
    bool all_inf = true;
    for (auto& c : inst.L)
        if (!c.size.is_inf()) all_inf = false;
    for (auto& c : inst.R)
        if (!c.size.is_inf()) all_inf = false;
    if (all_inf && !inst.complete) return done(true);

    // peel a finite, inf-entry-free column; prefer the smaller finite side
    auto peelable = [](const std::vector<Col>& cs) {
        for (size_t j = 0; j < cs.size(); j++) {
            if (cs[j].size.is_inf()) continue;
            bool has_inf = std::any_of(cs[j].deg.begin(), cs[j].deg.end(),
                                       [](const CountValue& e) { return e.is_inf(); });
            if (!has_inf) return int(j);
        }
        return -1;
    };
    NatInf lt = total(inst.L), rt = total(inst.R);
    bool left_first = lt <= rt;
    for (int attempt = 0; attempt < 2; attempt++) {
        bool left = left_first == (attempt == 0);
        if (left) {
            int j = peelable(inst.L);
            if (j >= 0) return done(bi_peel(inst, size_t(j), budget));
        } else {
            int j = peelable(inst.R);
            if (j >= 0) {
                BiInst sw{inst.t, inst.p, inst.complete, inst.R, inst.L};
                return done(bi_peel(sw, size_t(j), budget));
            }
        }
    }
    // only infinite or inf-entry columns remain and the instance is not big:
    // fall back to an inf-column rewrite. The infinitely many partners of the
    // inf rows must be able to carry their single edge: the partner entry
    // admits exactly one edge, or other left vertices exist to top it up.
    NatInf left_total = total(inst.L);
    for (size_t j = 0; j < inst.L.size(); j++) {
        if (inst.L[j].size.is_inf()) continue;
        BiInst next = inst;
        bool ok = true;
        for (int i = 0; i < inst.t && ok; i++) {
            if (!next.L[j].deg[size_t(i)].is_inf()) continue;
            bool found = false;
            for (auto& c : next.R)
                if (c.size.is_inf() && capable_within(c.deg[size_t(i)], left_total, inst.p))
                    found = true;
            ok = found;
            next.L[j].deg[size_t(i)] = CountValue::fixed(0);
        }
        if (!ok) return done(false);
        return done(bi_core(std::move(next), budget));
    }
    return done(true); // all remaining inhabited columns infinite
}

// column degree sum condition for completeness (C1/C2 at concrete sizes)
bool column_total_ok(const Deg& deg, NatInf other_total, uint64_t p, uint64_t extra) {
    bool any_inf = false, any_per = false;
    uint64_t off = extra;
    for (auto& e : deg) {
        if (e.is_inf()) any_inf = true;
        else off += e.offset();
        if (e.tag == CountValue::Tag::Periodic) any_per = true;
    }
    if (any_inf) return other_total.is_inf();
    if (other_total.is_inf()) return false; // finite-degree vertices cannot cover an infinite side
    if (any_per) return other_total.fin() >= off && (other_total.fin() - off) % p == 0;
    return other_total.fin() == off;
}

bool good_pair(const BiInst& inst) {
    for (int i = 0; i < inst.t; i++) {
        bool l_ok = !inst.L.empty(), r_ok = !inst.R.empty();
        for (auto& c : inst.L)
            if (c.deg[size_t(i)].is_fixed()) l_ok = false;
        for (auto& c : inst.R)
            if (c.deg[size_t(i)].is_fixed()) r_ok = false;
        if (l_ok && r_ok) return true;
    }
    return false;
}

} // namespace

bool bireg_feasible(const DegreeMatrix& A, const DegreeMatrix& B,
                    const std::vector<NatInf>& M, const std::vector<NatInf>& N,
                    bool complete, const RegraphCaps& caps) {
    if (A.rows != B.rows) throw std::runtime_error("bireg_feasible: row mismatch");
    if (int(M.size()) != A.cols || int(N.size()) != B.cols)
        throw std::runtime_error("bireg_feasible: size vector mismatch");
    if (A.rows > caps.max_colors || A.cols > caps.max_cols || B.cols > caps.max_cols)
        throw CapExceeded("bireg_feasible: dimension cap");
    Budget budget{caps.max_nodes};

    BiInst inst;
    inst.t = A.rows;
    inst.p = std::max<uint64_t>(1, A.period);
    inst.complete = false;
    for (int j = 0; j < A.cols; j++) inst.L.push_back({A.col(j), M[size_t(j)]});
    for (int j = 0; j < B.cols; j++) inst.R.push_back({B.col(j), N[size_t(j)]});

    if (complete) {
        NatInf lt(0), rt(0);
        for (auto& c : inst.L) lt += c.size;
        for (auto& c : inst.R) rt += c.size;
        for (auto& c : inst.L)
            if (c.size != NatInf(0) && !column_total_ok(c.deg, rt, inst.p, 0)) return false;
        for (auto& c : inst.R)
            if (c.size != NatInf(0) && !column_total_ok(c.deg, lt, inst.p, 0)) return false;
        // drop empty columns before classifying the pair
        normalize_cols(inst.L);
        normalize_cols(inst.R);
        if (inst.L.empty() || inst.R.empty()) return true; // no pairs to cover
        bool any_inf_size = false;
        for (auto& c : inst.L) any_inf_size |= c.size.is_inf();
        for (auto& c : inst.R) any_inf_size |= c.size.is_inf();
        if (good_pair(inst) || any_inf_size) {
            inst.complete = false; // completion argument closes the gap
            return bi_core(std::move(inst), budget);
        }
        // not a good pair: completion must be tracked exactly
        inst.complete = true;
        return bi_core(std::move(inst), budget);
    }
    return bi_core(std::move(inst), budget);
}

// ---------------------------------------------------------------------------
// Digraph engine

namespace {

struct DiInst {
    int t = 0;
    uint64_t p = 1;
    bool complete = false;
    std::vector<Col> C; // deg = in rows (t) then out rows (t)
};

bool di_core(DiInst inst, Budget& budget);

bool di_peel(const DiInst& inst, size_t j, Budget& budget) {
    int t = inst.t;
    const Col& pc = inst.C[j];
    NatInf pool_total(0);
    for (size_t j2 = 0; j2 < inst.C.size(); j2++) {
        pool_total += inst.C[j2].size;
    }
    if (pool_total.is_inf()) {
        // cap periodic degree enumeration as in the bipartite case
    }
    uint64_t fin_pool = 0;
    bool has_inf_pool = false;
    for (auto& c : inst.C) {
        if (c.size.is_inf()) has_inf_pool = true;
        else fin_pool += c.size.fin();
    }
    fin_pool -= 1; // exclude the peeled vertex itself
    uint64_t cap = has_inf_pool ? fin_pool + inst.p * uint64_t(t + 1) + 4 : fin_pool;

    std::vector<std::vector<uint64_t>> choices;
    choices.resize(size_t(2 * t));
    for (int i = 0; i < 2 * t; i++) {
        const CountValue& e = pc.deg[size_t(i)];
        if (e.is_inf()) return false;
        if (e.is_fixed()) {
            if (e.off <= cap) choices[size_t(i)].push_back(e.off);
        } else {
            for (uint64_t v = e.off; v <= cap; v += inst.p) choices[size_t(i)].push_back(v);
        }
        if (choices[size_t(i)].empty()) return false;
    }

    std::vector<Col> baseC = inst.C;
    baseC[j].size = NatInf(baseC[j].size.fin() - 1);

    std::vector<uint64_t> d(static_cast<size_t>(2 * t), 0); // in degrees then out degrees of u
    std::function<bool(size_t)> over_degrees = [&](size_t i) -> bool {
        budget.spend();
        if (i == size_t(2 * t)) {
            std::vector<Col> newC;
            std::function<bool(size_t, std::vector<uint64_t>&)> distribute =
                [&](size_t j2, std::vector<uint64_t>& rem) -> bool {
                budget.spend();
                if (j2 == baseC.size()) {
                    for (uint64_t r : rem)
                        if (r) return false;
                    DiInst next{inst.t, inst.p, inst.complete, newC};
                    return di_core(std::move(next), budget);
                }
                const Col& rc = baseC[j2];
                if (rc.size == NatInf(0)) return distribute(j2 + 1, rem);
                // this column gives k[i] in-partners (v -> u, color i) and
                // k[t+i] out-partners (u -> v); each vertex has one role
                std::vector<uint64_t> k(size_t(2 * t), 0);
                std::function<bool(size_t, NatInf)> pick = [&](size_t i2, NatInf used) -> bool {
                    budget.spend();
                    if (i2 == size_t(2 * t)) {
                        NatInf rest;
                        if (rc.size.is_inf()) rest = NatInf::inf();
                        else rest = NatInf(rc.size.fin() - used.fin());
                        if (inst.complete && rest != NatInf(0)) return false;
                        size_t mark = newC.size();
                        for (int i3 = 0; i3 < 2 * t; i3++) {
                            if (!k[size_t(i3)]) continue;
                            Col g;
                            g.deg = rc.deg;
                            int color = i3 % t;
                            // v -> u consumes v's out budget; u -> v consumes v's in budget
                            int row = i3 < t ? (t + color) : color;
                            g.deg[size_t(row)] = decrement(g.deg[size_t(row)], inst.p);
                            g.size = NatInf(k[size_t(i3)]);
                            newC.push_back(std::move(g));
                        }
                        if (rest != NatInf(0)) newC.push_back({rc.deg, rest});
                        for (int i3 = 0; i3 < 2 * t; i3++) rem[size_t(i3)] -= k[size_t(i3)];
                        bool ok = distribute(j2 + 1, rem);
                        for (int i3 = 0; i3 < 2 * t; i3++) rem[size_t(i3)] += k[size_t(i3)];
                        newC.resize(mark);
                        return ok;
                    }
                    uint64_t capacity;
                    if (rc.size.is_inf()) capacity = rem[i2];
                    else capacity = rc.size.fin() - used.fin();
                    uint64_t hi = std::min(rem[i2], capacity);
                    int color = int(i2) % t;
                    int row = int(i2) < t ? (t + color) : color;
                    for (uint64_t v = 0; v <= hi; v++) {
                        if (v > 0 && !positive_capable(rc.deg[size_t(row)])) break;
                        k[i2] = v;
                        if (pick(i2 + 1, used + NatInf(v))) return true;
                    }
                    k[i2] = 0;
                    return false;
                };
                return pick(0, NatInf(0));
            };
            std::vector<uint64_t> rem = d;
            return distribute(0, rem);
        }
        for (uint64_t v : choices[i]) {
            d[i] = v;
            if (over_degrees(i + 1)) return true;
        }
        return false;
    };
    return over_degrees(0);
}

bool di_core(DiInst inst, Budget& budget) {
    budget.spend();
    normalize_cols(inst.C);
    sort_cols(inst.C);
    if (inst.C.empty()) return true;
    NatInf n = total(inst.C);
    if (n == NatInf(1)) {
        for (auto& e : inst.C[0].deg)
            if (!zero_admitting(e)) return false;
        return true;
    }
    if (inst.t == 0) return !inst.complete || n <= NatInf(1);

    std::string key = encode('D', inst.t, inst.p, inst.complete, inst.C, {});
    auto it = memo().find(key);
    if (it != memo().end()) return it->second;
    auto done = [&](bool r) { memo()[key] = r; return r; };

    // per-color handshake: total outdegree = total indegree
    for (int i = 0; i < inst.t; i++) {
        std::vector<Col> inside, outside;
        for (auto& c : inst.C) {
            inside.push_back({{c.deg[size_t(i)]}, c.size});
            outside.push_back({{c.deg[size_t(inst.t + i)]}, c.size});
        }
        if (!row_feasible(row_side(inside, 0), row_side(outside, 0), inst.p))
            return done(false);
    }
    // inf entries need infinite capable partners (same vertex set); a
    // partner's degree budget excludes itself
    for (int i = 0; i < 2 * inst.t; i++) {
        bool needed = false;
        for (auto& c : inst.C)
            if (c.deg[size_t(i)].is_inf()) needed = true;
        if (!needed) continue;
        int color = i % inst.t;
        int partner_row = i < inst.t ? inst.t + color : color;
        NatInf cap = n.is_inf() ? n : NatInf(n.fin() - 1);
        bool ok = false;
        for (auto& c : inst.C)
            if (c.size.is_inf() && capable_within(c.deg[size_t(partner_row)], cap, inst.p))
                ok = true;
        if (!ok) return done(false);
    }

    if (!inst.complete) {
        // big enough: reduce to the bipartite split (mirror-image argument)
        BiInst bi;
        bi.t = inst.t;
        bi.p = inst.p;
        for (auto& c : inst.C) {
            Col in{{c.deg.begin(), c.deg.begin() + inst.t}, c.size};
            Col out{{c.deg.begin() + inst.t, c.deg.end()}, c.size};
            bi.L.push_back(in);
            bi.R.push_back(out);
        }
        if (bigness(bi).big) return done(bi_core(std::move(bi), budget));
        bool all_inf = std::all_of(inst.C.begin(), inst.C.end(),
                                   [](const Col& c) { return c.size.is_inf(); });
        if (all_inf) return done(true);
    }

    int j = -1;
    for (size_t jj = 0; jj < inst.C.size(); jj++) {
        if (inst.C[jj].size.is_inf()) continue;
        bool has_inf = std::any_of(inst.C[jj].deg.begin(), inst.C[jj].deg.end(),
                                   [](const CountValue& e) { return e.is_inf(); });
        if (!has_inf) { j = int(jj); break; }
    }
    if (j < 0) {
        // finite columns with inf entries: partner conditions hold, treat the
        // inf rows as satisfied by infinite partners
        for (size_t jj = 0; jj < inst.C.size(); jj++) {
            if (inst.C[jj].size.is_inf()) continue;
            DiInst next = inst;
            for (auto& e : next.C[jj].deg)
                if (e.is_inf()) e = CountValue::fixed(0);
            return done(di_core(std::move(next), budget));
        }
        return done(true);
    }
    return done(di_peel(inst, size_t(j), budget));
}

bool di_column_ok(const Col& c, NatInf n, uint64_t p) {
    return column_total_ok(c.deg, n, p, 1); // degree sum must reach ||M|| - 1
}

} // namespace

bool direg_feasible(const DegreeMatrix& A, const DegreeMatrix& B,
                    const std::vector<NatInf>& M, bool complete, const RegraphCaps& caps) {
    if (A.rows != B.rows || A.cols != B.cols)
        throw std::runtime_error("direg_feasible: shape mismatch");
    if (int(M.size()) != A.cols) throw std::runtime_error("direg_feasible: size mismatch");
    if (A.rows > caps.max_colors || A.cols > caps.max_cols)
        throw CapExceeded("direg_feasible: dimension cap");
    Budget budget{caps.max_nodes};

    DiInst inst;
    inst.t = A.rows;
    inst.p = std::max<uint64_t>(1, A.period);
    for (int j = 0; j < A.cols; j++) {
        Col c;
        c.deg = A.col(j);
        auto out = B.col(j);
        c.deg.insert(c.deg.end(), out.begin(), out.end());
        c.size = M[size_t(j)];
        inst.C.push_back(std::move(c));
    }
    if (complete) {
        NatInf n = total(inst.C);
        for (auto& c : inst.C)
            if (c.size != NatInf(0) && !di_column_ok(c, n, inst.p)) return false;
        normalize_cols(inst.C);
        if (total(inst.C) <= NatInf(1)) return true;
        // big sizes: completeness follows from the column conditions plus the
        // incomplete graph (periodic filling); small sizes peel exactly
        BiInst bi;
        bi.t = inst.t;
        bi.p = inst.p;
        for (auto& c : inst.C) {
            bi.L.push_back({{c.deg.begin(), c.deg.begin() + inst.t}, c.size});
            bi.R.push_back({{c.deg.begin() + inst.t, c.deg.end()}, c.size});
        }
        bool any_inf = std::any_of(inst.C.begin(), inst.C.end(),
                                   [](const Col& c) { return c.size.is_inf(); });
        if (bigness(bi).big || any_inf) {
            inst.complete = false;
            return di_core(std::move(inst), budget);
        }
        inst.complete = true;
        return di_core(std::move(inst), budget);
    }
    return di_core(std::move(inst), budget);
}

void clear_feasibility_cache() { memo().clear(); }

} // namespace fo2p
