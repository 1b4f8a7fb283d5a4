#include <algorithm>
#include <optional>

#include "fo2p/presburger.hpp"
#include "fo2p/regraph.hpp"

namespace fo2p {

namespace {

struct AbortSearch {};

constexpr uint64_t kNoBound = std::numeric_limits<uint64_t>::max();

struct Interval {
    NatInf lo, hi; // hi = inf doubles as "unbounded"
    bool fixed() const { return lo == hi; }
};

struct SolverImpl {
    const PresFormula& F;
    SolveMode mode;
    SolveOptions opts;

    std::vector<std::optional<NatInf>> val;
    std::vector<uint64_t> ub;   // proven finite upper bound, or kNoBound
    std::vector<PFormulaPtr> conjuncts;
    std::vector<char> settled;  // conjunct known true for the whole subtree
    std::vector<size_t> settled_order;
    std::vector<int> trail;
    std::vector<std::pair<int, uint64_t>> ub_trail; // (var, previous bound)
    uint64_t steps = 0;
    bool artificial_cap = false; // some exhausted enumeration was cut by value_bound

    std::vector<uint32_t> atom_occurrences; // #atoms a variable appears in

    SolverImpl(const PresFormula& f, SolveMode m, const SolveOptions& o)
        : F(f), mode(m), opts(o) {
        val.resize(f.num_vars());
        ub.assign(f.num_vars(), kNoBound);
        flatten(f.body);
        settled.assign(conjuncts.size(), 0);
        atom_occurrences.assign(f.num_vars(), 0);
        count_occurrences(f.body);
    }

    void count_occurrences(const PFormulaPtr& f) {
        if (f->kind == PFormula::Kind::Atom) {
            // finiteness atoms do not constrain finite values
            if (f->atom.kind == PAtom::Kind::IsInf || f->atom.kind == PAtom::Kind::NotInf)
                return;
            auto scan = [&](const PTerm& t) {
                for (auto& [v, c] : t.coeff) {
                    (void)c;
                    atom_occurrences[size_t(v)]++;
                }
            };
            scan(f->atom.lhs);
            scan(f->atom.rhs);
            if (f->atom.graph) {
                for (auto& t : f->atom.graph->xs) scan(t);
                for (auto& t : f->atom.graph->ys) scan(t);
            }
            return;
        }
        for (auto& c : f->children) count_occurrences(c);
    }

    void flatten(const PFormulaPtr& f) {
        if (f->kind == PFormula::Kind::And) {
            for (auto& c : f->children) flatten(c);
        } else {
            conjuncts.push_back(f);
        }
    }

    void bump(uint64_t n = 1) {
        steps += n;
        if (steps > opts.step_budget) throw AbortSearch{};
    }

    Interval term_iv(const PTerm& t) const {
        NatInf lo(t.cst), hi(t.cst);
        for (auto& [v, c] : t.coeff) {
            if (val[v]) {
                lo += scale(c, *val[v]);
                hi += scale(c, *val[v]);
            } else {
                // unassigned: 0 .. unbounded
                hi = NatInf::inf();
            }
        }
        return {lo, hi};
    }

    bool term_ground(const PTerm& t) const {
        for (auto& [v, c] : t.coeff) {
            (void)c;
            if (!val[v]) return false;
        }
        return true;
    }

    // -1 false, 0 unknown, 1 true
    int eval3(const PFormulaPtr& f) {
        bump();
        switch (f->kind) {
            case PFormula::Kind::True: return 1;
            case PFormula::Kind::False: return -1;
            case PFormula::Kind::Not: {
                int s = eval3(f->children[0]);
                return -s;
            }
            case PFormula::Kind::And: {
                int acc = 1;
                for (auto& c : f->children) {
                    int s = eval3(c);
                    if (s == -1) return -1;
                    if (s == 0) acc = 0;
                }
                return acc;
            }
            case PFormula::Kind::Or: {
                int acc = -1;
                for (auto& c : f->children) {
                    int s = eval3(c);
                    if (s == 1) return 1;
                    if (s == 0) acc = 0;
                }
                return acc;
            }
            case PFormula::Kind::Atom: return eval_atom3(f->atom);
        }
        return 0;
    }

    int eval_atom3(const PAtom& a) {
        switch (a.kind) {
            case PAtom::Kind::Eq: {
                Interval l = term_iv(a.lhs), r = term_iv(a.rhs);
                if (l.fixed() && r.fixed()) return l.lo == r.lo ? 1 : -1;
                if (l.hi < r.lo || r.hi < l.lo) return -1;
                return 0;
            }
            case PAtom::Kind::Le: {
                Interval l = term_iv(a.lhs), r = term_iv(a.rhs);
                if (l.hi <= r.lo) return 1;
                if (r.hi < l.lo) return -1;
                return 0;
            }
            case PAtom::Kind::IsInf: {
                if (mode == SolveMode::NAT) return -1;
                Interval l = term_iv(a.lhs);
                if (l.lo.is_inf()) return 1;
                if (term_ground(a.lhs)) return l.lo.is_inf() ? 1 : -1;
                return 0;
            }
            case PAtom::Kind::NotInf: {
                if (mode == SolveMode::NAT) return 1;
                Interval l = term_iv(a.lhs);
                if (l.lo.is_inf()) return -1;
                if (term_ground(a.lhs)) return 1;
                return 0;
            }
            case PAtom::Kind::Graph: {
                const GraphConstraint& gc = *a.graph;
                for (auto& t : gc.xs)
                    if (!term_ground(t)) return 0;
                for (auto& t : gc.ys)
                    if (!term_ground(t)) return 0;
                PAssignment asg;
                asg.values.resize(val.size());
                for (size_t i = 0; i < val.size(); i++) asg.values[i] = val[i].value_or(NatInf(0));
                std::vector<NatInf> xs, ys;
                for (auto& t : gc.xs) xs.push_back(asg.eval(t));
                for (auto& t : gc.ys) ys.push_back(asg.eval(t));
                bump(100);
                bool ok;
                if (gc.kind == GraphKind::Bireg || gc.kind == GraphKind::BiregC)
                    ok = bireg_feasible(gc.A, gc.B, xs, ys, gc.kind == GraphKind::BiregC);
                else
                    ok = direg_feasible(gc.A, gc.B, xs, gc.kind == GraphKind::DiregC);
                return ok ? 1 : -1;
            }
        }
        return 0;
    }

    void assign(int v, NatInf x) {
        val[v] = x;
        trail.push_back(v);
    }

    void unwind(size_t mark) {
        while (trail.size() > mark) {
            val[trail.back()].reset();
            trail.pop_back();
        }
    }

    // Forced-value extraction from an atom known not-yet-false. Returns false on conflict.
    bool force_from_atom(const PAtom& a, bool& changed) {
        if (a.kind != PAtom::Kind::Eq) return true;
        // substitute assigned vars into both sides
        uint64_t lc = a.lhs.cst, rc = a.rhs.cst;
        std::map<int, uint64_t> l, r;
        bool inf_l = false, inf_r = false;
        auto fold = [&](const PTerm& t, uint64_t& c, std::map<int, uint64_t>& m, bool& inf_side) {
            for (auto& [v, k] : t.coeff) {
                if (val[v]) {
                    NatInf s = scale(k, *val[v]);
                    if (s.is_inf()) inf_side = true;
                    else c += s.fin();
                } else {
                    m[v] += k;
                }
            }
        };
        fold(a.lhs, lc, l, inf_l);
        fold(a.rhs, rc, r, inf_r);
        if (inf_l || inf_r) return true; // interval logic handles these
        // cancel shared coefficients; over N_inf this is only sound for
        // variables that cannot take the value infinity
        if (mode == SolveMode::NAT) {
            for (auto it = l.begin(); it != l.end();) {
                auto jt = r.find(it->first);
                if (jt != r.end()) {
                    uint64_t m = std::min(it->second, jt->second);
                    it->second -= m;
                    jt->second -= m;
                    if (jt->second == 0) r.erase(jt);
                    if (it->second == 0) { it = l.erase(it); continue; }
                }
                ++it;
            }
            std::erase_if(r, [](auto& kv) { return kv.second == 0; });
        } else {
            for (auto& [v, c] : l) {
                (void)c;
                if (r.count(v)) return true;
            }
        }
        uint64_t c = std::min(lc, rc);
        lc -= c; rc -= c;
        // lc + sum l = rc + sum r over unassigned vars
        if (l.empty() && r.empty()) return lc == rc;
        auto one_side = [&](std::map<int, uint64_t>& side, uint64_t scst, uint64_t ocst) -> bool {
            // scst + sum side = ocst, side vars unassigned
            if (ocst < scst) return false;
            uint64_t rem = ocst - scst;
            if (side.size() == 1) {
                auto [v, k] = *side.begin();
                if (rem % k) return false;
                if (mode == SolveMode::NAT || !NatInf(rem / k).is_inf()) {
                    assign(int(v), NatInf(rem / k));
                    changed = true;
                }
                return true;
            }
            if (rem == 0) {
                for (auto& [v, k] : side) {
                    (void)k;
                    assign(int(v), NatInf(0));
                    changed = true;
                }
                return true;
            }
            return true;
        };
        if (r.empty()) return one_side(l, lc, rc);
        if (l.empty()) return one_side(r, rc, lc);
        // lc + p*a = rc + q*b with a, b constrained only by this atom: decide
        // solvability and pin the minimal solution
        if (l.size() == 1 && r.size() == 1) {
            auto [av, p] = *l.begin();
            auto [bv, q] = *r.begin();
            if (av != bv && atom_occurrences[size_t(av)] == 1 &&
                atom_occurrences[size_t(bv)] == 1) {
                for (uint64_t a = 0; a <= q + (rc > lc ? (rc - lc) / p + 1 : 0); a++) {
                    uint64_t lhs_total = lc + p * a;
                    if (lhs_total < rc) continue;
                    if ((lhs_total - rc) % q) continue;
                    assign(int(av), NatInf(a));
                    assign(int(bv), NatInf((lhs_total - rc) / q));
                    changed = true;
                    return true;
                }
                return false;
            }
        }
        return true;
    }

    bool propagate_unit(const PFormulaPtr& f, bool& changed) {
        // f is required true and currently unknown; extract forced assignments.
        switch (f->kind) {
            case PFormula::Kind::Atom:
                return force_from_atom(f->atom, changed);
            case PFormula::Kind::And: {
                for (auto& c : f->children) {
                    int s = eval3(c);
                    if (s == -1) return false;
                    if (s == 0 && !propagate_unit(c, changed)) return false;
                }
                return true;
            }
            case PFormula::Kind::Or: {
                PFormulaPtr open;
                int opens = 0;
                for (auto& c : f->children) {
                    int s = eval3(c);
                    if (s == 1) return true;
                    if (s == 0) { open = c; opens++; }
                }
                if (opens == 0) return false;
                if (opens == 1) return propagate_unit(open, changed);
                return true;
            }
            default: return true;
        }
    }

    void settle(size_t i) {
        settled[i] = 1;
        settled_order.push_back(i);
    }

    bool propagate() {
        bool changed = true;
        while (changed) {
            changed = false;
            if (settled.size() < conjuncts.size()) settled.resize(conjuncts.size(), 0);
            for (size_t i = 0; i < conjuncts.size(); i++) {
                if (settled[i]) continue;
                int s = eval3(conjuncts[i]);
                if (s == -1) return false;
                if (s == 1) { settle(i); continue; }
                if (!propagate_unit(conjuncts[i], changed)) return false;
            }
        }
        return true;
    }

    void set_ub(int v, uint64_t b) {
        ub_trail.push_back({v, ub[size_t(v)]});
        ub[size_t(v)] = b;
    }

    // Upper-bound tightening from conjunct-level Le/Eq atoms; changes are
    // trailed so case splits can tighten locally.
    void tighten_bounds() {
        bool changed = true;
        int rounds = 0;
        while (changed && rounds++ < 400) {
            changed = false;
            for (auto& c : conjuncts) {
                if (c->kind != PFormula::Kind::Atom) continue;
                const PAtom& a = c->atom;
                auto tighten_side = [&](const PTerm& side, const PTerm& other) {
                    Interval o = term_iv(other);
                    if (o.hi.is_inf()) return;
                    uint64_t H = o.hi.fin();
                    for (auto& [v, k] : side.coeff) {
                        if (val[v]) continue;
                        // lo of side without v
                        NatInf rest(side.cst);
                        for (auto& [w, kw] : side.coeff)
                            if (w != v && val[w]) rest += scale(kw, *val[w]);
                        if (rest.is_inf() || rest.fin() > H) continue;
                        uint64_t room = (H - rest.fin()) / k;
                        if (room < ub[v]) { set_ub(int(v), room); changed = true; }
                    }
                };
                if (a.kind == PAtom::Kind::Le) tighten_side(a.lhs, a.rhs);
                if (a.kind == PAtom::Kind::Eq) {
                    tighten_side(a.lhs, a.rhs);
                    tighten_side(a.rhs, a.lhs);
                }
            }
        }
    }

    int pick_var() {
        // first variable occurring in an undecided conjunct
        for (size_t i = 0; i < conjuncts.size(); i++) {
            if (settled[i]) continue;
            if (eval3(conjuncts[i]) != 0) continue;
            int best = -1;
            collect_min_var(conjuncts[i], best);
            if (best >= 0) return best;
        }
        return -1;
    }

    void collect_min_var(const PFormulaPtr& f, int& best) {
        switch (f->kind) {
            case PFormula::Kind::Atom: {
                auto scan = [&](const PTerm& t) {
                    for (auto& [v, k] : t.coeff) {
                        (void)k;
                        if (!val[v] && (best < 0 || v < best)) best = v;
                    }
                };
                scan(f->atom.lhs);
                scan(f->atom.rhs);
                if (f->atom.graph) {
                    for (auto& t : f->atom.graph->xs) scan(t);
                    for (auto& t : f->atom.graph->ys) scan(t);
                }
                break;
            }
            default:
                for (auto& c : f->children) collect_min_var(c, best);
        }
    }

    // first conjunct that is an undecided disjunction
    int pick_or() {
        for (size_t i = 0; i < conjuncts.size(); i++) {
            if (settled[i]) continue;
            if (conjuncts[i]->kind == PFormula::Kind::Or && eval3(conjuncts[i]) == 0)
                return int(i);
        }
        return -1;
    }

    bool dfs() {
        size_t mark = trail.size();
        size_t cmark = conjuncts.size();
        size_t smark = settled_order.size();
        size_t umark = ub_trail.size();
        auto restore_ubs = [&](size_t m) {
            while (ub_trail.size() > m) {
                ub[size_t(ub_trail.back().first)] = ub_trail.back().second;
                ub_trail.pop_back();
            }
        };
        auto restore = [&] {
            while (settled_order.size() > smark) {
                settled[settled_order.back()] = 0;
                settled_order.pop_back();
            }
            restore_ubs(umark);
            conjuncts.resize(cmark);
            if (settled.size() > cmark) settled.resize(cmark);
            unwind(mark);
        };
        if (!propagate()) { restore(); return false; }
        // split undecided disjunctions first (case analysis), then enumerate
        int oi = pick_or();
        if (oi >= 0) {
            PFormulaPtr disj = conjuncts[size_t(oi)];
            for (auto& child : disj->children) {
                if (eval3(child) == -1) continue;
                size_t m2 = trail.size();
                size_t s2 = settled_order.size();
                size_t u2 = ub_trail.size();
                flatten(child); // appends, And-spines split into conjuncts
                settled.resize(conjuncts.size(), 0);
                tighten_bounds();
                if (dfs()) return true;
                while (settled_order.size() > s2) {
                    settled[settled_order.back()] = 0;
                    settled_order.pop_back();
                }
                restore_ubs(u2);
                conjuncts.resize(cmark);
                settled.resize(cmark);
                unwind(m2);
            }
            restore();
            return false;
        }
        int v = pick_var();
        if (v < 0) {
            // every conjunct decided true; unassigned vars are irrelevant
            for (size_t i = 0; i < val.size(); i++)
                if (!val[i]) val[i] = NatInf(0);
            return true;
        }
        uint64_t cap = std::min(ub[v], opts.value_bound);
        for (uint64_t x = 0; x <= cap; x++) {
            size_t m2 = trail.size();
            assign(v, NatInf(x));
            if (dfs()) return true;
            unwind(m2);
        }
        if (mode == SolveMode::NAT_INF) {
            size_t m2 = trail.size();
            assign(v, NatInf::inf());
            if (dfs()) return true;
            unwind(m2);
        }
        if (cap == opts.value_bound && ub[v] > opts.value_bound) artificial_cap = true;
        restore();
        return false;
    }
};

} // namespace

SolveResult solve(const PresFormula& f, SolveMode mode, const SolveOptions& opts) {
    SolverImpl s(f, mode, opts);
    SolveResult res;
    try {
        s.tighten_bounds();
        bool sat = s.dfs();
        res.steps = s.steps;
        if (sat) {
            res.status = SolveStatus::SAT;
            res.assignment.values.resize(f.num_vars());
            for (size_t i = 0; i < f.num_vars(); i++)
                res.assignment.values[i] = s.val[i].value_or(NatInf(0));
            if (opts.audit && !eval_pformula(f, res.assignment))
                throw std::logic_error("solver: witness failed audit");
        } else {
            res.status = s.artificial_cap ? SolveStatus::ABORT : SolveStatus::UNSAT;
        }
    } catch (AbortSearch&) {
        res.status = SolveStatus::ABORT;
        res.steps = s.steps;
    }
    return res;
}

} // namespace fo2p
