#include <algorithm>
#include <functional>
#include <map>

#include "fo2p/regraph.hpp"

namespace fo2p {

namespace {

struct Expander {
    PresFormula& f;
    ExpandCaps caps;
    uint64_t atoms = 0;

    void spend(uint64_t n = 1) {
        atoms += n;
        if (atoms > caps.max_atoms) throw CapExceeded("expand: formula size cap exceeded");
    }

    struct Side {
        DegreeMatrix m;            // simple matrix
        std::vector<PTerm> args;
    };

    static bool positive_capable(const CountValue& e) { return !e.is_zero(); }

    PTerm sum_args(const std::vector<PTerm>& ts) {
        PTerm s;
        for (auto& t : ts) s.add(t);
        return s;
    }

    PTerm support_sum(const Side& s, int row) {
        PTerm t;
        for (int j = 0; j < s.m.cols; j++)
            if (s.m.at(row, j).chi()) t.add(s.args[size_t(j)]);
        return t;
    }

    // Eq. handshake for one row: offset sums agree modulo the periodic slack.
    PFormulaPtr row_eq(const Side& L, const Side& R, int row) {
        spend();
        PTerm lt, rt;
        bool lper = false, rper = false;
        for (int j = 0; j < L.m.cols; j++) {
            const CountValue& e = L.m.at(row, j);
            for (auto& [v, c] : L.args[size_t(j)].coeff) lt.add_var(v, c * e.offset());
            lt.add_const(L.args[size_t(j)].cst * e.offset());
            if (!e.is_fixed()) lper = true;
        }
        for (int j = 0; j < R.m.cols; j++) {
            const CountValue& e = R.m.at(row, j);
            for (auto& [v, c] : R.args[size_t(j)].coeff) rt.add_var(v, c * e.offset());
            rt.add_const(R.args[size_t(j)].cst * e.offset());
            if (!e.is_fixed()) rper = true;
        }
        std::vector<PFormulaPtr> parts;
        if (lper) {
            int z = f.fresh_var("ez");
            lt.add_var(z, L.m.period);
            parts.push_back(p_not_inf(PTerm::var(z)));
        }
        if (rper) {
            int z = f.fresh_var("ez");
            rt.add_var(z, R.m.period);
            parts.push_back(p_not_inf(PTerm::var(z)));
        }
        parts.push_back(p_eq(lt, rt));
        return p_and(std::move(parts));
    }

    uint64_t delta_max(const Side& L, const Side& R) {
        uint64_t d = std::max(L.m.norm(), R.m.norm());
        bool per = !L.m.is_simple() || !R.m.is_simple();
        (void)per;
        for (auto& e : L.m.e)
            if (!e.is_fixed()) d = std::max(d, L.m.period);
        for (auto& e : R.m.e)
            if (!e.is_fixed()) d = std::max(d, R.m.period);
        return d;
    }

    PFormulaPtr big_case(const Side& L, const Side& R) {
        uint64_t delta = delta_max(L, R);
        bool all_fixed = true;
        for (auto& e : L.m.e)
            if (!e.is_fixed()) all_fixed = false;
        for (auto& e : R.m.e)
            if (!e.is_fixed()) all_fixed = false;
        int t = L.m.rows;
        uint64_t d2 = delta * delta;
        uint64_t th = all_fixed || t == 1 ? 2 * d2 + 3 : 2 * d2 * d2 + 3;
        std::vector<PFormulaPtr> parts;
        for (int i = 0; i < t; i++) {
            PTerm ls = support_sum(L, i), rs = support_sum(R, i);
            PTerm both = ls;
            both.add(rs);
            parts.push_back(p_le(PTerm(th), both));
            if (!all_fixed) {
                parts.push_back(p_le(PTerm(d2 + 1), ls));
                parts.push_back(p_le(PTerm(d2 + 1), rs));
            }
            parts.push_back(row_eq(L, R, i));
        }
        spend(parts.size());
        return p_and(std::move(parts));
    }

    // right-side compatibility when color `row` disappears from the left
    PFormulaPtr zero_color(const Side& R, int row) {
        std::vector<PFormulaPtr> parts;
        for (int j = 0; j < R.m.cols; j++) {
            const CountValue& e = R.m.at(row, j);
            bool zero_ok = (e.tag == CountValue::Tag::Fixed && e.off == 0) ||
                           (e.tag == CountValue::Tag::Periodic && e.off == 0);
            if (!zero_ok) parts.push_back(p_eq(R.args[size_t(j)], PTerm(0)));
        }
        spend(parts.size() + 1);
        return p_and(std::move(parts));
    }

    Side drop_row(const Side& s, int row) {
        return {s.m.drop_row(row), s.args};
    }

    PFormulaPtr peel(const Side& L, const Side& R, int row, uint64_t r) {
        spend();
        if (r == 0) {
            std::vector<PFormulaPtr> parts;
            parts.push_back(p_eq(support_sum(L, row), PTerm(0)));
            parts.push_back(zero_color(R, row));
            parts.push_back(zero_color(L, row));
            parts.push_back(simple(drop_row(L, row), drop_row(R, row)));
            return p_and(std::move(parts));
        }
        // one support vertex is removed; fresh left sizes x' with x = x' + e_j
        Side L2 = L;
        for (int j = 0; j < L.m.cols; j++) L2.args[size_t(j)] = PTerm::var(f.fresh_var("px"));
        // split every right column into non-adjacent plus one group per color
        int t = L.m.rows;
        using Deg = std::vector<CountValue>;
        std::map<Deg, PTerm> grouped;
        std::vector<std::vector<int>> zvar(size_t(R.m.cols), std::vector<int>(size_t(t + 1), -1));
        std::vector<PFormulaPtr> split;
        for (int j2 = 0; j2 < R.m.cols; j2++) {
            PTerm parts_sum;
            for (int g = 0; g <= t; g++) {
                if (g > 0 && !positive_capable(R.m.at(g - 1, j2))) continue;
                int z = f.fresh_var("pz");
                zvar[size_t(j2)][size_t(g)] = z;
                parts_sum.add_var(z);
                Deg d = R.m.col(j2);
                if (g > 0) {
                    const CountValue& e = d[size_t(g - 1)];
                    d[size_t(g - 1)] =
                        e.is_inf() ? e
                        : e.is_fixed() ? CountValue::fixed(e.off - 1)
                        : CountValue::periodic(e.off >= 1 ? e.off - 1 : R.m.period - 1);
                }
                auto [it, fresh] = grouped.try_emplace(d, PTerm());
                it->second.add_var(z);
                (void)fresh;
            }
            split.push_back(p_eq(parts_sum, R.args[size_t(j2)]));
        }
        Side R2;
        R2.m = DegreeMatrix(t, int(grouped.size()), R.m.period);
        {
            int j2 = 0;
            for (auto& [d, term] : grouped) {
                for (int i = 0; i < t; i++) R2.m.at(i, j2) = d[size_t(i)];
                R2.args.push_back(term);
                j2++;
            }
        }
        // adjacency group sizes per color
        std::vector<PTerm> color_sum;
        color_sum.resize(size_t(t));
        for (int j2 = 0; j2 < R.m.cols; j2++)
            for (int g = 1; g <= t; g++)
                if (zvar[size_t(j2)][size_t(g)] >= 0)
                    color_sum[size_t(g - 1)].add_var(zvar[size_t(j2)][size_t(g)]);

        std::vector<PFormulaPtr> branches;
        for (int j = 0; j < L.m.cols; j++) {
            if (!L.m.at(row, j).chi()) continue;
            std::vector<PFormulaPtr> br;
            for (int j3 = 0; j3 < L.m.cols; j3++) {
                PTerm rhs = L2.args[size_t(j3)];
                if (j3 == j) rhs.add_const(1);
                br.push_back(p_eq(L.args[size_t(j3)], rhs));
            }
            // the removed vertex's degrees, one per color
            for (int i = 0; i < t; i++) {
                const CountValue& e = L.m.at(i, j);
                if (e.is_fixed()) {
                    br.push_back(p_eq(color_sum[size_t(i)], PTerm(e.off)));
                } else {
                    int s = f.fresh_var("ps");
                    PTerm rhs(e.off);
                    rhs.add_var(s, L.m.period);
                    br.push_back(p_eq(color_sum[size_t(i)], rhs));
                    br.push_back(p_not_inf(PTerm::var(s)));
                }
            }
            spend(br.size());
            branches.push_back(p_and(std::move(br)));
        }
        std::vector<PFormulaPtr> all;
        all.push_back(p_or(std::move(branches)));
        all.insert(all.end(), split.begin(), split.end());
        all.push_back(peel(L2, R2, row, r - 1));
        return p_and(std::move(all));
    }

    // Case combination for simple, infinity-free matrices.
    PFormulaPtr simple(const Side& L, const Side& R) {
        spend();
        if (L.m.rows == 0) return p_true();
        if (!L.m.is_simple() || !R.m.is_simple())
            throw CapExceeded("expand: non-simple matrices reached the simple combiner");
        uint64_t delta = delta_max(L, R);
        uint64_t d2 = delta * delta;
        int t = L.m.rows;
        bool all_fixed = true;
        for (auto& e : L.m.e)
            if (!e.is_fixed()) all_fixed = false;
        for (auto& e : R.m.e)
            if (!e.is_fixed()) all_fixed = false;
        uint64_t th = all_fixed || t == 1 ? 2 * d2 + 3 : 2 * d2 * d2 + 3;
        uint64_t bound = th - 1;

        std::vector<PFormulaPtr> cases;
        cases.push_back(big_case(L, R));
        for (int i = 0; i < t; i++) {
            for (int side = 0; side < 2; side++) {
                const Side& S = side == 0 ? L : R;
                const Side& O = side == 0 ? R : L;
                for (uint64_t r = 0; r <= bound; r++) {
                    std::vector<PFormulaPtr> c;
                    c.push_back(p_eq(support_sum(S, i), PTerm(r)));
                    c.push_back(peel(S, O, i, r));
                    cases.push_back(p_and(std::move(c)));
                }
            }
        }
        return p_or(std::move(cases));
    }

    // Behavior functions of a column towards n partitions (general case).
    using Behavior = std::vector<std::vector<CountValue>>; // [row][part]

    void behaviors_rec(const std::vector<CountValue>& colv, int n, uint64_t p, int row,
                       Behavior& cur, std::vector<Behavior>& out) {
        if (out.size() > caps.max_behaviors)
            throw CapExceeded("expand: behavior function cap exceeded");
        if (row == int(colv.size())) {
            out.push_back(cur);
            return;
        }
        const CountValue& e = colv[size_t(row)];
        std::vector<std::vector<CountValue>> splits;
        std::function<void(int, uint64_t, std::vector<CountValue>&)> go_fixed =
            [&](int part, uint64_t rem, std::vector<CountValue>& acc) {
                if (part == n - 1) {
                    acc.push_back(CountValue::fixed(rem));
                    splits.push_back(acc);
                    acc.pop_back();
                    return;
                }
                for (uint64_t v = 0; v <= rem; v++) {
                    acc.push_back(CountValue::fixed(v));
                    go_fixed(part + 1, rem - v, acc);
                    acc.pop_back();
                }
            };
        std::function<void(int, uint64_t, std::vector<CountValue>&)> go_per =
            [&](int part, uint64_t rem, std::vector<CountValue>& acc) {
                if (part == n - 1) {
                    acc.push_back(CountValue::periodic(rem));
                    splits.push_back(acc);
                    acc.pop_back();
                    return;
                }
                for (uint64_t v = 0; v <= rem; v++) {
                    acc.push_back(CountValue::periodic(v));
                    go_per(part + 1, rem - v, acc);
                    acc.pop_back();
                }
            };
        std::vector<CountValue> acc;
        if (e.is_fixed()) go_fixed(0, e.off, acc);
        else if (e.tag == CountValue::Tag::Periodic) go_per(0, e.off, acc);
        else {
            // inf: each part is a residue class or inf, at least one inf
            std::function<void(int, bool, std::vector<CountValue>&)> go_inf =
                [&](int part, bool any, std::vector<CountValue>& a2) {
                    if (part == n) {
                        if (any) splits.push_back(a2);
                        return;
                    }
                    a2.push_back(CountValue::inf());
                    go_inf(part + 1, true, a2);
                    a2.pop_back();
                    for (uint64_t v = 0; v < p; v++) {
                        a2.push_back(CountValue::periodic(v));
                        go_inf(part + 1, any, a2);
                        a2.pop_back();
                    }
                };
            go_inf(0, false, acc);
        }
        for (auto& sp : splits) {
            cur.push_back(sp);
            behaviors_rec(colv, n, p, row + 1, cur, out);
            cur.pop_back();
        }
    }

    std::vector<Behavior> behaviors(const std::vector<CountValue>& colv, int n, uint64_t p) {
        std::vector<Behavior> out;
        Behavior cur;
        behaviors_rec(colv, n, p, 0, cur, out);
        return out;
    }

    PFormulaPtr general(const GraphConstraint& gc) {
        const DegreeMatrix& A = gc.A;
        const DegreeMatrix& B = gc.B;
        for (auto& e : A.e)
            if (e.is_any()) throw CapExceeded("expand: unconstrained entries not expandable");
        for (auto& e : B.e)
            if (e.is_any()) throw CapExceeded("expand: unconstrained entries not expandable");
        bool digraph = gc.kind == GraphKind::Direg || gc.kind == GraphKind::DiregC;
        std::vector<PTerm> xs = gc.xs;
        std::vector<PTerm> ys = digraph ? gc.xs : gc.ys;

        std::vector<PFormulaPtr> out;

        // columns whose entries include inf cannot be inhabited in the
        // expanded (finite-semantics) formula
        auto strip_inf = [&](const DegreeMatrix& m, std::vector<PTerm>& args) {
            DegreeMatrix r(m.rows, 0, m.period);
            std::vector<PTerm> keep;
            for (int j = 0; j < m.cols; j++) {
                bool has_inf = false;
                for (int i = 0; i < m.rows; i++)
                    if (m.at(i, j).is_inf()) has_inf = true;
                if (has_inf) {
                    out.push_back(p_eq(args[size_t(j)], PTerm(0)));
                } else {
                    r.cols++;
                    for (int i = 0; i < m.rows; i++) r.e.push_back(m.at(i, j));
                    keep.push_back(args[size_t(j)]);
                }
            }
            // rebuild row-major layout
            DegreeMatrix rr(m.rows, r.cols, m.period);
            int j2 = 0;
            for (int j = 0; j < m.cols; j++) {
                bool has_inf = false;
                for (int i = 0; i < m.rows; i++)
                    if (m.at(i, j).is_inf()) has_inf = true;
                if (has_inf) continue;
                for (int i = 0; i < m.rows; i++) rr.at(i, j2) = m.at(i, j);
                j2++;
            }
            args = keep;
            return rr;
        };
        std::vector<PTerm> xa = xs, ya = ys;
        DegreeMatrix A2 = strip_inf(A, xa);
        DegreeMatrix B2 = strip_inf(B, ya);

        // completeness column conditions
        if (gc.kind == GraphKind::BiregC || gc.kind == GraphKind::DiregC) {
            PresFormula& ff = f;
            PTerm xt = sum_args(xs), yt = sum_args(ys);
            auto col_cond = [&](const DegreeMatrix& m, int j, const PTerm& size,
                                PTerm other, uint64_t extra) {
                bool per = false;
                uint64_t off = extra;
                for (int i = 0; i < m.rows; i++) {
                    off += m.at(i, j).offset();
                    if (!m.at(i, j).is_fixed()) per = true;
                }
                PFormulaPtr cond;
                if (per) {
                    int z = ff.fresh_var("cz");
                    PTerm rhs(off);
                    rhs.add_var(z, m.period);
                    cond = p_and({p_eq(other, rhs), p_not_inf(PTerm::var(z))});
                } else {
                    cond = p_eq(other, PTerm(off));
                }
                return p_or({p_eq(size, PTerm(0)), cond});
            };
            if (gc.kind == GraphKind::BiregC) {
                for (int j = 0; j < A2.cols; j++) out.push_back(col_cond(A2, j, xa[size_t(j)], yt, 0));
                for (int j = 0; j < B2.cols; j++) out.push_back(col_cond(B2, j, ya[size_t(j)], xt, 0));
            } else {
                DegreeMatrix stacked(A2.rows * 2, A2.cols, A2.period);
                for (int i = 0; i < A2.rows; i++)
                    for (int j = 0; j < A2.cols; j++) {
                        stacked.at(i, j) = A2.at(i, j);
                        stacked.at(i + A2.rows, j) = B2.at(i, j);
                    }
                for (int j = 0; j < A2.cols; j++)
                    out.push_back(col_cond(stacked, j, xa[size_t(j)], xt, 1));
            }
        }

        if (A2.is_simple() && B2.is_simple()) {
            out.push_back(simple({A2, xa}, {B2, ya}));
            return p_and(std::move(out));
        }

        // behavior-function decomposition towards the opposite partition count
        int m = A2.cols, n = B2.cols;
        std::vector<std::vector<PTerm>> Xi, Yj;
        Xi.resize(size_t(m));
        Yj.resize(size_t(n));
        std::vector<std::vector<Behavior>> bx, by;
        bx.resize(size_t(m));
        by.resize(size_t(n));
        for (int i = 0; i < m; i++) {
            bx[size_t(i)] = behaviors(A2.col(i), n, A2.period);
            PTerm s;
            for (size_t g = 0; g < bx[size_t(i)].size(); g++) {
                int v = f.fresh_var("bx");
                Xi[size_t(i)].push_back(PTerm::var(v));
                s.add_var(v);
            }
            out.push_back(p_eq(s, xa[size_t(i)]));
        }
        for (int j = 0; j < n; j++) {
            by[size_t(j)] = behaviors(B2.col(j), m, B2.period);
            PTerm s;
            for (size_t g = 0; g < by[size_t(j)].size(); g++) {
                int v = f.fresh_var("by");
                Yj[size_t(j)].push_back(PTerm::var(v));
                s.add_var(v);
            }
            out.push_back(p_eq(s, ya[size_t(j)]));
        }
        for (int i = 0; i < m; i++)
            for (int j = 0; j < n; j++) {
                int t = A2.rows;
                DegreeMatrix MA(t, int(bx[size_t(i)].size()), A2.period);
                for (size_t g = 0; g < bx[size_t(i)].size(); g++)
                    for (int l = 0; l < t; l++) MA.at(l, int(g)) = bx[size_t(i)][g][size_t(l)][size_t(j)];
                DegreeMatrix MB(t, int(by[size_t(j)].size()), B2.period);
                for (size_t g = 0; g < by[size_t(j)].size(); g++)
                    for (int l = 0; l < t; l++) MB.at(l, int(g)) = by[size_t(j)][g][size_t(l)][size_t(i)];
                out.push_back(simple({MA, Xi[size_t(i)]}, {MB, Yj[size_t(j)]}));
            }
        return p_and(std::move(out));
    }
};

} // namespace

PFormulaPtr expand_graph_constraint(PresFormula& f, const GraphConstraint& gc,
                                    const ExpandCaps& caps) {
    Expander ex{f, caps, 0};
    return ex.general(gc);
}

} // namespace fo2p
