#include "fo2p/oracle.hpp"

#include <functional>

namespace fo2p {

namespace {

// Enumerate structures by filling unary membership bit-vectors and binary
// relation matrices; calls visit for each, stops when visit returns false.
void enumerate_structures(const Signature& sig, size_t n, uint64_t budget,
                          const std::function<bool(const Structure&)>& visit) {
    size_t ubits = sig.unaries.size() * n;
    size_t bbits = sig.binaries.size() * n * n;
    if (ubits + bbits > 62) throw CapExceeded("oracle: structure space too large");
    uint64_t total = uint64_t(1) << (ubits + bbits);
    if (total > budget) throw CapExceeded("oracle: structure cap exceeded");
    for (uint64_t mask = 0; mask < total; mask++) {
        Structure A;
        A.domain_size = n;
        uint64_t m = mask;
        for (auto& u : sig.unaries) {
            A.unary[u];
            for (size_t e = 0; e < n; e++) {
                if (m & 1) A.set_unary(u, e);
                m >>= 1;
            }
        }
        for (auto& b : sig.binaries) {
            A.binary[b];
            for (size_t i = 0; i < n; i++)
                for (size_t j = 0; j < n; j++) {
                    if (m & 1) A.set_binary(b, i, j);
                    m >>= 1;
                }
        }
        if (!visit(A)) return;
    }
}

} // namespace

std::vector<Structure> brute_models(const FormulaPtr& phi, const Signature& sig, size_t n,
                                    const OracleCaps& caps) {
    std::vector<Structure> out;
    enumerate_structures(sig, n, caps.max_structures, [&](const Structure& A) {
        if (eval_formula(phi, A)) {
            out.push_back(A);
            if (out.size() >= caps.max_models) return false;
        }
        return true;
    });
    return out;
}

bool brute_has_model(const FormulaPtr& phi, const Signature& sig, size_t n,
                     const OracleCaps& caps) {
    bool found = false;
    enumerate_structures(sig, n, caps.max_structures, [&](const Structure& A) {
        if (eval_formula(phi, A)) {
            found = true;
            return false;
        }
        return true;
    });
    return found;
}

namespace {

bool entry_admits(const CountValue& e, uint64_t cnt, uint64_t p) {
    return e.admits(NatInf(cnt), p);
}

// shared degree bookkeeping for the two searches
struct DegreeCheck {
    const DegreeMatrix* m;
    uint64_t p;
    // degree feasibility: current count with `room` more possible edges
    bool possible(int row, int col, uint64_t cnt, uint64_t room) const {
        const CountValue& e = m->at(row, col);
        switch (e.tag) {
            case CountValue::Tag::Fixed: return cnt <= e.off && e.off <= cnt + room;
            case CountValue::Tag::Periodic: return cnt + room >= e.off;
            case CountValue::Tag::Inf: return false;
            case CountValue::Tag::Any: return true;
        }
        return false;
    }
};

} // namespace

bool brute_bireg(const DegreeMatrix& A, const DegreeMatrix& B,
                 const std::vector<uint64_t>& M, const std::vector<uint64_t>& N,
                 bool complete) {
    int t = A.rows;
    uint64_t p = std::max<uint64_t>(1, A.period);
    std::vector<int> lcol, rcol;
    for (int j = 0; j < A.cols; j++)
        for (uint64_t k = 0; k < M[size_t(j)]; k++) lcol.push_back(j);
    for (int j = 0; j < B.cols; j++)
        for (uint64_t k = 0; k < N[size_t(j)]; k++) rcol.push_back(j);
    size_t nl = lcol.size(), nr = rcol.size();
    std::vector<std::vector<uint64_t>> dl(nl, std::vector<uint64_t>(size_t(t), 0));
    std::vector<std::vector<uint64_t>> dr(nr, std::vector<uint64_t>(size_t(t), 0));
    DegreeCheck ca{&A, p}, cb{&B, p};

    // pairs in left-major order; vertex u's degrees finalize at pair (u, nr-1)
    std::function<bool(size_t)> go = [&](size_t idx) -> bool {
        if (idx == nl * nr) {
            for (size_t u = 0; u < nl; u++)
                for (int i = 0; i < t; i++)
                    if (!entry_admits(A.at(i, lcol[u]), dl[u][size_t(i)], p)) return false;
            for (size_t v = 0; v < nr; v++)
                for (int i = 0; i < t; i++)
                    if (!entry_admits(B.at(i, rcol[v]), dr[v][size_t(i)], p)) return false;
            return true;
        }
        size_t u = idx / nr, v = idx % nr;
        uint64_t left_room = nr - v - 1;
        auto try_next = [&]() -> bool {
            // prune on the left vertex (its remaining pairs are known exactly)
            for (int i = 0; i < t; i++)
                if (!ca.possible(i, lcol[u], dl[u][size_t(i)], left_room)) return false;
            if (v == nr - 1)
                for (int i = 0; i < t; i++)
                    if (!entry_admits(A.at(i, lcol[u]), dl[u][size_t(i)], p)) return false;
            return go(idx + 1);
        };
        if (!complete && try_next()) return true;
        for (int c = 0; c < t; c++) {
            dl[u][size_t(c)]++;
            dr[v][size_t(c)]++;
            bool ok = true;
            // right vertex upper-bound prune
            const CountValue& e = B.at(c, rcol[v]);
            if (e.tag == CountValue::Tag::Fixed && dr[v][size_t(c)] > e.off) ok = false;
            if (e.tag == CountValue::Tag::Inf) ok = false;
            if (ok && try_next()) return true;
            dl[u][size_t(c)]--;
            dr[v][size_t(c)]--;
        }
        return false;
    };
    return go(0);
}

bool brute_direg(const DegreeMatrix& A, const DegreeMatrix& B,
                 const std::vector<uint64_t>& M, bool complete) {
    int t = A.rows;
    uint64_t p = std::max<uint64_t>(1, A.period);
    std::vector<int> col;
    for (int j = 0; j < A.cols; j++)
        for (uint64_t k = 0; k < M[size_t(j)]; k++) col.push_back(j);
    size_t n = col.size();
    std::vector<std::vector<uint64_t>> din(n, std::vector<uint64_t>(size_t(t), 0));
    std::vector<std::vector<uint64_t>> dout(n, std::vector<uint64_t>(size_t(t), 0));

    // pairs (u,v), u<v, in u-major order; u's degrees finalize at (u, n-1)
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t u = 0; u < n; u++)
        for (size_t v = u + 1; v < n; v++) pairs.push_back({u, v});

    auto vertex_final = [&](size_t u) {
        for (int i = 0; i < t; i++) {
            if (!entry_admits(A.at(i, col[u]), din[u][size_t(i)], p)) return false;
            if (!entry_admits(B.at(i, col[u]), dout[u][size_t(i)], p)) return false;
        }
        return true;
    };
    auto room_ok = [&](size_t u, uint64_t room) {
        DegreeCheck ca{&A, p}, cb{&B, p};
        for (int i = 0; i < t; i++) {
            if (!ca.possible(i, col[u], din[u][size_t(i)], room)) return false;
            if (!cb.possible(i, col[u], dout[u][size_t(i)], room)) return false;
        }
        return true;
    };

    std::function<bool(size_t)> go = [&](size_t idx) -> bool {
        if (idx == pairs.size()) {
            for (size_t u = 0; u < n; u++)
                if (!vertex_final(u)) return false;
            return true;
        }
        auto [u, v] = pairs[idx];
        auto advance = [&]() -> bool {
            // remaining undecided pairs per endpoint under u-major order
            if (!room_ok(u, n - 1 - v)) return false;
            if (!room_ok(v, n - u - 2)) return false;
            if (v == n - 1 && !vertex_final(u)) return false;
            return go(idx + 1);
        };
        if (!complete && advance()) return true;
        for (int c = 0; c < 2 * t; c++) {
            size_t from = c < t ? u : v, to = c < t ? v : u;
            int color = c % t;
            dout[from][size_t(color)]++;
            din[to][size_t(color)]++;
            bool ok = true;
            const CountValue& eo = B.at(color, col[from]);
            const CountValue& ei = A.at(color, col[to]);
            if (eo.tag == CountValue::Tag::Fixed && dout[from][size_t(color)] > eo.off) ok = false;
            if (ei.tag == CountValue::Tag::Fixed && din[to][size_t(color)] > ei.off) ok = false;
            if (eo.tag == CountValue::Tag::Inf || ei.tag == CountValue::Tag::Inf) ok = false;
            if (ok && advance()) return true;
            dout[from][size_t(color)]--;
            din[to][size_t(color)]--;
        }
        return false;
    };
    return go(0);
}

namespace {

// substitution-based evaluation: bodies are instantiated with concrete
// element indices rather than carried environments
bool eval_subst(const FormulaPtr& f, const Structure& A, int ex, int ey) {
    using K = Formula::Kind;
    auto of = [&](Var v) { return v == Var::X ? ex : ey; };
    switch (f->kind) {
        case K::True: return true;
        case K::False: return false;
        case K::UnaryAtom: return A.holds_unary(f->pred, size_t(of(f->v1)));
        case K::BinaryAtom:
            return A.holds_binary(f->pred, size_t(of(f->v1)), size_t(of(f->v2)));
        case K::Eq: return of(f->v1) == of(f->v2);
        case K::Not: return !eval_subst(f->lhs, A, ex, ey);
        case K::And: return eval_subst(f->lhs, A, ex, ey) && eval_subst(f->rhs, A, ex, ey);
        case K::Or: return eval_subst(f->lhs, A, ex, ey) || eval_subst(f->rhs, A, ex, ey);
        case K::Implies: return !eval_subst(f->lhs, A, ex, ey) || eval_subst(f->rhs, A, ex, ey);
        case K::Exists: {
            uint64_t cnt = 0;
            for (size_t e = 0; e < A.domain_size; e++) {
                int nx = f->v1 == Var::X ? int(e) : ex;
                int ny = f->v1 == Var::Y ? int(e) : ey;
                if (eval_subst(f->lhs, A, nx, ny)) cnt++;
            }
            return f->set.member(NatInf(cnt));
        }
        case K::Forall: {
            for (size_t e = 0; e < A.domain_size; e++) {
                int nx = f->v1 == Var::X ? int(e) : ex;
                int ny = f->v1 == Var::Y ? int(e) : ey;
                if (!eval_subst(f->lhs, A, nx, ny)) return false;
            }
            return true;
        }
    }
    return false;
}

} // namespace

bool eval_formula_reference(const FormulaPtr& f, const Structure& A) {
    return eval_subst(f, A, -1, -1);
}

} // namespace fo2p
