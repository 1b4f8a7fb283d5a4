#include <algorithm>
#include <stdexcept>

#include "fo2p/regraph.hpp"

namespace fo2p {

namespace {

struct RealizeBudget {
    uint64_t left = 200'000'000;
    void spend() {
        if (!left--) throw CapExceeded("realize: step budget exceeded");
    }
};

bool admits_with_room(const CountValue& e, uint64_t cnt, uint64_t room, uint64_t p) {
    (void)p;
    // can cnt grow into the entry with at most `room` more edges?
    switch (e.tag) {
        case CountValue::Tag::Fixed: return cnt <= e.off && e.off <= cnt + room;
        case CountValue::Tag::Periodic: {
            if (cnt + room < e.off) return false;
            return true;
        }
        case CountValue::Tag::Inf: return false; // finite realization only
        case CountValue::Tag::Any: return true;
    }
    return false;
}

bool admits_final(const CountValue& e, uint64_t cnt, uint64_t p) {
    return e.admits(NatInf(cnt), p);
}

} // namespace

bool audit_bipartite(const ColoredBipartiteGraph& g, const DegreeMatrix& A,
                     const DegreeMatrix& B, const std::vector<uint64_t>& M,
                     const std::vector<uint64_t>& N, bool complete) {
    size_t nl = g.left_part.size(), nr = g.right_part.size();
    std::vector<uint64_t> expectL(size_t(A.cols), 0), expectR(size_t(B.cols), 0);
    for (int c : g.left_part) expectL[size_t(c)]++;
    for (int c : g.right_part) expectR[size_t(c)]++;
    for (int j = 0; j < A.cols; j++)
        if (expectL[size_t(j)] != M[size_t(j)]) return false;
    for (int j = 0; j < B.cols; j++)
        if (expectR[size_t(j)] != N[size_t(j)]) return false;
    std::vector<std::vector<uint64_t>> dl(nl, std::vector<uint64_t>(size_t(g.colors), 0));
    std::vector<std::vector<uint64_t>> dr(nr, std::vector<uint64_t>(size_t(g.colors), 0));
    std::set<std::pair<int, int>> used;
    for (int c = 0; c < g.colors; c++)
        for (auto& [u, v] : g.edges[size_t(c)]) {
            if (!used.insert({u, v}).second) return false; // colors overlap
            dl[size_t(u)][size_t(c)]++;
            dr[size_t(v)][size_t(c)]++;
        }
    if (complete && used.size() != nl * nr) return false;
    for (size_t u = 0; u < nl; u++)
        for (int i = 0; i < g.colors; i++)
            if (!admits_final(A.at(i, g.left_part[u]), dl[u][size_t(i)], A.period)) return false;
    for (size_t v = 0; v < nr; v++)
        for (int i = 0; i < g.colors; i++)
            if (!admits_final(B.at(i, g.right_part[v]), dr[v][size_t(i)], B.period)) return false;
    return true;
}

bool audit_digraph(const ColoredDigraph& g, const DegreeMatrix& A,
                   const DegreeMatrix& B, const std::vector<uint64_t>& M, bool complete) {
    size_t n = g.part.size();
    std::vector<uint64_t> expect(size_t(A.cols), 0);
    for (int c : g.part) expect[size_t(c)]++;
    for (int j = 0; j < A.cols; j++)
        if (expect[size_t(j)] != M[size_t(j)]) return false;
    std::vector<std::vector<uint64_t>> din(n, std::vector<uint64_t>(size_t(g.colors), 0));
    std::vector<std::vector<uint64_t>> dout(n, std::vector<uint64_t>(size_t(g.colors), 0));
    std::set<std::pair<size_t, size_t>> covered;
    for (int c = 0; c < g.colors; c++)
        for (auto& [u, v] : g.edges[size_t(c)]) {
            if (u == v) return false; // self loop
            size_t a = std::min<size_t>(u, v), b = std::max<size_t>(u, v);
            if (!covered.insert({a, b}).second) return false; // anti-parallel or double edge
            din[size_t(v)][size_t(c)]++;
            dout[size_t(u)][size_t(c)]++;
        }
    if (complete && covered.size() != n * (n - 1) / 2) return false;
    for (size_t v = 0; v < n; v++)
        for (int i = 0; i < g.colors; i++) {
            if (!admits_final(A.at(i, g.part[v]), din[v][size_t(i)], A.period)) return false;
            if (!admits_final(B.at(i, g.part[v]), dout[v][size_t(i)], B.period)) return false;
        }
    return true;
}

ColoredBipartiteGraph realize_bipartite(const DegreeMatrix& A, const DegreeMatrix& B,
                                        const std::vector<uint64_t>& M,
                                        const std::vector<uint64_t>& N, bool complete) {
    int t = A.rows;
    uint64_t p = std::max<uint64_t>(1, A.period);
    ColoredBipartiteGraph g;
    g.colors = t;
    g.edges.resize(size_t(t));
    for (int j = 0; j < A.cols; j++)
        for (uint64_t k = 0; k < M[size_t(j)]; k++) g.left_part.push_back(j);
    for (int j = 0; j < B.cols; j++)
        for (uint64_t k = 0; k < N[size_t(j)]; k++) g.right_part.push_back(j);
    size_t nl = g.left_part.size(), nr = g.right_part.size();

    // pair states: -2 undecided, -1 none, 0..t-1 color
    std::vector<int> state(nl * nr, -2);
    std::vector<std::vector<uint64_t>> dl(nl, std::vector<uint64_t>(size_t(t), 0));
    std::vector<std::vector<uint64_t>> dr(nr, std::vector<uint64_t>(size_t(t), 0));
    std::vector<uint64_t> reml(nl, nr), remr(nr, nl); // undecided pairs per vertex
    RealizeBudget budget;

    auto vertex_ok = [&](size_t u, bool left) {
        for (int i = 0; i < t; i++) {
            const CountValue& e = left ? A.at(i, g.left_part[u]) : B.at(i, g.right_part[u]);
            uint64_t cnt = left ? dl[u][size_t(i)] : dr[u][size_t(i)];
            uint64_t room = left ? reml[u] : remr[u];
            if (!admits_with_room(e, cnt, room, p)) return false;
        }
        return true;
    };

    std::function<bool(size_t)> go = [&](size_t idx) -> bool {
        budget.spend();
        if (idx == nl * nr) {
            for (size_t u = 0; u < nl; u++)
                for (int i = 0; i < t; i++)
                    if (!admits_final(A.at(i, g.left_part[u]), dl[u][size_t(i)], p)) return false;
            for (size_t v = 0; v < nr; v++)
                for (int i = 0; i < t; i++)
                    if (!admits_final(B.at(i, g.right_part[v]), dr[v][size_t(i)], p)) return false;
            return true;
        }
        size_t u = idx / nr, v = idx % nr;
        reml[u]--;
        remr[v]--;
        // option: no edge
        if (!complete) {
            state[idx] = -1;
            if (vertex_ok(u, true) && vertex_ok(v, false) && go(idx + 1)) return true;
        }
        for (int c = 0; c < t; c++) {
            state[idx] = c;
            dl[u][size_t(c)]++;
            dr[v][size_t(c)]++;
            if (vertex_ok(u, true) && vertex_ok(v, false) && go(idx + 1)) return true;
            dl[u][size_t(c)]--;
            dr[v][size_t(c)]--;
        }
        state[idx] = -2;
        reml[u]++;
        remr[v]++;
        return false;
    };

    if (!go(0))
        throw std::logic_error("realize_bipartite: no realization found for a feasible instance");
    for (size_t u = 0; u < nl; u++)
        for (size_t v = 0; v < nr; v++)
            if (state[u * nr + v] >= 0)
                g.edges[size_t(state[u * nr + v])].push_back({int(u), int(v)});
    if (!audit_bipartite(g, A, B, M, N, complete))
        throw std::logic_error("realize_bipartite: audit failed");
    return g;
}

ColoredDigraph realize_digraph(const DegreeMatrix& A, const DegreeMatrix& B,
                               const std::vector<uint64_t>& M, bool complete) {
    int t = A.rows;
    uint64_t p = std::max<uint64_t>(1, A.period);
    ColoredDigraph g;
    g.colors = t;
    g.edges.resize(size_t(t));
    for (int j = 0; j < A.cols; j++)
        for (uint64_t k = 0; k < M[size_t(j)]; k++) g.part.push_back(j);
    size_t n = g.part.size();

    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t u = 0; u < n; u++)
        for (size_t v = u + 1; v < n; v++) pairs.push_back({u, v});

    // option encoding per pair: -1 none, c in [0,t) -> u->v color c, t+c -> v->u color c
    std::vector<int> state(pairs.size(), -2);
    std::vector<std::vector<uint64_t>> din(n, std::vector<uint64_t>(size_t(t), 0));
    std::vector<std::vector<uint64_t>> dout(n, std::vector<uint64_t>(size_t(t), 0));
    std::vector<uint64_t> rem(n, n - 1);
    RealizeBudget budget;

    auto vertex_ok = [&](size_t u) {
        for (int i = 0; i < t; i++) {
            if (!admits_with_room(A.at(i, g.part[u]), din[u][size_t(i)], rem[u], p)) return false;
            if (!admits_with_room(B.at(i, g.part[u]), dout[u][size_t(i)], rem[u], p)) return false;
        }
        return true;
    };

    std::function<bool(size_t)> go = [&](size_t idx) -> bool {
        budget.spend();
        if (idx == pairs.size()) {
            for (size_t u = 0; u < n; u++)
                for (int i = 0; i < t; i++) {
                    if (!admits_final(A.at(i, g.part[u]), din[u][size_t(i)], p)) return false;
                    if (!admits_final(B.at(i, g.part[u]), dout[u][size_t(i)], p)) return false;
                }
            return true;
        }
        auto [u, v] = pairs[idx];
        rem[u]--;
        rem[v]--;
        if (!complete) {
            state[idx] = -1;
            if (vertex_ok(u) && vertex_ok(v) && go(idx + 1)) return true;
        }
        for (int c = 0; c < 2 * t; c++) {
            size_t from = c < t ? u : v, to = c < t ? v : u;
            int color = c % t;
            state[idx] = c;
            dout[from][size_t(color)]++;
            din[to][size_t(color)]++;
            if (vertex_ok(u) && vertex_ok(v) && go(idx + 1)) return true;
            dout[from][size_t(color)]--;
            din[to][size_t(color)]--;
        }
        state[idx] = -2;
        rem[u]++;
        rem[v]++;
        return false;
    };

    if (!go(0))
        throw std::logic_error("realize_digraph: no realization found for a feasible instance");
    for (size_t idx = 0; idx < pairs.size(); idx++) {
        int s = state[idx];
        if (s < 0) continue;
        auto [u, v] = pairs[idx];
        if (s < t) g.edges[size_t(s)].push_back({int(u), int(v)});
        else g.edges[size_t(s - t)].push_back({int(v), int(u)});
    }
    if (!audit_digraph(g, A, B, M, complete))
        throw std::logic_error("realize_digraph: audit failed");
    return g;
}

} // namespace fo2p
