#include "fo2p/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace fo2p {

NatInf Profile::total() const {
    NatInf s(0);
    for (auto& row : counts)
        for (auto& v : row) s += v;
    return s;
}

std::string Profile::to_json(const TypeTables& tb) const {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (size_t pi = 0; pi < counts.size(); pi++) {
        for (size_t c = 0; c < counts[pi].size(); c++) {
            if (counts[pi][c] == NatInf(0)) continue; // zero cells omitted
            nlohmann::ordered_json cell;
            cell["pi"] = pi;
            cell["g"] = tb.goods_of_pi[pi][c];
            cell["count"] = counts[pi][c].is_inf() ? "inf" : std::to_string(counts[pi][c].fin());
            j.push_back(cell);
        }
    }
    return j.dump();
}

Preb compile_preb(const NormalForm& nf, const TypeTables& tb) {
    Preb preb;
    PresFormula& f = preb.formula;
    int npi = tb.n_pi();
    preb.var_of.assign(size_t(npi), {});
    for (int pi = 0; pi < npi; pi++) {
        for (size_t c = 0; c < tb.goods_of_pi[size_t(pi)].size(); c++) {
            int v = f.add_var("X_" + std::to_string(pi) + "_" + std::to_string(c), true);
            preb.var_of[size_t(pi)].push_back(v);
            preb.total.add_var(v);
        }
    }
    auto terms_of = [&](int pi) {
        std::vector<PTerm> ts;
        for (int v : preb.var_of[size_t(pi)]) ts.push_back(PTerm::var(v));
        return ts;
    };

    // const_2: one complete regular digraph per 1-type, one complete
    // biregular graph per pair of 1-types. (const_1 holds by construction:
    // incompatible pairs have no variable.)
    for (int pi = 0; pi < npi; pi++) {
        if (tb.goods_of_pi[size_t(pi)].empty()) continue;
        f.conjoin(build_bireg(f, GraphKind::DiregC, tb.Mbar(pi), tb.Mpi(pi), terms_of(pi), {}));
    }
    for (int pi = 0; pi < npi; pi++)
        for (int pj = pi + 1; pj < npi; pj++) {
            if (tb.goods_of_pi[size_t(pi)].empty() || tb.goods_of_pi[size_t(pj)].empty())
                continue;
            f.conjoin(build_bireg(f, GraphKind::BiregC, tb.Lpi(pi, pj), tb.Lbar(pj, pi),
                                  terms_of(pi), terms_of(pj)));
        }

    // global per-conjunct handshakes: the count of ordered pairs realizing
    // beta_i from the x side equals the count from the y side
    uint64_t p = tb.period;
    for (size_t i = 0; i < tb.conjuncts.size(); i++) {
        std::vector<CountValue> fwd, rev;
        std::vector<PTerm> args;
        bool all_defined = true;
        for (int pi = 0; pi < npi && all_defined; pi++) {
            for (size_t c = 0; c < tb.goods_of_pi[size_t(pi)].size(); c++) {
                const GoodFunction& g = tb.goods[size_t(tb.goods_of_pi[size_t(pi)][c])];
                CountValue sf = CountValue::fixed(0), sr = CountValue::fixed(0);
                for (int e : tb.beta_types[i]) {
                    for (int piy = 0; piy < npi; piy++) {
                        const CountValue& vf = g.vals[size_t(e) * size_t(npi) + size_t(piy)];
                        const CountValue& vr =
                            g.vals[size_t(tb.rev(e)) * size_t(npi) + size_t(piy)];
                        if (vf.is_any() || vr.is_any()) { all_defined = false; break; }
                        sf = sf + vf;
                        sr = sr + vr;
                    }
                    if (!all_defined) break;
                }
                if (!all_defined) break;
                fwd.push_back(sf);
                rev.push_back(sr);
                args.push_back(PTerm::var(preb.var_of[size_t(pi)][c]));
            }
        }
        if (all_defined && !args.empty())
            f.conjoin(entries_handshake(f, fwd, args, rev, args, p));
    }
    return preb;
}

Pipeline Pipeline::make(const FormulaPtr& phi, const Signature& sig, const PipelineCaps& caps) {
    Pipeline pl;
    pl.sig = sig;
    pl.phi = phi;
    pl.caps = caps;
    pl.nf = to_scott_nf(phi, sig);
    pl.tables = enumerate_types(pl.nf, caps.types);
    enumerate_good_functions(pl.tables, caps.types);
    pl.preb = compile_preb(pl.nf, pl.tables);
    return pl;
}

Profile Pipeline::profile_from(const PAssignment& a) const {
    Profile pr;
    pr.counts.resize(preb.var_of.size());
    for (size_t pi = 0; pi < preb.var_of.size(); pi++)
        for (int v : preb.var_of[pi]) pr.counts[pi].push_back(a.values[size_t(v)]);
    return pr;
}

namespace {

bool empty_structure_satisfies(const FormulaPtr& phi) {
    Structure empty;
    return eval_formula(phi, empty);
}

} // namespace

DecideResult Pipeline::decide() const {
    DecideResult out;
    bool empty_ok = empty_structure_satisfies(phi);

    PresFormula f = preb.formula;
    f.conjoin(p_le(PTerm(1), preb.total)); // size-0 handled by direct evaluation

    SolveResult nat = solve(f, SolveMode::NAT, caps.solve);
    if (nat.status == SolveStatus::ABORT) throw CapExceeded("decide: solver aborted (NAT)");
    out.finsat = empty_ok || nat.status == SolveStatus::SAT;

    if (nat.status == SolveStatus::SAT) {
        out.sat = true;
        out.profile = profile_from(nat.assignment);
    } else {
        SolveResult inf = solve(f, SolveMode::NAT_INF, caps.solve);
        if (inf.status == SolveStatus::ABORT)
            throw CapExceeded("decide: solver aborted (NAT_INF)");
        out.sat = empty_ok || inf.status == SolveStatus::SAT;
        if (inf.status == SolveStatus::SAT) out.profile = profile_from(inf.assignment);
    }
    return out;
}

bool Pipeline::size_satisfiable(uint64_t n) const {
    if (n == 0) return empty_structure_satisfies(phi);
    PresFormula f = preb.formula;
    f.conjoin(p_eq(preb.total, PTerm(n)));
    SolveResult res = solve(f, SolveMode::NAT, caps.solve);
    if (res.status == SolveStatus::ABORT) throw CapExceeded("spectrum: solver aborted");
    return res.status == SolveStatus::SAT;
}

std::vector<uint64_t> Pipeline::spectrum_enumerate(uint64_t up_to) const {
    std::vector<uint64_t> out;
    for (uint64_t n = 0; n <= up_to; n++)
        if (size_satisfiable(n)) out.push_back(n);
    return out;
}

PresFormula Pipeline::spectrum_formula() const {
    PresFormula f = preb.formula;
    int n = f.add_var("n", true);
    f.conjoin(p_eq(preb.total, PTerm::var(n)));
    return f;
}

Structure Pipeline::build_model(const Profile& profile) const {
    const TypeTables& tb = tables;
    int npi = tb.n_pi();

    // element layout: consecutive blocks per (pi, column)
    struct Elem { int pi, col; };
    std::vector<Elem> elems;
    std::vector<std::vector<uint64_t>> sizes;
    sizes.resize(size_t(npi));
    for (int pi = 0; pi < npi; pi++) {
        for (size_t c = 0; c < profile.counts[size_t(pi)].size(); c++) {
            NatInf v = profile.counts[size_t(pi)][c];
            if (v.is_inf()) throw std::runtime_error("build_model: profile not finite");
            sizes[size_t(pi)].push_back(v.fin());
            for (uint64_t k = 0; k < v.fin(); k++) elems.push_back({pi, int(c)});
        }
    }

    Structure A;
    A.domain_size = elems.size();
    for (auto& u : tb.sig.unaries) A.unary[u];
    for (auto& b : tb.sig.binaries) A.binary[b];

    // unary content and diagonals from the 1-type
    for (size_t e = 0; e < elems.size(); e++) {
        const OneType& pi = tb.pis[size_t(elems[e].pi)];
        for (size_t u = 0; u < tb.sig.unaries.size(); u++)
            if (pi.bits[u]) A.set_unary(tb.sig.unaries[u], e);
        for (size_t d = 0; d < tb.diag_preds.size(); d++)
            if (pi.bits[tb.sig.unaries.size() + d]) A.set_binary(tb.diag_preds[d], e, e);
        auto& w = tb.diag_witness[size_t(elems[e].pi)];
        for (size_t d = 0; d < tb.free_diag_preds.size(); d++)
            if (w[d]) A.set_binary(tb.free_diag_preds[d], e, e);
    }

    auto set_pair_type = [&](size_t a, size_t b, int type_index) {
        const TwoType& ty = tb.types[size_t(type_index)];
        for (size_t bi = 0; bi < tb.sig.binaries.size(); bi++) {
            auto [fbit, rbit] = ty.bits[bi];
            if (fbit) A.set_binary(tb.sig.binaries[bi], a, b);
            if (rbit) A.set_binary(tb.sig.binaries[bi], b, a);
        }
    };

    // offset of the first element of (pi, col)
    std::map<std::pair<int, int>, size_t> block_start;
    {
        size_t off = 0;
        for (int pi = 0; pi < npi; pi++)
            for (size_t c = 0; c < sizes[size_t(pi)].size(); c++) {
                block_start[{pi, int(c)}] = off;
                off += sizes[size_t(pi)][c];
            }
    }
    auto members = [&](int pi) {
        std::vector<size_t> out;
        for (size_t e = 0; e < elems.size(); e++)
            if (elems[e].pi == pi) out.push_back(e);
        return out;
    };

    // within each 1-type: a complete M_pi-bar | M_pi regular digraph
    for (int pi = 0; pi < npi; pi++) {
        auto mem = members(pi);
        if (mem.empty()) continue;
        ColoredDigraph g = realize_digraph(tb.Mbar(pi), tb.Mpi(pi), sizes[size_t(pi)], true);
        // realize_digraph lays out vertices blockwise in column order, as we did
        for (int c = 0; c < g.colors; c++)
            for (auto& [u, v] : g.edges[size_t(c)])
                set_pair_type(mem[size_t(u)], mem[size_t(v)], c);
    }

    // across 1-types: complete L-biregular graphs
    for (int pi = 0; pi < npi; pi++)
        for (int pj = pi + 1; pj < npi; pj++) {
            auto mi = members(pi), mj = members(pj);
            if (mi.empty() || mj.empty()) continue;
            ColoredBipartiteGraph g = realize_bipartite(
                tb.Lpi(pi, pj), tb.Lbar(pj, pi), sizes[size_t(pi)], sizes[size_t(pj)], true);
            for (int c = 0; c < g.colors; c++)
                for (auto& [u, v] : g.edges[size_t(c)]) {
                    // colors 0..t-1 are the canonical types from the left
                    // perspective; t..2t-1 their reversals
                    set_pair_type(mi[size_t(u)], mj[size_t(v)], c);
                }
        }

    A.validate(tb.sig);
    if (!eval_formula(nf.sentence(), A))
        throw std::logic_error("build_model: normal form sentence fails on the built structure");
    // census audit: every element must behave according to its assigned column
    for (size_t e = 0; e < elems.size(); e++) {
        const GoodFunction& g =
            tb.goods[size_t(tb.goods_of_pi[size_t(elems[e].pi)][size_t(elems[e].col)])];
        for (int ty = 0; ty < tb.n_types(); ty++)
            for (int piy = 0; piy < npi; piy++) {
                uint64_t cnt = 0;
                for (size_t o = 0; o < elems.size(); o++) {
                    if (o == e || elems[o].pi != piy) continue;
                    // 2-type of (e, o)
                    bool match = true;
                    for (size_t bi = 0; bi < tb.sig.binaries.size() && match; bi++) {
                        auto [fbit, rbit] = tb.types[size_t(ty)].bits[bi];
                        if (A.holds_binary(tb.sig.binaries[bi], e, o) != fbit) match = false;
                        if (A.holds_binary(tb.sig.binaries[bi], o, e) != rbit) match = false;
                    }
                    if (match) cnt++;
                }
                if (!g.vals[size_t(ty) * size_t(npi) + size_t(piy)].admits(NatInf(cnt), tb.period))
                    throw std::logic_error("build_model: census audit failed");
            }
    }
    Structure reduct = A.reduct(sig);
    if (!eval_formula(phi, reduct))
        throw std::logic_error("build_model: original sentence fails on the reduct");
    return reduct;
}

} // namespace fo2p
