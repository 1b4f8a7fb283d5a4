#include "fo2p/typesys.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace fo2p {

namespace {

// Collect binary predicates appearing as r(v,v) and as r(x,y)/r(y,x).
void scan_binaries(const FormulaPtr& f, std::set<std::string>& diag, std::set<std::string>& offdiag) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::BinaryAtom:
            if (f->v1 == f->v2) diag.insert(f->pred);
            else offdiag.insert(f->pred);
            break;
        case K::Not: scan_binaries(f->lhs, diag, offdiag); break;
        case K::And: case K::Or: case K::Implies:
            scan_binaries(f->lhs, diag, offdiag);
            scan_binaries(f->rhs, diag, offdiag);
            break;
        default: break;
    }
}

// Evaluate a quantifier-free formula under a type interpretation.
struct TypeEnv {
    const TypeTables& tb;
    int pi_x = -1, pi_y = -1;
    const TwoType* type = nullptr;      // null on the diagonal
    const std::vector<bool>* free_diag = nullptr;

    bool diagonal() const { return type == nullptr; }

    bool unary_bit(int pi, const std::string& pred) const {
        int ui = tb.sig.unary_index(pred);
        if (ui >= 0) return tb.pis[size_t(pi)].bits[size_t(ui)];
        throw std::runtime_error("typesys: unknown unary " + pred);
    }
    bool diag_bit(int pi, const std::string& pred) const {
        auto it = std::find(tb.diag_preds.begin(), tb.diag_preds.end(), pred);
        if (it != tb.diag_preds.end()) {
            size_t idx = tb.sig.unaries.size() + size_t(it - tb.diag_preds.begin());
            return tb.pis[size_t(pi)].bits[idx];
        }
        auto jt = std::find(tb.free_diag_preds.begin(), tb.free_diag_preds.end(), pred);
        if (jt != tb.free_diag_preds.end() && free_diag)
            return (*free_diag)[size_t(jt - tb.free_diag_preds.begin())];
        return false;
    }
    bool binary_bit(const std::string& pred, Var a, Var b) const {
        if (diagonal() || a == b) {
            int pi = (a == Var::X) ? pi_x : pi_y;
            if (diagonal()) pi = pi_x;
            return diag_bit(pi, pred);
        }
        int bi = tb.sig.binary_index(pred);
        if (bi < 0) throw std::runtime_error("typesys: unknown binary " + pred);
        auto& bits = type->bits[size_t(bi)];
        return a == Var::X ? bits.first : bits.second;
    }

    bool eval(const FormulaPtr& f) const {
        using K = Formula::Kind;
        switch (f->kind) {
            case K::True: return true;
            case K::False: return false;
            case K::UnaryAtom: {
                int pi = diagonal() ? pi_x : (f->v1 == Var::X ? pi_x : pi_y);
                return unary_bit(pi, f->pred);
            }
            case K::BinaryAtom: return binary_bit(f->pred, f->v1, f->v2);
            case K::Eq: return diagonal() || f->v1 == f->v2;
            case K::Not: return !eval(f->lhs);
            case K::And: return eval(f->lhs) && eval(f->rhs);
            case K::Or: return eval(f->lhs) || eval(f->rhs);
            case K::Implies: return !eval(f->lhs) || eval(f->rhs);
            default: throw std::runtime_error("typesys: quantifier in quantifier-free context");
        }
    }
};

} // namespace

bool TypeTables::alpha_holds(int pi_x, int type_index, int pi_y) const {
    TypeEnv env{*this, pi_x, pi_y, &types[size_t(type_index)], nullptr};
    return env.eval(alpha);
}

bool TypeTables::alpha_holds_diag(int pi, const std::vector<bool>& free_bits) const {
    TypeEnv env{*this, pi, pi, nullptr, &free_bits};
    return env.eval(alpha);
}

// A pair (a: pi_x, b: pi_y) may carry 2-type E only if alpha holds both ways.
bool TypeTables::cell_consistent(int pi_x, int type_index, int pi_y) const {
    return alpha_holds(pi_x, type_index, pi_y) &&
           alpha_holds(pi_y, rev(type_index), pi_x);
}

TypeTables enumerate_types(const NormalForm& nf, const TypeCaps& caps) {
    TypeTables tb;
    tb.period = nf.period;
    tb.alpha = nf.alpha;
    tb.conjuncts = nf.conjuncts;
    tb.sig = nf.sig;

    // orientation predicate: breaks self-reverse 2-types
    tb.ord_pred = "__ord";
    while (tb.sig.has_binary(tb.ord_pred) || tb.sig.has_unary(tb.ord_pred))
        tb.ord_pred += "_";
    tb.sig.binaries.push_back(tb.ord_pred);

    // diagonal atoms in alpha and guards become pseudo-unary bits
    std::set<std::string> diag, offdiag;
    scan_binaries(nf.alpha, diag, offdiag);
    for (auto& c : nf.conjuncts) scan_binaries(c.guard, diag, offdiag);
    tb.diag_preds.assign(diag.begin(), diag.end());
    for (auto& p : offdiag)
        if (!diag.count(p)) tb.free_diag_preds.push_back(p);

    size_t unary_bits = tb.sig.unaries.size() + tb.diag_preds.size();
    if (unary_bits > 24 || (uint64_t(1) << unary_bits) > caps.max_one_types)
        throw CapExceeded("enumerate_types: 1-type cap exceeded");
    for (uint64_t mask = 0; mask < (uint64_t(1) << unary_bits); mask++) {
        OneType pi;
        for (size_t b = 0; b < unary_bits; b++) pi.bits.push_back((mask >> b) & 1);
        tb.pis.push_back(std::move(pi));
    }

    // 2-types: all assignments with exactly one of ord(x,y), ord(y,x);
    // canonical half has ord(x,y) = true
    size_t nb = tb.sig.binaries.size();
    if (nb > 12) throw CapExceeded("enumerate_types: too many binary predicates");
    uint64_t count = 1;
    for (size_t i = 0; i + 1 < nb; i++) count *= 4;
    if (2 * count > caps.max_two_types)
        throw CapExceeded("enumerate_types: 2-type cap exceeded (" +
                          std::to_string(2 * count) + " types)");
    std::vector<TwoType> canon;
    for (uint64_t mask = 0; mask < count; mask++) {
        TwoType ty;
        uint64_t m = mask;
        for (size_t i = 0; i + 1 < nb; i++) {
            ty.bits.push_back({(m & 1) != 0, (m & 2) != 0});
            m >>= 2;
        }
        ty.bits.push_back({true, false}); // ord(x,y)
        canon.push_back(std::move(ty));
    }

    // keep only 2-types realizable for some pair of 1-types (alpha both ways)
    tb.t = int(canon.size());
    tb.types = canon;
    for (auto& ty : canon) {
        TwoType rev;
        for (auto& [f, b] : ty.bits) rev.bits.push_back({b, f});
        tb.types.push_back(std::move(rev));
    }
    std::vector<bool> alive(canon.size(), false);
    for (size_t e = 0; e < canon.size(); e++) {
        for (int px = 0; px < tb.n_pi() && !alive[e]; px++)
            for (int py = 0; py < tb.n_pi() && !alive[e]; py++)
                if (tb.cell_consistent(px, int(e), py)) alive[e] = true;
    }
    std::vector<TwoType> kept;
    for (size_t e = 0; e < canon.size(); e++)
        if (alive[e]) kept.push_back(canon[e]);
    tb.t = int(kept.size());
    tb.types = kept;
    for (auto& ty : kept) {
        TwoType rev;
        for (auto& [f, b] : ty.bits) rev.bits.push_back({b, f});
        tb.types.push_back(std::move(rev));
    }

    // consistency cache over the pruned list
    tb.consist.assign(size_t(tb.n_pi()) * size_t(tb.n_types()) * size_t(tb.n_pi()), false);
    for (int px = 0; px < tb.n_pi(); px++)
        for (int e = 0; e < tb.n_types(); e++)
            for (int py = 0; py < tb.n_pi(); py++)
                tb.consist[tb.cidx(px, e, py)] = tb.cell_consistent(px, e, py);

    // beta membership per conjunct
    for (auto& c : nf.conjuncts) {
        std::vector<int> members;
        int bi = tb.sig.binary_index(c.beta->pred);
        if (bi < 0) throw std::runtime_error("typesys: conjunct beta predicate missing");
        bool fwd = c.beta->v1 == Var::X;
        for (int e = 0; e < tb.n_types(); e++) {
            auto& bits = tb.types[size_t(e)].bits[size_t(bi)];
            if (fwd ? bits.first : bits.second) members.push_back(e);
        }
        tb.beta_types.push_back(std::move(members));
    }

    // guards per 1-type
    for (auto& c : nf.conjuncts) {
        std::vector<bool> holds;
        for (int pi = 0; pi < tb.n_pi(); pi++) {
            TypeEnv env{tb, pi, pi, nullptr, nullptr};
            holds.push_back(env.eval(c.guard));
        }
        tb.guard_holds.push_back(std::move(holds));
    }

    // diagonal satisfiability of alpha per 1-type
    size_t fd = tb.free_diag_preds.size();
    if (fd > 20) throw CapExceeded("enumerate_types: too many free diagonal bits");
    for (int pi = 0; pi < tb.n_pi(); pi++) {
        bool ok = false;
        std::vector<bool> witness(fd, false);
        for (uint64_t mask = 0; mask < (uint64_t(1) << fd) && !ok; mask++) {
            std::vector<bool> bits(fd);
            for (size_t b = 0; b < fd; b++) bits[b] = (mask >> b) & 1;
            if (tb.alpha_holds_diag(pi, bits)) {
                ok = true;
                witness = bits;
            }
        }
        tb.diag_ok.push_back(ok);
        tb.diag_witness.push_back(std::move(witness));
    }
    return tb;
}

void enumerate_good_functions(TypeTables& tb, const TypeCaps& caps) {
    int npi = tb.n_pi();
    int ntypes = tb.n_types();
    uint64_t p = tb.period;

    uint64_t a_max = 0;
    for (auto& c : tb.conjuncts) {
        for (uint64_t f : c.set.finites) a_max = std::max(a_max, f);
        for (auto& [off, q] : c.set.periodics) { (void)q; a_max = std::max(a_max, off); }
    }
    uint64_t per_max = std::max(a_max, p - 1);
    std::vector<CountValue> rel_values;
    for (uint64_t a = 0; a <= a_max; a++) rel_values.push_back(CountValue::fixed(a));
    for (uint64_t a = 0; a <= per_max; a++) rel_values.push_back(CountValue::periodic(a));
    rel_values.push_back(CountValue::inf());

    std::vector<bool> relevant(size_t(ntypes), false);
    for (auto& members : tb.beta_types)
        for (int e : members) relevant[size_t(e)] = true;

    std::map<std::vector<CountValue>, int> interned;
    tb.goods.clear();
    tb.goods_of_pi.assign(size_t(npi), {});

    for (int pi = 0; pi < npi; pi++) {
        if (!tb.diag_ok[size_t(pi)]) continue;
        struct Cell { int e, piy; };
        std::vector<Cell> cells;
        std::vector<CountValue> base(size_t(ntypes) * size_t(npi), CountValue::any());
        for (int e = 0; e < ntypes; e++)
            for (int piy = 0; piy < npi; piy++) {
                if (!tb.consist[tb.cidx(pi, e, piy)]) {
                    base[size_t(e) * size_t(npi) + size_t(piy)] = CountValue::fixed(0);
                } else if (relevant[size_t(e)]) {
                    base[size_t(e) * size_t(npi) + size_t(piy)] = CountValue::fixed(0);
                    cells.push_back({e, piy});
                }
            }
        std::vector<int> active;
        for (size_t i = 0; i < tb.conjuncts.size(); i++)
            if (tb.guard_holds[i][size_t(pi)]) active.push_back(int(i));
        std::vector<std::vector<int>> feeds(cells.size());
        for (size_t ci = 0; ci < cells.size(); ci++)
            for (int i : active)
                for (int e : tb.beta_types[size_t(i)])
                    if (e == cells[ci].e) feeds[ci].push_back(i);

        std::vector<CountValue> sums(tb.conjuncts.size(), CountValue::fixed(0));
        std::vector<CountValue> cur = base;

        std::function<void(size_t)> rec = [&](size_t ci) {
            if (tb.goods.size() > caps.max_goodfuncs)
                throw CapExceeded("enumerate_good_functions: cap exceeded (more than " +
                                  std::to_string(caps.max_goodfuncs) + " behavior columns)");
            if (ci == cells.size()) {
                for (int i : active)
                    if (!sums[size_t(i)].lies_in(tb.conjuncts[size_t(i)].set, p)) return;
                auto [it, fresh] = interned.try_emplace(cur, int(tb.goods.size()));
                if (fresh) tb.goods.push_back({cur});
                tb.goods_of_pi[size_t(pi)].push_back(it->second);
                return;
            }
            size_t cell_index = size_t(cells[ci].e) * size_t(npi) + size_t(cells[ci].piy);
            for (auto& v : rel_values) {
                bool ok = true;
                std::vector<CountValue> saved;
                saved.reserve(feeds[ci].size());
                for (int i : feeds[ci]) saved.push_back(sums[size_t(i)]);
                for (int i : feeds[ci]) {
                    sums[size_t(i)] = sums[size_t(i)] + v;
                    const Ups& S = tb.conjuncts[size_t(i)].set;
                    if (sums[size_t(i)].is_inf() && !S.member(NatInf::inf())) ok = false;
                }
                if (ok) {
                    cur[cell_index] = v;
                    rec(ci + 1);
                    cur[cell_index] = base[cell_index];
                }
                size_t k = 0;
                for (int i : feeds[ci]) sums[size_t(i)] = saved[k++];
            }
        };
        rec(0);
    }
}

bool incompatible(const TypeTables& tb, int pi, const GoodFunction& g) {
    if (!tb.diag_ok[size_t(pi)]) return true;
    int npi = tb.n_pi();
    for (int e = 0; e < tb.n_types(); e++)
        for (int piy = 0; piy < npi; piy++) {
            const CountValue& v = g.vals[size_t(e) * size_t(npi) + size_t(piy)];
            if (!v.is_zero() && !v.is_any() && !tb.consist[tb.cidx(pi, e, piy)]) return true;
        }
    return false;
}

DegreeMatrix TypeTables::Mpi(int pi) const {
    auto& cols = goods_of_pi[size_t(pi)];
    DegreeMatrix m(t, int(cols.size()), period);
    for (size_t j = 0; j < cols.size(); j++)
        for (int i = 0; i < t; i++)
            m.at(i, int(j)) = goods[size_t(cols[j])].vals[size_t(i) * size_t(n_pi()) + size_t(pi)];
    return m;
}

DegreeMatrix TypeTables::Mbar(int pi) const {
    auto& cols = goods_of_pi[size_t(pi)];
    DegreeMatrix m(t, int(cols.size()), period);
    for (size_t j = 0; j < cols.size(); j++)
        for (int i = 0; i < t; i++)
            m.at(i, int(j)) =
                goods[size_t(cols[j])].vals[size_t(i + t) * size_t(n_pi()) + size_t(pi)];
    return m;
}

DegreeMatrix TypeTables::Lpi(int pi, int towards_pi) const {
    auto& cols = goods_of_pi[size_t(pi)];
    DegreeMatrix m(2 * t, int(cols.size()), period);
    for (size_t j = 0; j < cols.size(); j++)
        for (int i = 0; i < 2 * t; i++)
            m.at(i, int(j)) =
                goods[size_t(cols[j])].vals[size_t(i) * size_t(n_pi()) + size_t(towards_pi)];
    return m;
}

DegreeMatrix TypeTables::Lbar(int pi, int towards_pi) const {
    auto& cols = goods_of_pi[size_t(pi)];
    DegreeMatrix m(2 * t, int(cols.size()), period);
    for (size_t j = 0; j < cols.size(); j++)
        for (int i = 0; i < 2 * t; i++) {
            int src = i < t ? i + t : i - t; // reversal swap
            m.at(i, int(j)) =
                goods[size_t(cols[j])].vals[size_t(src) * size_t(n_pi()) + size_t(towards_pi)];
        }
    return m;
}

std::string TypeTables::describe() const {
    std::ostringstream os;
    os << "1-types: " << pis.size() << "\n";
    for (size_t k = 0; k < pis.size(); k++) {
        os << "  pi" << k << ":";
        for (size_t b = 0; b < sig.unaries.size(); b++)
            if (pis[k].bits[b]) os << " " << sig.unaries[b];
        for (size_t d = 0; d < diag_preds.size(); d++)
            if (pis[k].bits[sig.unaries.size() + d]) os << " " << diag_preds[d] << "(x,x)";
        if (!diag_ok[k]) os << " [diagonal-incompatible]";
        os << "\n";
    }
    os << "2-type pairs t = " << t << " (" << n_types() << " oriented 2-types)\n";
    for (int e = 0; e < t; e++) {
        os << "  E" << (e + 1) << ":";
        for (size_t b = 0; b < sig.binaries.size(); b++) {
            auto [f, r] = types[size_t(e)].bits[b];
            if (f) os << " " << sig.binaries[b] << "(x,y)";
            if (r) os << " " << sig.binaries[b] << "(y,x)";
        }
        os << "\n";
    }
    size_t total_cols = 0;
    for (auto& v : goods_of_pi) total_cols += v.size();
    os << "behavior columns |G| = " << goods.size() << " (" << total_cols
       << " compatible (pi,g) pairs)\n";
    for (int pi = 0; pi < n_pi(); pi++) {
        if (goods_of_pi[size_t(pi)].empty()) continue;
        os << "M_pi" << pi << " (" << t << "x" << goods_of_pi[size_t(pi)].size() << "):\n"
           << Mpi(pi).str();
        os << "Mbar_pi" << pi << ":\n" << Mbar(pi).str();
    }
    return os.str();
}

} // namespace fo2p
