#include "fo2p/presburger.hpp"

#include <sstream>

#include "fo2p/regraph.hpp"

namespace fo2p {

PTerm& PTerm::add(const PTerm& o) {
    cst += o.cst;
    for (auto& [v, c] : o.coeff) add_var(v, c);
    return *this;
}

PTerm& PTerm::add_var(int v, uint64_t c) {
    if (c == 0) return *this;
    coeff[v] += c;
    return *this;
}

std::string PTerm::str(const std::vector<std::string>& names) const {
    std::ostringstream os;
    bool first = true;
    for (auto& [v, c] : coeff) {
        if (!first) os << " + ";
        first = false;
        if (c != 1) os << c << "*";
        os << names[v];
    }
    if (cst || first) {
        if (!first) os << " + ";
        os << cst;
    }
    return os.str();
}

static PFormulaPtr mk(PFormula f) { return std::make_shared<PFormula>(std::move(f)); }

PFormulaPtr p_true() { PFormula f; f.kind = PFormula::Kind::True; return mk(f); }
PFormulaPtr p_false() { PFormula f; f.kind = PFormula::Kind::False; return mk(f); }
PFormulaPtr p_atom(PAtom a) {
    PFormula f; f.kind = PFormula::Kind::Atom; f.atom = std::move(a); return mk(f);
}
PFormulaPtr p_eq(PTerm l, PTerm r) {
    PAtom a; a.kind = PAtom::Kind::Eq; a.lhs = std::move(l); a.rhs = std::move(r);
    return p_atom(std::move(a));
}
PFormulaPtr p_le(PTerm l, PTerm r) {
    PAtom a; a.kind = PAtom::Kind::Le; a.lhs = std::move(l); a.rhs = std::move(r);
    return p_atom(std::move(a));
}
PFormulaPtr p_is_inf(PTerm t) {
    PAtom a; a.kind = PAtom::Kind::IsInf; a.lhs = std::move(t);
    return p_atom(std::move(a));
}
PFormulaPtr p_not_inf(PTerm t) {
    PAtom a; a.kind = PAtom::Kind::NotInf; a.lhs = std::move(t);
    return p_atom(std::move(a));
}
PFormulaPtr p_not(PFormulaPtr f) {
    if (f->kind == PFormula::Kind::True) return p_false();
    if (f->kind == PFormula::Kind::False) return p_true();
    PFormula g; g.kind = PFormula::Kind::Not; g.children = {std::move(f)};
    return mk(g);
}
PFormulaPtr p_and(std::vector<PFormulaPtr> fs) {
    std::vector<PFormulaPtr> kept;
    for (auto& f : fs) {
        if (f->kind == PFormula::Kind::False) return p_false();
        if (f->kind == PFormula::Kind::True) continue;
        if (f->kind == PFormula::Kind::And) {
            kept.insert(kept.end(), f->children.begin(), f->children.end());
        } else {
            kept.push_back(f);
        }
    }
    if (kept.empty()) return p_true();
    if (kept.size() == 1) return kept[0];
    PFormula g; g.kind = PFormula::Kind::And; g.children = std::move(kept);
    return mk(g);
}
PFormulaPtr p_or(std::vector<PFormulaPtr> fs) {
    std::vector<PFormulaPtr> kept;
    for (auto& f : fs) {
        if (f->kind == PFormula::Kind::True) return p_true();
        if (f->kind == PFormula::Kind::False) continue;
        if (f->kind == PFormula::Kind::Or) {
            kept.insert(kept.end(), f->children.begin(), f->children.end());
        } else {
            kept.push_back(f);
        }
    }
    if (kept.empty()) return p_false();
    if (kept.size() == 1) return kept[0];
    PFormula g; g.kind = PFormula::Kind::Or; g.children = std::move(kept);
    return mk(g);
}

int PresFormula::add_var(const std::string& name, bool free) {
    var_names.push_back(name);
    is_free.push_back(free);
    return int(var_names.size()) - 1;
}

int PresFormula::fresh_var(const std::string& hint) {
    return add_var("_" + hint + std::to_string(var_names.size()), false);
}

std::vector<int> PresFormula::free_vars() const {
    std::vector<int> out;
    for (size_t i = 0; i < is_free.size(); i++)
        if (is_free[i]) out.push_back(int(i));
    return out;
}

void PresFormula::conjoin(PFormulaPtr f) { body = p_and({body, std::move(f)}); }

NatInf PAssignment::eval(const PTerm& t) const {
    NatInf acc(t.cst);
    for (auto& [v, c] : t.coeff) acc += scale(c, values[size_t(v)]);
    return acc;
}

std::string PAssignment::str(const PresFormula& f, bool free_only) const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < values.size(); i++) {
        if (free_only && !f.is_free[i]) continue;
        if (!first) os << ", ";
        first = false;
        os << f.var_names[i] << "=" << values[i].str();
    }
    return os.str();
}

namespace {

bool eval_graph_atom(const GraphConstraint& gc, const PAssignment& a) {
    std::vector<NatInf> xs, ys;
    xs.reserve(gc.xs.size());
    for (auto& t : gc.xs) xs.push_back(a.eval(t));
    for (auto& t : gc.ys) ys.push_back(a.eval(t));
    switch (gc.kind) {
        case GraphKind::Bireg: return bireg_feasible(gc.A, gc.B, xs, ys, false);
        case GraphKind::BiregC: return bireg_feasible(gc.A, gc.B, xs, ys, true);
        case GraphKind::Direg: return direg_feasible(gc.A, gc.B, xs, false);
        case GraphKind::DiregC: return direg_feasible(gc.A, gc.B, xs, true);
    }
    return false;
}

bool eval_rec(const PFormulaPtr& f, const PAssignment& a) {
    switch (f->kind) {
        case PFormula::Kind::True: return true;
        case PFormula::Kind::False: return false;
        case PFormula::Kind::Not: return !eval_rec(f->children[0], a);
        case PFormula::Kind::And:
            for (auto& c : f->children)
                if (!eval_rec(c, a)) return false;
            return true;
        case PFormula::Kind::Or:
            for (auto& c : f->children)
                if (eval_rec(c, a)) return true;
            return false;
        case PFormula::Kind::Atom: {
            const PAtom& at = f->atom;
            switch (at.kind) {
                case PAtom::Kind::Eq: return a.eval(at.lhs) == a.eval(at.rhs);
                case PAtom::Kind::Le: return a.eval(at.lhs) <= a.eval(at.rhs);
                case PAtom::Kind::IsInf: return a.eval(at.lhs).is_inf();
                case PAtom::Kind::NotInf: return !a.eval(at.lhs).is_inf();
                case PAtom::Kind::Graph: return eval_graph_atom(*at.graph, a);
            }
        }
    }
    return false;
}

void str_rec(std::ostream& os, const PFormulaPtr& f, const std::vector<std::string>& names) {
    switch (f->kind) {
        case PFormula::Kind::True: os << "true"; break;
        case PFormula::Kind::False: os << "false"; break;
        case PFormula::Kind::Not: os << "!("; str_rec(os, f->children[0], names); os << ")"; break;
        case PFormula::Kind::And:
        case PFormula::Kind::Or: {
            const char* op = f->kind == PFormula::Kind::And ? " & " : " | ";
            os << "(";
            for (size_t i = 0; i < f->children.size(); i++) {
                if (i) os << op;
                str_rec(os, f->children[i], names);
            }
            os << ")";
            break;
        }
        case PFormula::Kind::Atom: {
            const PAtom& at = f->atom;
            switch (at.kind) {
                case PAtom::Kind::Eq: os << at.lhs.str(names) << " = " << at.rhs.str(names); break;
                case PAtom::Kind::Le: os << at.lhs.str(names) << " <= " << at.rhs.str(names); break;
                case PAtom::Kind::IsInf: os << at.lhs.str(names) << " = inf"; break;
                case PAtom::Kind::NotInf: os << at.lhs.str(names) << " != inf"; break;
                case PAtom::Kind::Graph: {
                    static const char* kinds[] = {"bireg", "biregc", "direg", "diregc"};
                    os << kinds[int(at.graph->kind)] << "[" << at.graph->A.rows << "x"
                       << at.graph->A.cols << "|" << at.graph->B.cols << "](";
                    for (size_t i = 0; i < at.graph->xs.size(); i++)
                        os << (i ? "," : "") << at.graph->xs[i].str(names);
                    if (!at.graph->ys.empty()) {
                        os << " ; ";
                        for (size_t i = 0; i < at.graph->ys.size(); i++)
                            os << (i ? "," : "") << at.graph->ys[i].str(names);
                    }
                    os << ")";
                    break;
                }
            }
            break;
        }
    }
}

} // namespace

bool eval_pformula(const PresFormula& f, const PAssignment& a) { return eval_rec(f.body, a); }

std::string PresFormula::str() const {
    std::ostringstream os;
    os << "exists";
    for (size_t i = 0; i < var_names.size(); i++)
        if (!is_free[i]) os << " " << var_names[i];
    os << " . ";
    str_rec(os, body, var_names);
    return os.str();
}

} // namespace fo2p
