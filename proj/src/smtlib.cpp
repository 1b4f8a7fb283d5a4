#include <sstream>

#include "fo2p/presburger.hpp"
#include "fo2p/regraph.hpp"

namespace fo2p {

namespace {

// Infinity is compiled away by guessing: each variable v gets an Int v and a
// Bool vI ("v is infinite"); a term is infinite iff some variable with a
// positive coefficient is.
struct SmtPrinter {
    const PresFormula& F;
    SolveMode mode;
    std::ostringstream os;

    std::string vname(int v) const { return "v" + std::to_string(v); }
    std::string iname(int v) const { return "v" + std::to_string(v) + "I"; }

    std::string term_inf(const PTerm& t) const {
        if (mode == SolveMode::NAT || t.coeff.empty()) return "false";
        std::ostringstream s;
        if (t.coeff.size() == 1) return iname(t.coeff.begin()->first);
        s << "(or";
        for (auto& [v, c] : t.coeff) { (void)c; s << " " << iname(v); }
        s << ")";
        return s.str();
    }

    std::string term_val(const PTerm& t) const {
        std::ostringstream s;
        size_t parts = t.coeff.size() + 1;
        if (parts > 1) s << "(+ ";
        s << t.cst;
        for (auto& [v, c] : t.coeff) {
            s << " ";
            if (c == 1) s << vname(v);
            else s << "(* " << c << " " << vname(v) << ")";
        }
        if (parts > 1) s << ")";
        return s.str();
    }

    std::string atom(const PAtom& a) const {
        std::ostringstream s;
        switch (a.kind) {
            case PAtom::Kind::Eq:
                if (mode == SolveMode::NAT) {
                    s << "(= " << term_val(a.lhs) << " " << term_val(a.rhs) << ")";
                } else {
                    std::string li = term_inf(a.lhs), ri = term_inf(a.rhs);
                    s << "(or (and " << li << " " << ri << ") (and (not " << li
                      << ") (not " << ri << ") (= " << term_val(a.lhs) << " "
                      << term_val(a.rhs) << ")))";
                }
                break;
            case PAtom::Kind::Le:
                if (mode == SolveMode::NAT) {
                    s << "(<= " << term_val(a.lhs) << " " << term_val(a.rhs) << ")";
                } else {
                    std::string li = term_inf(a.lhs), ri = term_inf(a.rhs);
                    s << "(or " << ri << " (and (not " << li << ") (<= "
                      << term_val(a.lhs) << " " << term_val(a.rhs) << ")))";
                }
                break;
            case PAtom::Kind::IsInf:
                s << (mode == SolveMode::NAT ? std::string("false") : term_inf(a.lhs));
                break;
            case PAtom::Kind::NotInf:
                if (mode == SolveMode::NAT) s << "true";
                else s << "(not " << term_inf(a.lhs) << ")";
                break;
            case PAtom::Kind::Graph:
                throw std::runtime_error("smtlib: graph atom not expanded");
        }
        return s.str();
    }

    void emit(const PFormulaPtr& f) {
        switch (f->kind) {
            case PFormula::Kind::True: os << "true"; break;
            case PFormula::Kind::False: os << "false"; break;
            case PFormula::Kind::Not: os << "(not "; emit(f->children[0]); os << ")"; break;
            case PFormula::Kind::And:
            case PFormula::Kind::Or:
                os << (f->kind == PFormula::Kind::And ? "(and" : "(or");
                for (auto& c : f->children) { os << " "; emit(c); }
                os << ")";
                break;
            case PFormula::Kind::Atom: os << atom(f->atom); break;
        }
    }
};

PFormulaPtr expand_all_graph_atoms(PresFormula& f, const PFormulaPtr& node) {
    switch (node->kind) {
        case PFormula::Kind::Atom:
            if (node->atom.kind == PAtom::Kind::Graph)
                return expand_graph_constraint(f, *node->atom.graph);
            return node;
        case PFormula::Kind::Not:
            return p_not(expand_all_graph_atoms(f, node->children[0]));
        case PFormula::Kind::And:
        case PFormula::Kind::Or: {
            std::vector<PFormulaPtr> cs;
            cs.reserve(node->children.size());
            for (auto& c : node->children) cs.push_back(expand_all_graph_atoms(f, c));
            return node->kind == PFormula::Kind::And ? p_and(std::move(cs)) : p_or(std::move(cs));
        }
        default: return node;
    }
}

} // namespace

std::string to_smtlib(const PresFormula& f_in, SolveMode mode) {
    PresFormula f = f_in;
    f.body = expand_all_graph_atoms(f, f.body);

    SmtPrinter pr{f, mode, {}};
    pr.os << "(set-logic QF_LIA)\n";
    for (size_t v = 0; v < f.num_vars(); v++) {
        pr.os << "(declare-const " << pr.vname(int(v)) << " Int)\n";
        if (mode == SolveMode::NAT_INF)
            pr.os << "(declare-const " << pr.iname(int(v)) << " Bool)\n";
        pr.os << "(assert (>= " << pr.vname(int(v)) << " 0))\n";
    }
    pr.os << "(assert ";
    pr.emit(f.body);
    pr.os << ")\n(check-sat)\n(get-model)\n";
    return pr.os.str();
}

} // namespace fo2p
