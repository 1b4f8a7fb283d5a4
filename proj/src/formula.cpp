#include "fo2p/formula.hpp"

#include <algorithm>
#include <sstream>

namespace fo2p {

bool Signature::has_unary(const std::string& p) const {
    return std::find(unaries.begin(), unaries.end(), p) != unaries.end();
}
bool Signature::has_binary(const std::string& p) const {
    return std::find(binaries.begin(), binaries.end(), p) != binaries.end();
}
int Signature::unary_index(const std::string& p) const {
    auto it = std::find(unaries.begin(), unaries.end(), p);
    return it == unaries.end() ? -1 : int(it - unaries.begin());
}
int Signature::binary_index(const std::string& p) const {
    auto it = std::find(binaries.begin(), binaries.end(), p);
    return it == binaries.end() ? -1 : int(it - binaries.begin());
}

static FormulaPtr mk(Formula f) { return std::make_shared<Formula>(std::move(f)); }

FormulaPtr f_true() { Formula f; f.kind = Formula::Kind::True; return mk(f); }
FormulaPtr f_false() { Formula f; f.kind = Formula::Kind::False; return mk(f); }
FormulaPtr f_unary(std::string pred, Var v) {
    Formula f; f.kind = Formula::Kind::UnaryAtom; f.pred = std::move(pred); f.v1 = v; return mk(f);
}
FormulaPtr f_binary(std::string pred, Var a, Var b) {
    Formula f; f.kind = Formula::Kind::BinaryAtom; f.pred = std::move(pred); f.v1 = a; f.v2 = b; return mk(f);
}
FormulaPtr f_eq(Var a, Var b) { Formula f; f.kind = Formula::Kind::Eq; f.v1 = a; f.v2 = b; return mk(f); }
FormulaPtr f_not(FormulaPtr a) { Formula f; f.kind = Formula::Kind::Not; f.lhs = std::move(a); return mk(f); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
    Formula f; f.kind = Formula::Kind::And; f.lhs = std::move(a); f.rhs = std::move(b); return mk(f);
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
    Formula f; f.kind = Formula::Kind::Or; f.lhs = std::move(a); f.rhs = std::move(b); return mk(f);
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    Formula f; f.kind = Formula::Kind::Implies; f.lhs = std::move(a); f.rhs = std::move(b); return mk(f);
}
FormulaPtr f_exists(Ups set, Var v, FormulaPtr body) {
    Formula f; f.kind = Formula::Kind::Exists; f.set = std::move(set); f.v1 = v; f.lhs = std::move(body); return mk(f);
}
FormulaPtr f_forall(Var v, FormulaPtr body) {
    Formula f; f.kind = Formula::Kind::Forall; f.v1 = v; f.lhs = std::move(body); return mk(f);
}
FormulaPtr f_neq(Var a, Var b) { return f_not(f_eq(a, b)); }

FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
    if (fs.empty()) return f_true();
    FormulaPtr acc = fs[0];
    for (size_t i = 1; i < fs.size(); i++) acc = f_and(acc, fs[i]);
    return acc;
}

unsigned free_vars(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::True: case K::False: return 0;
        case K::UnaryAtom: return 1u << int(f->v1);
        case K::BinaryAtom: case K::Eq: return (1u << int(f->v1)) | (1u << int(f->v2));
        case K::Not: return free_vars(f->lhs);
        case K::And: case K::Or: case K::Implies: return free_vars(f->lhs) | free_vars(f->rhs);
        case K::Exists: case K::Forall: return free_vars(f->lhs) & ~(1u << int(f->v1));
    }
    return 0;
}

bool is_quantifier_free(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Exists: case K::Forall: return false;
        case K::Not: return is_quantifier_free(f->lhs);
        case K::And: case K::Or: case K::Implies:
            return is_quantifier_free(f->lhs) && is_quantifier_free(f->rhs);
        default: return true;
    }
}

FormulaPtr substitute_var(const FormulaPtr& f, Var from, Var to) {
    using K = Formula::Kind;
    auto sub = [&](Var v) { return v == from ? to : v; };
    switch (f->kind) {
        case K::True: case K::False: return f;
        case K::UnaryAtom: return f_unary(f->pred, sub(f->v1));
        case K::BinaryAtom: return f_binary(f->pred, sub(f->v1), sub(f->v2));
        case K::Eq: return f_eq(sub(f->v1), sub(f->v2));
        case K::Not: return f_not(substitute_var(f->lhs, from, to));
        case K::And: return f_and(substitute_var(f->lhs, from, to), substitute_var(f->rhs, from, to));
        case K::Or: return f_or(substitute_var(f->lhs, from, to), substitute_var(f->rhs, from, to));
        case K::Implies: return f_implies(substitute_var(f->lhs, from, to), substitute_var(f->rhs, from, to));
        default: throw std::logic_error("substitute_var: quantifier");
    }
}

FormulaPtr swap_vars(const FormulaPtr& f) {
    using K = Formula::Kind;
    auto sw = [](Var v) { return other(v); };
    switch (f->kind) {
        case K::True: case K::False: return f;
        case K::UnaryAtom: return f_unary(f->pred, sw(f->v1));
        case K::BinaryAtom: return f_binary(f->pred, sw(f->v1), sw(f->v2));
        case K::Eq: return f_eq(sw(f->v1), sw(f->v2));
        case K::Not: return f_not(swap_vars(f->lhs));
        case K::And: return f_and(swap_vars(f->lhs), swap_vars(f->rhs));
        case K::Or: return f_or(swap_vars(f->lhs), swap_vars(f->rhs));
        case K::Implies: return f_implies(swap_vars(f->lhs), swap_vars(f->rhs));
        default: throw std::logic_error("swap_vars: quantifier");
    }
}

FormulaPtr simplify(const FormulaPtr& f) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Eq:
            if (f->v1 == f->v2) return f_true();
            return f;
        case K::Not: {
            auto a = simplify(f->lhs);
            if (a->kind == K::True) return f_false();
            if (a->kind == K::False) return f_true();
            return f_not(a);
        }
        case K::And: {
            auto a = simplify(f->lhs), b = simplify(f->rhs);
            if (a->kind == K::False || b->kind == K::False) return f_false();
            if (a->kind == K::True) return b;
            if (b->kind == K::True) return a;
            return f_and(a, b);
        }
        case K::Or: {
            auto a = simplify(f->lhs), b = simplify(f->rhs);
            if (a->kind == K::True || b->kind == K::True) return f_true();
            if (a->kind == K::False) return b;
            if (b->kind == K::False) return a;
            return f_or(a, b);
        }
        case K::Implies: {
            auto a = simplify(f->lhs), b = simplify(f->rhs);
            if (a->kind == K::False || b->kind == K::True) return f_true();
            if (a->kind == K::True) return b;
            if (b->kind == K::False) return f_not(a);
            return f_implies(a, b);
        }
        case K::Exists: return f_exists(f->set, f->v1, simplify(f->lhs));
        case K::Forall: return f_forall(f->v1, simplify(f->lhs));
        default: return f;
    }
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind != b->kind) return false;
    using K = Formula::Kind;
    switch (a->kind) {
        case K::True: case K::False: return true;
        case K::UnaryAtom: return a->pred == b->pred && a->v1 == b->v1;
        case K::BinaryAtom: return a->pred == b->pred && a->v1 == b->v1 && a->v2 == b->v2;
        case K::Eq: return a->v1 == b->v1 && a->v2 == b->v2;
        case K::Not: return formula_equal(a->lhs, b->lhs);
        case K::And: case K::Or: case K::Implies:
            return formula_equal(a->lhs, b->lhs) && formula_equal(a->rhs, b->rhs);
        case K::Exists:
            return a->set == b->set && a->v1 == b->v1 && formula_equal(a->lhs, b->lhs);
        case K::Forall:
            return a->v1 == b->v1 && formula_equal(a->lhs, b->lhs);
    }
    return false;
}

namespace {

// Precedence: implies(1) < or(2) < and(3) < not/quant/atom(4)
void print_rec(std::ostream& os, const FormulaPtr& f, int parent_prec) {
    using K = Formula::Kind;
    auto paren = [&](int prec, auto body) {
        if (prec < parent_prec) { os << "("; body(); os << ")"; }
        else body();
    };
    switch (f->kind) {
        case K::True: os << "true"; break;
        case K::False: os << "false"; break;
        case K::UnaryAtom: os << f->pred << "(" << var_name(f->v1) << ")"; break;
        case K::BinaryAtom:
            os << f->pred << "(" << var_name(f->v1) << "," << var_name(f->v2) << ")"; break;
        case K::Eq: os << var_name(f->v1) << " = " << var_name(f->v2); break;
        case K::Not:
            // print x != y compactly
            if (f->lhs->kind == K::Eq) {
                os << var_name(f->lhs->v1) << " != " << var_name(f->lhs->v2);
            } else {
                os << "!";
                print_rec(os, f->lhs, 4);
            }
            break;
        case K::And:
            paren(3, [&] { print_rec(os, f->lhs, 3); os << " & "; print_rec(os, f->rhs, 4); });
            break;
        case K::Or:
            paren(2, [&] { print_rec(os, f->lhs, 2); os << " | "; print_rec(os, f->rhs, 3); });
            break;
        case K::Implies:
            paren(1, [&] { print_rec(os, f->lhs, 2); os << " -> "; print_rec(os, f->rhs, 1); });
            break;
        case K::Exists:
            paren(1, [&] {
                os << "exists" << f->set.str() << " " << var_name(f->v1) << ". ";
                print_rec(os, f->lhs, 1);
            });
            break;
        case K::Forall:
            paren(1, [&] {
                os << "forall " << var_name(f->v1) << ". ";
                print_rec(os, f->lhs, 1);
            });
            break;
    }
}

} // namespace

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream os;
    print_rec(os, f, 0);
    return os.str();
}

std::string print_signature(const Signature& sig) {
    std::ostringstream os;
    os << "unary";
    for (size_t i = 0; i < sig.unaries.size(); i++) os << (i ? "," : " ") << sig.unaries[i];
    os << "; binary";
    for (size_t i = 0; i < sig.binaries.size(); i++) os << (i ? "," : " ") << sig.binaries[i];
    os << ";";
    return os.str();
}

} // namespace fo2p
