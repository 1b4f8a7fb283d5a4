#include "fo2p/normalform.hpp"

#include "fo2p/structure.hpp"

#include <sstream>
#include <stdexcept>

namespace fo2p {

std::pair<uint64_t, std::vector<Ups>> common_period(const std::vector<Ups>& sets) {
    uint64_t p = 1;
    for (auto& s : sets)
        for (auto& [a, q] : s.periodics) { (void)a; p = lcm64(p, q); }
    std::vector<Ups> rewritten;
    rewritten.reserve(sets.size());
    for (auto& s : sets) rewritten.push_back(s.rewrite_period(p));
    return {p, rewritten};
}

namespace {

bool is_trivial_set(const Ups& s) { return s.complement().is_empty(); }

// Folds x=y atoms to a constant; used for bodies counted over y != x and for
// the beta(x,x) instance where they fold to true.
FormulaPtr fold_eq(const FormulaPtr& f, bool value) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::Eq:
            if (f->v1 != f->v2) return value ? f_true() : f_false();
            return f_true();
        case K::Not: return f_not(fold_eq(f->lhs, value));
        case K::And: return f_and(fold_eq(f->lhs, value), fold_eq(f->rhs, value));
        case K::Or: return f_or(fold_eq(f->lhs, value), fold_eq(f->rhs, value));
        case K::Implies: return f_implies(fold_eq(f->lhs, value), fold_eq(f->rhs, value));
        default: return f;
    }
}

struct Converter {
    Signature sig;
    std::vector<FormulaPtr> alpha_parts;

    // Almost-normal-form conjunct: forall x exists{S} y. body, body QF,
    // counting over all y (no x != y yet).
    struct Almost { Ups set; FormulaPtr body; };
    std::vector<Almost> almost;
    // conjuncts already carrying x != y (recognized guarded normal form)
    struct Closed { FormulaPtr guard; Ups set; FormulaPtr body; };
    std::vector<Closed> closed;

    std::vector<std::string> fresh_unaries, fresh_binaries;
    std::vector<FreshDefinition> definitions;
    int next_q = 0, next_g = 0;

    std::string fresh_unary() {
        std::string name;
        do { name = "__q" + std::to_string(next_q++); } while (sig.has_unary(name) || sig.has_binary(name));
        sig.unaries.push_back(name);
        fresh_unaries.push_back(name);
        return name;
    }
    std::string fresh_binary() {
        std::string name;
        do { name = "__g" + std::to_string(next_g++); } while (sig.has_unary(name) || sig.has_binary(name));
        sig.binaries.push_back(name);
        fresh_binaries.push_back(name);
        return name;
    }

    void push_almost(const Ups& set, FormulaPtr body) {
        if (is_trivial_set(set)) return;
        almost.push_back({set, simplify(body)});
    }

    // forall x (chi(x) -> exists{S} y body(x,y)), chi and body QF over the
    // stated variables. Case split on 0 in S (Appendix-style lemma pair).
    void emit_guarded(const FormulaPtr& chi, const Ups& S, const FormulaPtr& body) {
        auto chi_s = simplify(chi);
        if (chi_s->kind == Formula::Kind::False) return;
        if (chi_s->kind == Formula::Kind::True) { push_almost(S, body); return; }
        if (S.is_empty()) { alpha_parts.push_back(f_not(chi_s)); return; }
        if (S.member(NatInf(0))) {
            push_almost(S, f_and(chi_s, body));
        } else {
            push_almost(S.with_zero(), f_and(chi_s, body));
            push_almost(Ups::single(0).complement(), f_implies(chi_s, body));
        }
    }

    void emit_definition(const std::string& q, const Ups& S, const FormulaPtr& body_xy) {
        emit_guarded(f_unary(q, Var::X), S, body_xy);
        emit_guarded(f_not(f_unary(q, Var::X)), S.complement(), body_xy);
    }

    FormulaPtr eliminate_forall(const FormulaPtr& f) {
        using K = Formula::Kind;
        switch (f->kind) {
            case K::Forall:
                return f_exists(Ups::single(0), f->v1, f_not(eliminate_forall(f->lhs)));
            case K::Exists: return f_exists(f->set, f->v1, eliminate_forall(f->lhs));
            case K::Not: return f_not(eliminate_forall(f->lhs));
            case K::And: return f_and(eliminate_forall(f->lhs), eliminate_forall(f->rhs));
            case K::Or: return f_or(eliminate_forall(f->lhs), eliminate_forall(f->rhs));
            case K::Implies: return f_implies(eliminate_forall(f->lhs), eliminate_forall(f->rhs));
            default: return f;
        }
    }

    // Replaces every counting subformula by a fresh unary atom, innermost
    // first. `context` is the variable the atom is applied to when the
    // counting subformula is itself closed.
    FormulaPtr rename(const FormulaPtr& f, Var context) {
        using K = Formula::Kind;
        switch (f->kind) {
            case K::Exists: {
                Var v = f->v1;
                FormulaPtr body = rename(f->lhs, v);
                // normalize to outer x, inner y
                FormulaPtr nbody = (v == Var::Y) ? body : swap_vars(body);
                std::string q = fresh_unary();
                definitions.push_back({q, false, f_exists(f->set, Var::Y, nbody)});
                emit_definition(q, f->set, nbody);
                unsigned fv = free_vars(body) & ~(1u << int(v));
                return f_unary(q, fv ? other(v) : context);
            }
            case K::Not: return f_not(rename(f->lhs, context));
            case K::And: return f_and(rename(f->lhs, context), rename(f->rhs, context));
            case K::Or: return f_or(rename(f->lhs, context), rename(f->rhs, context));
            case K::Implies: return f_implies(rename(f->lhs, context), rename(f->rhs, context));
            default: return f;
        }
    }

    // Top-level recognizer: conjunctions of forall-forall-QF parts and
    // already-(guarded-)normal counting conjuncts bypass the renaming and so
    // keep re-normalization a fixed point.
    void process_sentence(const FormulaPtr& f) {
        using K = Formula::Kind;
        if (f->kind == K::And) {
            process_sentence(f->lhs);
            process_sentence(f->rhs);
            return;
        }
        if (f->kind == K::Forall) {
            Var u = f->v1;
            FormulaPtr body = f->lhs;
            if (body->kind == K::Forall && is_quantifier_free(body->lhs)) {
                alpha_parts.push_back(u == Var::X ? body->lhs : swap_vars(body->lhs));
                return;
            }
            if (is_quantifier_free(body)) {
                alpha_parts.push_back(u == Var::X ? body : swap_vars(body));
                return;
            }
            // forall u. exists{S} v. QF   or   forall u. (chi -> exists{S} v. QF)
            FormulaPtr chi = f_true();
            FormulaPtr inner = body;
            if (body->kind == K::Implies && is_quantifier_free(body->lhs)) {
                chi = body->lhs;
                inner = body->rhs;
            }
            if (inner->kind == K::Exists && inner->v1 == other(u) && is_quantifier_free(inner->lhs) &&
                !(free_vars(chi) & (1u << int(other(u))))) {
                FormulaPtr chi_x = (u == Var::X) ? chi : swap_vars(chi);
                FormulaPtr body_xy = (u == Var::X) ? inner->lhs : swap_vars(inner->lhs);
                FormulaPtr self = simplify(fold_eq(substitute_var(body_xy, Var::Y, Var::X), true));
                if (self->kind == K::False) {
                    // body already requires x != y: keep the guard as is
                    chi_x = simplify(chi_x);
                    if (chi_x->kind != K::False)
                        closed.push_back({chi_x, inner->set, simplify(fold_eq(body_xy, false))});
                    return;
                }
                emit_guarded(chi_x, inner->set, body_xy);
                return;
            }
        }
        if (is_quantifier_free(f)) {
            alpha_parts.push_back(f);
            return;
        }
        FormulaPtr top = simplify(rename(eliminate_forall(f), Var::X));
        alpha_parts.push_back(top);
    }
};

} // namespace

NormalForm to_scott_nf(const FormulaPtr& phi, const Signature& sig_in) {
    if (!is_sentence(phi)) throw std::runtime_error("to_scott_nf: input has free variables");

    Converter cv;
    cv.sig = sig_in;
    for (auto& u : sig_in.unaries)
        if (u.rfind("__q", 0) == 0) cv.next_q = std::max(cv.next_q, atoi(u.c_str() + 3) + 1);
    for (auto& b : sig_in.binaries)
        if (b.rfind("__g", 0) == 0) cv.next_g = std::max(cv.next_g, atoi(b.c_str() + 3) + 1);

    cv.process_sentence(simplify(phi));

    // x != y introduction: each almost conjunct splits on the y:=x instance
    // of its body; the resulting guards are kept (they are 1-type determined).
    struct Guarded { FormulaPtr guard; Ups set; FormulaPtr body; };
    std::vector<Guarded> guarded;
    for (auto& cc : cv.closed) {
        if (is_trivial_set(cc.set)) continue;
        if (cc.set.is_empty()) {
            cv.alpha_parts.push_back(cc.guard->kind == Formula::Kind::True ? f_false()
                                                                           : f_not(cc.guard));
            continue;
        }
        if (cc.body->kind == Formula::Kind::False) {
            if (!cc.set.member(NatInf(0)))
                cv.alpha_parts.push_back(cc.guard->kind == Formula::Kind::True ? f_false()
                                                                               : f_not(cc.guard));
            continue;
        }
        guarded.push_back({cc.guard, cc.set, cc.body});
    }
    for (auto& ac : cv.almost) {
        FormulaPtr body_neq = simplify(fold_eq(ac.body, false)); // counted over y != x only
        FormulaPtr beta_self = simplify(fold_eq(substitute_var(ac.body, Var::Y, Var::X), true));
        auto emit = [&](FormulaPtr chi, const Ups& T) {
            chi = simplify(chi);
            if (chi->kind == Formula::Kind::False) return;
            if (is_trivial_set(T)) return;
            if (T.is_empty()) {
                cv.alpha_parts.push_back(chi->kind == Formula::Kind::True ? f_false() : f_not(chi));
                return;
            }
            if (body_neq->kind == Formula::Kind::False) {
                // no y != x can ever be counted; the conjunct degenerates to 0 in T
                if (!T.member(NatInf(0)))
                    cv.alpha_parts.push_back(chi->kind == Formula::Kind::True ? f_false() : f_not(chi));
                return;
            }
            guarded.push_back({chi, T, body_neq});
        };
        if (beta_self->kind == Formula::Kind::False) {
            emit(f_true(), ac.set);
        } else if (beta_self->kind == Formula::Kind::True) {
            emit(f_true(), ac.set.shift_down());
        } else {
            emit(f_not(beta_self), ac.set);
            emit(beta_self, ac.set.shift_down());
        }
    }

    std::vector<Ups> sets;
    sets.reserve(guarded.size());
    for (auto& c : guarded) sets.push_back(c.set);
    auto [p, rewritten] = common_period(sets);

    NormalForm nf;
    nf.period = p;
    for (size_t i = 0; i < guarded.size(); i++) {
        FormulaPtr body = guarded[i].body;
        FormulaPtr beta;
        if (body->kind == Formula::Kind::BinaryAtom) {
            beta = body;
        } else {
            std::string g = cv.fresh_binary();
            beta = f_binary(g, Var::X, Var::Y);
            cv.definitions.push_back({g, true, body});
            cv.alpha_parts.push_back(f_and(f_implies(beta, body), f_implies(body, beta)));
        }
        nf.conjuncts.push_back({guarded[i].guard, beta, rewritten[i]});
    }

    nf.alpha = simplify(f_and_all(cv.alpha_parts));
    nf.sig = cv.sig;
    nf.fresh_unaries = cv.fresh_unaries;
    nf.fresh_binaries = cv.fresh_binaries;
    nf.definitions = cv.definitions;
    return nf;
}

FormulaPtr NormalForm::sentence() const {
    std::vector<FormulaPtr> parts;
    parts.push_back(f_forall(Var::X, f_forall(Var::Y, alpha)));
    for (auto& c : conjuncts) {
        FormulaPtr count = f_exists(c.set, Var::Y, f_and(c.beta, f_neq(Var::X, Var::Y)));
        parts.push_back(f_forall(Var::X, c.guarded() ? f_implies(c.guard, count) : count));
    }
    return f_and_all(parts);
}

std::string NormalForm::describe() const {
    std::ostringstream os;
    os << print_signature(sig) << "\n";
    os << print_formula(sentence()) << "\n";
    os << "# period p = " << period << "\n";
    os << "# fresh unary:";
    for (auto& u : fresh_unaries) os << " " << u;
    os << "\n# fresh binary:";
    for (auto& b : fresh_binaries) os << " " << b;
    os << "\n# conjuncts: " << conjuncts.size() << "\n";
    for (auto& c : conjuncts) {
        os << "#   ";
        if (c.guarded()) os << print_formula(c.guard) << " -> ";
        os << print_formula(c.beta) << " in " << c.set.str() << "\n";
    }
    return os.str();
}

Structure expand_with_definitions(const NormalForm& nf, const Structure& base) {
    Structure out = base;
    for (auto& def : nf.definitions) {
        if (def.is_binary) {
            out.binary[def.pred];
            for (size_t a = 0; a < out.domain_size; a++)
                for (size_t b = 0; b < out.domain_size; b++) {
                    VarAssignment va;
                    va.x = a;
                    va.y = b;
                    if (eval_formula(def.body, out, va)) out.set_binary(def.pred, a, b);
                }
        } else {
            out.unary[def.pred];
            for (size_t e = 0; e < out.domain_size; e++) {
                VarAssignment va;
                va.x = e;
                if (eval_formula(def.body, out, va)) out.set_unary(def.pred, e);
            }
        }
    }
    return out;
}

} // namespace fo2p
