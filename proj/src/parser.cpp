#include <cctype>

#include "fo2p/formula.hpp"

namespace fo2p {

namespace {

struct Lexer {
    const std::string& s;
    size_t pos = 0;

    explicit Lexer(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size()) {
            if (isspace((unsigned char)s[pos])) { pos++; continue; }
            if (s[pos] == '#') { // comment to end of line
                while (pos < s.size() && s[pos] != '\n') pos++;
                continue;
            }
            break;
        }
    }
    bool eof() { skip_ws(); return pos >= s.size(); }
    char peek() { skip_ws(); return pos < s.size() ? s[pos] : '\0'; }
    bool try_consume(const std::string& tok) {
        skip_ws();
        if (s.compare(pos, tok.size(), tok) == 0) {
            // keyword tokens must not run into identifier characters
            if (isalpha((unsigned char)tok[0])) {
                size_t end = pos + tok.size();
                if (end < s.size() && (isalnum((unsigned char)s[end]) || s[end] == '_')) return false;
            }
            pos += tok.size();
            return true;
        }
        return false;
    }
    void expect(const std::string& tok) {
        if (!try_consume(tok)) throw ParseError("expected '" + tok + "'", pos);
    }
    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && (isalnum((unsigned char)s[pos]) || s[pos] == '_')) pos++;
        if (pos == start) throw ParseError("expected identifier", pos);
        return s.substr(start, pos - start);
    }
    uint64_t number() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() && isdigit((unsigned char)s[pos])) pos++;
        if (pos == start) throw ParseError("expected number", pos);
        return std::stoull(s.substr(start, pos - start));
    }
};

struct Parser {
    Lexer lx;
    const Signature& sig;

    Parser(const std::string& text, const Signature& s, size_t start) : lx(text), sig(s) {
        lx.pos = start;
    }

    Var variable() {
        if (lx.try_consume("x")) return Var::X;
        if (lx.try_consume("y")) return Var::Y;
        throw ParseError("variable must be x or y", lx.pos);
    }

    Ups set_literal() {
        lx.expect("{");
        Ups s;
        if (!lx.try_consume("}")) {
            do {
                if (lx.try_consume("inf")) { s.has_inf = true; continue; }
                uint64_t a = lx.number();
                if (lx.try_consume("+")) {
                    uint64_t p = lx.number();
                    lx.expect("k");
                    // period 0 folds into the finite part
                    if (p == 0) s.finites.insert(a);
                    else s.periodics.insert({a, p});
                } else {
                    s.finites.insert(a);
                }
            } while (lx.try_consume(","));
            lx.expect("}");
        }
        s.normalize();
        return s;
    }

    FormulaPtr formula() { return implication(); }

    FormulaPtr implication() {
        FormulaPtr a = disjunction();
        if (lx.try_consume("->")) return f_implies(a, implication());
        return a;
    }

    FormulaPtr disjunction() {
        FormulaPtr a = conjunction();
        while (lx.try_consume("|")) a = f_or(a, conjunction());
        return a;
    }

    FormulaPtr conjunction() {
        FormulaPtr a = unary_level();
        while (lx.try_consume("&")) a = f_and(a, unary_level());
        return a;
    }

    FormulaPtr unary_level() {
        if (lx.try_consume("!")) return f_not(unary_level());
        if (lx.try_consume("forall")) {
            Var v = variable();
            lx.expect(".");
            return f_forall(v, formula());
        }
        if (lx.try_consume("exists")) {
            Ups s = lx.peek() == '{' ? set_literal() : Ups::at_least_one();
            Var v = variable();
            lx.expect(".");
            return f_exists(s, v, formula());
        }
        return atom();
    }

    FormulaPtr atom() {
        size_t at = lx.pos;
        if (lx.try_consume("(")) {
            FormulaPtr a = formula();
            lx.expect(")");
            return a;
        }
        if (lx.try_consume("true")) return f_true();
        if (lx.try_consume("false")) return f_false();
        // x = y / x != y, or a predicate atom
        if (lx.peek() == 'x' || lx.peek() == 'y') {
            size_t save = lx.pos;
            Var a = variable();
            if (lx.try_consume("!=")) return f_neq(a, variable());
            if (lx.try_consume("=")) return f_eq(a, variable());
            lx.pos = save;
        }
        std::string name = lx.ident();
        lx.expect("(");
        Var a = variable();
        if (lx.try_consume(",")) {
            Var b = variable();
            lx.expect(")");
            if (!sig.has_binary(name)) {
                if (sig.has_unary(name)) throw ParseError("arity mismatch for " + name, at);
                throw ParseError("unknown predicate " + name, at);
            }
            return f_binary(name, a, b);
        }
        lx.expect(")");
        if (!sig.has_unary(name)) {
            if (sig.has_binary(name)) throw ParseError("arity mismatch for " + name, at);
            throw ParseError("unknown predicate " + name, at);
        }
        return f_unary(name, a);
    }
};

Signature parse_header(Lexer& lx) {
    Signature sig;
    for (;;) {
        if (lx.try_consume("unary")) {
            if (!lx.try_consume(";")) {
                do { sig.unaries.push_back(lx.ident()); } while (lx.try_consume(","));
                lx.expect(";");
            }
        } else if (lx.try_consume("binary")) {
            if (!lx.try_consume(";")) {
                do { sig.binaries.push_back(lx.ident()); } while (lx.try_consume(","));
                lx.expect(";");
            }
        } else {
            break;
        }
    }
    return sig;
}

} // namespace

ParsedInput parse_input(const std::string& text) {
    Lexer lx(text);
    Signature sig = parse_header(lx);
    Parser p(text, sig, lx.pos);
    FormulaPtr f = p.formula();
    if (!p.lx.eof()) throw ParseError("trailing input", p.lx.pos);
    return {sig, f};
}

FormulaPtr parse_formula(const std::string& text, const Signature& sig) {
    Parser p(text, sig, 0);
    FormulaPtr f = p.formula();
    if (!p.lx.eof()) throw ParseError("trailing input", p.lx.pos);
    return f;
}

} // namespace fo2p
