#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fo2p/formula.hpp"
#include "fo2p/oracle.hpp"
#include "fo2p/structure.hpp"

using namespace fo2p;

namespace {

Signature sig_pe() {
    Signature s;
    s.unaries = {"P"};
    s.binaries = {"E"};
    return s;
}

} // namespace

TEST_CASE("ups membership") {
    Ups even = Ups::linear(0, 2);
    CHECK(even.member(NatInf(4)));
    CHECK(!even.member(NatInf(3)));
    CHECK(!even.member(NatInf::inf()));
    CHECK(Ups::infinity().member(NatInf::inf()));
    Ups s = Ups::single(3).union_with(Ups::linear(1, 2));
    CHECK(s.member(NatInf(5)));
    CHECK(s.member(NatInf(3)));
    CHECK(!s.member(NatInf(0)));
}

TEST_CASE("ups complement / shift") {
    Ups even = Ups::linear(0, 2);
    Ups odd_inf = even.complement();
    for (uint64_t n = 0; n <= 20; n++)
        CHECK(odd_inf.member(NatInf(n)) == (n % 2 == 1));
    CHECK(odd_inf.member(NatInf::inf()));

    CHECK(Ups::empty().complement().member(NatInf(0)));
    CHECK(Ups::empty().complement().member(NatInf::inf()));
    Ups just_inf = Ups::infinity();
    Ups fin = just_inf.complement();
    CHECK(fin.member(NatInf(7)));
    CHECK(!fin.member(NatInf::inf()));

    Ups s = Ups::single(3).union_with(Ups::linear(1, 2));
    Ups down = s.shift_down();
    CHECK(down.member(NatInf(2)));
    CHECK(down.member(NatInf(0)));
    CHECK(down.member(NatInf(4)));
    CHECK(Ups::single(0).shift_down().is_empty());
    CHECK(Ups::infinity().shift_down().member(NatInf::inf()));
}

TEST_CASE("ups complement is pointwise negation (generator)") {
    std::mt19937 rng(7);
    for (int round = 0; round < 200; round++) {
        Ups s;
        int nf = int(rng() % 3);
        for (int i = 0; i < nf; i++) s.finites.insert(rng() % 8);
        int np = int(rng() % 3);
        uint64_t maxp = 1;
        for (int i = 0; i < np; i++) {
            uint64_t p = 1 + rng() % 4;
            maxp = std::max(maxp, p);
            s.periodics.insert({rng() % 6, p});
        }
        s.has_inf = rng() % 2;
        s.normalize();
        Ups c = s.complement();
        uint64_t limit = 3 * maxp + 8 + 2;
        for (uint64_t n = 0; n <= limit; n++)
            CHECK(c.member(NatInf(n)) == !s.member(NatInf(n)));
        CHECK(c.member(NatInf::inf()) == !s.member(NatInf::inf()));
    }
}

TEST_CASE("parser round trips and errors") {
    Signature sig = sig_pe();
    auto f = parse_formula("forall x. exists{0+2k} y. (E(x,y) & x != y)", sig);
    CHECK(f->kind == Formula::Kind::Forall);
    CHECK(f->lhs->kind == Formula::Kind::Exists);
    CHECK(f->lhs->set == Ups::linear(0, 2));
    std::string printed = print_formula(f);
    auto f2 = parse_formula(printed, sig);
    CHECK(formula_equal(f, f2));

    auto g = parse_formula("exists{3} x. P(x)", sig);
    CHECK(g->kind == Formula::Kind::Exists);
    CHECK(g->set == Ups::single(3));

    auto h = parse_formula("exists{} x. P(x)", sig);
    CHECK(h->set.is_empty());

    CHECK_THROWS_AS(parse_formula("Q(x)", sig), ParseError);
    CHECK_THROWS_AS(parse_formula("P(x,y)", sig), ParseError);
    CHECK_THROWS_AS(parse_formula("E(x)", sig), ParseError);
    CHECK_THROWS_AS(parse_formula("forall z. P(z)", sig), ParseError);
}

TEST_CASE("parse input header") {
    auto in = parse_input("unary P,Q; binary E;\nforall x. P(x) -> exists y. E(x,y)");
    CHECK(in.sig.unaries.size() == 2);
    CHECK(in.sig.binaries.size() == 1);
    CHECK(in.formula->kind == Formula::Kind::Forall);
    // bare exists means at least one
    CHECK(in.formula->lhs->rhs->set == Ups::at_least_one());
}

TEST_CASE("print/parse round trip on random formulas") {
    Signature sig = sig_pe();
    std::mt19937 rng(11);
    std::function<FormulaPtr(int, unsigned)> gen = [&](int depth, unsigned bound) -> FormulaPtr {
        int pick = int(rng() % (depth > 0 ? 8 : 4));
        Var v1 = rng() % 2 ? Var::X : Var::Y;
        Var v2 = rng() % 2 ? Var::X : Var::Y;
        switch (pick) {
            case 0: return f_unary("P", v1);
            case 1: return f_binary("E", v1, v2);
            case 2: return f_eq(v1, v2);
            case 3: return rng() % 2 ? f_true() : f_false();
            case 4: return f_not(gen(depth - 1, bound));
            case 5: return f_and(gen(depth - 1, bound), gen(depth - 1, bound));
            case 6: return f_or(gen(depth - 1, bound), gen(depth - 1, bound));
            default: {
                Ups s = rng() % 2 ? Ups::linear(rng() % 2, 1 + rng() % 3) : Ups::single(rng() % 3);
                return f_exists(s, v1, gen(depth - 1, bound));
            }
        }
    };
    for (int i = 0; i < 300; i++) {
        auto f = gen(3, 0);
        auto f2 = parse_formula(print_formula(f), sig);
        CHECK(formula_equal(f, f2));
    }
}

TEST_CASE("eval: Eulerian examples") {
    Signature sig;
    sig.binaries = {"E"};
    auto euler = parse_formula("forall x. exists{0+2k} y. (E(x,y) & x != y)", sig);

    Structure one;
    one.domain_size = 1;
    CHECK(eval_formula(euler, one));

    Structure two;
    two.domain_size = 2;
    two.set_binary("E", 0, 1);
    CHECK(!eval_formula(euler, two)); // vertex 0 has exactly one E-neighbor

    Structure three;
    three.domain_size = 3;
    auto exact3 = parse_formula("exists{3} x. P(x)", sig_pe());
    Structure allp;
    allp.domain_size = 3;
    for (size_t e = 0; e < 3; e++) allp.set_unary("P", e);
    CHECK(eval_formula(exact3, allp));
}

TEST_CASE("eval conventions: full set and empty set") {
    Signature sig = sig_pe();
    auto all = parse_formula("exists{0+1k, inf} x. P(x)", sig);
    auto none = parse_formula("exists{} x. P(x)", sig);
    for (size_t n = 0; n <= 3; n++) {
        Structure A;
        A.domain_size = n;
        CHECK(eval_formula(all, A));
        CHECK(!eval_formula(none, A));
    }
}

TEST_CASE("eval agrees with the reference evaluator on random formulas") {
    Signature sig = sig_pe();
    std::mt19937 rng(23);
    std::function<FormulaPtr(int)> gen = [&](int depth) -> FormulaPtr {
        int pick = int(rng() % (depth > 0 ? 8 : 4));
        Var v1 = rng() % 2 ? Var::X : Var::Y;
        Var v2 = rng() % 2 ? Var::X : Var::Y;
        switch (pick) {
            case 0: return f_unary("P", v1);
            case 1: return f_binary("E", v1, v2);
            case 2: return f_eq(v1, v2);
            case 3: return f_true();
            case 4: return f_not(gen(depth - 1));
            case 5: return f_and(gen(depth - 1), gen(depth - 1));
            case 6: return f_forall(v1, gen(depth - 1));
            default: {
                Ups s = rng() % 2 ? Ups::linear(rng() % 2, 1 + rng() % 2) : Ups::single(rng() % 4);
                return f_exists(s, v1, gen(depth - 1));
            }
        }
    };
    for (int round = 0; round < 150; round++) {
        FormulaPtr f = gen(3);
        // close it
        f = f_forall(Var::X, f_forall(Var::Y, f->kind == Formula::Kind::Forall ? f->lhs : f));
        size_t n = rng() % 4;
        Structure A;
        A.domain_size = n;
        for (size_t e = 0; e < n; e++)
            if (rng() % 2) A.set_unary("P", e);
        for (size_t i = 0; i < n; i++)
            for (size_t j = 0; j < n; j++)
                if (rng() % 2) A.set_binary("E", i, j);
        CHECK(eval_formula(f, A) == eval_formula_reference(f, A));
    }
}
