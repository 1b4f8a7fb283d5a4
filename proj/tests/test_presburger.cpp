#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fo2p/presburger.hpp"

using namespace fo2p;

TEST_CASE("solve simple equations") {
    // exists z. z != inf & 2 + z = 5
    PresFormula f;
    int z = f.add_var("z", true);
    PTerm lhs(2);
    lhs.add_var(z);
    f.conjoin(p_not_inf(PTerm::var(z)));
    f.conjoin(p_eq(lhs, PTerm(5)));
    auto res = solve(f, SolveMode::NAT);
    REQUIRE(res.status == SolveStatus::SAT);
    CHECK(res.assignment.values[size_t(z)] == NatInf(3));
}

TEST_CASE("z + 1 = z needs infinity") {
    PresFormula f;
    int z = f.add_var("z", true);
    PTerm lhs = PTerm::var(z);
    lhs.add_const(1);
    f.conjoin(p_eq(lhs, PTerm::var(z)));
    CHECK(solve(f, SolveMode::NAT).status == SolveStatus::UNSAT);
    auto res = solve(f, SolveMode::NAT_INF);
    REQUIRE(res.status == SolveStatus::SAT);
    CHECK(res.assignment.values[size_t(z)].is_inf());
}

TEST_CASE("periodic equation witness") {
    // 2*x0 + x1 + 2z = 3y at x0=1, x1=2, y=2 -> z = 1
    PresFormula f;
    int z = f.add_var("z", true);
    PTerm lhs(2 * 1 + 2);
    lhs.add_var(z, 2);
    f.conjoin(p_eq(lhs, PTerm(3 * 2)));
    f.conjoin(p_not_inf(PTerm::var(z)));
    auto res = solve(f, SolveMode::NAT);
    REQUIRE(res.status == SolveStatus::SAT);
    CHECK(res.assignment.values[size_t(z)] == NatInf(1));
}

TEST_CASE("eval_assignment conventions") {
    PresFormula f;
    int x = f.add_var("x", true);
    PAssignment a;
    a.values = {NatInf(5)};
    // x <= inf
    f.body = p_le(PTerm::var(x), PTerm(NatInf::kInf)); // constant inf term
    // constant terms cannot hold inf; use IsInf-free comparison instead
    f.body = p_le(PTerm::var(x), PTerm::var(x));
    CHECK(eval_pformula(f, a));

    PTerm xp1 = PTerm::var(x);
    xp1.add_const(1);
    f.body = p_eq(PTerm::var(x), xp1);
    CHECK(!eval_pformula(f, a));
    a.values = {NatInf::inf()};
    CHECK(eval_pformula(f, a));
}

namespace {

// brute-force evaluation over all assignments with values <= bound
bool exhaustive_sat(const PresFormula& f, uint64_t bound, bool allow_inf) {
    size_t n = f.num_vars();
    std::vector<NatInf> vals(n, NatInf(0));
    std::function<bool(size_t)> go = [&](size_t i) -> bool {
        if (i == n) {
            PAssignment a;
            a.values = vals;
            return eval_pformula(f, a);
        }
        for (uint64_t v = 0; v <= bound; v++) {
            vals[i] = NatInf(v);
            if (go(i + 1)) return true;
        }
        if (allow_inf) {
            vals[i] = NatInf::inf();
            if (go(i + 1)) return true;
        }
        return false;
    };
    return go(0);
}

PresFormula random_instance(std::mt19937& rng, int nvars, uint64_t bound) {
    PresFormula f;
    for (int v = 0; v < nvars; v++) f.add_var("v" + std::to_string(v), true);
    auto term = [&]() {
        PTerm t(rng() % 4);
        int k = 1 + int(rng() % 2);
        for (int i = 0; i < k; i++) t.add_var(int(rng() % nvars), 1 + rng() % 3);
        return t;
    };
    auto atom = [&]() -> PFormulaPtr {
        switch (rng() % 4) {
            case 0: return p_eq(term(), term());
            case 1: return p_le(term(), term());
            case 2: return p_not(p_eq(term(), term()));
            default: return p_le(term(), PTerm(rng() % (2 * bound + 1)));
        }
    };
    int clauses = 1 + int(rng() % 4);
    std::vector<PFormulaPtr> cs;
    for (int c = 0; c < clauses; c++) {
        if (rng() % 3 == 0) {
            cs.push_back(p_or({atom(), atom()}));
        } else {
            cs.push_back(atom());
        }
    }
    // bound every variable so UNSAT-at-bound is definitive
    for (int v = 0; v < nvars; v++) cs.push_back(p_le(PTerm::var(v), PTerm(bound)));
    f.conjoin(p_and(cs));
    return f;
}

} // namespace

TEST_CASE("solver matches exhaustive search on 200 random bounded instances") {
    std::mt19937 rng(42);
    int disagreements = 0;
    for (int round = 0; round < 200; round++) {
        uint64_t bound = 2 + rng() % 3;
        PresFormula f = random_instance(rng, 2 + int(rng() % 3), bound);
        SolveOptions opts;
        opts.value_bound = bound;
        auto res = solve(f, SolveMode::NAT, opts);
        bool expect = exhaustive_sat(f, bound, false);
        if ((res.status == SolveStatus::SAT) != expect) disagreements++;
        if (res.status == SolveStatus::SAT) CHECK(eval_pformula(f, res.assignment));
    }
    CHECK(disagreements == 0);
}

TEST_CASE("infinity guess soundness") {
    std::mt19937 rng(97);
    for (int round = 0; round < 60; round++) {
        uint64_t bound = 2 + rng() % 3;
        PresFormula f = random_instance(rng, 2, bound);
        SolveOptions opts;
        opts.value_bound = bound;
        auto inf_res = solve(f, SolveMode::NAT_INF, opts);
        if (inf_res.status == SolveStatus::SAT) {
            bool all_finite = true;
            for (auto& v : inf_res.assignment.values)
                if (v.is_inf()) all_finite = false;
            if (all_finite) CHECK(solve(f, SolveMode::NAT, opts).status == SolveStatus::SAT);
        }
    }
}

TEST_CASE("smtlib export emits well-formed text") {
    PresFormula f;
    int x = f.add_var("x", true);
    int y = f.add_var("y", false);
    PTerm t = PTerm::var(x);
    t.add_var(y, 2);
    f.conjoin(p_eq(t, PTerm(4)));
    std::string nat = to_smtlib(f, SolveMode::NAT);
    CHECK(nat.find("(set-logic QF_LIA)") != std::string::npos);
    CHECK(nat.find("(check-sat)") != std::string::npos);
    std::string ni = to_smtlib(f, SolveMode::NAT_INF);
    CHECK(ni.find("Bool") != std::string::npos);
}
