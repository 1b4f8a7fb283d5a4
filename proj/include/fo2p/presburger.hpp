#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fo2p/counting.hpp"
#include "fo2p/nat_inf.hpp"

namespace fo2p {

// Linear term over N_inf: constant + sum of natural-scalar multiples of
// variables. Subtraction-free by construction.
struct PTerm {
    uint64_t cst = 0;
    std::map<int, uint64_t> coeff; // var index -> coefficient (> 0)

    PTerm() = default;
    explicit PTerm(uint64_t c) : cst(c) {}
    static PTerm var(int v) { PTerm t; t.coeff[v] = 1; return t; }

    PTerm& add(const PTerm& o);
    PTerm& add_var(int v, uint64_t c = 1);
    PTerm& add_const(uint64_t c) { cst += c; return *this; }
    bool is_const() const { return coeff.empty(); }
    std::string str(const std::vector<std::string>& names) const;
};

enum class GraphKind { Bireg, BiregC, Direg, DiregC };

struct GraphConstraint {
    GraphKind kind;
    DegreeMatrix A, B;
    std::vector<PTerm> xs, ys; // ys unused for digraphs
};

struct PAtom {
    enum class Kind { Eq, Le, IsInf, NotInf, Graph };
    Kind kind;
    PTerm lhs, rhs;                         // Eq/Le; IsInf/NotInf use lhs
    std::shared_ptr<GraphConstraint> graph; // Kind::Graph
};

struct PFormula;
using PFormulaPtr = std::shared_ptr<const PFormula>;

struct PFormula {
    enum class Kind { True, False, Atom, And, Or, Not };
    Kind kind = Kind::True;
    PAtom atom;
    std::vector<PFormulaPtr> children;
};

PFormulaPtr p_true();
PFormulaPtr p_false();
PFormulaPtr p_atom(PAtom a);
PFormulaPtr p_eq(PTerm l, PTerm r);
PFormulaPtr p_le(PTerm l, PTerm r);
PFormulaPtr p_is_inf(PTerm t);
PFormulaPtr p_not_inf(PTerm t);
PFormulaPtr p_not(PFormulaPtr f);
PFormulaPtr p_and(std::vector<PFormulaPtr> fs);
PFormulaPtr p_or(std::vector<PFormulaPtr> fs);

// Existential Presburger formula over N / N_inf: a variable pool, a list of
// free variables (the rest are existentially quantified up front) and a
// quantifier-free body.
struct PresFormula {
    std::vector<std::string> var_names;
    std::vector<bool> is_free;
    PFormulaPtr body = p_true();

    int add_var(const std::string& name, bool free = false);
    int fresh_var(const std::string& hint); // existential
    size_t num_vars() const { return var_names.size(); }
    std::vector<int> free_vars() const;

    void conjoin(PFormulaPtr f);
    std::string str() const;
};

// Total assignment of pool variables.
struct PAssignment {
    std::vector<NatInf> values;
    NatInf eval(const PTerm& t) const;
    std::string str(const PresFormula& f, bool free_only = true) const;
};

enum class SolveMode { NAT, NAT_INF };

enum class SolveStatus { SAT, UNSAT, ABORT };

struct SolveOptions {
    uint64_t value_bound = 64;      // per-variable search ceiling
    uint64_t step_budget = 80'000'000;
    bool audit = true;              // re-check SAT witnesses with eval_pformula
};

struct SolveResult {
    SolveStatus status = SolveStatus::UNSAT;
    PAssignment assignment;        // valid when SAT
    uint64_t steps = 0;
};

// Truth of the body under a total assignment (N_inf semantics; graph atoms
// are decided by the regraph feasibility engine).
bool eval_pformula(const PresFormula& f, const PAssignment& a);

SolveResult solve(const PresFormula& f, SolveMode mode, const SolveOptions& opts = {});

// SMT-LIB 2 export over linear integer arithmetic. Graph atoms are expanded
// to pure Presburger first (cap-guarded); infinity is compiled away with
// per-variable infinity flags.
std::string to_smtlib(const PresFormula& f, SolveMode mode);

} // namespace fo2p
