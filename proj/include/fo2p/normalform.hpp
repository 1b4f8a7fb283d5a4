#pragma once

#include <string>
#include <vector>

#include "fo2p/formula.hpp"

namespace fo2p {

// One conjunct "forall x (guard(x) -> exists{S} y. beta(x,y) & x != y)".
// guard is quantifier-free over x (True when absent); beta is a single
// positive binary atom over x,y.
struct NfConjunct {
    FormulaPtr guard;
    FormulaPtr beta;
    Ups set;

    bool guarded() const { return guard->kind != Formula::Kind::True; }
};

// Defining formula of a fresh predicate: for a unary q the body is a formula
// over x (q(x) <-> body); for a binary g over x,y (g(x,y) <-> body).
struct FreshDefinition {
    std::string pred;
    bool is_binary = false;
    FormulaPtr body;
};

struct NormalForm {
    FormulaPtr alpha;                     // quantifier-free, over x,y
    std::vector<NfConjunct> conjuncts;
    uint64_t period = 1;                  // common period of all periodic parts
    Signature sig;                        // original + fresh predicates
    std::vector<std::string> fresh_unaries;
    std::vector<std::string> fresh_binaries;
    std::vector<FreshDefinition> definitions; // in introduction order

    FormulaPtr sentence() const;
    std::string describe() const;         // text dump used by the `nf` CLI subcommand
};

// The definitional expansion of a structure over the original signature:
// interprets each fresh predicate by its defining formula. Every model of the
// input sentence expands this way to a model of the normal form.
struct Structure;
Structure expand_with_definitions(const NormalForm& nf, const Structure& base);

// Scott normal form conversion. The result is satisfiable / finitely
// satisfiable over domains of size >= 1 exactly when phi is, and every model
// of phi expands to a model of the result over the same domain (and every
// model of the result reducts to one of phi). Size-0 structures are decided
// separately by evaluating phi on the empty structure.
NormalForm to_scott_nf(const FormulaPtr& phi, const Signature& sig);

// lcm of all nonzero periods (1 if none), plus each set rewritten to that period.
std::pair<uint64_t, std::vector<Ups>> common_period(const std::vector<Ups>& sets);

} // namespace fo2p
