#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fo2p/presburger.hpp"
#include "fo2p/regraph.hpp"
#include "fo2p/structure.hpp"
#include "fo2p/typesys.hpp"

namespace fo2p {

// Census vector: one count per compatible (1-type, behavior column) pair.
struct Profile {
    std::vector<std::vector<NatInf>> counts; // [pi][index into goods_of_pi[pi]]
    NatInf total() const;
    std::string to_json(const TypeTables& tb) const;
};

struct PipelineCaps {
    TypeCaps types;
    SolveOptions solve;
    RegraphCaps regraph;
    int max_constants = 3;
};

// Compiled PREB_phi: the variable pool plus the (pi, g) variable map.
struct Preb {
    PresFormula formula;
    std::vector<std::vector<int>> var_of; // [pi][col]
    PTerm total;                          // sum of all X variables
};

Preb compile_preb(const NormalForm& nf, const TypeTables& tb);

struct DecideResult {
    bool sat = false, finsat = false;
    std::optional<Profile> profile; // a NAT witness when finsat, else a NAT_INF witness
};

struct Pipeline {
    Signature sig;        // original user signature
    FormulaPtr phi;
    NormalForm nf;
    TypeTables tables;
    Preb preb;
    PipelineCaps caps;

    static Pipeline make(const FormulaPtr& phi, const Signature& sig, const PipelineCaps& caps = {});

    DecideResult decide() const;
    // models of size exactly n exist (n >= 1 via PREB, n = 0 by evaluation)
    bool size_satisfiable(uint64_t n) const;
    std::vector<uint64_t> spectrum_enumerate(uint64_t up_to) const;
    PresFormula spectrum_formula() const; // free variable "n"

    // Builds a finite structure matching the profile exactly; verifies the
    // normal-form sentence and the original sentence before returning the
    // reduct to the user signature.
    Structure build_model(const Profile& profile) const;

    Profile profile_from(const PAssignment& a) const;
};

// Finite satisfiability of phi /\ ground facts (desk scale).
struct FactAtom {
    std::string pred;
    std::vector<std::string> constants; // size 1 or 2
};
std::vector<FactAtom> parse_facts(const std::string& text);
bool decide_with_facts(const FormulaPtr& phi, const Signature& sig,
                       const std::vector<FactAtom>& facts, const PipelineCaps& caps = {});

} // namespace fo2p
