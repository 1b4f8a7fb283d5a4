#pragma once

#include <vector>

#include "fo2p/counting.hpp"
#include "fo2p/structure.hpp"

namespace fo2p {

// Independent brute-force references. Nothing here consults the pipeline;
// shared code is limited to the formula AST and eval_formula.

struct OracleCaps {
    uint64_t max_structures = 80'000'000;
    uint64_t max_models = 1'000'000;
};

// All models of phi with domain {0..n-1}, up to the cap.
std::vector<Structure> brute_models(const FormulaPtr& phi, const Signature& sig, size_t n,
                                    const OracleCaps& caps = {});
bool brute_has_model(const FormulaPtr& phi, const Signature& sig, size_t n,
                     const OracleCaps& caps = {});

// Exhaustive colored-graph search. For directed graphs the digraph
// assumptions hold: no self-loops, no anti-parallel colored pairs.
bool brute_bireg(const DegreeMatrix& A, const DegreeMatrix& B,
                 const std::vector<uint64_t>& M, const std::vector<uint64_t>& N,
                 bool complete);
bool brute_direg(const DegreeMatrix& A, const DegreeMatrix& B,
                 const std::vector<uint64_t>& M, bool complete);

// Second, independently written formula evaluator (for cross-checking
// eval_formula): substitution-based rather than environment-based.
bool eval_formula_reference(const FormulaPtr& f, const Structure& A);

} // namespace fo2p
