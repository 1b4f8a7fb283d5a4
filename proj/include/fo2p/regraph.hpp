#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fo2p/counting.hpp"
#include "fo2p/presburger.hpp"

namespace fo2p {

// ---------------------------------------------------------------------------
// Concrete graphs (realizer output)

// t-color bipartite graph with witness partition labels.
struct ColoredBipartiteGraph {
    int colors = 0;
    std::vector<int> left_part, right_part;            // vertex -> column index
    // edges[c] = set of (left, right)
    std::vector<std::vector<std::pair<int, int>>> edges;

    std::string to_dot() const;
    std::string to_json() const;
};

// t-color digraph, no self-loops, no anti-parallel colored pairs.
struct ColoredDigraph {
    int colors = 0;
    std::vector<int> part;                             // vertex -> column index
    std::vector<std::vector<std::pair<int, int>>> edges; // edges[c] = (from, to)

    std::string to_dot() const;
    std::string to_json() const;
};

// ---------------------------------------------------------------------------
// Feasibility engine: decides graph existence at concrete sizes. This is the
// recursive, memoized form of the Phi^r machinery; formula builders attach it
// to Presburger formulas as a graph constraint atom.

struct RegraphCaps {
    uint64_t max_nodes = 40'000'000;  // memo/search step budget
    int max_colors = 600;
    int max_cols = 4096;
};

// Is there an A|B-biregular graph of size M|N (complete if requested)?
// A: t x m, B: t x n, sizes over N_inf.
bool bireg_feasible(const DegreeMatrix& A, const DegreeMatrix& B,
                    const std::vector<NatInf>& M, const std::vector<NatInf>& N,
                    bool complete, const RegraphCaps& caps = {});

// Is there an A|B-regular digraph of size M (A = indegrees, B = outdegrees)?
bool direg_feasible(const DegreeMatrix& A, const DegreeMatrix& B,
                    const std::vector<NatInf>& M, bool complete,
                    const RegraphCaps& caps = {});

void clear_feasibility_cache();

// ---------------------------------------------------------------------------
// Formula builders (spec surface). Each returns the graph constraint atom
// conjoined with the linear necessary conditions (row handshakes with mod-p
// slack, completeness column conditions, empty-side compatibility, infinity
// side conditions) so that a solver can propagate without enumerating.

PresFormula bireg_formula(const DegreeMatrix& A, const DegreeMatrix& B);
PresFormula bireg_general(const DegreeMatrix& A, const DegreeMatrix& B);  // alias, any matrices
PresFormula biregc_formula(const DegreeMatrix& A, const DegreeMatrix& B);
PresFormula direg_formula(const DegreeMatrix& A, const DegreeMatrix& B);
PresFormula diregc_formula(const DegreeMatrix& A, const DegreeMatrix& B);

// In-place builders against an existing pool, with explicit argument terms.
PFormulaPtr build_bireg(PresFormula& f, GraphKind kind,
                        const DegreeMatrix& A, const DegreeMatrix& B,
                        const std::vector<PTerm>& xs, const std::vector<PTerm>& ys);

// One edge-count handshake between two weighted entry lists (offset sums
// agree modulo the period, or both sides can be infinite). Used for the
// per-conjunct global handshakes of the PREB assembly.
PFormulaPtr entries_handshake(PresFormula& f, const std::vector<CountValue>& le,
                              const std::vector<PTerm>& largs,
                              const std::vector<CountValue>& re,
                              const std::vector<PTerm>& rargs, uint64_t p);

// Fully expanded pure-Presburger formula (no graph atoms): the paper's
// case-combination for simple matrices, behavior-function decomposition
// otherwise. Used for SMT-LIB export and for engine-vs-formula equivalence
// tests; guarded by caps.
struct ExpandCaps {
    uint64_t max_atoms = 2'000'000;
    uint64_t max_behaviors = 4096;
};
PFormulaPtr expand_graph_constraint(PresFormula& f, const GraphConstraint& gc,
                                    const ExpandCaps& caps = {});

// ---------------------------------------------------------------------------
// Realizers. Sizes must be finite; the corresponding feasibility must hold.

ColoredBipartiteGraph realize_bipartite(const DegreeMatrix& A, const DegreeMatrix& B,
                                        const std::vector<uint64_t>& M,
                                        const std::vector<uint64_t>& N, bool complete);

ColoredDigraph realize_digraph(const DegreeMatrix& A, const DegreeMatrix& B,
                               const std::vector<uint64_t>& M, bool complete);

// Degree audits used internally after realization and by tests.
bool audit_bipartite(const ColoredBipartiteGraph& g, const DegreeMatrix& A,
                     const DegreeMatrix& B, const std::vector<uint64_t>& M,
                     const std::vector<uint64_t>& N, bool complete);
bool audit_digraph(const ColoredDigraph& g, const DegreeMatrix& A,
                   const DegreeMatrix& B, const std::vector<uint64_t>& M, bool complete);

// Matrix spec file: "p = 2", "A:"/"B:" headers, rows of entries a | a+pk | inf.
struct MatrixSpec {
    DegreeMatrix A, B;
};
MatrixSpec parse_matrix_spec(const std::string& text);

} // namespace fo2p
