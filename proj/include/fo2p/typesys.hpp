#pragma once

#include <map>
#include <string>
#include <vector>

#include "fo2p/counting.hpp"
#include "fo2p/normalform.hpp"

namespace fo2p {

// Truth assignment to the unary predicates (plus the diagonal pseudo-unaries
// r(x,x) that occur in alpha or in guards).
struct OneType {
    std::vector<bool> bits; // over unary predicate list, then diag predicate list
};

// Truth assignment to {r(x,y), r(y,x)} per binary predicate (orientation
// predicate last); always implicitly contains x != y.
struct TwoType {
    std::vector<std::pair<bool, bool>> bits;
};

// One behavior column: values on all (2-type, 1-type) cells. Cells untouched
// by every conjunct hold CountValue::Any; alpha-inconsistent cells hold 0.
struct GoodFunction {
    std::vector<CountValue> vals; // index = type_index * |Pi| + pi_index
};

struct TypeCaps {
    uint64_t max_one_types = 64;
    uint64_t max_two_types = 256;
    uint64_t max_goodfuncs = 20000;
};

struct TypeTables {
    Signature sig;                     // nf signature + orientation predicate
    std::string ord_pred;
    std::vector<std::string> diag_preds;
    uint64_t period = 1;
    FormulaPtr alpha;
    std::vector<NfConjunct> conjuncts;

    std::vector<OneType> pis;          // Pi
    std::vector<TwoType> types;        // E_1..E_t, then their reversals
    int t = 0;

    std::vector<std::vector<int>> beta_types;   // per conjunct: 2-type indices containing beta
    std::vector<std::vector<bool>> guard_holds; // [conjunct][pi]
    std::vector<bool> diag_ok;                  // [pi]
    std::vector<std::vector<bool>> diag_witness; // [pi] -> free-diagonal bits (by alpha binary order)
    std::vector<std::string> free_diag_preds;    // binaries in alpha without enumerated diag bit

    // quotient good functions, each attached to the 1-types it is good for
    std::vector<GoodFunction> goods;
    std::vector<std::vector<int>> goods_of_pi;  // [pi] -> indices into goods

    std::vector<bool> consist;                  // [pi][type][pi'] cache, both orientations

    int rev(int type_index) const { return type_index < t ? type_index + t : type_index - t; }
    int n_pi() const { return int(pis.size()); }
    int n_types() const { return 2 * t; }
    size_t cidx(int pi_x, int e, int pi_y) const {
        return (size_t(pi_x) * size_t(n_types()) + size_t(e)) * size_t(n_pi()) + size_t(pi_y);
    }

    bool alpha_holds(int pi_x, int type_index, int pi_y) const; // off-diagonal, one orientation
    bool alpha_holds_diag(int pi, const std::vector<bool>& free_bits) const;
    bool cell_consistent(int pi_x, int type_index, int pi_y) const; // both orientations

    // degree matrices for the Presburger side; columns = goods_of_pi[pi]
    DegreeMatrix Mpi(int pi) const;
    DegreeMatrix Mbar(int pi) const;
    DegreeMatrix Lpi(int pi, int towards_pi) const;
    DegreeMatrix Lbar(int pi, int towards_pi) const;

    std::string describe() const; // `types` CLI dump
};

// Types (1-types, oriented 2-types) only.
TypeTables enumerate_types(const NormalForm& nf, const TypeCaps& caps = {});

// Fills goods / goods_of_pi.
void enumerate_good_functions(TypeTables& tables, const TypeCaps& caps = {});

// alpha-incompatibility including the diagonal patch (spec surface; the
// enumeration prunes these pairs up front).
bool incompatible(const TypeTables& tables, int pi, const GoodFunction& g);

} // namespace fo2p
