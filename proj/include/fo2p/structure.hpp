#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fo2p/formula.hpp"

namespace fo2p {

// Finite relational structure over a signature; domain is {0..domain_size-1}.
struct Structure {
    size_t domain_size = 0;
    std::map<std::string, std::set<size_t>> unary;
    std::map<std::string, std::set<std::pair<size_t, size_t>>> binary;

    bool holds_unary(const std::string& p, size_t e) const {
        auto it = unary.find(p);
        return it != unary.end() && it->second.count(e);
    }
    bool holds_binary(const std::string& p, size_t a, size_t b) const {
        auto it = binary.find(p);
        return it != binary.end() && it->second.count({a, b});
    }
    void set_unary(const std::string& p, size_t e) { unary[p].insert(e); }
    void set_binary(const std::string& p, size_t a, size_t b) { binary[p].insert({a, b}); }

    // Checks index bounds and that the signature covers all interpreted predicates.
    void validate(const Signature& sig) const;

    // Structure with only the predicates of `sig` kept.
    Structure reduct(const Signature& sig) const;

    std::string to_json() const;
    std::string to_dot() const;
};

struct VarAssignment {
    std::optional<size_t> x, y;
    size_t get(Var v) const;
    VarAssignment with(Var v, size_t e) const;
};

// Truth of f on A under a partial assignment covering f's free variables.
// exists{S} counts witnesses and tests membership in S.
bool eval_formula(const FormulaPtr& f, const Structure& A, const VarAssignment& va = {});

} // namespace fo2p
