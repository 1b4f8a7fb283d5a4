#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fo2p/ups.hpp"

namespace fo2p {

enum class Var : int { X = 0, Y = 1 };

inline Var other(Var v) { return v == Var::X ? Var::Y : Var::X; }
inline const char* var_name(Var v) { return v == Var::X ? "x" : "y"; }

struct Signature {
    std::vector<std::string> unaries;
    std::vector<std::string> binaries;

    bool has_unary(const std::string& p) const;
    bool has_binary(const std::string& p) const;
    int unary_index(const std::string& p) const;
    int binary_index(const std::string& p) const;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind {
        True, False,
        UnaryAtom,   // pred(v1)
        BinaryAtom,  // pred(v1, v2)
        Eq,          // v1 = v2
        Not, And, Or, Implies,
        Exists,      // exists{set} v1. lhs
        Forall       // forall v1. lhs
    };

    Kind kind;
    std::string pred;
    Var v1 = Var::X, v2 = Var::Y;
    FormulaPtr lhs, rhs;
    Ups set;
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_unary(std::string pred, Var v);
FormulaPtr f_binary(std::string pred, Var a, Var b);
FormulaPtr f_eq(Var a, Var b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_exists(Ups set, Var v, FormulaPtr body);
FormulaPtr f_forall(Var v, FormulaPtr body);
FormulaPtr f_neq(Var a, Var b);
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);

// Free variables as a 2-bit mask: bit 0 = x, bit 1 = y.
unsigned free_vars(const FormulaPtr& f);
inline bool is_sentence(const FormulaPtr& f) { return free_vars(f) == 0; }

bool is_quantifier_free(const FormulaPtr& f);

// Substitute variable `from` by `to` in a quantifier-free formula.
FormulaPtr substitute_var(const FormulaPtr& f, Var from, Var to);
// Swap x and y everywhere in a quantifier-free formula.
FormulaPtr swap_vars(const FormulaPtr& f);

// Constant folding: x=x -> true, boolean simplifications. Keeps semantics.
FormulaPtr simplify(const FormulaPtr& f);

// Structural equality.
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

std::string print_formula(const FormulaPtr& f);
std::string print_signature(const Signature& sig);

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

// Parses "unary P,Q; binary E;" header followed by a formula.
struct ParsedInput {
    Signature sig;
    FormulaPtr formula;
};
ParsedInput parse_input(const std::string& text);

// Parses a formula against a known signature.
FormulaPtr parse_formula(const std::string& text, const Signature& sig);

} // namespace fo2p
