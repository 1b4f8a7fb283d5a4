#include <algorithm>
#include <set>
#include <sstream>

#include "fo2p/pipeline.hpp"

namespace fo2p {

std::vector<FactAtom> parse_facts(const std::string& text) {
    std::vector<FactAtom> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // strip whitespace
        std::string s;
        for (char c : line)
            if (!isspace((unsigned char)c)) s += c;
        if (s.empty()) continue;
        auto lp = s.find('(');
        auto rp = s.find(')');
        if (lp == std::string::npos || rp == std::string::npos || rp < lp)
            throw std::runtime_error("facts: bad line: " + line);
        FactAtom a;
        a.pred = s.substr(0, lp);
        std::string args = s.substr(lp + 1, rp - lp - 1);
        std::istringstream as(args);
        std::string tok;
        while (std::getline(as, tok, ',')) a.constants.push_back(tok);
        if (a.constants.empty() || a.constants.size() > 2)
            throw std::runtime_error("facts: arity must be 1 or 2: " + line);
        out.push_back(std::move(a));
    }
    return out;
}

// The ground facts are folded into the sentence with one fresh name predicate
// per constant: exists{1} x N_i(x) pins an element for c_i (names may share an
// element, which realizes the equality completions), and each fact becomes a
// universally quantified implication over the names.
bool decide_with_facts(const FormulaPtr& phi, const Signature& sig,
                       const std::vector<FactAtom>& facts, const PipelineCaps& caps) {
    std::vector<std::string> constants;
    for (auto& a : facts)
        for (auto& c : a.constants)
            if (std::find(constants.begin(), constants.end(), c) == constants.end())
                constants.push_back(c);
    if (int(constants.size()) > caps.max_constants)
        throw CapExceeded("decide_with_facts: constant cap exceeded");

    Signature ext = sig;
    std::map<std::string, std::string> name_pred;
    for (auto& c : constants) {
        std::string n = "__n_" + c;
        while (ext.has_unary(n) || ext.has_binary(n)) n += "_";
        ext.unaries.push_back(n);
        name_pred[c] = n;
    }

    std::vector<FormulaPtr> parts{phi};
    for (auto& c : constants)
        parts.push_back(f_exists(Ups::single(1), Var::X, f_unary(name_pred[c], Var::X)));
    for (auto& a : facts) {
        if (a.constants.size() == 1) {
            if (!sig.has_unary(a.pred)) throw std::runtime_error("facts: unknown unary " + a.pred);
            parts.push_back(f_forall(
                Var::X, f_implies(f_unary(name_pred[a.constants[0]], Var::X),
                                  f_unary(a.pred, Var::X))));
        } else if (a.constants[0] == a.constants[1]) {
            if (!sig.has_binary(a.pred)) throw std::runtime_error("facts: unknown binary " + a.pred);
            parts.push_back(f_forall(
                Var::X, f_implies(f_unary(name_pred[a.constants[0]], Var::X),
                                  f_binary(a.pred, Var::X, Var::X))));
        } else {
            if (!sig.has_binary(a.pred)) throw std::runtime_error("facts: unknown binary " + a.pred);
            parts.push_back(f_forall(
                Var::X,
                f_forall(Var::Y, f_implies(f_and(f_unary(name_pred[a.constants[0]], Var::X),
                                                 f_unary(name_pred[a.constants[1]], Var::Y)),
                                           f_binary(a.pred, Var::X, Var::Y)))));
        }
    }
    Pipeline pl = Pipeline::make(f_and_all(parts), ext, caps);
    return pl.decide().finsat;
}

} // namespace fo2p
