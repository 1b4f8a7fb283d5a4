#include "fo2p/structure.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fo2p {

void Structure::validate(const Signature& sig) const {
    for (auto& [p, es] : unary) {
        if (!sig.has_unary(p)) throw std::runtime_error("structure: unknown unary " + p);
        for (size_t e : es)
            if (e >= domain_size) throw std::runtime_error("structure: unary index out of range");
    }
    for (auto& [p, ps] : binary) {
        if (!sig.has_binary(p)) throw std::runtime_error("structure: unknown binary " + p);
        for (auto& [a, b] : ps)
            if (a >= domain_size || b >= domain_size)
                throw std::runtime_error("structure: binary index out of range");
    }
}

Structure Structure::reduct(const Signature& sig) const {
    Structure out;
    out.domain_size = domain_size;
    for (auto& p : sig.unaries) {
        auto it = unary.find(p);
        out.unary[p] = it == unary.end() ? std::set<size_t>{} : it->second;
    }
    for (auto& p : sig.binaries) {
        auto it = binary.find(p);
        out.binary[p] = it == binary.end() ? std::set<std::pair<size_t, size_t>>{} : it->second;
    }
    return out;
}

std::string Structure::to_json() const {
    nlohmann::ordered_json j;
    j["domain_size"] = domain_size;
    j["unary"] = nlohmann::ordered_json::object();
    for (auto& [p, es] : unary) j["unary"][p] = std::vector<size_t>(es.begin(), es.end());
    j["binary"] = nlohmann::ordered_json::object();
    for (auto& [p, ps] : binary) {
        auto arr = nlohmann::ordered_json::array();
        for (auto& [a, b] : ps) arr.push_back({a, b});
        j["binary"][p] = arr;
    }
    return j.dump(2);
}

std::string Structure::to_dot() const {
    std::ostringstream os;
    os << "digraph structure {\n";
    for (size_t e = 0; e < domain_size; e++) {
        std::string label = std::to_string(e);
        for (auto& [p, es] : unary)
            if (es.count(e)) label += " " + p;
        os << "  n" << e << " [label=\"" << label << "\"];\n";
    }
    for (auto& [p, ps] : binary)
        for (auto& [a, b] : ps)
            os << "  n" << a << " -> n" << b << " [label=\"" << p << "\"];\n";
    os << "}\n";
    return os.str();
}

size_t VarAssignment::get(Var v) const {
    auto& slot = v == Var::X ? x : y;
    if (!slot) throw std::runtime_error("eval: unbound variable " + std::string(var_name(v)));
    return *slot;
}

VarAssignment VarAssignment::with(Var v, size_t e) const {
    VarAssignment out = *this;
    (v == Var::X ? out.x : out.y) = e;
    return out;
}

bool eval_formula(const FormulaPtr& f, const Structure& A, const VarAssignment& va) {
    using K = Formula::Kind;
    switch (f->kind) {
        case K::True: return true;
        case K::False: return false;
        case K::UnaryAtom: return A.holds_unary(f->pred, va.get(f->v1));
        case K::BinaryAtom: return A.holds_binary(f->pred, va.get(f->v1), va.get(f->v2));
        case K::Eq: return va.get(f->v1) == va.get(f->v2);
        case K::Not: return !eval_formula(f->lhs, A, va);
        case K::And: return eval_formula(f->lhs, A, va) && eval_formula(f->rhs, A, va);
        case K::Or: return eval_formula(f->lhs, A, va) || eval_formula(f->rhs, A, va);
        case K::Implies: return !eval_formula(f->lhs, A, va) || eval_formula(f->rhs, A, va);
        case K::Exists: {
            uint64_t count = 0;
            for (size_t e = 0; e < A.domain_size; e++)
                if (eval_formula(f->lhs, A, va.with(f->v1, e))) count++;
            return f->set.member(NatInf(count));
        }
        case K::Forall: {
            for (size_t e = 0; e < A.domain_size; e++)
                if (!eval_formula(f->lhs, A, va.with(f->v1, e))) return false;
            return true;
        }
    }
    return false;
}

} // namespace fo2p
