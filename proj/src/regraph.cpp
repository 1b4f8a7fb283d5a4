#include "fo2p/regraph.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace fo2p {

DegreeMatrix DegreeMatrix::drop_row(int i) const {
    DegreeMatrix out(rows - 1, cols, period);
    for (int r = 0, r2 = 0; r < rows; r++) {
        if (r == i) continue;
        for (int c = 0; c < cols; c++) out.at(r2, c) = at(r, c);
        r2++;
    }
    return out;
}

DegreeMatrix DegreeMatrix::drop_col(int j) const {
    DegreeMatrix out(rows, cols - 1, period);
    for (int r = 0; r < rows; r++)
        for (int c = 0, c2 = 0; c < cols; c++) {
            if (c == j) continue;
            out.at(r, c2++) = at(r, c);
        }
    return out;
}

std::vector<CountValue> DegreeMatrix::col(int j) const {
    std::vector<CountValue> out(rows);
    for (int r = 0; r < rows; r++) out[size_t(r)] = at(r, j);
    return out;
}

bool DegreeMatrix::row_all_fixed(int i) const {
    for (int c = 0; c < cols; c++)
        if (!at(i, c).is_fixed()) return false;
    return true;
}

bool DegreeMatrix::row_all_periodic(int i) const {
    for (int c = 0; c < cols; c++)
        if (at(i, c).is_fixed()) return false;
    return true;
}

bool DegreeMatrix::is_simple() const {
    for (int i = 0; i < rows; i++)
        if (!row_all_fixed(i) && !row_all_periodic(i)) return false;
    return true;
}

bool DegreeMatrix::has_inf() const {
    for (auto& v : e)
        if (v.is_inf()) return true;
    return false;
}

uint64_t DegreeMatrix::norm() const {
    uint64_t best = 0;
    for (int j = 0; j < cols; j++) {
        uint64_t s = 0;
        for (int i = 0; i < rows; i++) s += at(i, j).offset();
        best = std::max(best, s);
    }
    return best;
}

std::string DegreeMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows; i++) {
        for (int j = 0; j < cols; j++) os << (j ? " " : "") << at(i, j).str();
        os << "\n";
    }
    return os.str();
}

CountValue parse_entry(const std::string& text, uint64_t period) {
    if (text == "inf") return CountValue::inf();
    auto plus = text.find('+');
    if (plus == std::string::npos) return CountValue::fixed(std::stoull(text));
    if (text.back() != 'k') throw std::runtime_error("bad entry: " + text);
    uint64_t a = std::stoull(text.substr(0, plus));
    uint64_t p = std::stoull(text.substr(plus + 1, text.size() - plus - 2));
    if (p == 0) return CountValue::fixed(a);
    if (p != period) throw std::runtime_error("entry period mismatch: " + text);
    return CountValue::periodic(a % p); // offsets reduced would change the set; keep as given
}

MatrixSpec parse_matrix_spec(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    uint64_t p = 1;
    std::vector<std::vector<CountValue>> arows, brows;
    std::vector<std::vector<CountValue>>* cur = nullptr;
    std::vector<std::string> pending; // entry texts before p is known
    std::vector<std::vector<std::string>>* curtext = nullptr;
    std::vector<std::vector<std::string>> atext, btext;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "p") {
            std::string eq;
            ls >> eq >> p;
            if (p == 0) p = 1;
            continue;
        }
        if (tok == "A:") { curtext = &atext; continue; }
        if (tok == "B:") { curtext = &btext; continue; }
        if (!curtext) throw std::runtime_error("matrix spec: row outside A:/B: block");
        std::vector<std::string> row{tok};
        while (ls >> tok) row.push_back(tok);
        curtext->push_back(row);
    }
    (void)cur; (void)pending;
    auto build = [&](std::vector<std::vector<std::string>>& rows) {
        if (rows.empty()) return DegreeMatrix(0, 0, p);
        DegreeMatrix m(int(rows.size()), int(rows[0].size()), p);
        for (size_t i = 0; i < rows.size(); i++) {
            if (rows[i].size() != rows[0].size())
                throw std::runtime_error("matrix spec: ragged rows");
            for (size_t j = 0; j < rows[i].size(); j++)
                m.at(int(i), int(j)) = parse_entry(rows[i][j], p);
        }
        return m;
    };
    MatrixSpec spec;
    spec.A = build(atext);
    spec.B = build(btext);
    if (spec.A.rows != spec.B.rows)
        throw std::runtime_error("matrix spec: A and B need the same number of rows");
    return spec;
}

// ---------------------------------------------------------------------------
// Graph serialization

std::string ColoredBipartiteGraph::to_dot() const {
    std::ostringstream os;
    os << "graph bireg {\n";
    for (size_t v = 0; v < left_part.size(); v++)
        os << "  l" << v << " [label=\"L" << v << ":" << left_part[v] << "\"];\n";
    for (size_t v = 0; v < right_part.size(); v++)
        os << "  r" << v << " [label=\"R" << v << ":" << right_part[v] << "\"];\n";
    for (int c = 0; c < colors; c++)
        for (auto& [u, v] : edges[size_t(c)])
            os << "  l" << u << " -- r" << v << " [label=\"E" << (c + 1) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string ColoredBipartiteGraph::to_json() const {
    nlohmann::ordered_json j;
    j["left_part"] = left_part;
    j["right_part"] = right_part;
    auto arr = nlohmann::ordered_json::array();
    for (int c = 0; c < colors; c++) {
        auto es = nlohmann::ordered_json::array();
        for (auto& [u, v] : edges[size_t(c)]) es.push_back({u, v});
        arr.push_back(es);
    }
    j["edges"] = arr;
    return j.dump(2);
}

std::string ColoredDigraph::to_dot() const {
    std::ostringstream os;
    os << "digraph direg {\n";
    for (size_t v = 0; v < part.size(); v++)
        os << "  n" << v << " [label=\"" << v << ":" << part[v] << "\"];\n";
    for (int c = 0; c < colors; c++)
        for (auto& [u, v] : edges[size_t(c)])
            os << "  n" << u << " -> n" << v << " [label=\"E" << (c + 1) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string ColoredDigraph::to_json() const {
    nlohmann::ordered_json j;
    j["part"] = part;
    auto arr = nlohmann::ordered_json::array();
    for (int c = 0; c < colors; c++) {
        auto es = nlohmann::ordered_json::array();
        for (auto& [u, v] : edges[size_t(c)]) es.push_back({u, v});
        arr.push_back(es);
    }
    j["edges"] = arr;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Formula builders: graph atom + linear necessary conditions.

namespace {

PTerm sum_terms(const std::vector<PTerm>& ts) {
    PTerm s;
    for (auto& t : ts) s.add(t);
    return s;
}

// Side conditions of one row direction. side = matrix whose columns pair with
// the argument terms `args`.
struct RowView {
    const DegreeMatrix& m;
    const std::vector<PTerm>& args;
    int i;

    PTerm offset_sum() const {
        PTerm t;
        for (int j = 0; j < m.cols; j++) {
            const CountValue& e = m.at(i, j);
            if (e.is_inf()) continue;
            for (auto& [v, c] : args[size_t(j)].coeff) t.add_var(v, c * e.offset());
            t.add_const(args[size_t(j)].cst * e.offset());
        }
        return t;
    }
    bool any_periodic() const {
        for (int j = 0; j < m.cols; j++)
            if (m.at(i, j).tag == CountValue::Tag::Periodic) return true;
        return false;
    }
    // "the count from this side is forced infinite"
    PFormulaPtr must_inf() const {
        std::vector<PFormulaPtr> opts;
        for (int j = 0; j < m.cols; j++) {
            const CountValue& e = m.at(i, j);
            if (e.is_inf()) opts.push_back(p_le(PTerm(1), args[size_t(j)]));
            else if (e.offset() > 0) opts.push_back(p_is_inf(args[size_t(j)]));
        }
        return p_or(std::move(opts));
    }
    PFormulaPtr can_inf() const {
        std::vector<PFormulaPtr> opts{must_inf()};
        for (int j = 0; j < m.cols; j++)
            if (m.at(i, j).tag == CountValue::Tag::Periodic)
                opts.push_back(p_is_inf(args[size_t(j)]));
        return p_or(std::move(opts));
    }
    PFormulaPtr not_must_inf() const {
        std::vector<PFormulaPtr> conds;
        for (int j = 0; j < m.cols; j++) {
            const CountValue& e = m.at(i, j);
            if (e.is_inf()) conds.push_back(p_eq(args[size_t(j)], PTerm(0)));
            else if (e.offset() > 0) conds.push_back(p_not_inf(args[size_t(j)]));
        }
        return p_and(std::move(conds));
    }
};

// Handshake for row i: either both sides can be infinite, or both finite and
// the offset sums agree up to the periodic slack.
PFormulaPtr row_handshake(PresFormula& f, const RowView& L, const RowView& R) {
    PTerm lt = L.offset_sum(), rt = R.offset_sum();
    if (L.any_periodic()) {
        int z = f.fresh_var("z");
        lt.add_var(z, L.m.period);
    }
    if (R.any_periodic()) {
        int z = f.fresh_var("z");
        rt.add_var(z, R.m.period);
    }
    PFormulaPtr fin = p_and({L.not_must_inf(), R.not_must_inf(), p_eq(lt, rt)});
    PFormulaPtr inf = p_and({L.can_inf(), R.can_inf()});
    return p_or({fin, inf});
}

// Completeness: if column j (of `side`) is inhabited, the other side's total
// equals that column's degree sum (mod p if the column has a periodic entry;
// infinite if it has an inf entry).
PFormulaPtr column_total_condition(PresFormula& f, const DegreeMatrix& side, int j,
                                   const PTerm& size_j, PTerm other_total,
                                   uint64_t extra_offset) {
    bool any_inf = false, any_per = false;
    uint64_t off = extra_offset;
    for (int i = 0; i < side.rows; i++) {
        const CountValue& e = side.at(i, j);
        if (e.is_inf()) any_inf = true;
        else off += e.offset();
        if (e.tag == CountValue::Tag::Periodic) any_per = true;
    }
    PFormulaPtr cond;
    if (any_inf) {
        cond = p_is_inf(other_total);
    } else if (any_per) {
        int z = f.fresh_var("zc");
        PTerm rhs(off);
        rhs.add_var(z, side.period);
        cond = p_and({p_eq(other_total, rhs), p_not_inf(PTerm::var(z))});
    } else {
        cond = p_eq(other_total, PTerm(off));
    }
    return p_or({p_eq(size_j, PTerm(0)), cond});
}

// If column j is inhabited and needs color-i edges, the other side must have
// an inhabited column that can carry them.
PFormulaPtr support_condition(const DegreeMatrix& side, int j, const PTerm& size_j,
                              const DegreeMatrix& other, const std::vector<PTerm>& oargs,
                              int i) {
    PTerm support;
    for (int jj = 0; jj < other.cols; jj++)
        if (other.at(i, jj).chi()) support.add(oargs[size_t(jj)]);
    return p_or({p_eq(size_j, PTerm(0)), p_le(PTerm(1), support)});
}

PFormulaPtr necessary_conditions(PresFormula& f, GraphKind kind,
                                 const DegreeMatrix& A, const DegreeMatrix& B,
                                 const std::vector<PTerm>& xs, const std::vector<PTerm>& ys_in) {
    bool digraph = (kind == GraphKind::Direg || kind == GraphKind::DiregC);
    const std::vector<PTerm>& ys = digraph ? xs : ys_in;
    std::vector<PFormulaPtr> parts;

    for (int i = 0; i < A.rows; i++)
        parts.push_back(row_handshake(f, RowView{A, xs, i}, RowView{B, ys, i}));

    for (int i = 0; i < A.rows; i++) {
        for (int j = 0; j < A.cols; j++)
            if (!A.at(i, j).admits(NatInf(0), A.period))
                parts.push_back(support_condition(A, j, xs[size_t(j)], B, ys, i));
        for (int j = 0; j < B.cols; j++)
            if (!B.at(i, j).admits(NatInf(0), B.period))
                parts.push_back(support_condition(B, j, ys[size_t(j)], A, xs, i));
    }

    if (kind == GraphKind::BiregC) {
        PTerm xt = sum_terms(xs), yt = sum_terms(ys);
        for (int j = 0; j < A.cols; j++)
            parts.push_back(column_total_condition(f, A, j, xs[size_t(j)], yt, 0));
        for (int j = 0; j < B.cols; j++)
            parts.push_back(column_total_condition(f, B, j, ys[size_t(j)], xt, 0));
    }
    if (kind == GraphKind::DiregC) {
        // ||x|| - 1 equals the in+out degree sum of every inhabited column
        PTerm xt = sum_terms(xs);
        DegreeMatrix stacked(A.rows * 2, A.cols, A.period);
        for (int i = 0; i < A.rows; i++)
            for (int j = 0; j < A.cols; j++) {
                stacked.at(i, j) = A.at(i, j);
                stacked.at(i + A.rows, j) = B.at(i, j);
            }
        for (int j = 0; j < A.cols; j++)
            parts.push_back(column_total_condition(f, stacked, j, xs[size_t(j)], xt, 1));
    }
    return p_and(std::move(parts));
}

} // namespace

PFormulaPtr entries_handshake(PresFormula& f, const std::vector<CountValue>& le,
                              const std::vector<PTerm>& largs,
                              const std::vector<CountValue>& re,
                              const std::vector<PTerm>& rargs, uint64_t p) {
    DegreeMatrix A(1, int(le.size()), p), B(1, int(re.size()), p);
    for (size_t j = 0; j < le.size(); j++) A.at(0, int(j)) = le[j];
    for (size_t j = 0; j < re.size(); j++) B.at(0, int(j)) = re[j];
    return row_handshake(f, RowView{A, largs, 0}, RowView{B, rargs, 0});
}

PFormulaPtr build_bireg(PresFormula& f, GraphKind kind,
                        const DegreeMatrix& A, const DegreeMatrix& B,
                        const std::vector<PTerm>& xs, const std::vector<PTerm>& ys) {
    if (A.rows != B.rows) throw std::runtime_error("bireg: row count mismatch");
    if (int(xs.size()) != A.cols || (int(ys.size()) != B.cols && !(kind == GraphKind::Direg || kind == GraphKind::DiregC)))
        throw std::runtime_error("bireg: size vector length mismatch");
    PFormulaPtr nec = necessary_conditions(f, kind, A, B, xs, ys);
    auto gc = std::make_shared<GraphConstraint>();
    gc->kind = kind;
    gc->A = A;
    gc->B = B;
    gc->xs = xs;
    gc->ys = (kind == GraphKind::Bireg || kind == GraphKind::BiregC) ? ys : std::vector<PTerm>{};
    PAtom at;
    at.kind = PAtom::Kind::Graph;
    at.graph = gc;
    return p_and({nec, p_atom(std::move(at))});
}

namespace {

PresFormula make_formula(GraphKind kind, const DegreeMatrix& A, const DegreeMatrix& B) {
    PresFormula f;
    std::vector<PTerm> xs, ys;
    for (int j = 0; j < A.cols; j++) xs.push_back(PTerm::var(f.add_var("x" + std::to_string(j), true)));
    if (kind == GraphKind::Bireg || kind == GraphKind::BiregC)
        for (int j = 0; j < B.cols; j++) ys.push_back(PTerm::var(f.add_var("y" + std::to_string(j), true)));
    f.conjoin(build_bireg(f, kind, A, B, xs, ys));
    return f;
}

} // namespace

PresFormula bireg_formula(const DegreeMatrix& A, const DegreeMatrix& B) {
    return make_formula(GraphKind::Bireg, A, B);
}
PresFormula bireg_general(const DegreeMatrix& A, const DegreeMatrix& B) {
    return make_formula(GraphKind::Bireg, A, B);
}
PresFormula biregc_formula(const DegreeMatrix& A, const DegreeMatrix& B) {
    return make_formula(GraphKind::BiregC, A, B);
}
PresFormula direg_formula(const DegreeMatrix& A, const DegreeMatrix& B) {
    if (A.cols != B.cols) throw std::runtime_error("direg: shape mismatch");
    return make_formula(GraphKind::Direg, A, B);
}
PresFormula diregc_formula(const DegreeMatrix& A, const DegreeMatrix& B) {
    if (A.cols != B.cols) throw std::runtime_error("direg: shape mismatch");
    return make_formula(GraphKind::DiregC, A, B);
}

} // namespace fo2p
