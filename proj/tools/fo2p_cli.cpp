#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fo2p/oracle.hpp"
#include "fo2p/pipeline.hpp"

using namespace fo2p;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Options {
    uint64_t max_one_types = 64;
    uint64_t max_goodfuncs = 20000;
    uint64_t solver_bound = 64;
    std::string format = "json";

    PipelineCaps caps() const {
        PipelineCaps c;
        c.types.max_one_types = max_one_types;
        c.types.max_goodfuncs = max_goodfuncs;
        c.solve.value_bound = solver_bound;
        return c;
    }
};

std::vector<NatInf> parse_sizes(const std::string& text) {
    std::vector<NatInf> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ','))
        out.push_back(tok == "inf" ? NatInf::inf() : NatInf(std::stoull(tok)));
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"decision engine for two-variable logic with ultimately periodic counting"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--max-types", opt.max_one_types, "1-type cap");
    app.add_option("--max-goodfuncs", opt.max_goodfuncs, "behavior column cap");
    app.add_option("--solver-bound", opt.solver_bound, "per-variable search ceiling");
    app.add_option("--format", opt.format, "json|dot|text");

    std::string file, datafile, sizes_text;
    uint64_t up_to = 4, oracle_size = 3;
    bool complete = false, directed = false;

    auto* nf_cmd = app.add_subcommand("nf", "print the Scott normal form");
    nf_cmd->add_option("file", file)->required();

    auto* types_cmd = app.add_subcommand("types", "dump 1-types, 2-types and behavior columns");
    types_cmd->add_option("file", file)->required();

    auto* compile_cmd = app.add_subcommand("compile", "emit PREB as SMT-LIB 2");
    compile_cmd->add_option("file", file)->required();
    bool compile_nat = false;
    compile_cmd->add_flag("--nat", compile_nat, "finite-satisfiability encoding");

    auto* check_cmd = app.add_subcommand("check", "decide sat and finsat");
    check_cmd->add_option("file", file)->required();

    auto* model_cmd = app.add_subcommand("model", "build a finite model if one exists");
    model_cmd->add_option("file", file)->required();

    auto* spectrum_cmd = app.add_subcommand("spectrum", "enumerate the spectrum");
    spectrum_cmd->add_option("file", file)->required();
    spectrum_cmd->add_option("--up-to", up_to, "largest size tested");

    auto* graph_cmd = app.add_subcommand("graph", "decide a (bi)regular graph instance");
    graph_cmd->add_option("file", file, "matrix spec file")->required();
    graph_cmd->add_option("--sizes", sizes_text, "comma list, e.g. 30,20 or 3")->required();
    graph_cmd->add_flag("--complete", complete);
    graph_cmd->add_flag("--directed", directed);
    bool realize = false;
    graph_cmd->add_flag("--realize", realize, "also output a witness graph");

    auto* facts_cmd = app.add_subcommand("facts", "finite satisfiability with ground facts");
    facts_cmd->add_option("file", file)->required();
    facts_cmd->add_option("datafile", datafile)->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force references");
    auto* om = oracle_cmd->add_subcommand("models", "enumerate models of a given size");
    om->add_option("file", file)->required();
    om->add_option("--size", oracle_size);
    auto* og = oracle_cmd->add_subcommand("graph", "exhaustive graph search");
    og->add_option("file", file, "matrix spec file")->required();
    og->add_option("--sizes", sizes_text)->required();
    og->add_flag("--complete", complete);
    og->add_flag("--directed", directed);

    CLI11_PARSE(app, argc, argv);

    auto load = [&]() {
        ParsedInput in = parse_input(slurp(file));
        if (!is_sentence(in.formula)) throw std::runtime_error("input is not a sentence");
        return in;
    };

    if (nf_cmd->parsed()) {
        ParsedInput in = load();
        std::cout << to_scott_nf(in.formula, in.sig).describe();
        return 0;
    }
    if (types_cmd->parsed()) {
        ParsedInput in = load();
        NormalForm nf = to_scott_nf(in.formula, in.sig);
        TypeTables tb = enumerate_types(nf, opt.caps().types);
        enumerate_good_functions(tb, opt.caps().types);
        std::cout << tb.describe();
        return 0;
    }
    if (compile_cmd->parsed()) {
        ParsedInput in = load();
        Pipeline pl = Pipeline::make(in.formula, in.sig, opt.caps());
        std::cout << to_smtlib(pl.preb.formula,
                               compile_nat ? SolveMode::NAT : SolveMode::NAT_INF);
        return 0;
    }
    if (check_cmd->parsed()) {
        ParsedInput in = load();
        Pipeline pl = Pipeline::make(in.formula, in.sig, opt.caps());
        DecideResult r = pl.decide();
        nlohmann::ordered_json j;
        j["sat"] = r.sat;
        j["finsat"] = r.finsat;
        j["profile"] = r.profile ? nlohmann::ordered_json::parse(r.profile->to_json(pl.tables))
                                 : nlohmann::ordered_json(nullptr);
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (model_cmd->parsed()) {
        ParsedInput in = load();
        Pipeline pl = Pipeline::make(in.formula, in.sig, opt.caps());
        DecideResult r = pl.decide();
        if (!r.finsat) {
            std::cout << "{\"finsat\": false}\n";
            return 0;
        }
        Structure m = eval_formula(in.formula, Structure{})
                          ? Structure{}
                          : pl.build_model(*r.profile);
        if (opt.format == "dot") std::cout << m.to_dot();
        else std::cout << m.to_json() << "\n";
        return 0;
    }
    if (spectrum_cmd->parsed()) {
        ParsedInput in = load();
        Pipeline pl = Pipeline::make(in.formula, in.sig, opt.caps());
        auto spec = pl.spectrum_enumerate(up_to);
        nlohmann::ordered_json j = spec;
        std::cout << j.dump() << "\n";
        return 0;
    }
    if (graph_cmd->parsed() || (oracle_cmd->parsed() && og->parsed())) {
        MatrixSpec spec = parse_matrix_spec(slurp(file));
        std::vector<NatInf> sizes = parse_sizes(sizes_text);
        bool ok;
        if (graph_cmd->parsed()) {
            if (directed) {
                std::vector<NatInf> M = sizes;
                ok = direg_feasible(spec.A, spec.B, M, complete);
            } else {
                size_t m = size_t(spec.A.cols);
                std::vector<NatInf> M(sizes.begin(), sizes.begin() + m);
                std::vector<NatInf> N(sizes.begin() + m, sizes.end());
                ok = bireg_feasible(spec.A, spec.B, M, N, complete);
            }
        } else {
            std::vector<uint64_t> fin;
            for (auto& s : sizes) fin.push_back(s.fin());
            if (directed) {
                ok = brute_direg(spec.A, spec.B, fin, complete);
            } else {
                size_t m = size_t(spec.A.cols);
                std::vector<uint64_t> M(fin.begin(), fin.begin() + m);
                std::vector<uint64_t> N(fin.begin() + m, fin.end());
                ok = brute_bireg(spec.A, spec.B, M, N, complete);
            }
        }
        nlohmann::ordered_json j;
        j["feasible"] = ok;
        if (graph_cmd->parsed() && realize && ok) {
            std::vector<uint64_t> fin;
            for (auto& s : sizes) fin.push_back(s.fin());
            if (directed) {
                auto g = realize_digraph(spec.A, spec.B, fin, complete);
                if (opt.format == "dot") { std::cout << g.to_dot(); return 0; }
                j["graph"] = nlohmann::ordered_json::parse(g.to_json());
            } else {
                size_t m = size_t(spec.A.cols);
                std::vector<uint64_t> M(fin.begin(), fin.begin() + m);
                std::vector<uint64_t> N(fin.begin() + m, fin.end());
                auto g = realize_bipartite(spec.A, spec.B, M, N, complete);
                if (opt.format == "dot") { std::cout << g.to_dot(); return 0; }
                j["graph"] = nlohmann::ordered_json::parse(g.to_json());
            }
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    if (facts_cmd->parsed()) {
        ParsedInput in = load();
        auto facts = parse_facts(slurp(datafile));
        bool ok = decide_with_facts(in.formula, in.sig, facts, opt.caps());
        std::cout << "{\"finsat\": " << (ok ? "true" : "false") << "}\n";
        return 0;
    }
    if (oracle_cmd->parsed() && om->parsed()) {
        ParsedInput in = load();
        auto models = brute_models(in.formula, in.sig, oracle_size);
        nlohmann::ordered_json j;
        j["count"] = models.size();
        std::cout << j.dump() << "\n";
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CapExceeded& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
