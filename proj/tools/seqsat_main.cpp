#include "seqsat/bridge.hpp"
#include "seqsat/cnf.hpp"
#include "seqsat/dataset.hpp"
#include "seqsat/encoder.hpp"
#include "seqsat/enumerator.hpp"
#include "seqsat/errors.hpp"
#include "seqsat/oracle.hpp"
#include "seqsat/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

namespace {

using namespace seqsat;
using nlohmann::ordered_json;

struct CommonOptions {
    std::string input;
    std::string format = "tokens";
    std::string minsup = "1";
    std::string mode = "closed";
    int max_gap = 0;  // 0 = unset
    int max_span = 0; // 0 = unset
    std::string dep_gap_file;
    std::string regex;
    std::string output;
    bool json = false;
    std::uint64_t seed = 0;
    bool witness = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool mining_flags = true) {
    cmd->add_option("-i,--input", opt.input, "dataset file")->required();
    cmd->add_option("-f,--format", opt.format, "input format: tokens|spmf")
        ->check(CLI::IsMember({"tokens", "spmf"}));
    cmd->add_option("-m,--minsup", opt.minsup,
                    "minimum support: absolute count N or percentage P% (rounded up)");
    if (mining_flags) {
        cmd->add_option("--mode", opt.mode, "mining mode (default closed)")
            ->check(CLI::IsMember({"all", "closed", "maximal"}));
        cmd->add_option("--max-gap", opt.max_gap, "max gap between consecutive embedding positions");
        cmd->add_option("--max-span", opt.max_span, "max distance between first and last position");
        cmd->add_option("--dep-gap", opt.dep_gap_file, "CSV file of position,token,maxgap rows");
        cmd->add_option("--regex", opt.regex,
                        "token regular expression over the vocabulary (., *, |, parentheses)");
        cmd->add_option("--seed", opt.seed, "branching-heuristic seed (output is deterministic per seed)");
        cmd->add_flag("--witness", opt.witness, "include one embedding per covered transaction");
    }
    cmd->add_option("-o,--output", opt.output, "write results to this file instead of stdout");
    cmd->add_flag("--json", opt.json, "emit a JSON report instead of pattern lines");
}

Dataset load(const CommonOptions& opt) {
    return load_dataset(opt.input, opt.format == "spmf" ? DatasetFormat::Spmf : DatasetFormat::Tokens);
}

int parse_minsup(const std::string& text, int transaction_count) {
    if (!text.empty() && text.back() == '%') {
        double percent = 0.0;
        try {
            percent = std::stod(text.substr(0, text.size() - 1));
        } catch (const std::exception&) {
            raise(Errc::MalformedLine, "bad minsup percentage '" + text + "'");
        }
        return resolve_percent_minsup(percent, transaction_count);
    }
    try {
        return std::stoi(text);
    } catch (const std::exception&) {
        raise(Errc::MalformedLine, "bad minsup '" + text + "'");
    }
}

MiningConfig make_config(const CommonOptions& opt, const Dataset& dataset) {
    MiningConfig config;
    config.minsup = parse_minsup(opt.minsup, dataset.transaction_count());
    config.mode = mode_from_string(opt.mode);
    if (opt.max_gap > 0) config.max_gap = opt.max_gap;
    if (opt.max_span > 0) config.max_span = opt.max_span;
    if (!opt.dep_gap_file.empty()) {
        std::ifstream in(opt.dep_gap_file);
        if (!in) raise(Errc::Io, "cannot open gap table '" + opt.dep_gap_file + "'");
        config.dep_gap = parse_gap_rules(in);
    }
    if (!opt.regex.empty()) config.regex = opt.regex;
    config.seed = opt.seed;
    config.want_witnesses = opt.witness;
    config.validate(dataset);
    return config;
}

struct OutputSink {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) raise(Errc::Io, "cannot open output file '" + path + "'");
            stream = &file;
        }
    }
    std::ostream& out() { return *stream; }
};

ordered_json config_json(const MiningConfig& config) {
    ordered_json j;
    j["minsup"] = config.minsup;
    j["mode"] = to_string(config.mode);
    j["max_gap"] = config.max_gap ? ordered_json(*config.max_gap) : ordered_json(nullptr);
    j["max_span"] = config.max_span ? ordered_json(*config.max_span) : ordered_json(nullptr);
    j["dep_gap"] = config.dep_gap.has_value();
    j["regex"] = config.regex ? ordered_json(*config.regex) : ordered_json(nullptr);
    j["seed"] = config.seed;
    return j;
}

ordered_json result_json(const Dataset& dataset, const PatternSet& result) {
    const DatasetStats s = stats(dataset);
    ordered_json j;
    j["config"] = config_json(result.config);
    j["dataset"] = {{"name", dataset.name},
                    {"transactions", s.transaction_count},
                    {"vocab_size", s.vocab_size},
                    {"max_length", s.max_length},
                    {"avg_length", s.avg_length}};
    j["k"] = result.k_bound;
    j["patterns"] = ordered_json::array();
    for (const auto& p : result.patterns) {
        ordered_json entry;
        entry["tokens"] = ordered_json::array();
        for (int v : p.chars) entry["tokens"].push_back(dataset.vocabulary[v]);
        entry["support"] = p.support;
        if (p.witnesses) {
            entry["witnesses"] = ordered_json::array();
            for (const auto& w : *p.witnesses)
                entry["witnesses"].push_back({{"transaction", w.transaction},
                                              {"positions", w.positions}});
        }
        j["patterns"].push_back(std::move(entry));
    }
    j["counters"] = {{"solver_calls", result.counters.solver_calls},
                     {"conflicts", result.counters.conflicts},
                     {"propagations", result.counters.propagations},
                     {"encode_ms", result.counters.encode_ms},
                     {"solve_ms", result.counters.solve_ms},
                     {"total_ms", result.counters.total_ms}};
    return j;
}

void print_report(const Dataset& dataset, const PatternSet& result) {
    const DatasetStats s = stats(dataset);
    std::ostringstream line;
    line << "# dataset=" << (dataset.name.empty() ? "-" : dataset.name)
         << " transactions=" << s.transaction_count << " vocab=" << s.vocab_size
         << " max_len=" << s.max_length << " avg_len=" << s.avg_length << '\n';
    line << "# minsup=" << result.config.minsup << " mode=" << to_string(result.mode) << " K="
         << result.k_bound;
    if (result.config.max_gap) line << " max_gap=" << *result.config.max_gap;
    if (result.config.max_span) line << " max_span=" << *result.config.max_span;
    if (result.config.regex) line << " regex=\"" << *result.config.regex << '"';
    line << '\n';
    line << "# patterns=" << result.patterns.size()
         << " solver_calls=" << result.counters.solver_calls
         << " conflicts=" << result.counters.conflicts << " encode_ms=" << result.counters.encode_ms
         << " solve_ms=" << result.counters.solve_ms << " total_ms=" << result.counters.total_ms
         << '\n';
    std::cerr << line.str();
}

int emit_result(const Dataset& dataset, const PatternSet& result, const CommonOptions& opt) {
    OutputSink sink(opt.output);
    if (opt.json) {
        sink.out() << result_json(dataset, result).dump(2) << '\n';
    } else {
        for (const auto& p : result.patterns)
            sink.out() << p.render(dataset.vocabulary) << '\t' << p.support << '\n';
        print_report(dataset, result);
    }
    return result.patterns.empty() ? 1 : 0;
}

/// mine_all routed through an external DIMACS solver; keeps the clause
/// database in process and re-exports it on every call.
PatternSet mine_all_via_bridge(const Dataset& dataset, const MiningConfig& config,
                               const std::string& command) {
    Problem problem = assemble(dataset, config);
    Cnf working = problem.cnf;
    PatternSet out;
    out.mode = Mode::All;
    out.config = config;
    out.k_bound = problem.k_bound;

    auto solve = [&](std::span<const Lit> assumptions) {
        ++out.counters.solver_calls;
        return solve_via_dimacs(working, assumptions, command);
    };

    for (;;) {
        BridgeResult res = solve({});
        if (!res.sat) break;
        Pattern p = decode_pattern(res.model, problem.vars, false);

        std::vector<Lit> base;
        for (std::size_t k = 0; k < p.chars.size(); ++k)
            base.push_back(pos(problem.vars.pattern_var(static_cast<int>(k) + 1, p.chars[k])));
        if (static_cast<int>(p.chars.size()) < problem.k_bound)
            base.push_back(pos(problem.vars.pattern_var(static_cast<int>(p.chars.size()) + 1,
                                                        problem.vars.eps_sym())));
        std::vector<bool> best = res.model;
        auto count_cover = [&](const std::vector<bool>& model) {
            int count = 0;
            for (int i = 1; i <= dataset.transaction_count(); ++i)
                if (model[problem.vars.cover_var(i)]) ++count;
            return count;
        };
        int achieved = count_cover(best);
        int hi = dataset.transaction_count();
        while (achieved < hi) {
            const int mid = achieved + (hi - achieved + 1) / 2;
            std::vector<Lit> assumptions = base;
            assumptions.push_back(pos(problem.vars.card_var(mid)));
            BridgeResult probe = solve(assumptions);
            if (probe.sat) {
                best = probe.model;
                achieved = count_cover(best);
            } else {
                hi = mid - 1;
            }
        }
        Pattern full = decode_pattern(best, problem.vars, config.want_witnesses);
        full.support = achieved;
        working.add_clause(blocking_clause_exact(full.chars, problem.vars));
        out.patterns.push_back(std::move(full));
    }
    return out;
}

int cmd_mine(const CommonOptions& opt, const std::string& external_solver) {
    const Dataset dataset = load(opt);
    const MiningConfig config = make_config(opt, dataset);
    PatternSet result;
    if (external_solver.empty()) {
        result = mine(dataset, config);
    } else {
        if (config.mode != Mode::All)
            raise(Errc::MalformedLine, "--external-solver supports --mode all only");
        result = mine_all_via_bridge(dataset, config, external_solver);
    }
    return emit_result(dataset, result, opt);
}

int cmd_oracle(const CommonOptions& opt) {
    const Dataset dataset = load(opt);
    const MiningConfig config = make_config(opt, dataset);
    const PatternSet result = oracle::oracle_mine(dataset, config);
    return emit_result(dataset, result, opt);
}

int cmd_encode(const CommonOptions& opt, const std::string& varmap_path) {
    const Dataset dataset = load(opt);
    const MiningConfig config = make_config(opt, dataset);
    const Problem problem = assemble(dataset, config);

    OutputSink sink(opt.output);
    export_dimacs(problem.cnf, sink.out());

    std::string sidecar = varmap_path;
    if (sidecar.empty() && !opt.output.empty()) sidecar = opt.output + ".vars.json";
    if (!sidecar.empty()) {
        std::ofstream vars_out(sidecar);
        if (!vars_out) raise(Errc::Io, "cannot open varmap sidecar '" + sidecar + "'");
        export_varmap(problem.vars, vars_out);
    }
    std::cerr << "# K=" << problem.k_bound << " vars=" << problem.cnf.var_count
              << " clauses=" << problem.cnf.clause_count() << '\n';
    return 0;
}

using PatternKey = std::pair<std::vector<int>, int>;

std::set<PatternKey> key_set(const PatternSet& result) {
    std::set<PatternKey> keys;
    for (const auto& p : result.patterns) keys.insert({p.chars, p.support});
    return keys;
}

int cmd_verify(const CommonOptions& opt) {
    const Dataset dataset = load(opt);
    const MiningConfig config = make_config(opt, dataset);
    const PatternSet mined = mine(dataset, config);
    const PatternSet expected = oracle::oracle_mine(dataset, config);

    const auto mined_keys = key_set(mined);
    const auto expected_keys = key_set(expected);
    if (mined_keys == expected_keys) {
        std::cerr << "# verify: " << mined_keys.size() << " patterns, miner == oracle\n";
        return 0;
    }
    std::vector<PatternKey> only_mined, only_expected;
    std::set_difference(mined_keys.begin(), mined_keys.end(), expected_keys.begin(),
                        expected_keys.end(), std::back_inserter(only_mined));
    std::set_difference(expected_keys.begin(), expected_keys.end(), mined_keys.begin(),
                        mined_keys.end(), std::back_inserter(only_expected));
    auto show = [&](const char* label, const std::vector<PatternKey>& keys) {
        if (keys.empty()) return;
        Pattern p;
        p.chars = keys.front().first;
        std::cerr << label << p.render(dataset.vocabulary) << '\t' << keys.front().second << '\n';
    };
    std::cerr << "# verify: MISMATCH (miner " << mined_keys.size() << " vs oracle "
              << expected_keys.size() << ")\n";
    show("# only in miner:  ", only_mined);
    show("# only in oracle: ", only_expected);
    return 3;
}

struct BenchGrid {
    std::vector<int> gaps, spans, minsups;
    std::vector<std::string> modes;
};

BenchGrid parse_grid(const std::string& text) {
    BenchGrid grid;
    std::istringstream groups(text);
    std::string group;
    while (std::getline(groups, group, ';')) {
        if (group.empty()) continue;
        const auto eq = group.find('=');
        if (eq == std::string::npos)
            raise(Errc::MalformedLine, "bad grid group '" + group + "' (expected key=v1,v2,...)");
        const std::string key = group.substr(0, eq);
        std::istringstream values(group.substr(eq + 1));
        std::string value;
        while (std::getline(values, value, ',')) {
            if (value.empty()) continue;
            if (key == "modes") {
                grid.modes.push_back(value);
                continue;
            }
            int number = 0;
            try {
                number = std::stoi(value);
            } catch (const std::exception&) {
                raise(Errc::MalformedLine, "bad grid value '" + value + "' for " + key);
            }
            if (key == "gaps")
                grid.gaps.push_back(number);
            else if (key == "spans")
                grid.spans.push_back(number);
            else if (key == "minsups")
                grid.minsups.push_back(number);
            else
                raise(Errc::MalformedLine, "unknown grid key '" + key + "'");
        }
    }
    return grid;
}

int cmd_bench(const CommonOptions& opt, const std::string& grid_text) {
    const Dataset dataset = load(opt);
    const DatasetStats s = stats(dataset);
    BenchGrid grid = parse_grid(grid_text);
    if (grid.gaps.empty()) grid.gaps.push_back(0);
    if (grid.spans.empty()) grid.spans.push_back(0);
    if (grid.minsups.empty()) grid.minsups.push_back(parse_minsup(opt.minsup, s.transaction_count));
    if (grid.modes.empty()) grid.modes.push_back(opt.mode);

    OutputSink sink(opt.output);
    sink.out() << "dataset,transactions,vocab_size,max_length,avg_length,minsup,mode,max_gap,"
                  "max_span,regex,k,patterns,solver_calls,conflicts,encode_ms,solve_ms,total_ms\n";
    for (int minsup : grid.minsups)
        for (const auto& mode : grid.modes)
            for (int gap : grid.gaps)
                for (int span : grid.spans) {
                    CommonOptions cell = opt;
                    cell.minsup = std::to_string(minsup);
                    cell.mode = mode;
                    cell.max_gap = gap;
                    cell.max_span = span;
                    const MiningConfig config = make_config(cell, dataset);
                    const PatternSet result = mine(dataset, config);
                    sink.out() << (dataset.name.empty() ? "-" : dataset.name) << ','
                               << s.transaction_count << ',' << s.vocab_size << ',' << s.max_length
                               << ',' << s.avg_length << ',' << config.minsup << ','
                               << to_string(config.mode) << ',' << (gap > 0 ? std::to_string(gap) : "-")
                               << ',' << (span > 0 ? std::to_string(span) : "-") << ','
                               << (config.regex ? *config.regex : "-") << ',' << result.k_bound << ','
                               << result.patterns.size() << ',' << result.counters.solver_calls << ','
                               << result.counters.conflicts << ',' << result.counters.encode_ms << ','
                               << result.counters.solve_ms << ',' << result.counters.total_ms << '\n';
                }
    return 0;
}

int cmd_dimacs_solve(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::Io, "cannot open DIMACS file '" + path + "'");
    const Cnf cnf = parse_dimacs(in);
    Solver solver;
    solver.add_cnf(cnf);
    if (solver.solve() == Solver::Result::Sat) {
        std::cout << "s SATISFIABLE\n";
        std::string line = "v";
        for (Var v = 0; v < cnf.var_count; ++v) {
            line += ' ';
            line += std::to_string(solver.model()[v] ? v + 1 : -(v + 1));
            if (line.size() > 72) {
                std::cout << line << '\n';
                line = "v";
            }
        }
        std::cout << line << " 0\n";
    } else {
        std::cout << "s UNSATISFIABLE\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAT-based mining of flexible sequences in transactional datasets"};
    app.require_subcommand(1);

    CommonOptions mine_opt, oracle_opt, encode_opt, verify_opt, bench_opt;
    std::string external_solver, varmap_path, grid_text, dimacs_path;

    CLI::App* mine_cmd = app.add_subcommand("mine", "mine frequent patterns with the SAT engine");
    add_common(mine_cmd, mine_opt);
    mine_cmd->add_option("--external-solver", external_solver,
                         "route solving through an external DIMACS solver command");

    CLI::App* oracle_cmd = app.add_subcommand("oracle", "mine with the brute-force reference miner");
    add_common(oracle_cmd, oracle_opt);

    CLI::App* encode_cmd = app.add_subcommand("encode", "write the DIMACS encoding and varmap sidecar");
    add_common(encode_cmd, encode_opt);
    encode_cmd->add_option("--varmap", varmap_path, "sidecar path (default: <output>.vars.json)");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run both miners and diff the pattern sets (exit 3 on mismatch)");
    add_common(verify_cmd, verify_opt);

    CLI::App* bench_cmd = app.add_subcommand("bench", "run a config grid and emit CSV run reports");
    add_common(bench_cmd, bench_opt);
    bench_cmd->add_option("--grid", grid_text, "grid spec, e.g. \"gaps=1,2,4,8;modes=all,closed\"");

    CLI::App* dimacs_cmd = app.add_subcommand("dimacs-solve", "solve a DIMACS file, print s/v lines");
    dimacs_cmd->add_option("file", dimacs_path, "DIMACS CNF file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mine_cmd->parsed()) return cmd_mine(mine_opt, external_solver);
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_opt);
        if (encode_cmd->parsed()) return cmd_encode(encode_opt, varmap_path);
        if (verify_cmd->parsed()) return cmd_verify(verify_opt);
        if (bench_cmd->parsed()) return cmd_bench(bench_opt, grid_text);
        if (dimacs_cmd->parsed()) return cmd_dimacs_solve(dimacs_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
