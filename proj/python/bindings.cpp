#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seqsat/cnf.hpp"
#include "seqsat/dataset.hpp"
#include "seqsat/encoder.hpp"
#include "seqsat/enumerator.hpp"
#include "seqsat/errors.hpp"
#include "seqsat/oracle.hpp"

#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace seqsat;

namespace {

DatasetFormat format_from(const std::string& name) {
    if (name == "tokens") return DatasetFormat::Tokens;
    if (name == "spmf") return DatasetFormat::Spmf;
    raise(Errc::MalformedLine, "unknown dataset format '" + name + "'");
}

MiningConfig config_from(int minsup, const std::string& mode, std::optional<int> max_gap,
                         std::optional<int> max_span, std::optional<std::string> regex,
                         std::optional<std::vector<std::tuple<std::optional<int>,
                                                              std::optional<std::string>, int>>>
                             dep_gap,
                         bool witness, std::uint64_t seed) {
    MiningConfig config;
    config.minsup = minsup;
    config.mode = mode_from_string(mode);
    config.max_gap = max_gap;
    config.max_span = max_span;
    config.regex = std::move(regex);
    if (dep_gap) {
        std::vector<GapRule> rules;
        for (const auto& [position, token, gap] : *dep_gap) rules.push_back({position, token, gap});
        config.dep_gap = std::move(rules);
    }
    config.want_witnesses = witness;
    config.seed = seed;
    return config;
}

py::list patterns_to_py(const Dataset& dataset, const PatternSet& result) {
    py::list out;
    for (const auto& p : result.patterns) {
        py::dict entry;
        py::list tokens;
        for (int v : p.chars) tokens.append(dataset.vocabulary[v]);
        entry["tokens"] = std::move(tokens);
        entry["support"] = p.support;
        if (p.witnesses) {
            py::list witnesses;
            for (const auto& w : *p.witnesses) {
                py::dict wd;
                wd["transaction"] = w.transaction;
                wd["positions"] = w.positions;
                witnesses.append(std::move(wd));
            }
            entry["witnesses"] = std::move(witnesses);
        }
        out.append(std::move(entry));
    }
    return out;
}

py::dict result_to_py(const Dataset& dataset, const PatternSet& result) {
    py::dict out;
    out["mode"] = to_string(result.mode);
    out["k"] = result.k_bound;
    out["patterns"] = patterns_to_py(dataset, result);
    py::dict counters;
    counters["solver_calls"] = result.counters.solver_calls;
    counters["conflicts"] = result.counters.conflicts;
    counters["encode_ms"] = result.counters.encode_ms;
    counters["solve_ms"] = result.counters.solve_ms;
    counters["total_ms"] = result.counters.total_ms;
    out["counters"] = std::move(counters);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "SAT-based mining of flexible sequences in transactional datasets";

    py::register_exception<Error>(m, "SeqsatError");

    py::class_<Dataset>(m, "Dataset")
        .def_static(
            "from_text",
            [](const std::string& text, const std::string& format, const std::string& name) {
                return parse_dataset_string(text, format_from(format), name);
            },
            py::arg("text"), py::arg("format") = "tokens", py::arg("name") = "")
        .def_static(
            "load",
            [](const std::string& path, const std::string& format) {
                return load_dataset(path, format_from(format));
            },
            py::arg("path"), py::arg("format") = "tokens")
        .def_readonly("vocabulary", &Dataset::vocabulary)
        .def_readonly("transactions", &Dataset::transactions)
        .def_readonly("name", &Dataset::name)
        .def("stats",
             [](const Dataset& d) {
                 const DatasetStats s = stats(d);
                 py::dict out;
                 out["transactions"] = s.transaction_count;
                 out["vocab_size"] = s.vocab_size;
                 out["max_length"] = s.max_length;
                 out["avg_length"] = s.avg_length;
                 return out;
             })
        .def("compute_k", [](const Dataset& d, int minsup) { return compute_k(d, minsup); },
             py::arg("minsup"))
        .def("render",
             [](const Dataset& d, const std::string& format) {
                 return render_dataset_string(d, format_from(format));
             },
             py::arg("format") = "tokens")
        .def("__repr__", [](const Dataset& d) {
            return "Dataset(" + std::to_string(d.transaction_count()) + " transactions, " +
                   std::to_string(d.vocab_size()) + " tokens)";
        });

    m.def(
        "mine",
        [](const Dataset& dataset, int minsup, const std::string& mode, std::optional<int> max_gap,
           std::optional<int> max_span, std::optional<std::string> regex,
           std::optional<std::vector<std::tuple<std::optional<int>, std::optional<std::string>, int>>>
               dep_gap,
           bool witness, std::uint64_t seed) {
            const MiningConfig config = config_from(minsup, mode, max_gap, max_span,
                                                    std::move(regex), std::move(dep_gap), witness, seed);
            return result_to_py(dataset, mine(dataset, config));
        },
        py::arg("dataset"), py::arg("minsup"), py::arg("mode") = "closed",
        py::arg("max_gap") = py::none(), py::arg("max_span") = py::none(),
        py::arg("regex") = py::none(), py::arg("dep_gap") = py::none(), py::arg("witness") = false,
        py::arg("seed") = 0,
        "Mine frequent patterns with the SAT engine; returns a result dict.");

    m.def(
        "oracle_mine",
        [](const Dataset& dataset, int minsup, const std::string& mode, std::optional<int> max_gap,
           std::optional<int> max_span, std::optional<std::string> regex,
           std::optional<std::vector<std::tuple<std::optional<int>, std::optional<std::string>, int>>>
               dep_gap) {
            const MiningConfig config =
                config_from(minsup, mode, max_gap, max_span, std::move(regex), std::move(dep_gap),
                            false, 0);
            return result_to_py(dataset, oracle::oracle_mine(dataset, config));
        },
        py::arg("dataset"), py::arg("minsup"), py::arg("mode") = "closed",
        py::arg("max_gap") = py::none(), py::arg("max_span") = py::none(),
        py::arg("regex") = py::none(), py::arg("dep_gap") = py::none(),
        "Mine with the brute-force reference miner; returns a result dict.");

    m.def(
        "encode_dimacs",
        [](const Dataset& dataset, int minsup, std::optional<int> max_gap,
           std::optional<int> max_span, std::optional<std::string> regex) {
            MiningConfig config;
            config.minsup = minsup;
            config.max_gap = max_gap;
            config.max_span = max_span;
            config.regex = std::move(regex);
            const Problem problem = assemble(dataset, config);
            std::ostringstream dimacs, varmap;
            export_dimacs(problem.cnf, dimacs);
            export_varmap(problem.vars, varmap);
            return py::make_tuple(dimacs.str(), varmap.str());
        },
        py::arg("dataset"), py::arg("minsup"), py::arg("max_gap") = py::none(),
        py::arg("max_span") = py::none(), py::arg("regex") = py::none(),
        "Return (dimacs_text, varmap_json) for the assembled instance.");
}
