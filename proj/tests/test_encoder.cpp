#include <doctest.h>

#include "seqsat/encoder.hpp"
#include "seqsat/enumerator.hpp"
#include "seqsat/errors.hpp"
#include "seqsat/oracle.hpp"
#include "seqsat/solver.hpp"
#include "testutil.hpp"

#include <set>

using namespace seqsat;
using namespace seqsat::testutil;

namespace {

MiningConfig base_config(int minsup, Mode mode = Mode::All) {
    MiningConfig config;
    config.minsup = minsup;
    config.mode = mode;
    return config;
}

Solver::Result solve_pattern(const Dataset& d, const MiningConfig& config,
                             const std::string& letters,
                             const std::vector<Lit>& extra_assumptions = {}) {
    const Problem problem = assemble(d, config);
    Solver solver;
    solver.add_cnf(problem.cnf);
    auto assumptions = pattern_assumptions(problem.vars, chars_of(d, letters));
    assumptions.insert(assumptions.end(), extra_assumptions.begin(), extra_assumptions.end());
    return solver.solve(assumptions);
}

} // namespace

TEST_CASE("base encoding: embedded pattern with full cover is satisfiable") {
    const Dataset d = dataset_of({"B A C B", "A C C B"});
    const Problem problem = assemble(d, base_config(2));
    Solver solver;
    solver.add_cnf(problem.cnf);

    auto assumptions = pattern_assumptions(problem.vars, chars_of(d, "AB"));
    assumptions.push_back(pos(problem.vars.cover_var(1)));
    assumptions.push_back(pos(problem.vars.cover_var(2)));
    REQUIRE(solver.solve(assumptions) == Solver::Result::Sat);

    const Pattern p = decode_pattern(solver.model(), problem.vars, /*want_witnesses=*/true);
    CHECK(p.chars == chars_of(d, "AB"));
    CHECK(p.support == 2);
    // witnesses are real embeddings
    for (const auto& w : *p.witnesses) {
        const auto& transaction = d.transactions[w.transaction - 1];
        int prev = 0;
        for (std::size_t k = 0; k < p.chars.size(); ++k) {
            const int j = w.positions[k];
            CHECK(j > prev);
            CHECK(transaction[j - 1] == p.chars[k]);
            prev = j;
        }
    }
}

TEST_CASE("base encoding: epsilon cannot precede a character") {
    const Dataset d = dataset_of({"B A C B", "A C C B"});
    const Problem problem = assemble(d, base_config(2));
    Solver solver;
    solver.add_cnf(problem.cnf);
    CHECK(solver.solve({pos(problem.vars.pattern_var(1, problem.vars.eps_sym())),
                        pos(problem.vars.pattern_var(2, d.token_index("A")))}) ==
          Solver::Result::Unsat);
}

TEST_CASE("base encoding: order preservation rules out reversed pairs") {
    const Dataset d = dataset_of({"B A"});
    CHECK(solve_pattern(d, base_config(1), "AB") == Solver::Result::Unsat);
    CHECK(solve_pattern(d, base_config(1), "BA") == Solver::Result::Sat);
}

TEST_CASE("cardinality ladder forces the threshold") {
    const Dataset d = dataset_of({"A", "B", "C"});
    const Problem problem = assemble(d, base_config(2));

    // counter clauses alone over the three cover vars: every forced assignment
    // of them is SAT iff at least two are true
    Cnf counter_only;
    counter_only.var_count = problem.vars.total_vars();
    std::vector<Lit> cover_lits;
    for (int i = 1; i <= 3; ++i) cover_lits.push_back(pos(problem.vars.cover_var(i)));
    counter_only.append(encode_cardinality(cover_lits, 2, problem.vars));
    Solver bare;
    bare.add_cnf(counter_only);
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<Lit> assumptions;
        int trues = 0;
        for (int i = 1; i <= 3; ++i) {
            const bool on = mask & (1 << (i - 1));
            trues += on ? 1 : 0;
            assumptions.push_back(mkLit(problem.vars.cover_var(i), !on));
        }
        CHECK((bare.solve(assumptions) == Solver::Result::Sat) == (trues >= 2));
    }
}

TEST_CASE("cardinality: full threshold propagates every cover literal") {
    const Dataset d = dataset_of({"A B", "A B", "A B"});
    const Problem problem = assemble(d, base_config(3));
    Solver solver;
    solver.add_cnf(problem.cnf);
    REQUIRE(solver.solve() == Solver::Result::Sat);
    for (int i = 1; i <= 3; ++i) CHECK(solver.model()[problem.vars.cover_var(i)]);
    CHECK(solver.solve({neg(problem.vars.cover_var(2))}) == Solver::Result::Unsat);
}

TEST_CASE("cardinality: card(3) with a refuted cover literal is unsat") {
    const Dataset d = dataset_of({"A", "A", "A"});
    const Problem problem = assemble(d, base_config(1));
    Cnf counter_only;
    counter_only.var_count = problem.vars.total_vars();
    std::vector<Lit> cover_lits;
    for (int i = 1; i <= 3; ++i) cover_lits.push_back(pos(problem.vars.cover_var(i)));
    counter_only.append(encode_cardinality(cover_lits, 1, problem.vars));

    Solver solver;
    solver.add_cnf(counter_only);
    CHECK(solver.solve({pos(problem.vars.card_var(3)), neg(problem.vars.cover_var(2))}) ==
          Solver::Result::Unsat);
}

TEST_CASE("cardinality: card literals are monotone") {
    const Dataset d = dataset_of({"A", "B", "C", "D", "E"});
    const Problem problem = assemble(d, base_config(1));
    Cnf counter_only;
    counter_only.var_count = problem.vars.total_vars();
    std::vector<Lit> cover_lits;
    for (int i = 1; i <= 5; ++i) cover_lits.push_back(pos(problem.vars.cover_var(i)));
    counter_only.append(encode_cardinality(cover_lits, 1, problem.vars));
    Solver solver;
    solver.add_cnf(counter_only);
    for (int tau = 1; tau < 5; ++tau)
        CHECK(solver.solve({pos(problem.vars.card_var(tau + 1)),
                            neg(problem.vars.card_var(tau))}) == Solver::Result::Unsat);
}

TEST_CASE("cardinality: projected model count matches the binomial sum") {
    const int n = 4;
    const Dataset d = dataset_of({"A", "B", "C", "D"});
    for (int tau = 1; tau <= n; ++tau) {
        const Problem problem = assemble(d, base_config(1));
        Cnf counter_only;
        counter_only.var_count = problem.vars.total_vars();
        std::vector<Lit> cover_lits;
        for (int i = 1; i <= n; ++i) cover_lits.push_back(pos(problem.vars.cover_var(i)));
        counter_only.append(encode_cardinality(cover_lits, tau, problem.vars));

        Solver solver;
        solver.add_cnf(counter_only);
        std::set<std::vector<bool>> projections;
        while (solver.solve() == Solver::Result::Sat) {
            std::vector<bool> projection;
            Clause block;
            for (int i = 1; i <= n; ++i) {
                projection.push_back(solver.model()[problem.vars.cover_var(i)]);
                block.push_back(mkLit(problem.vars.cover_var(i), projection.back()));
            }
            projections.insert(projection);
            solver.add_clause(std::move(block));
        }
        std::uint64_t expected = 0; // sum over j >= tau of C(n, j)
        for (int mask = 0; mask < (1 << n); ++mask)
            if (__builtin_popcount(static_cast<unsigned>(mask)) >= tau) ++expected;
        CHECK(projections.size() == expected);
    }
}

TEST_CASE("max-gap encoding accepts the late embedding the fixture needs") {
    const Dataset d = dataset_of_strings({"ACCBAB", "AB"});
    MiningConfig config = base_config(2);
    config.max_gap = 2;
    const Problem problem = assemble(d, config);
    Solver solver;
    solver.add_cnf(problem.cnf);
    auto assumptions = pattern_assumptions(problem.vars, chars_of(d, "AB"));
    assumptions.push_back(pos(problem.vars.cover_var(1)));
    assumptions.push_back(pos(problem.vars.cover_var(2)));
    REQUIRE(solver.solve(assumptions) == Solver::Result::Sat);
    // the witness for T1 must be the A5 B6 embedding, the only gap-2 one
    const Pattern p = decode_pattern(solver.model(), problem.vars, true);
    CHECK((*p.witnesses)[0].positions == std::vector<int>{5, 6});
}

TEST_CASE("max-gap: tight gap rules out distant pairs") {
    const Dataset d = dataset_of_strings({"AXB"});
    MiningConfig config = base_config(1);
    config.max_gap = 1;
    CHECK(solve_pattern(d, config, "AB") == Solver::Result::Unsat);
    config.max_gap = 2;
    CHECK(solve_pattern(d, config, "AB") == Solver::Result::Sat);
}

TEST_CASE("max-gap at the transaction length changes nothing") {
    const Dataset d = dataset_of_strings({"ACCBAB", "ABCA", "CBA"});
    MiningConfig config = base_config(2);
    const auto unconstrained = keys(mine(d, config));
    config.max_gap = 6;
    CHECK(keys(mine(d, config)) == unconstrained);
}

TEST_CASE("dependent gap: per-character windows") {
    const Dataset d = dataset_of_strings({"AXB"});
    MiningConfig config = base_config(1);
    config.dep_gap = std::vector<GapRule>{{std::nullopt, std::nullopt, 3},
                                          {std::nullopt, std::string("A"), 1}};
    CHECK(solve_pattern(d, config, "AB") == Solver::Result::Unsat);
    config.dep_gap = std::vector<GapRule>{{std::nullopt, std::nullopt, 3},
                                          {std::nullopt, std::string("A"), 2}};
    CHECK(solve_pattern(d, config, "AB") == Solver::Result::Sat);
}

TEST_CASE("dependent gap: constant table equals max-gap; huge table equals unconstrained") {
    const Dataset d = dataset_of_strings({"ACCBAB", "ABCA", "CBAC"});
    MiningConfig gap2 = base_config(2);
    gap2.max_gap = 2;
    MiningConfig table2 = base_config(2);
    table2.dep_gap = std::vector<GapRule>{{std::nullopt, std::nullopt, 2}};
    CHECK(keys(mine(d, gap2)) == keys(mine(d, table2)));

    MiningConfig huge = base_config(2);
    huge.dep_gap = std::vector<GapRule>{{std::nullopt, std::nullopt, 6}};
    CHECK(keys(mine(d, huge)) == keys(mine(d, base_config(2))));
}

TEST_CASE("max-span: the calibrated offset enforces last minus first <= gamma") {
    const Dataset d = dataset_of_strings({"AXXB"});
    // the unique embedding spans 3
    MiningConfig config = base_config(1);
    config.max_span = 2;
    CHECK(solve_pattern(d, config, "AB") == Solver::Result::Unsat);
    config.max_span = 3;
    CHECK(solve_pattern(d, config, "AB") == Solver::Result::Sat);
}

TEST_CASE("max-span: picks the narrow embedding when one exists") {
    const Dataset d = dataset_of_strings({"ABXXB"});
    MiningConfig config = base_config(1);
    config.max_span = 1;
    CHECK(solve_pattern(d, config, "AB") == Solver::Result::Sat);

    // span 0 admits single characters only (encoder-level, below config validation)
    const int K = compute_k(d, 1);
    VarLayout layout{.counter = true, .span = true};
    const VarMap vars(d, K, layout);
    Cnf cnf = encode_base(d, K, vars);
    cnf.append(encode_max_span(d, K, 0, vars));
    std::vector<Lit> cover_lits{pos(vars.cover_var(1))};
    cnf.append(encode_cardinality(cover_lits, 1, vars));
    cnf.add_clause({neg(vars.pattern_var(1, vars.eps_sym()))});
    Solver solver;
    solver.add_cnf(cnf);
    CHECK(solver.solve(pattern_assumptions(vars, chars_of(d, "AB"))) == Solver::Result::Unsat);
    CHECK(solver.solve(pattern_assumptions(vars, chars_of(d, "A"))) == Solver::Result::Sat);
}

TEST_CASE("max-span beyond every transaction length changes nothing") {
    const Dataset d = dataset_of_strings({"ACCBAB", "ABCA", "CBAC"});
    MiningConfig config = base_config(2);
    const auto unconstrained = keys(mine(d, config));
    config.max_span = 6;
    CHECK(keys(mine(d, config)) == unconstrained);
}

TEST_CASE("compile_regex: literals, dot, wildcard, alternation") {
    const std::vector<std::string> vocab{"A", "B"};
    const Dfa just_a = compile_regex("A", vocab);
    CHECK(just_a.accepts({0}));
    CHECK_FALSE(just_a.accepts({1}));
    CHECK_FALSE(just_a.accepts({0, 0}));
    CHECK_FALSE(just_a.accepts({}));

    const Dfa anything = compile_regex("\xe2\x8b\x86", vocab); // "⋆"
    CHECK(anything.accepts({}));
    CHECK(anything.accepts({0, 1, 1, 0}));

    const Dfa dot = compile_regex("A .", vocab);
    CHECK(dot.accepts({0, 0}));
    CHECK(dot.accepts({0, 1}));
    CHECK_FALSE(dot.accepts({1, 1}));
    CHECK_FALSE(dot.accepts({0}));

    const Dfa grouped = compile_regex("( A | B ) B", vocab);
    CHECK(grouped.accepts({0, 1}));
    CHECK(grouped.accepts({1, 1}));
    CHECK_FALSE(grouped.accepts({1, 0}));

    const Dfa star_ascii = compile_regex("* A *", vocab);
    CHECK(star_ascii.accepts({0}));
    CHECK(star_ascii.accepts({1, 0, 1}));
    CHECK_FALSE(star_ascii.accepts({1, 1}));
}

TEST_CASE("compile_regex: the paper-style containment expression") {
    const std::vector<std::string> vocab{"machine", "learning", "x"};
    const Dfa dfa = compile_regex("\xe2\x8b\x86 machine \xe2\x8b\x86 learning \xe2\x8b\x86", vocab);
    CHECK(dfa.accepts({0, 1}));
    CHECK(dfa.accepts({2, 0, 2, 1, 2}));
    CHECK_FALSE(dfa.accepts({1, 0}));
    CHECK_FALSE(dfa.accepts({0}));
    CHECK_FALSE(dfa.accepts({}));
    // the automaton is total over the vocabulary
    for (int s = 0; s < dfa.states; ++s)
        for (int v = 0; v < 3; ++v) {
            CHECK(dfa.next(s, v) >= 0);
            CHECK(dfa.next(s, v) < dfa.states);
        }
}

TEST_CASE("compile_regex error paths") {
    const std::vector<std::string> vocab{"A"};
    CHECK_THROWS_AS(compile_regex("( A", vocab), Error);
    CHECK_THROWS_AS(compile_regex("A )", vocab), Error);
    CHECK_THROWS_AS(compile_regex("Z", vocab), Error);
}

TEST_CASE("regular encoding: first character fixed by the automaton") {
    const Dataset d = dataset_of({"A B C", "B A C"});
    MiningConfig config = base_config(1);
    config.regex = "A \xe2\x8b\x86";
    const Problem problem = assemble(d, config);
    Solver solver;
    solver.add_cnf(problem.cnf);
    CHECK(solver.solve({pos(problem.vars.pattern_var(1, d.token_index("B")))}) ==
          Solver::Result::Unsat);
    CHECK(solver.solve({pos(problem.vars.pattern_var(1, d.token_index("A")))}) ==
          Solver::Result::Sat);
}

TEST_CASE("regular encoding: sigma-star automaton leaves the mined set unchanged") {
    const Dataset d = dataset_of_strings({"ACCBAB", "ABCA", "CBAC"});
    MiningConfig config = base_config(2);
    const auto unconstrained = keys(mine(d, config));
    config.regex = "*";
    CHECK(keys(mine(d, config)) == unconstrained);
}

TEST_CASE("regular + gap: only in-order containments of both tokens survive") {
    const Dataset d = dataset_of({"m x l y", "x m l x", "l m x y", "m l m l"});
    MiningConfig config = base_config(2, Mode::All);
    config.regex = "* m * l *";
    config.max_gap = 2;
    const PatternSet mined = mine(d, config);
    CHECK(!mined.patterns.empty());
    const int m = d.token_index("m"), l = d.token_index("l");
    for (const auto& p : mined.patterns) {
        bool seen_l_after_m = false, seen_m = false;
        for (int v : p.chars) {
            if (v == m) seen_m = true;
            if (v == l && seen_m) seen_l_after_m = true;
        }
        CHECK(seen_l_after_m);
    }
    // and it matches the oracle on the same config
    CHECK(keys(mined) == keys(oracle::oracle_mine(d, config)));
}
